"""Del Pezzo zero/one/two-sets and the lattice model of a weak Del Pezzo surface.

F, E and G are the classes C with (-KC, C^2) equal to (0,-2), (1,-1) and
(2,0). They are built from the coefficient tables (up to permuting the Q_i)
and checked against a direct search on the two intersection numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from weakdp.lattice_core import (
    C1Label,
    LatticeError,
    PicardVector,
    ZERO_SET_TABLE,
    _instantiate,
    canonical_class,
    classes_with,
    intersect,
    order_key,
)
from weakdp.root_classification import equivalent, generated_mask, root_table

# (H, Q coefficients, max K^2 for which the row applies)
ONE_SET_TABLE = [
    (0, (1,), 7),
    (1, (-1, -1), 7),
    (2, (-1,) * 5, 4),
    (3, (-2,) + (-1,) * 6, 2),
    (4, (-2, -2, -2) + (-1,) * 5, 1),
    (5, (-2,) * 6 + (-1, -1), 1),
    (6, (-3,) + (-2,) * 7, 1),
]

TWO_SET_TABLE = [
    (1, (-1,), 7),
    (2, (-1,) * 4, 5),
    (3, (-2,) + (-1,) * 5, 3),
    (4, (-2, -2, -2) + (-1,) * 4, 2),
    (5, (-2,) * 6 + (-1,), 2),
    (4, (-3,) + (-1,) * 7, 1),
    (5, (-3, -2, -2, -2) + (-1,) * 4, 1),
    (6, (-3, -3) + (-2,) * 4 + (-1, -1), 1),
    (7, (-3,) * 4 + (-2,) * 3 + (-1,), 1),
    (7, (-4, -3) + (-2,) * 6, 1),
    (8, (-3,) * 7 + (-1,), 1),
    (8, (-4,) + (-3,) * 4 + (-2,) * 3, 1),
    (9, (-4, -4) + (-3,) * 5 + (-2,), 1),
    (10, (-4,) * 4 + (-3,) * 4, 1),
    (11, (-4,) * 7 + (-3,), 1),
]


@dataclass(frozen=True)
class DelPezzoSets:
    F: tuple[PicardVector, ...]
    E: tuple[PicardVector, ...]
    G: tuple[PicardVector, ...]

    def sizes(self) -> tuple[int, int, int]:
        return len(self.F), len(self.E), len(self.G)


def _sorted(vs) -> tuple[PicardVector, ...]:
    return tuple(sorted(vs, key=order_key, reverse=True))


def _check_rank(r: int):
    if r == 1:
        raise LatticeError("K^2 = 8 with one blown-up point is the ruled basis P(1); use ruled_sets(1)")
    if not 0 <= r <= 8:
        raise LatticeError(f"Del Pezzo rank must lie in [0..8], got {r}")


def sets_from_tables(r: int) -> DelPezzoSets:
    _check_rank(r)
    mk = lambda cs: _sorted(PicardVector(c) for c in cs)  # noqa: E731
    return DelPezzoSets(
        mk(_instantiate(ZERO_SET_TABLE, r, signed=True)),
        mk(_instantiate(ONE_SET_TABLE, r, signed=False)),
        mk(_instantiate(TWO_SET_TABLE, r, signed=False)),
    )


def sets_from_intersections(r: int) -> DelPezzoSets:
    _check_rank(r)
    mk = lambda d, s: _sorted(PicardVector(c) for c in classes_with(r, d, s))  # noqa: E731
    return DelPezzoSets(mk(0, -2), mk(1, -1), mk(2, 0))


@lru_cache(maxsize=None)
def del_pezzo_sets(r: int) -> DelPezzoSets:
    """F, E, G of the rank-r Del Pezzo basis; both constructions must agree."""
    a, b = sets_from_tables(r), sets_from_intersections(r)
    if a != b:
        raise AssertionError(f"table and intersection constructions disagree at rank {r}")
    return a


def ruled_sets(n: int) -> DelPezzoSets:
    """Literal case lists for the geometrically ruled bases P(0), P(1), P(2)."""
    if n not in (0, 1, 2):
        raise LatticeError("ruled basis P(n) needs n in {0,1,2}")
    v = lambda h, f: PicardVector((h, f), ruled=n)  # noqa: E731
    F = {0: [v(1, -1), v(-1, 1)], 1: [], 2: [v(1, -2), v(-1, 2)]}[n]
    E = {0: [], 1: [v(1, -1)], 2: []}[n]
    G = {0: [v(1, 0)], 1: [v(0, 1)], 2: [v(1, -1)]}[n]
    return DelPezzoSets(tuple(F), tuple(E), tuple(G))


def ruled_canonical_class(n: int) -> PicardVector:
    # -K = 2H + (2-n)F on P(n)
    return PicardVector((-2, n - 2), ruled=n)


# ---------------------------------------------------------------------------
# surface lattices

@dataclass(frozen=True)
class SurfaceLattice:
    """Lattice model of a weak Del Pezzo surface: a kit plus the effective basis."""
    effective_basis: C1Label

    def __post_init__(self):
        if not self.effective_basis.geometric:
            raise LatticeError("effective basis must be a geometric label")
        if self.rank < 2:
            raise LatticeError("surface lattices need rank >= 2")

    @classmethod
    def of(cls, text: str) -> SurfaceLattice:
        return cls(C1Label.parse(text))

    @property
    def rank(self) -> int:
        return self.effective_basis.rank

    @property
    def degree(self) -> int:
        return 9 - self.rank

    @property
    def canonical_class(self) -> PicardVector:
        return canonical_class(self.rank)

    @property
    def sets(self) -> DelPezzoSets:
        return del_pezzo_sets(self.rank)


def effective_zero_set(X: SurfaceLattice) -> tuple[PicardVector, ...]:
    """Positive roots of the subsystem generated by the effective basis."""
    r = X.rank
    t = root_table(r)
    mask = generated_mask(X.effective_basis.roots, r) & t.positive
    return _sorted(t.roots(mask))


def _nonnegative_against(classes, roots) -> tuple[PicardVector, ...]:
    return tuple(c for c in classes if all(intersect(c, f) >= 0 for f in roots))


def indecomposable_one_set(X: SurfaceLattice) -> tuple[PicardVector, ...]:
    """Classes of E meeting every effective (-2)-class nonnegatively."""
    return _nonnegative_against(X.sets.E, X.effective_basis.roots)


def irreducible_two_set(X: SurfaceLattice) -> tuple[PicardVector, ...]:
    """Classes of G meeting every effective (-2)-class nonnegatively."""
    return _nonnegative_against(X.sets.G, X.effective_basis.roots)


def cremona_equivalent(X: SurfaceLattice, Y: SurfaceLattice) -> bool:
    if X.rank != Y.rank:
        raise LatticeError("surface lattices have different ranks")
    return equivalent(X.effective_basis, Y.effective_basis)
