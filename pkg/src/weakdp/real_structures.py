"""Real structures: lattice involutions whose -1 eigenspace is spanned by a label.

For a label in eigenbasis form (elements from 1123, 12, ..., 78) the label
roots are extended to a basis V by vectors orthogonal to them, and the
candidate involution is M = V D V^-1 with D = diag(-1,...,-1,1,...,1).
Only integral M are real structures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from weakdp import exact
from weakdp.delpezzo_sets import del_pezzo_sets
from weakdp.lattice_core import (
    C1Label,
    C1LabelElement,
    LatticeError,
    PicardVector,
    canonical_class,
    intersect,
    phi,
)
from weakdp.root_classification import classify, generated_mask, invariant, root_table

EIGENBASIS_TOKENS = ("1123", "12", "23", "34", "45", "56", "67", "78")


@dataclass(frozen=True)
class RealStructure:
    matrix: tuple[tuple[int, ...], ...]
    source_label: C1Label

    @property
    def rank(self) -> int:
        return len(self.matrix) - 1

    @property
    def images(self) -> list[PicardVector]:
        """sigma(H), sigma(Q1), ..., the columns of the matrix."""
        return [PicardVector(col) for col in zip(*self.matrix)]

    def __call__(self, v: PicardVector) -> PicardVector:
        return PicardVector(tuple(sum(a * b for a, b in zip(row, v.coeffs)) for row in self.matrix))

    def as_array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64)


def _in_eigenbasis_form(label: C1Label) -> bool:
    return all(str(e) in EIGENBASIS_TOKENS for e in label.elements)


def extend_to_basis(label: C1Label) -> list[list[int]]:
    """Columns: label roots (sorted descending) followed by orthogonal extension vectors.

    Returned as a list of columns of length r+1.
    """
    if not _in_eigenbasis_form(label):
        raise LatticeError("label not in eigenbasis form")
    r = label.rank
    cols = sorted((list(v.coeffs) for v in label.roots), reverse=True)
    L = [c[:] for c in cols]
    A = [c[:] for c in cols]
    has1123 = 0
    if A and A[0][0] == 1:
        A.pop(0)
        has1123 = 1
    e1123 = phi_root("1123", r) if r >= 3 else None

    def correct(v: list[int]) -> list[int]:
        # the H entry absorbs the product with 1123 so v stays orthogonal to it
        if has1123:
            v[0] += -intersect(PicardVector(tuple(v)), e1123)
        return v

    E: list[list[int]] = []
    for i in range(r + 1):
        if any(c[i] != 0 for c in A):
            continue
        if i != has1123 - 1:
            v = [0] * (r + 1)
            v[i] = 1
            E.append(correct(v))
    while len(L) + len(E) < r + 1:
        if not A:
            raise LatticeError("extension to a basis failed")
        C = [A.pop(0)]
        while A and _product(C[-1], A[0]) != 0:
            C.append(A.pop(0))
        a = next(i for i, x in enumerate(C[0]) if x != 0)
        b = max(i for i, x in enumerate(C[-1]) if x != 0)
        v = [0] * (r + 1)
        for i in range(a, b + 1):
            v[i] = 1
        E.append(correct(v))
    V = L + E
    if len(V) != r + 1 or exact.rank(V) != r + 1:
        raise LatticeError("extension to a basis failed")
    return V


def phi_root(token: str, r: int) -> PicardVector:
    return phi(C1LabelElement.parse(token), r)


def _product(u: list[int], v: list[int]) -> int:
    return u[0] * v[0] - sum(a * b for a, b in zip(u[1:], v[1:]))


def eigen_matrix(label: C1Label) -> list[list[Fraction]]:
    """M = V D V^-1 as an exact rational matrix (rows)."""
    cols = extend_to_basis(label)
    n = len(cols)
    V = exact.transpose(cols)
    D = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        D[i][i] = Fraction(-1 if i < len(label) else 1)
    return exact.matmul(exact.matmul(V, D), exact.inverse(V))


def candidate_structure(label: C1Label) -> RealStructure | None:
    M = eigen_matrix(label)
    if not exact.is_integral(M):
        return None
    s = RealStructure(tuple(tuple(int(x) for x in row) for row in M), label)
    check_structure(s)
    return s


def check_structure(s: RealStructure):
    m = s.as_array()
    r = s.rank
    g = np.diag([1] + [-1] * r)
    if not (m @ m == np.eye(r + 1, dtype=np.int64)).all():
        raise AssertionError("real structure is not an involution")
    if not (m.T @ g @ m == g).all():
        raise AssertionError("real structure does not preserve the form")
    k = canonical_class(r)
    if s(k) != k:
        raise AssertionError("real structure moves the canonical class")


def fixed_count(s: RealStructure, classes) -> int:
    return sum(1 for c in classes if s(c) == c)


@dataclass(frozen=True)
class RealClassEntry:
    index: int
    rank: int
    c1_index: int
    type: str
    f0: int
    f1: int
    f2: int
    structure: RealStructure

    @property
    def images(self) -> list[PicardVector]:
        return self.structure.images


@lru_cache(maxsize=None)
def _real_rank(r: int) -> tuple[tuple[int, str, RealStructure], ...]:
    out = []
    for e in classify(r):
        if not _in_eigenbasis_form(e.label):
            continue
        s = candidate_structure(e.label)
        if s is not None:
            out.append((e.index, e.type, s))
    return tuple(out)


def classify_real(r: int) -> list[RealClassEntry]:
    """Real structures of the rank-r kit, one per conjugacy class, with fixed-class counts."""
    if not 2 <= r <= 8:
        raise LatticeError(f"kit rank must lie in [2..8], got {r}")
    start = 1 + sum(len(_real_rank(q)) for q in range(2, r))
    sets = del_pezzo_sets(r)
    out = []
    for i, (c1, t, s) in enumerate(_real_rank(r)):
        out.append(RealClassEntry(start + i, r, c1, t, fixed_count(s, sets.F),
                                  fixed_count(s, sets.E), fixed_count(s, sets.G), s))
    return out


def classify_real_all() -> list[RealClassEntry]:
    return [e for r in range(2, 9) for e in classify_real(r)]


# ---------------------------------------------------------------------------
# degree four conic families

@dataclass(frozen=True)
class ConicCell:
    c1_index: int
    real_index: int
    counts: tuple[int, ...]
    witnesses: tuple[tuple[PicardVector, ...], ...]   # one basis per count


def _fixed_irreducible_conics(s: RealStructure, basis, conics) -> tuple[PicardVector, ...]:
    return tuple(c for c in conics
                 if s(c) == c and all(intersect(c, f) >= 0 for f in basis))


def _minus_one_eigenvectors(s: RealStructure) -> list[list[Fraction]]:
    m = s.as_array()
    return exact.nullspace((m + np.eye(len(m), dtype=np.int64)).tolist())


def _conic_context(c1_index: int, real_index: int):
    r = 5
    entry = next((e for e in classify(r) if e.index == c1_index), None)
    real = next((e for e in classify_real(r) if e.index == real_index), None)
    if entry is None or real is None:
        raise LatticeError("conic table needs a rank-5 class (16..31) and a rank-5 real structure (10..15)")
    return entry, real.structure


def _admissible(entry, s: RealStructure, b: list[PicardVector], m: np.ndarray, has_minus: bool) -> bool:
    r = 5
    if len(b) != len(entry.label) or {s(v) for v in b} != set(b):
        return False
    if invariant(b, r).key != entry.invariant.key:
        return False
    # no effective root may lie in the -1 eigenspace
    sub = root_table(r).vectors[generated_mask(b, r)]
    return not (has_minus and np.any(np.all(sub @ m.T == -sub, axis=1)))


def conic_witness(c1_index: int, real_index: int, basis: list[PicardVector]) -> tuple[PicardVector, ...]:
    """Real irreducible conic classes G(c, r, b) for one admissible basis b."""
    entry, s = _conic_context(c1_index, real_index)
    if not _admissible(entry, s, list(basis), s.as_array(), bool(_minus_one_eigenvectors(s))):
        raise LatticeError("basis is not admissible for this cell")
    return _fixed_irreducible_conics(s, basis, del_pezzo_sets(5).G)


def conic_cell(c1_index: int, real_index: int, bases=None) -> ConicCell:
    """Possible numbers of real conic families for one (subsystem class, real structure) pair."""
    from weakdp.weyl_oracle import subsystem_bases

    entry, s = _conic_context(c1_index, real_index)
    t = root_table(5)
    conics = del_pezzo_sets(5).G
    m = s.as_array()
    has_minus = bool(_minus_one_eigenvectors(s))
    found: dict[int, tuple[PicardVector, ...]] = {}
    for idx in (bases if bases is not None else subsystem_bases(5)):
        b = [PicardVector(tuple(int(x) for x in t.vectors[i])) for i in idx]
        if not _admissible(entry, s, b, m, has_minus):
            continue
        fixed = _fixed_irreducible_conics(s, b, conics)
        found.setdefault(len(fixed), tuple(b))
    counts = tuple(sorted(found))
    return ConicCell(c1_index, real_index, counts, tuple(found[c] for c in counts))


def conic_families_degree4() -> list[ConicCell]:
    """All cells of the degree-4 table: rank-5 classes against rank-5 real structures."""
    from weakdp.weyl_oracle import subsystem_bases

    bases = subsystem_bases(5)
    return [conic_cell(c.index, rs.index, bases) for c in classify(5) for rs in classify_real(5)]
