"""Weyl-equivalence of root subsystems and the table of geometric C1 labels.

Two subsystems of a C1 kit are compared through the triple of Dynkin types
(S, C_R(S), K_R(S)), where C is the orthogonal complement inside R and K is
the set of roots in the rational span of S. Rank 3 is special: the kit is
reducible there and the two A1 classes are told apart by their complements.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from weakdp import exact
from weakdp.lattice_core import (
    C1Label,
    C1LabelElement,
    LatticeError,
    PicardVector,
    dynkin_type,
    enumerate_roots,
    phi,
)

Z0_TOKENS = ("12", "23", "34", "45", "56", "67", "78", "1123", "-1145", "-1345",
             "-1167", "-1178", "-278", "-218", "-308", "218")
Z1_TOKENS = ("1123", "12", "23", "34", "45", "56", "67", "78")
Z2_TOKENS = Z1_TOKENS + ("1145", "1347", "1678", "1127", "1456", "1567", "234", "278", "308")
Z3_TOKENS = ("1123", "1345", "1165", "1285", "1673", "1274", "1684", "1178")

# representatives are taken from the first set in this list containing the class
PREFERENCE = (1, 2, 3, 0)


def z_sets() -> tuple[tuple[C1LabelElement, ...], ...]:
    """The candidate token sets Z0, Z1, Z2, Z3."""
    return tuple(tuple(C1LabelElement.parse(t) for t in z)
                 for z in (Z0_TOKENS, Z1_TOKENS, Z2_TOKENS, Z3_TOKENS))


# ---------------------------------------------------------------------------
# numeric root tables

@dataclass(frozen=True)
class RootTable:
    """All roots of one kit as an integer array plus lookup helpers."""
    rank: int
    vectors: np.ndarray      # n x (r+1)
    dual: np.ndarray         # vectors @ Gram, so products are dual @ other.T
    positive: np.ndarray     # bool mask
    codes: np.ndarray        # additive integer encoding

    def index(self, v: PicardVector) -> int:
        hits = np.nonzero(self.codes == encode(v.coeffs))[0]
        if len(hits) != 1:
            raise LatticeError(f"{v} is not a root of rank {self.rank}")
        return int(hits[0])

    def roots(self, mask: np.ndarray) -> list[PicardVector]:
        return [PicardVector(tuple(int(c) for c in row)) for row in self.vectors[mask]]

    def mask_of(self, roots: Iterable[PicardVector]) -> np.ndarray:
        m = np.zeros(len(self.vectors), dtype=bool)
        for v in roots:
            m[self.index(v)] = True
        return m


def encode(coeffs) -> int:
    # digits lie in (-16, 16) even for sums of two roots, so the code is
    # injective and additive
    return int(sum(int(c) * 32 ** i for i, c in enumerate(coeffs)))


@lru_cache(maxsize=None)
def root_table(r: int) -> RootTable:
    roots = enumerate_roots(r)
    vecs = np.array([v.coeffs for v in roots], dtype=np.int64)
    g = np.diag([1] + [-1] * r).astype(np.int64)
    weights = np.array([32 ** i for i in range(r + 1)], dtype=np.int64)
    positive = np.array([v.coeffs > (0,) * (r + 1) for v in roots])
    return RootTable(r, vecs, vecs @ g, positive, vecs @ weights)


def _as_array(roots: Sequence[PicardVector], r: int) -> np.ndarray:
    return np.array([v.coeffs for v in roots], dtype=np.int64).reshape(len(roots), r + 1)


def complement_mask(S: Sequence[PicardVector], r: int) -> np.ndarray:
    t = root_table(r)
    if not S:
        return np.ones(len(t.vectors), dtype=bool)
    return ~(t.dual @ _as_array(S, r).T).any(axis=1)


def double_complement_mask(S: Sequence[PicardVector], r: int) -> np.ndarray:
    """Roots in the rational span of S.

    The form is nondegenerate, so span(S) is the orthogonal complement of
    S-perp; a root lies in span(S) iff it is orthogonal to a basis of S-perp.
    """
    t = root_table(r)
    if not S:
        return np.zeros(len(t.vectors), dtype=bool)
    g = np.diag([1] + [-1] * r)
    rows = (_as_array(S, r) @ g).tolist()
    perp = exact.nullspace(rows, r + 1)
    if not perp:
        return np.ones(len(t.vectors), dtype=bool)
    # clear denominators
    scaled = []
    for n in perp:
        den = np.lcm.reduce([x.denominator for x in n])
        scaled.append([int(x * den) for x in n])
    return ~(t.dual @ np.array(scaled, dtype=np.int64).T).any(axis=1)


def complement(S: Sequence[PicardVector], r: int) -> list[PicardVector]:
    return root_table(r).roots(complement_mask(S, r))


def double_complement(S: Sequence[PicardVector], r: int) -> list[PicardVector]:
    return root_table(r).roots(double_complement_mask(S, r))


def generated_mask(S: Sequence[PicardVector], r: int) -> np.ndarray:
    """Roots of the subsystem generated by a simple basis S (its Z-span).

    For a simply-laced basis the roots of the root lattice are exactly the
    roots of the subsystem, so solving for integral coordinates suffices.
    """
    t = root_table(r)
    out = np.zeros(len(t.vectors), dtype=bool)
    if not S:
        return out
    span = double_complement_mask(S, r)
    basis = _as_array(S, r).astype(float)
    idx = np.nonzero(span)[0]
    coords, *_ = np.linalg.lstsq(basis.T, t.vectors[idx].T.astype(float), rcond=None)
    integral = np.all(np.abs(coords - np.round(coords)) < 1e-9, axis=0)
    out[idx[integral]] = True
    return out


@lru_cache(maxsize=200_000)
def _mask_type(r: int, key: bytes) -> str:
    t = root_table(r)
    mask = np.frombuffer(key, dtype=bool)
    pos = mask & t.positive
    e = t.codes[pos]
    if len(e) == 0:
        return "A0"
    sums = (e[:, None] + e[None, :]).ravel()
    simple = ~np.isin(e, sums)
    basis = [PicardVector(tuple(int(c) for c in row)) for row in t.vectors[pos][simple]]
    return dynkin_type(basis).type_string


def mask_type(mask: np.ndarray, r: int) -> str:
    """Dynkin type of the closed root subsystem given as a mask of roots."""
    return _mask_type(r, np.ascontiguousarray(mask, dtype=bool).tobytes())


# ---------------------------------------------------------------------------
# invariants and equivalence

@dataclass(frozen=True)
class SubsystemInvariant:
    dynkin_of_S: str
    size_S: int
    size_C: int
    dynkin_of_C: str
    size_K: int
    dynkin_of_K: str

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.dynkin_of_S, self.dynkin_of_C, self.dynkin_of_K)


def basis_type(roots: Sequence[PicardVector]) -> str:
    return dynkin_type(roots).type_string if roots else "A0"


def invariant(S: Sequence[PicardVector], r: int) -> SubsystemInvariant:
    """Invariant triple of the subsystem with simple basis S."""
    ts = basis_type(S)
    cm = complement_mask(S, r)
    km = double_complement_mask(S, r)
    size_s = sum(_component_size(c) for c in _components(ts))
    return SubsystemInvariant(ts, size_s, int(cm.sum()), mask_type(cm, r), int(km.sum()), mask_type(km, r))


def _components(ts: str) -> list[tuple[str, int]]:
    if ts == "A0":
        return []
    out = []
    for part in ts.split("+"):
        i = 0
        while part[i].isdigit():
            i += 1
        mult = int(part[:i]) if i else 1
        out += [(part[i], int(part[i + 1:]))] * mult
    return out


def _component_size(c: tuple[str, int]) -> int:
    kind, n = c
    if kind == "A":
        return n * (n + 1)
    if kind == "D":
        return 2 * n * (n - 1)
    return {6: 72, 7: 126, 8: 240}[n]


def equivalent(a: C1Label, b: C1Label) -> bool:
    """Weyl equivalence of the subsystems generated by two labels of equal rank."""
    if a.rank != b.rank:
        raise LatticeError("labels have different ranks")
    return invariant(a.roots, a.rank).key == invariant(b.roots, b.rank).key


def is_valid_basis(roots: Sequence[PicardVector]) -> bool:
    try:
        dynkin_type(roots)
    except LatticeError:
        return False
    return True


# ---------------------------------------------------------------------------
# classification

@dataclass(frozen=True)
class ClassificationEntry:
    index: int
    rank: int
    label: C1Label
    type: str
    invariant: SubsystemInvariant

    @property
    def sizes(self) -> dict[str, int]:
        return {"S": self.invariant.size_S, "C": self.invariant.size_C, "K": self.invariant.size_K}


def candidate_labels(z: Sequence[C1LabelElement], r: int) -> list[tuple[C1LabelElement, ...]]:
    """Subsets of z valid at rank r forming a simple basis, in combinations order."""
    elems = [e for e in z if e.min_rank <= r]
    roots = [phi(e, r) for e in elems]
    n = len(elems)
    arr = _as_array(roots, r)
    g = np.diag([1] + [-1] * r)
    prod = arr @ g @ arr.T if n else np.zeros((0, 0), dtype=np.int64)
    ok = (prod == 0) | (prod == 1)
    cliques: list[tuple[int, ...]] = []

    def grow(current: list[int], start: int):
        cliques.append(tuple(current))
        for j in range(start, n):
            if all(ok[i, j] for i in current):
                current.append(j)
                grow(current, j + 1)
                current.pop()

    grow([], 0)
    cliques.sort(key=lambda c: (len(c), c))
    out = []
    for c in cliques:
        if len(c) > 1:
            sub = prod[np.ix_(c, c)]
            if np.linalg.matrix_rank(sub) < len(c):
                continue
        out.append(tuple(elems[i] for i in c))
    return out


@lru_cache(maxsize=None)
def _classify(r: int) -> tuple[tuple[C1Label, SubsystemInvariant], ...]:
    zs = z_sets()
    chosen: dict[tuple, tuple[C1Label, SubsystemInvariant]] = {}
    for which in PREFERENCE:
        found: dict[tuple, tuple[C1Label, SubsystemInvariant]] = {}
        for cand in candidate_labels(zs[which], r):
            label = C1Label(cand, r)
            inv = invariant(label.roots, r)
            if inv.key in chosen:
                continue
            # later candidates in enumeration order replace earlier ones
            found[inv.key] = (label, inv)
        chosen.update(found)
    return tuple(chosen.values())


def _family(ts: str) -> int:
    # 0 when all components are of type A, 1 with a D component, 2 with an E component
    return 2 if "E" in ts else 1 if "D" in ts else 0


def _order_key(item: tuple[C1Label, SubsystemInvariant]) -> tuple:
    label, inv = item
    return (label.rank, len(label), _family(inv.dynkin_of_S), inv.size_S, inv.size_C, inv.size_K,
            inv.dynkin_of_S, label.text)


def classify(r: int) -> list[ClassificationEntry]:
    """One geometric label per Weyl class of root subsystems of the rank-r kit.

    Row indices continue across ranks (rank 2 starts at 1), as in the
    combined classification table.
    """
    if not 2 <= r <= 8:
        raise LatticeError(f"kit rank must lie in [2..8], got {r}")
    start = 1 + sum(len(_classify(q)) for q in range(2, r))
    items = sorted(_classify(r), key=_order_key)
    return [ClassificationEntry(start + i, r, lab, inv.dynkin_of_S, inv) for i, (lab, inv) in enumerate(items)]


def classify_all() -> list[ClassificationEntry]:
    return [e for r in range(2, 9) for e in classify(r)]


def entry_by_index(index: int) -> ClassificationEntry:
    for r in range(2, 9):
        for e in classify(r):
            if e.index == index:
                return e
    raise LatticeError(f"no classification entry with index {index}")


def lookup(label: C1Label) -> ClassificationEntry:
    """Classification entry of the class containing ``label``."""
    key = invariant(label.roots, label.rank).key
    for e in classify(label.rank):
        if e.invariant.key == key:
            return e
    raise LatticeError(f"label {label} matches no class")
