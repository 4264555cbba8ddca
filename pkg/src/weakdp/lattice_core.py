"""Integer Picard lattices with the Del Pezzo intersection form.

A vector in the Del Pezzo basis ``<H, Q1, ..., Qr>`` is stored as its integer
coefficient tuple; the ruled basis ``<H, F>`` of P(n) carries ``ruled=n``.
Labels use the compact token form ``ab``, ``1abc``, ``2ab``, ``30a``.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from sympy.utilities.iterables import multiset_permutations

from weakdp import exact


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class PicardVector:
    coeffs: tuple[int, ...]
    ruled: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if self.ruled is None:
            if not 1 <= len(self.coeffs) - 1 <= 8:
                raise LatticeError(f"Del Pezzo rank must lie in [0..8], got {len(self.coeffs) - 1}")
        else:
            if self.ruled not in (0, 1, 2) or len(self.coeffs) != 2:
                raise LatticeError("ruled basis P(n) needs n in {0,1,2} and two coefficients")

    @property
    def rank(self) -> int:
        return len(self.coeffs) - 1

    @property
    def basis_kind(self) -> tuple[str, int]:
        return ("ruled", self.ruled) if self.ruled is not None else ("delpezzo", self.rank)

    def _check(self, other: PicardVector):
        if self.basis_kind != other.basis_kind:
            raise LatticeError("incompatible lattice bases")

    def __add__(self, other: PicardVector) -> PicardVector:
        self._check(other)
        return PicardVector(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.ruled)

    def __sub__(self, other: PicardVector) -> PicardVector:
        self._check(other)
        return PicardVector(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.ruled)

    def __neg__(self) -> PicardVector:
        return PicardVector(tuple(-a for a in self.coeffs), self.ruled)

    def __rmul__(self, k: int) -> PicardVector:
        return PicardVector(tuple(k * a for a in self.coeffs), self.ruled)

    def dot(self, other: PicardVector) -> int:
        return intersect(self, other)

    def __str__(self) -> str:
        names = ["H", "F"] if self.ruled is not None else ["H"] + [f"Q{i}" for i in range(1, self.rank + 1)]
        parts = []
        for c, name in zip(self.coeffs, names):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(("-" if c < 0 else "+") + mag + name)
        if not parts:
            return "0"
        text = "".join(parts)
        return text[1:] if text[0] == "+" else text

    @classmethod
    def parse(cls, text: str, rank: int) -> PicardVector:
        """Parse e.g. ``"3H-2Q1-Q2"`` in the Del Pezzo basis of the given rank."""
        coeffs = [0] * (rank + 1)
        text = text.replace(" ", "")
        if text == "0":
            return cls(tuple(coeffs))
        for sign, mag, name, idx in re.findall(r"([+-]?)(\d*)(H|Q)(\d*)", text):
            k = int(mag) if mag else 1
            k = -k if sign == "-" else k
            pos = 0 if name == "H" else int(idx)
            if pos > rank:
                raise LatticeError(f"index Q{pos} exceeds rank {rank}")
            coeffs[pos] += k
        return cls(tuple(coeffs))


def vec(*coeffs: int) -> PicardVector:
    return PicardVector(tuple(coeffs))


def basis_vector(i: int, r: int) -> PicardVector:
    """H for i=0, Q_i for i>=1."""
    c = [0] * (r + 1)
    c[i] = 1
    return PicardVector(tuple(c))


def canonical_class(r: int) -> PicardVector:
    return PicardVector((-3,) + (1,) * r)


def gram(r: int) -> np.ndarray:
    return np.diag([1] + [-1] * r).astype(np.int64)


def ruled_gram(n: int) -> np.ndarray:
    return np.array([[n, 1], [1, 0]], dtype=np.int64)


def intersect(u: PicardVector, v: PicardVector) -> int:
    if u.basis_kind != v.basis_kind:
        raise LatticeError("incompatible lattice bases")
    if u.ruled is not None:
        (a, b), (c, d) = u.coeffs, v.coeffs
        return a * c * u.ruled + a * d + b * c
    a, b = u.coeffs, v.coeffs
    return a[0] * b[0] - sum(x * y for x, y in zip(a[1:], b[1:]))


def reflect(u: PicardVector, v: PicardVector) -> PicardVector:
    """Reflection in the hyperplane orthogonal to the root ``u``.

    For (u,u) = -2 the coroot is -u, so v -> v + (u,v) u.
    """
    uu = intersect(u, u)
    if uu != -2:
        raise LatticeError(f"reflection needs a root with self-intersection -2, got {uu}")
    return v + intersect(u, v) * u


def reflection_matrix(u: PicardVector) -> np.ndarray:
    """Matrix acting on coefficient columns."""
    r = u.rank
    return np.column_stack([np.array(reflect(u, basis_vector(i, r)).coeffs) for i in range(r + 1)])


# ---------------------------------------------------------------------------
# order and roots

def order_key(v: PicardVector) -> tuple[int, ...]:
    """Sort key of the kit order: coefficient tuples compared lexicographically.

    Under this order every geometric label root (Qa-Qb with a<b, H-Qa-Qb-Qc,
    2H-..., 3H-...) is positive and {1123,12,...,78} are the simple roots.
    """
    return v.coeffs


def is_positive(v: PicardVector) -> bool:
    return v.coeffs > (0,) * len(v.coeffs)


def _distinct_permutations(values: Sequence[int]) -> list[tuple[int, ...]]:
    return [tuple(p) for p in multiset_permutations(list(values))]


# (H coefficient, Q coefficients, max K^2 for which the row applies); rows
# of the zero-set table, positive part only.
ZERO_SET_TABLE = [
    (0, (1, -1), 7),
    (1, (-1, -1, -1), 6),
    (2, (-1,) * 6, 3),
    (3, (-2,) + (-1,) * 7, 1),
]


def _instantiate(table, r: int, signed: bool) -> set[tuple[int, ...]]:
    out = set()
    for h, qs, max_degree in table:
        if 9 - r > max_degree or len(qs) > r:
            continue
        padded = tuple(qs) + (0,) * (r - len(qs))
        for perm in _distinct_permutations(padded):
            out.add((h,) + perm)
            if signed:
                out.add(tuple(-x for x in (h,) + perm))
    return out


@lru_cache(maxsize=None)
def _roots_tuple(r: int) -> tuple[tuple[int, ...], ...]:
    found = _instantiate(ZERO_SET_TABLE, r, signed=True)
    for c in found:
        v = PicardVector(c)
        if intersect(v, canonical_class(r)) != 0 or intersect(v, v) != -2:
            raise AssertionError(f"table row {v} is not a root")
    return tuple(sorted(found, reverse=True))


def enumerate_roots(r: int) -> list[PicardVector]:
    """All roots of the rank-r kit, sorted descending in the kit order."""
    if not 2 <= r <= 8:
        raise LatticeError(f"kit rank must lie in [2..8], got {r}")
    return [PicardVector(c) for c in _roots_tuple(r)]


def classes_with(r: int, anticanonical_degree: int, self_intersection: int) -> set[tuple[int, ...]]:
    """All classes C of B(r) with -K.C and C.C as given, by bounded search.

    Writing C = c0 H + sum ci Qi gives -K.C = 3 c0 + sum ci and
    C.C = c0^2 - sum ci^2; Cauchy-Schwarz bounds c0, then the Q part is
    enumerated as a multiset and permuted.
    """
    d, s = anticanonical_degree, self_intersection
    out: set[tuple[int, ...]] = set()
    # (d - 3 c0)^2 <= r (c0^2 - s)
    c0_max = 0
    while (d - 3 * (c0_max + 1)) ** 2 <= r * ((c0_max + 1) ** 2 - s) or 3 * (c0_max + 1) < d:
        c0_max += 1
        if c0_max > 50:
            break
    c0_min = 0
    while (d - 3 * (c0_min - 1)) ** 2 <= r * ((c0_min - 1) ** 2 - s):
        c0_min -= 1
    for c0 in range(c0_min, c0_max + 1):
        total = d - 3 * c0
        squares = c0 * c0 - s
        if squares < 0 or (r == 0 and (total, squares) != (0, 0)):
            continue
        for multiset in _multisets(r, total, squares, bound=int(squares ** 0.5) + 1):
            for perm in _distinct_permutations(multiset):
                out.add((c0,) + perm)
    return out


def _multisets(length: int, total: int, squares: int, bound: int):
    """Non-increasing integer tuples with given sum and sum of squares."""

    def rec(prefix, remaining, tot, sq, hi):
        if remaining == 0:
            if tot == 0 and sq == 0:
                yield tuple(prefix)
            return
        for x in range(min(hi, bound), -bound - 1, -1):
            if x * x > sq:
                continue
            rest_sq = sq - x * x
            rest_tot = tot - x
            # remaining-1 entries each <= x with given square budget
            if (remaining - 1) * rest_sq < rest_tot * rest_tot:
                continue
            if rest_tot > (remaining - 1) * x:
                continue
            prefix.append(x)
            yield from rec(prefix, remaining - 1, rest_tot, rest_sq, x)
            prefix.pop()

    yield from rec([], length, total, squares, bound)


def enumerate_roots_bruteforce(r: int) -> list[PicardVector]:
    """Roots from the intersection-number characterization alone."""
    return [PicardVector(c) for c in sorted(classes_with(r, 0, -2), reverse=True)]


# ---------------------------------------------------------------------------
# labels

LABEL_KINDS = ("ab", "1abc", "2ab", "30a")


@dataclass(frozen=True)
class C1LabelElement:
    kind: str
    indices: tuple[int, ...]
    sign: int = 1

    def __post_init__(self):
        if self.kind not in LABEL_KINDS:
            raise LatticeError(f"unknown label kind {self.kind!r}")
        arity = {"ab": 2, "1abc": 3, "2ab": 2, "30a": 1}[self.kind]
        idx = tuple(self.indices)
        if len(idx) != arity or len(set(idx)) != arity or not all(1 <= i <= 8 for i in idx):
            raise LatticeError(f"bad indices {idx} for label kind {self.kind}")
        # ab is ordered (Qa - Qb); the others are index sets
        if self.kind in ("1abc", "2ab"):
            idx = tuple(sorted(idx))
        object.__setattr__(self, "indices", idx)
        if self.sign not in (1, -1):
            raise LatticeError("sign must be +1 or -1")

    @classmethod
    def parse(cls, token: str) -> C1LabelElement:
        token = token.strip()
        sign = 1
        if token.startswith("-"):
            sign, token = -1, token[1:]
        if not token.isdigit():
            raise LatticeError(f"malformed label token {token!r}")
        digits = tuple(int(ch) for ch in token)
        if len(token) == 2:
            return cls("ab", digits, sign)
        if len(token) == 4 and digits[0] == 1:
            return cls("1abc", digits[1:], sign)
        if len(token) == 3 and digits[:2] == (3, 0):
            return cls("30a", digits[2:], sign)
        if len(token) == 3 and digits[0] == 2:
            return cls("2ab", digits[1:], sign)
        raise LatticeError(f"malformed label token {token!r}")

    def __str__(self) -> str:
        prefix = {"ab": "", "1abc": "1", "2ab": "2", "30a": "30"}[self.kind]
        return ("-" if self.sign < 0 else "") + prefix + "".join(map(str, self.indices))

    @property
    def min_rank(self) -> int:
        """Smallest kit rank whose lattice contains the image.

        2ab sums Q_i over i outside {a,b}, so e.g. 278 = 2H-Q1-...-Q6
        already lives in rank 6.
        """
        if self.kind == "30a":
            return 8
        if self.kind == "2ab":
            return max(i for i in range(1, 9) if i not in self.indices)
        return max(self.indices)

    @property
    def geometric(self) -> bool:
        return self.sign > 0


def phi(e: C1LabelElement, r: int) -> PicardVector:
    """Root named by a label element in the rank-r kit."""
    if e.min_rank > r:
        raise LatticeError(f"label element {e} needs rank >= {e.min_rank}, got {r}")
    c = [0] * (r + 1)
    if e.kind == "ab":
        a, b = e.indices
        c[a], c[b] = 1, -1
    elif e.kind == "1abc":
        c[0] = 1
        for i in e.indices:
            c[i] = -1
    elif e.kind == "2ab":
        c[0] = 2
        for i in range(1, 9):
            if i not in e.indices:
                c[i] = -1  # i <= r by the min_rank check
    else:
        c[0] = 3
        for i in range(1, 9):
            c[i] = -1
        c[e.indices[0]] = -2
    v = PicardVector(tuple(c))
    return -v if e.sign < 0 else v


@dataclass(frozen=True)
class C1Label:
    elements: tuple[C1LabelElement, ...]
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not 1 <= self.rank <= 8:
            raise LatticeError(f"label rank must lie in [1..8], got {self.rank}")
        for e in self.elements:
            if e.min_rank > self.rank:
                raise LatticeError(f"label element {e} does not fit rank {self.rank}")

    @classmethod
    def parse(cls, text: str) -> C1Label:
        """``"1123,45;5"`` -> label; ``"{};5"`` or ``";5"`` for the empty label."""
        body, sep, rank = text.partition(";")
        if not sep:
            raise LatticeError(f"label needs ';rank' suffix: {text!r}")
        body = body.strip().strip("{}").strip()
        tokens = [t for t in body.replace(" ", "").split(",") if t]
        if not rank.strip().isdigit():
            raise LatticeError(f"label rank must be an integer: {text!r}")
        return cls(tuple(C1LabelElement.parse(t) for t in tokens), int(rank))

    @classmethod
    def of(cls, tokens: Iterable[str], rank: int) -> C1Label:
        return cls(tuple(C1LabelElement.parse(t) for t in tokens), rank)

    def __str__(self) -> str:
        return ",".join(map(str, self.elements)) + f";{self.rank}"

    @property
    def text(self) -> str:
        return ",".join(map(str, self.elements))

    @property
    def roots(self) -> list[PicardVector]:
        return [phi(e, self.rank) for e in self.elements]

    @property
    def geometric(self) -> bool:
        return all(e.geometric for e in self.elements)

    def __len__(self) -> int:
        return len(self.elements)


# ---------------------------------------------------------------------------
# Dynkin diagrams

@dataclass(frozen=True)
class DynkinDiagram:
    vertices: tuple[PicardVector, ...]
    edges: tuple[tuple[int, int, int], ...]
    components: tuple[tuple[str, int], ...] = field(default=())

    @property
    def type_string(self) -> str:
        return type_string(self.components)

    def __str__(self) -> str:
        return self.type_string


def type_string(components: Iterable[tuple[str, int]]) -> str:
    counts = Counter(components)
    if not counts:
        return "A0"
    ordered = sorted(counts, key=lambda c: (-c[1], c[0]))
    return "+".join((f"{counts[c]}" if counts[c] > 1 else "") + f"{c[0]}{c[1]}" for c in ordered)


def _component_type(nodes: list[int], adj: dict[int, set[int]]) -> tuple[str, int]:
    n = len(nodes)
    nedges = sum(len(adj[v]) for v in nodes) // 2
    if nedges != n - 1:
        raise LatticeError("not a root basis: diagram contains a cycle")
    degrees = {v: len(adj[v]) for v in nodes}
    branch = [v for v in nodes if degrees[v] >= 3]
    if not branch:
        if max(degrees.values(), default=0) > 2:
            raise LatticeError("not a root basis")
        return ("A", n)
    if len(branch) > 1 or degrees[branch[0]] > 3:
        raise LatticeError("not a root basis: diagram is not of finite type")
    centre = branch[0]
    arms = []
    for start in adj[centre]:
        length, prev, cur = 1, centre, start
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return ("D", n)
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return ("E", n)
    raise LatticeError("not a root basis: diagram is not of finite type")


def dynkin_type(roots: Sequence[PicardVector]) -> DynkinDiagram:
    """Dynkin diagram of a simple system (pairwise products in {0,1})."""
    roots = list(roots)
    n = len(roots)
    for v in roots:
        if intersect(v, v) != -2:
            raise LatticeError("not a root basis: element is not a root")
    edges = []
    adj: dict[int, set[int]] = {i: set() for i in range(n)}
    for i, j in itertools.combinations(range(n), 2):
        p = intersect(roots[i], roots[j])
        if p not in (0, 1):
            raise LatticeError("not a root basis: pairwise product outside {0,1}")
        if p == 1:
            # Cartan entries m_ij = (b_i^, b_j) = -(b_i, b_j) = -1, one line
            edges.append((i, j, 1))
            adj[i].add(j)
            adj[j].add(i)
    if n and exact.rank([v.coeffs for v in roots]) != n:
        raise LatticeError("not a root basis: roots are linearly dependent")
    seen: set[int] = set()
    comps = []
    for start in range(n):
        if start in seen:
            continue
        stack, nodes = [start], []
        seen.add(start)
        while stack:
            v = stack.pop()
            nodes.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(_component_type(nodes, adj))
    return DynkinDiagram(tuple(roots), tuple(edges), tuple(sorted(comps)))


def cartan_matrix(roots: Sequence[PicardVector]) -> list[list[int]]:
    # coroot of a (-2)-vector b is -b
    return [[-intersect(b, c) for c in roots] for b in roots]


def simple_roots(roots: Iterable[PicardVector]) -> list[PicardVector]:
    """Positive members of a (closed) root set that are not a sum of two positive members."""
    positive = [v for v in roots if is_positive(v)]
    pos_set = set(positive)
    sums = {a + b for a, b in itertools.combinations(positive, 2)}
    return sorted((v for v in pos_set if v not in sums), key=order_key, reverse=True)


def system_type(roots: Iterable[PicardVector]) -> str:
    """Dynkin type string of a closed root subsystem given by all its roots."""
    return dynkin_type(simple_roots(roots)).type_string
