"""Explicit Weyl groups and orbit classification for small kits.

This is the ground truth the invariant-based classifier is checked against.
Group elements are integer matrices acting on coefficient columns.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from weakdp.lattice_core import LatticeError, PicardVector, enumerate_roots, reflection_matrix, simple_roots
from weakdp.root_classification import (
    generated_mask,
    mask_type,
    root_table,
)

RANK_CAP = 5


@dataclass(frozen=True)
class WeylElement:
    matrix: np.ndarray

    def __call__(self, v: PicardVector) -> PicardVector:
        return PicardVector(tuple(int(x) for x in self.matrix @ np.array(v.coeffs)))

    def key(self) -> bytes:
        return self.matrix.tobytes()


def _check_cap(r: int):
    if r > RANK_CAP:
        raise LatticeError("oracle rank cap exceeded")
    if r < 2:
        raise LatticeError(f"kit rank must lie in [2..8], got {r}")


def simple_reflections(r: int) -> list[np.ndarray]:
    return [reflection_matrix(u).astype(np.int64) for u in simple_roots(enumerate_roots(r))]


def weyl_group(r: int) -> list[WeylElement]:
    """All elements of W(R), by breadth-first closure over simple reflections."""
    _check_cap(r)
    gens = simple_reflections(r)
    ident = np.eye(r + 1, dtype=np.int64)
    seen = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = s @ g
                k = h.tobytes()
                if k not in seen:
                    seen[k] = h
                    nxt.append(h)
        frontier = nxt
    return [WeylElement(m) for m in seen.values()]


def _root_permutation(m: np.ndarray, r: int) -> np.ndarray:
    """perm[i] = index of m(root_i)."""
    t = root_table(r)
    images = t.vectors @ m.T
    weights = np.array([32 ** i for i in range(r + 1)], dtype=np.int64)
    lookup = {int(c): i for i, c in enumerate(t.codes)}
    return np.array([lookup[int(c)] for c in images @ weights])


def subsystem_bases(r: int) -> list[tuple[int, ...]]:
    """Index tuples of positive roots forming a simple basis (products in {0,1}, independent)."""
    t = root_table(r)
    pos = np.nonzero(t.positive)[0]
    prod = t.dual[pos] @ t.vectors[pos].T
    ok = (prod == 0) | (prod == 1)
    out: list[tuple[int, ...]] = []

    def grow(current: list[int], start: int):
        out.append(tuple(int(pos[i]) for i in current))
        for j in range(start, len(pos)):
            if all(ok[i, j] for i in current):
                cand = current + [j]
                if np.linalg.matrix_rank(prod[np.ix_(cand, cand)]) == len(cand):
                    grow(cand, j + 1)

    grow([], 0)
    return out


@dataclass(frozen=True)
class OrbitClassification:
    rank: int
    subsystems: tuple[bytes, ...]      # root masks of distinct subsystems
    orbit_of: tuple[int, ...]          # orbit id per subsystem
    types: tuple[str, ...]             # Dynkin type per orbit

    @property
    def orbit_count(self) -> int:
        return len(self.types)

    def counts_by_type(self) -> dict[str, int]:
        return dict(sorted(Counter(self.types).items()))

    def orbit_of_mask(self, mask: np.ndarray) -> int:
        return self.orbit_of[self.subsystems.index(np.ascontiguousarray(mask, dtype=bool).tobytes())]


@lru_cache(maxsize=None)
def orbit_classify(r: int) -> OrbitClassification:
    """Partition all root subsystems of the rank-r kit into Weyl orbits.

    Orbits under the group equal orbits under its generators, so a
    union-find over the simple reflections suffices.
    """
    _check_cap(r)
    t = root_table(r)
    masks: dict[bytes, int] = {}
    for basis in subsystem_bases(r):
        roots = [PicardVector(tuple(int(c) for c in t.vectors[i])) for i in basis]
        key = generated_mask(roots, r).tobytes()
        masks.setdefault(key, len(masks))
    keys = list(masks)
    parent = list(range(len(keys)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for s in simple_reflections(r):
        perm = _root_permutation(s, r)
        for k, i in masks.items():
            m = np.frombuffer(k, dtype=bool)
            image = np.zeros_like(m)
            image[perm[m]] = True
            j = masks[image.tobytes()]
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    roots_of = sorted({find(i) for i in range(len(keys))})
    renum = {root: n for n, root in enumerate(roots_of)}
    orbit_of = tuple(renum[find(i)] for i in range(len(keys)))
    types = tuple(mask_type(np.frombuffer(keys[root], dtype=bool), r) for root in roots_of)
    return OrbitClassification(r, tuple(keys), orbit_of, types)
