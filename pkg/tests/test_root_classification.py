from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from weakdp.lattice_core import C1Label, LatticeError
from weakdp.root_classification import (
    candidate_labels,
    classify,
    classify_all,
    complement,
    double_complement,
    entry_by_index,
    equivalent,
    invariant,
    lookup,
    z_sets,
)

COUNTS = {2: 2, 3: 6, 4: 7, 5: 16, 6: 21, 7: 47, 8: 77}


@pytest.mark.parametrize("r", range(2, 9))
def test_class_counts(r):
    assert len(classify(r)) == COUNTS[r]


def test_indices_are_contiguous():
    idx = [e.index for e in classify_all()]
    assert idx == list(range(1, 177))
    assert [e.index for e in classify(5)] == list(range(16, 32))


def test_rank5_type_multiset():
    got = Counter(e.type for e in classify(5))
    want = Counter(["A0", "A1", "2A1", "2A1", "A2", "3A1", "A2+A1", "A3", "A3", "4A1",
                    "A2+2A1", "A3+A1", "A4", "D4", "A3+2A1", "D5"])
    assert got == want


def test_anchor_rows():
    assert entry_by_index(19).label.text == "1123,45"
    assert entry_by_index(26).label.text == "1123,12,23,45"
    assert entry_by_index(163).type == "4A2"


def test_rank3_special_case():
    a = C1Label.parse("1123;3")
    b = C1Label.parse("23;3")
    assert not equivalent(a, b)
    assert lookup(a).index != lookup(b).index
    assert {e.type for e in classify(3)} >= {"A1"}
    assert [e.type for e in classify(3)].count("A1") == 2


def test_complements():
    r = 5
    S = C1Label.parse("1123,45;5").roots
    C = complement(S, r)
    assert all(v.dot(s) == 0 for v in C for s in S)
    K = double_complement(S, r)
    assert set(S) <= set(K)
    inv = invariant(S, r)
    assert inv.dynkin_of_S == "2A1" and inv.size_K == 4


def test_equivalent_rank_mismatch():
    with pytest.raises(LatticeError):
        equivalent(C1Label.parse("12;4"), C1Label.parse("12;5"))


def test_lookup_of_every_representative():
    for e in classify_all():
        assert lookup(e.label).index == e.index


def test_candidates_are_valid_bases():
    z = z_sets()[1]
    for cand in candidate_labels(z, 4):
        lab = C1Label(cand, 4)
        assert all(abs(u.dot(v)) <= 1 for u in lab.roots for v in lab.roots if u != v)


def _all_candidates(r):
    out = []
    for z in z_sets():
        out += [C1Label(c, r) for c in candidate_labels(z, r)]
    return out


CANDIDATES = {r: _all_candidates(r) for r in range(2, 6)}


@st.composite
def labels(draw, r):
    pool = CANDIDATES[r]
    return pool[draw(st.integers(0, len(pool) - 1))]


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5).flatmap(lambda r: st.tuples(labels(r), labels(r), labels(r))))
def test_equivalence_laws(data):
    a, b, c = data
    assert equivalent(a, a)
    assert equivalent(a, b) == equivalent(b, a)
    if equivalent(a, b) and equivalent(b, c):
        assert equivalent(a, c)
