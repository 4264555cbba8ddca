import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weakdp.lattice_core import (
    C1Label,
    C1LabelElement,
    LatticeError,
    PicardVector,
    canonical_class,
    cartan_matrix,
    dynkin_type,
    enumerate_roots,
    enumerate_roots_bruteforce,
    intersect,
    is_positive,
    phi,
    reflect,
    simple_roots,
    system_type,
)

ROOT_COUNTS = {2: 2, 3: 8, 4: 20, 5: 40, 6: 72, 7: 126, 8: 240}
KIT_TYPES = {2: "A1", 3: "A2+A1", 4: "A4", 5: "D5", 6: "E6", 7: "E7", 8: "E8"}


def P(text, r):
    return PicardVector.parse(text, r)


def test_canonical_class_square():
    assert intersect(canonical_class(5), canonical_class(5)) == 4
    for r in range(2, 9):
        assert intersect(canonical_class(r), canonical_class(r)) == 9 - r


def test_intersection_example():
    assert intersect(P("H-Q1-Q2-Q3", 5), P("2H-Q1-Q2-Q3-Q4", 5)) == -1


def test_rank_mismatch():
    with pytest.raises(LatticeError):
        intersect(P("H", 2), P("H", 3))


def test_reflection_examples():
    r = 3
    assert reflect(P("Q1-Q2", r), P("Q1", r)) == P("Q2", r)
    assert reflect(P("H-Q1-Q2-Q3", r), P("H", r)) == P("2H-Q1-Q2-Q3", r)
    assert reflect(P("Q1-Q2", r), P("Q3", r)) == P("Q3", r)


def test_reflect_needs_root():
    with pytest.raises(LatticeError):
        reflect(P("H", 2), P("Q1", 2))


@pytest.mark.parametrize("r", range(2, 9))
def test_root_counts_and_types(r):
    roots = enumerate_roots(r)
    assert len(roots) == ROOT_COUNTS[r]
    assert system_type(roots) == KIT_TYPES[r]
    k = canonical_class(r)
    assert all(intersect(v, k) == 0 and intersect(v, v) == -2 for v in roots)


@pytest.mark.parametrize("r", range(2, 7))
def test_roots_agree_with_bounded_search(r):
    assert set(enumerate_roots(r)) == set(enumerate_roots_bruteforce(r))


@pytest.mark.parametrize("r", [2, 5, 8])
def test_reflections_permute_roots(r):
    roots = set(enumerate_roots(r))
    for u in simple_roots(roots):
        assert {reflect(u, v) for v in roots} == roots


def test_roots_sorted_descending_and_half_positive():
    roots = enumerate_roots(5)
    assert sum(map(is_positive, roots)) == len(roots) // 2
    assert roots == sorted(roots, key=lambda v: v.coeffs, reverse=True)


@st.composite
def vector(draw, r):
    return PicardVector(tuple(draw(st.integers(-6, 6)) for _ in range(r + 1)))


@settings(max_examples=80, deadline=None)
@given(st.data(), st.integers(2, 8))
def test_reflection_is_isometry(data, r):
    roots = enumerate_roots(r)
    u = roots[data.draw(st.integers(0, len(roots) - 1))]
    a, b = data.draw(vector(r)), data.draw(vector(r))
    assert intersect(reflect(u, a), reflect(u, b)) == intersect(a, b)
    assert reflect(u, reflect(u, a)) == a


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8).flatmap(lambda r: vector(r)))
def test_vector_text_round_trip(v):
    assert PicardVector.parse(str(v), v.rank) == v


def test_label_parse_and_print():
    lab = C1Label.parse("1123,45;5")
    assert str(lab) == "1123,45;5"
    assert lab.roots == [P("H-Q1-Q2-Q3", 5), P("Q4-Q5", 5)]
    assert C1Label.parse("{};4").elements == ()
    assert str(C1LabelElement.parse("-308")) == "-308"


def test_label_tokens():
    assert phi(C1LabelElement.parse("278"), 8) == P("2H-Q1-Q2-Q3-Q4-Q5-Q6", 8)
    assert phi(C1LabelElement.parse("308"), 8) == P("3H-Q1-Q2-Q3-Q4-Q5-Q6-Q7-2Q8", 8)
    assert phi(C1LabelElement.parse("-1145"), 5) == -P("H-Q1-Q4-Q5", 5)


@pytest.mark.parametrize("text", ["1x2", "12;", "99;9", "12,3456;8", "1123;2"])
def test_malformed_labels(text):
    with pytest.raises(LatticeError):
        C1Label.parse(text)


def test_dynkin_types():
    assert dynkin_type(C1Label.parse("1123,12,23,45;5").roots).type_string == "A2+2A1"
    assert dynkin_type(C1Label.parse("12,23,34,1123;4").roots).type_string == "A4"
    assert dynkin_type(C1Label.parse("1123,12,23,34;5").roots).type_string == "A4"
    assert dynkin_type([]).type_string == "A0"


def test_not_a_root_basis():
    with pytest.raises(LatticeError, match="not a root basis"):
        dynkin_type([P("Q1-Q2", 3), P("Q1-Q3", 3)])
    with pytest.raises(LatticeError, match="not a root basis"):
        dynkin_type([P("Q1-Q2", 3), P("Q1-Q2", 3)])


def test_cartan_matrix_of_a2():
    m = cartan_matrix([P("Q1-Q2", 3), P("Q2-Q3", 3)])
    assert np.array_equal(np.array(m), np.array([[2, -1], [-1, 2]]))
