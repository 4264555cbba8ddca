import pytest

from weakdp.delpezzo_sets import (
    SurfaceLattice,
    cremona_equivalent,
    del_pezzo_sets,
    effective_zero_set,
    indecomposable_one_set,
    irreducible_two_set,
    ruled_canonical_class,
    ruled_sets,
    sets_from_intersections,
    sets_from_tables,
)
from weakdp.lattice_core import LatticeError, PicardVector, canonical_class, enumerate_roots, intersect

SIZES = {0: (0, 0, 0), 2: (2, 3, 2), 3: (8, 6, 3), 4: (20, 10, 5), 5: (40, 16, 10),
         6: (72, 27, 27), 7: (126, 56, 126), 8: (240, 240, 2160)}


@pytest.mark.parametrize("r", sorted(SIZES))
def test_sizes(r):
    assert del_pezzo_sets(r).sizes() == SIZES[r]


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6, 7])
def test_tables_agree_with_characterization(r):
    a, b = sets_from_tables(r), sets_from_intersections(r)
    assert a == b
    k = canonical_class(r)
    for name, (d, s) in {"F": (0, -2), "E": (1, -1), "G": (2, 0)}.items():
        for c in getattr(a, name):
            assert (-intersect(k, c), intersect(c, c)) == (d, s)


def test_zero_set_is_root_set():
    assert set(del_pezzo_sets(6).F) == set(enumerate_roots(6))


def test_rank_one_is_ruled():
    with pytest.raises(LatticeError, match="ruled"):
        del_pezzo_sets(1)
    with pytest.raises(LatticeError):
        del_pezzo_sets(9)


def test_ruled_lists():
    assert ruled_sets(1).E == (PicardVector((1, -1), ruled=1),)
    assert len(ruled_sets(0).F) == 2 and len(ruled_sets(2).G) == 1
    with pytest.raises(LatticeError):
        ruled_sets(3)
    k = ruled_canonical_class(0)
    assert intersect(k, k) == 8


def test_degree_four_lattice():
    X = SurfaceLattice.of("1123,45;5")
    assert X.degree == 4
    assert set(map(str, effective_zero_set(X))) == {"H-Q1-Q2-Q3", "Q4-Q5"}
    assert len(irreducible_two_set(X)) == 7
    assert len(indecomposable_one_set(X)) == 8


def test_smooth_degree_four_lines():
    assert len(indecomposable_one_set(SurfaceLattice.of(";5"))) == 16


def test_surface_lattice_needs_geometric_label():
    with pytest.raises(LatticeError):
        SurfaceLattice.of("-1145;5")


def test_cremona_equivalence():
    assert cremona_equivalent(SurfaceLattice.of("12;5"), SurfaceLattice.of("45;5"))
    assert not cremona_equivalent(SurfaceLattice.of("12;5"), SurfaceLattice.of("12,34;5"))
    with pytest.raises(LatticeError):
        cremona_equivalent(SurfaceLattice.of("12;5"), SurfaceLattice.of("12;4"))
