import numpy as np
import pytest

from weakdp.lattice_core import LatticeError, canonical_class, enumerate_roots, intersect
from weakdp.root_classification import classify, generated_mask, invariant, root_table
from weakdp.weyl_oracle import orbit_classify, subsystem_bases, weyl_group

GROUP_ORDERS = {2: 2, 3: 12, 4: 120, 5: 1920}
ORBIT_COUNTS = {2: 2, 3: 6, 4: 7, 5: 16}


@pytest.mark.parametrize("r", [2, 3, 4])
def test_group_orders(r):
    assert len(weyl_group(r)) == GROUP_ORDERS[r]


def test_group_order_rank5():
    assert len(weyl_group(5)) == 1920


@pytest.mark.parametrize("r", [2, 3, 4])
def test_elements_are_isometries_fixing_k(r):
    k = canonical_class(r)
    roots = enumerate_roots(r)
    for w in weyl_group(r)[:50]:
        assert w(k) == k
        assert {w(v) for v in roots} == set(roots)
        assert intersect(w(roots[0]), w(roots[-1])) == intersect(roots[0], roots[-1])


def test_rank_cap():
    with pytest.raises(LatticeError, match="oracle rank cap exceeded"):
        weyl_group(6)
    with pytest.raises(LatticeError, match="oracle rank cap exceeded"):
        orbit_classify(7)


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_orbit_counts(r):
    assert orbit_classify(r).orbit_count == ORBIT_COUNTS[r]


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_invariant_matches_orbits(r):
    """The invariant triple separates orbits and is constant on them."""
    oc = orbit_classify(r)
    t = root_table(r)
    key_of_orbit = {}
    for basis in subsystem_bases(r):
        roots = t.roots(np.isin(np.arange(len(t.vectors)), basis))
        orbit = oc.orbit_of_mask(generated_mask(roots, r))
        key = invariant(roots, r).key
        assert key_of_orbit.setdefault(orbit, key) == key
    assert len(set(key_of_orbit.values())) == oc.orbit_count
    assert set(key_of_orbit.values()) == {e.invariant.key for e in classify(r)}
