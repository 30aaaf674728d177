import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SMALL, perm_group
from eichlerkit.errors import ResourceExceeded
from eichlerkit.perm import Permutation, PermGroup, is_prime, prime_factors
from oracles import classes, closure, compose, element_order

perms5 = st.permutations(range(5)).map(tuple)


@given(perms5, perms5, perms5)
def test_multiplication_is_associative(a, b, c):
    p, q, r = Permutation(a), Permutation(b), Permutation(c)
    assert (p * q) * r == p * (q * r)


@given(perms5, perms5)
def test_product_applies_left_factor_first(a, b):
    assert (Permutation(a) * Permutation(b)).images == compose(a, b)


@given(perms5)
def test_inverse_and_order(a):
    p = Permutation(a)
    assert (p * p.inverse()).is_identity()
    assert p.order() == element_order(a)
    assert (p ** p.order()).is_identity()
    assert p ** -1 == p.inverse()


def test_from_cycles_roundtrip():
    p = Permutation.from_cycles([(0, 2, 4), (1, 3)], 6)
    assert p.images == (2, 3, 4, 1, 0, 5)
    assert Permutation.from_cycles(p.cycles(), 6) == p
    assert p.order() == 6


@settings(max_examples=40, deadline=None)
@given(st.lists(st.permutations(range(7)).map(tuple), min_size=1, max_size=3))
def test_schreier_sims_order_matches_closure(gens):
    g = PermGroup([np.array(x) for x in gens], 7)
    assert g.order() == len(closure(gens))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.permutations(range(6)).map(tuple), min_size=1, max_size=2), perms5)
def test_membership_matches_closure(gens, probe):
    g = PermGroup([np.array(x) for x in gens], 6)
    elements = set(closure(gens))
    x = tuple(probe) + (5,)
    assert g.contains(Permutation(x)) == (x in elements)


@pytest.mark.parametrize("name", ["S3", "D8", "Q8", "A4", "S4", "SL(2,3)", "C3:C8", "F20"])
def test_classes_match_brute_force(name):
    gens = SMALL[name]
    cc = perm_group(gens).conjugacy_classes()
    brute, _ = classes(closure(gens))
    assert sorted(cc.sizes.tolist()) == sorted(len(c) for c in brute)
    assert int(cc.sizes.sum()) == len(closure(gens))


def test_class_order_and_power_map():
    cc = perm_group(SMALL["SL(2,3)"]).conjugacy_classes()
    assert list(cc.orders) == sorted(cc.orders)
    assert cc.orders[0] == 1 and cc.sizes[0] == 1
    # the square of an element of order 4 is the central involution
    l4 = int(np.nonzero(cc.orders == 4)[0][0])
    central = int(np.nonzero((cc.orders == 2) & (cc.sizes == 1))[0][0])
    assert cc.power_map[l4][2] == central


def test_structure_constants_count_products():
    g = perm_group(SMALL["S4"])
    cc = g.conjugacy_classes()
    c = cc.structure_constants
    # sum over j,k of c[j,k,l] counts all pairs (x, x^-1 z), i.e. |G|
    assert np.all(c.sum(axis=(0, 1)) == g.order())


def test_center_derived_and_sylow():
    g = perm_group(SMALL["SL(2,3)"])
    assert g.center().order() == 2
    assert g.derived_subgroup().order() == 8
    s2 = g.sylow_subgroup(2)
    assert s2.order() == 8 and s2.is_generalized_quaternion() and not s2.is_cyclic()
    assert g.sylow_subgroup(3).is_cyclic()


def test_element_table_lookup_and_quotient():
    g = perm_group(SMALL["D12"])
    tab = g.table()
    for i in range(tab.size):
        assert tab.index_of(tab.perm(i)) == i
    centre = np.zeros(tab.size, dtype=bool)
    centre[tab.index(g.center().table().elems)] = True
    q, labels = tab.quotient(centre)
    assert q.order() == 6 and len(set(labels.tolist())) == 6


def test_table_refused_above_cap():
    g = perm_group(SMALL["S4"])
    with pytest.raises(ResourceExceeded):
        g.table(cap=10)


def test_number_theory_helpers():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert prime_factors(360) == [2, 3, 5]
