import itertools
from collections import Counter

import pytest
from conftest import SMALL, disjoint, cyclic_gens, perm_group, quaternion_gens
from oracles import classes, closure, element_order, subsets_closed

from eichlerkit.quotients import (analysis, binary_polyhedral_quotients, has_quotient, is_eichler_simple,
                                  is_isomorphic, is_quaternion_histogram, m_h, normal_subgroups,
                                  quaternion_quotients, quotient_witnesses, verify_witness)
from eichlerkit.zoo import build, quaternion

FEW_CLASSES = [n for n, gens in SMALL.items() if len(classes(closure(gens))[0]) <= 12]


def brute_normal_orders(gens):
    elements = closure(gens)
    cls, _ = classes(elements)
    ident = next(i for i, c in enumerate(cls) if c[0] == tuple(range(len(elements[0]))))
    rest = [i for i in range(len(cls)) if i != ident]
    found = []
    for r in range(len(rest) + 1):
        for pick in itertools.combinations(rest, r):
            chosen = (ident,) + pick
            if subsets_closed(chosen, cls, elements):
                found.append(sum(len(cls[i]) for i in chosen))
    return sorted(found)


@pytest.mark.parametrize("name", FEW_CLASSES)
def test_normal_subgroups_match_class_unions(name):
    g = perm_group(SMALL[name])
    ours = sorted(n.order for n in normal_subgroups(g))
    assert ours == brute_normal_orders(SMALL[name])


def test_q16_normal_subgroup_count():
    assert len(normal_subgroups(perm_group(SMALL["Q16"]))) == 7


@pytest.mark.parametrize("name", ["Q8", "Q8xC2", "BTxC2", "Q12xC2", "C4.Q8", "Q8:Q12", "BOxC2"])
def test_closure_and_kernel_methods_agree(catalog, name):
    a = [n.class_indices for n in normal_subgroups(catalog[name], "closures")]
    b = [n.class_indices for n in normal_subgroups(catalog[name], "kernels")]
    assert a == b


def test_monotone_along_quotients(catalog):
    for name in ("Q8:Q12", "BTxC2", "C3:Q12", "Q16xC2", "C4.Q16", "Q8:BT"):
        an = analysis(catalog[name])
        top = m_h(catalog[name])
        assert all(an.mh_quotient(b) <= top for b in an.normal_bits)


def test_isomorphism_between_presentations(catalog):
    assert is_isomorphic(perm_group(quaternion_gens(8)), catalog["Q8"].perm_group)
    assert is_isomorphic(perm_group(SMALL["SL(2,3)"]), catalog["BT"].perm_group)
    assert not is_isomorphic(perm_group(SMALL["D8"]), catalog["Q8"].perm_group)
    assert not is_isomorphic(perm_group(SMALL["C3:C8"]), perm_group(SMALL["Q24"]))


def test_quotient_witnesses(catalog):
    g = catalog["Q8:Q12"]
    ws = quotient_witnesses(g, catalog["Q12"])
    assert ws and all(verify_witness(g, w, catalog["Q12"]) for w in ws)
    assert all(w.index == 12 for w in ws)
    assert has_quotient(catalog["BTxC2"], catalog["BT"]) is not None
    assert has_quotient(catalog["BTxC2"], catalog["BO"]) is None
    names = [n for n, _ in binary_polyhedral_quotients(g)[0]]
    assert names == ["Q12", "BO"]


def test_eichler_simple(catalog):
    assert is_eichler_simple(catalog["C4.Q8"])
    assert is_eichler_simple(catalog["Q8"])
    assert is_eichler_simple(catalog["BTxC2"])
    # Q8 x C3 keeps every quaternionic character on the quotient Q8
    assert not is_eichler_simple(perm_group(disjoint(quaternion_gens(8), cyclic_gens(3))))
    assert is_eichler_simple(build(quaternion(24)))


def histogram(gens):
    return Counter(element_order(x) for x in closure(gens))


def test_quaternion_histogram_recognises_exactly_the_quaternion_groups():
    hits = sorted(n for n, gens in SMALL.items() if is_quaternion_histogram(histogram(gens), len(closure(gens))))
    assert hits == ["Q12", "Q16", "Q20", "Q24", "Q8"]


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8, 12, 16])
def test_quaternion_histogram_on_the_family(n):
    gens = quaternion_gens(4 * n)
    assert is_quaternion_histogram(histogram(gens), 4 * n)
    other = disjoint(quaternion_gens(4 * n), cyclic_gens(2))
    assert not is_quaternion_histogram(histogram(other), 8 * n)


def test_quaternion_quotients(catalog):
    assert [d for d, _ in quaternion_quotients(catalog["Q8:Q12"])] == [12]
    assert [d for d, _ in quaternion_quotients(catalog["C4.Q16"])] == [16, 16]
    assert quaternion_quotients(catalog["BT"]) == []
