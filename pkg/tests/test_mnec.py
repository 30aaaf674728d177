import json

import pytest
from conftest import cyclic_gens, disjoint, perm_group, quaternion_gens

from eichlerkit.errors import InvalidSpec, NotQuotientClosed
from eichlerkit.mnec import (ExclusionSet, fundamental_lemma_check, gamma_levels, check_quotient_closed,
                             is_minimal_nec, is_non_eichler_cover, no_exclusions)
from eichlerkit.verdict import mnec_s_list, reference, s_list
from eichlerkit.zoo import build, cyclic, quaternion


def test_covers_of_the_trivial_group(catalog):
    one = build(cyclic(1))
    for name in ("Q8", "Q12", "BT", "BI"):
        assert is_minimal_nec(catalog[name], one)
    assert is_non_eichler_cover(catalog["Q8xC2"], one)
    assert not is_minimal_nec(catalog["Q8xC2"], one)


def test_second_level_covers(catalog):
    assert is_minimal_nec(catalog["Q8xC2"], catalog["Q8"])
    assert is_minimal_nec(catalog["Q8:Q12"], catalog["Q12"])
    assert is_minimal_nec(catalog["Q8:Q12"], catalog["BO"])
    assert not is_minimal_nec(catalog["Q8:Q12"], catalog["Q8"])
    assert not is_non_eichler_cover(catalog["Q8"], catalog["Q8"])


def test_quaternion_family_exclusion():
    ex = ExclusionSet()
    assert ex.family_quotient(build(quaternion(24))) == 24
    assert ex.family_quotient(build(quaternion(20))) is None
    assert no_exclusions().family_quotient(build(quaternion(24))) is None
    assert "Q8xC2" in ex and "Q8" not in ex


def test_first_level(catalog):
    graph = gamma_levels(list(catalog.values()), depth=1)
    assert [n.name for n in graph.level(1)] == ["Q8", "Q12", "Q16", "Q20", "BT", "BO", "BI"]
    assert graph.edges_to("BI") == [(0, 1)]
    dot = graph.to_dot()
    assert dot.startswith("digraph") and "rank=same" in dot
    data = json.loads(json.dumps(graph.to_json()))
    assert data["nodes"][0]["name"] == "C1" and len(data["edges"]) == 7


@pytest.mark.parametrize("depth", [-1, 99])
def test_depth_is_validated(depth):
    with pytest.raises(InvalidSpec):
        gamma_levels(depth=depth)


def test_fundamental_lemma_on_small_groups():
    s, mnec = s_list(), mnec_s_list()
    q8c3 = perm_group(disjoint(quaternion_gens(8), cyclic_gens(3)))
    rep = fundamental_lemma_check(q8c3, s, mnec)
    assert rep.s_eichler and rep.eichler_witness == "Q8" and rep.agree
    rep = fundamental_lemma_check(reference("Q8xC2"), s, mnec)
    assert not rep.s_eichler and rep.mnec_witness == "Q8xC2" and rep.agree
    rep = fundamental_lemma_check(build(quaternion(24)), s, mnec)
    assert rep.agree and rep.mnec_witness == "Q24"
    rep = fundamental_lemma_check(build(quaternion(24)), s, mnec, quaternion_from=None)
    assert not rep.agree


def test_quotient_closure_is_enforced():
    with pytest.raises(NotQuotientClosed):
        check_quotient_closed([reference("Q8xC2")], [reference("Q8")])
    check_quotient_closed([reference("Q8"), reference("C1")])
