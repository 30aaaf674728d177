import json

import pytest
from conftest import SMALL, perm_group

from eichlerkit.errors import NoC22Quotient, NotATwoGroup, NotPeriodic
from eichlerkit.verdict import (FAILS_SFC, OPEN, PC, SFC_HOLDS_PC_OPEN, FactTables, TraceEntry, Verdict,
                                classify, classify_c22, classify_periodic, classify_two_group, reference,
                                txc2_equivalence_check)
from eichlerkit.zoo import build, get_group, quaternion


@pytest.mark.parametrize("name, status, rule", [
    ("C1", PC, "R1"), ("Q8", PC, "R1"), ("BI", PC, "R1"), ("BTxC2", PC, "R2"),
    ("Q8xC2", FAILS_SFC, "R3"), ("Q24", FAILS_SFC, "R3"), ("Q8:Q12", SFC_HOLDS_PC_OPEN, "R4"),
    ("Q8:BO", OPEN, "R5"),
])
def test_reference_verdicts(name, status, rule):
    v = classify(reference(name))
    assert (v.status, v.rule) == (status, rule)


def test_eichler_quotient_and_odd_cofactor_product():
    v = classify(get_group("Q(8) x C(3)", []))
    assert v.status == PC
    assert [t.rule for t in v.trace][:2] == ["R1", "R1b"]


def test_open_verdict_lists_blocking_quotients():
    v = classify(reference("Q8:BO"))
    assert v.trace[0].witness["blocking_quotients"]


def test_json_round_trip():
    v = classify(reference("Q8xC2"))
    data = json.loads(v.dumps())
    assert data["status"] == FAILS_SFC and data["mH"] == 2
    assert data["trace"][0]["witness"]["quotient"] == "Q8xC2"


def test_verdict_rejects_bad_input():
    with pytest.raises(ValueError):
        Verdict("G", 1, 0, "MAYBE", "general", [TraceEntry("R1", "x")])
    with pytest.raises(ValueError):
        Verdict("G", 1, 0, PC, "general", [])


def test_two_groups():
    assert classify_two_group(reference("Q16")).status == PC
    assert classify_two_group(reference("C4.Q8")).status == FAILS_SFC
    assert classify_two_group(build(quaternion(32))).status == FAILS_SFC
    with pytest.raises(NotATwoGroup):
        classify_two_group(reference("Q12"))


def test_groups_onto_c22():
    assert classify_c22(reference("Q8xC2")).status == FAILS_SFC
    assert classify_c22(build(quaternion(24))).status == FAILS_SFC
    assert classify_c22(perm_group(SMALL["C2^3"])).status == PC
    with pytest.raises(NoC22Quotient):
        classify_c22(reference("Q12"))


def test_periodic():
    assert classify_periodic(build(quaternion(20))).status == PC
    v = classify_periodic(build(quaternion(28)))
    assert v.status == FAILS_SFC and "cyclic" in v.notes[0]
    with pytest.raises(NotPeriodic):
        classify_periodic(reference("Q8xC2"))


def test_txc2_report():
    rep = txc2_equivalence_check(reference("BTxC2"))
    assert rep.eichler_quotient and rep.agree
    rep = txc2_equivalence_check(reference("BTxC2^2"))
    assert not rep.eichler_quotient and rep.blocking and rep.agree


def test_fact_tables_are_disjoint():
    FactTables()
