"""Cancellation verdicts: PC, SFC holds with PC open, SFC fails, or open."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import NoC22Quotient, NotATwoGroup, NotPeriodic
from .mnec import ExclusionSet
from .quotients import (_named, analysis, has_periodic_cohomology, has_quotient, m_h, quaternion_quotients,
                        sylow_shape)
from .zoo import BI, BO, BT, NamedGroup, build, cyclic, product, quaternion, small_group

PC = "PC"
SFC_HOLDS_PC_OPEN = "SFC_HOLDS_PC_OPEN"
FAILS_SFC = "FAILS_SFC"
OPEN = "OPEN"
STATUSES = (PC, SFC_HOLDS_PC_OPEN, FAILS_SFC, OPEN)

C2 = cyclic(2)
_SPECS = {
    "C1": lambda: cyclic(1),
    "Q8": lambda: quaternion(8),
    "Q12": lambda: quaternion(12),
    "Q16": lambda: quaternion(16),
    "Q20": lambda: quaternion(20),
    "BT": lambda: BT,
    "BO": lambda: BO,
    "BI": lambda: BI,
    "Q8xC2": lambda: product(quaternion(8), C2),
    "Q12xC2": lambda: product(quaternion(12), C2),
    "Q16xC2": lambda: product(quaternion(16), C2),
    "Q20xC2": lambda: product(quaternion(20), C2),
    "BTxC2": lambda: product(BT, C2),
    "BOxC2": lambda: product(BO, C2),
    "BIxC2": lambda: product(BI, C2),
    "BTxC2^2": lambda: product(BT, C2, C2),
    "BTxQ12": lambda: product(BT, quaternion(12)),
    "BTxQ20": lambda: product(BT, quaternion(20)),
    "BTxBO": lambda: product(BT, BO),
    "BT^2xC2": lambda: product(BT, BT, C2),
    "(Q8:BT)xC2": lambda: product(small_group(192, 1022), C2),
    "C4.Q8": lambda: small_group(32, 14),
    "C3:Q12": lambda: small_group(36, 7),
    "C4.Q16": lambda: small_group(64, 14),
    "Q8:Q12": lambda: small_group(96, 66),
    "C5:Q20": lambda: small_group(100, 7),
    "Q8:BT": lambda: small_group(192, 1022),
    "G192_183": lambda: small_group(192, 183),
    "Q8:BO": lambda: small_group(384, 18129),
    "BT:BO": lambda: small_group(1152, 155476),
    "Q8:BT^2": lambda: small_group(4608, "q8bt2"),
}


@lru_cache(maxsize=None)
def reference(name: str) -> NamedGroup:
    """A named reference group used by the rules (cached, so analyses are shared)."""
    if name in _SPECS:
        spec = _SPECS[name]()
    elif name.startswith("Q") and name[1:].isdigit():
        spec = quaternion(int(name[1:]))
    else:
        spec = _bpg_power_spec(name)
    inner = build(spec)
    return NamedGroup(name, inner.group, inner.factors, inner.provenance, inner.declared_order, spec)


def _bpg_power_spec(name):
    n, m = _parse_power(name)
    return product(*([BT] * n + [BI] * m))


def _parse_power(name):
    n = m = 0
    for part in name.split("x"):
        base, _, exp = part.partition("^")
        k = int(exp) if exp else 1
        if base == "BT":
            n += k
        elif base == "BI":
            m += k
        else:
            raise KeyError(name)
    return n, m


def _power_name(n, m):
    parts = []
    for base, k in (("BT", n), ("BI", m)):
        if k:
            parts.append(base if k == 1 else f"{base}^{k}")
    return "x".join(parts)


# -- fact tables -----------------------------------------------------------------------------


BPG_PC = ("C1", "Q8", "Q12", "Q16", "Q20", "BT", "BO", "BI")
FAIL_FIXED = ("Q8xC2", "Q12xC2", "Q16xC2", "Q20xC2", "BOxC2", "BIxC2",
              "C4.Q8", "C3:Q12", "C4.Q16", "C5:Q20", "BTxC2^2")
HOLDS = ("BTxC2", "Q8:Q12", "Q8:BT", "G192_183", "BTxQ12", "BTxQ20")
# the non-Eichler covers of the binary polyhedral list, apart from the Q_4n family
MNEC_FIXED = ("Q8xC2", "Q12xC2", "Q16xC2", "Q20xC2", "BTxC2", "BOxC2", "BIxC2",
              "C4.Q8", "C3:Q12", "C4.Q16", "Q8:Q12", "C5:Q20", "Q8:BO", "BT:BO")
# Q8 : BT^n, constructible for n <= 2
MNEC_SEMIDIRECT = ("Q8:BT", "Q8:BT^2")
TXC2_BLOCKERS = ("BTxC2^2", "BTxQ12", "(Q8:BT)xC2", "BTxQ20", "BTxBO", "BT^2xC2")


@dataclass(frozen=True)
class FactTables:
    pc_list: tuple = BPG_PC + ("BTxC2",)
    sfc_fail_list: tuple = FAIL_FIXED
    sfc_hold_list: tuple = HOLDS
    quaternion_fail_from: int = 6

    def __post_init__(self):
        clash = set(self.sfc_fail_list) & (set(self.sfc_hold_list) | set(self.pc_list))
        if clash:
            raise ValueError(f"groups listed as both failing and holding: {sorted(clash)}")


FACTS = FactTables()


def bpg_products(order: int):
    """Names BT^n x BI^m (n + m >= 2) whose order divides ``order``."""
    out = []
    n = 0
    while 24**n <= order:
        m = 0
        while 24**n * 120**m <= order:
            if n + m >= 2 and order % (24**n * 120**m) == 0:
                out.append(_power_name(n, m))
            m += 1
        n += 1
    return out


def s_list(order: int | None = None):
    """The binary polyhedral list with the products BT^n x BI^m dividing ``order``."""
    names = list(BPG_PC)
    if order is not None:
        names += bpg_products(order)
    return [reference(n) for n in names]


def mnec_s_list():
    """Catalog-sized members of the non-Eichler-cover list of the binary polyhedral list."""
    return [reference(n) for n in MNEC_FIXED + MNEC_SEMIDIRECT]


# -- verdicts -------------------------------------------------------------------------------------


@dataclass
class TraceEntry:
    rule: str
    citation: str
    witness: dict = field(default_factory=dict)

    def to_json(self):
        return {"rule": self.rule, "citation": self.citation, "witness": self.witness}


@dataclass
class Verdict:
    name: str
    order: int
    mh: int
    status: str
    mode: str
    trace: list
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status}")
        if not self.trace:
            raise ValueError("a verdict needs a nonempty trace")

    @property
    def rule(self):
        return self.trace[0].rule

    def to_json(self):
        out = {"name": self.name, "order": self.order, "mH": self.mh, "status": self.status,
               "mode": self.mode, "trace": [t.to_json() for t in self.trace]}
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def dumps(self):
        return json.dumps(self.to_json(), indent=2)


def _witness(g, h_name, w):
    out = w.to_json()
    out["quotient"] = h_name
    return out


def _iso(g, name):
    h = reference(name)
    return g.order() == h.order() and m_h(g) == m_h(h) and has_quotient(g, h) is not None


def _quotient(g, name):
    h = reference(name)
    if g.order() % h.order():
        return None
    return has_quotient(g, h)


def _quaternion_quotient(g, from_n, even_only=False):
    for d, w in quaternion_quotients(g, from_n):
        if not (even_only and (d // 4) % 2):
            return f"Q{d}", w
    return None


def _abelianization_order(g) -> int:
    out = 1
    for x in analysis(g).fingerprint().abelian_invariants:
        out *= x
    return out


def _odd_cofactor_product(g):
    """Factor split G = H x K with H in the small binary polyhedral list, |K^ab| odd
    and m_H(G) = m_H(H), so that the projection onto H is an Eichler quotient."""
    if len(g.factors) < 2:
        return None
    mg = m_h(g)
    for i, f in enumerate(g.factors):
        for name in BPG_PC[1:]:
            if m_h(f) != mg or not _iso(f, name):
                continue
            rest = g.factors[:i] + g.factors[i + 1:]
            if all(_abelianization_order(k) % 2 for k in rest):
                return name, [k.name for k in rest]
    return None


def _pc_rules(g, mg, trace):
    hit = None
    for h in s_list(g.order()):
        if m_h(h) != mg or g.order() % h.order():
            continue
        w = has_quotient(g, h)
        if w is not None:
            hit = h
            trace.append(TraceEntry("R1", "PC lifts through an Eichler quotient in the binary polyhedral list",
                                    _witness(g, h.name, w)))
            break
    split = _odd_cofactor_product(g)
    if split:
        trace.append(TraceEntry("R1b", "H x K with H in the list and K not mapping onto C2",
                                {"H": split[0], "K": split[1]}))
    txc2 = _iso(g, "BTxC2")
    if txc2:
        trace.append(TraceEntry("R2", "BT x C2 has PC (lifting along it is not assumed)",
                                {"quotient": "BTxC2", "identity": True}))
    return hit is not None or split is not None or txc2


def _fail_rule(g, trace, names=FAIL_FIXED, quaternion_from=6, even_only=False):
    found = False
    q = _quaternion_quotient(g, quaternion_from, even_only) if quaternion_from else None
    if q:
        trace.append(TraceEntry("R3", "SFC fails for this quotient and so for every cover of it",
                                _witness(g, q[0], q[1])))
        found = True
    for name in names:
        w = _quotient(g, name)
        if w is not None:
            trace.append(TraceEntry("R3", "SFC fails for this quotient and so for every cover of it",
                                    _witness(g, name, w)))
            found = True
    return found


def classify(g) -> Verdict:
    """Run the rule cascade; the first matching rule decides, every match is kept."""
    g = _named(g)
    mg = m_h(g)
    trace = []
    pc = _pc_rules(g, mg, trace)
    fails = _fail_rule(g, trace)
    holds = [name for name in HOLDS[1:] if _iso(g, name)]
    for name in holds:
        trace.append(TraceEntry("R4", "SFC holds by direct computation; PC is open", {"identity": name}))
    if pc:
        status = PC
    elif fails:
        status = FAILS_SFC
    elif holds:
        status = SFC_HOLDS_PC_OPEN
    else:
        status = OPEN
        blocking = [name for name in MNEC_FIXED + MNEC_SEMIDIRECT if _quotient(g, name) is not None]
        trace.append(TraceEntry("R5", "no rule decides; no Eichler quotient in the binary polyhedral list",
                                {"blocking_quotients": blocking}))
    # order the trace so the deciding rule comes first
    first = {PC: ("R1", "R1b", "R2"), FAILS_SFC: ("R3",), SFC_HOLDS_PC_OPEN: ("R4",), OPEN: ("R5",)}[status]
    trace.sort(key=lambda t: t.rule not in first)
    return Verdict(g.name, g.order(), mg, status, "general", trace)


def _is_power_of_two(n):
    return n & (n - 1) == 0


def classify_two_group(g) -> Verdict:
    """For 2-groups PC and SFC agree and fail exactly on a short quotient list."""
    g = _named(g)
    if not _is_power_of_two(g.order()):
        raise NotATwoGroup(f"{g.name} has order {g.order()}")
    trace = []
    fails = _fail_rule(g, trace, ("Q8xC2", "Q16xC2", "C4.Q8", "C4.Q16"), quaternion_from=8)
    if not fails:
        trace.append(TraceEntry("T1", "2-group with none of Q8xC2, Q16xC2, C4.Q8, C4.Q16, Q_2^n (n >= 5) "
                                      "as a quotient has PC", {}))
    return Verdict(g.name, g.order(), m_h(g), FAILS_SFC if fails else PC, "two_group", trace)


def _c22_quaternion_products(g):
    """Quotients Q_4n x C2 with n = 2, 4 or n >= 3 odd."""
    an = analysis(g)
    for d in sorted({an.order // an.order_of(b) for b in an.normal_bits}):
        if d % 8:
            continue
        n = d // 8
        if not (n in (2, 4) or (n >= 3 and n % 2)):
            continue
        spec = product(quaternion(4 * n), C2)
        inner = build(spec)
        h = NamedGroup(f"Q{4 * n}xC2", inner.group, inner.factors, spec=spec)
        w = has_quotient(g, h)
        if w is not None:
            return h.name, w
    return None


def classify_c22(g) -> Verdict:
    """Groups mapping onto C2 x C2: PC and SFC both fail exactly on a quotient list."""
    g = _named(g)
    c22 = build(product(C2, C2))
    if g.order() % 4 or has_quotient(g, c22) is None:
        raise NoC22Quotient(f"{g.name} does not map onto C2 x C2")
    trace = []
    fails = _fail_rule(g, trace, ("BTxC2^2", "BOxC2", "BIxC2", "C4.Q8", "C4.Q16"),
                       quaternion_from=6, even_only=True)
    q = _c22_quaternion_products(g)
    if q:
        trace.append(TraceEntry("R3", "SFC fails for this quotient and so for every cover of it",
                                _witness(g, q[0], q[1])))
        fails = True
    if not fails:
        trace.append(TraceEntry("C1", "no quotient in the list for groups onto C2 x C2, so PC holds", {}))
    return Verdict(g.name, g.order(), m_h(g), FAILS_SFC if fails else PC, "c22", trace)


def classify_periodic(g) -> Verdict:
    """For periodic cohomology, PC holds exactly when m_H <= 2."""
    g = _named(g)
    if not has_periodic_cohomology(g):
        raise NotPeriodic(f"{g.name} does not have periodic cohomology")
    mg = m_h(g)
    notes = []
    if mg <= 2:
        status = PC
        trace = [TraceEntry("P1", "periodic cohomology and m_H <= 2: every class cancels", {"mH": mg})]
    else:
        status = FAILS_SFC
        shape = sylow_shape(g, 2)
        if mg >= 4:
            notes.append("every projective class has non-cancellation")
        elif shape in ("cyclic", "trivial"):
            notes.append("Sylow 2-subgroup is cyclic: every projective class has non-cancellation")
        else:
            notes.append("every class in the kernel group D(ZG), the free class included, has non-cancellation")
        trace = [TraceEntry("P2", "periodic cohomology and m_H >= 3: the free class fails to cancel",
                            {"mH": mg, "sylow2": shape})]
    return Verdict(g.name, g.order(), mg, status, "periodic", trace, notes)


@dataclass
class TxC2Report:
    group: str
    eichler_quotient: bool
    no_blocking_quotient: bool
    blocking: list

    @property
    def agree(self) -> bool:
        return self.eichler_quotient == self.no_blocking_quotient

    def to_json(self):
        return {"group": self.group, "eichler_quotient": self.eichler_quotient,
                "no_blocking_quotient": self.no_blocking_quotient, "blocking": self.blocking,
                "agree": self.agree}


def txc2_equivalence_check(g) -> TxC2Report:
    """Compare 'BT x C2 is an Eichler quotient' with the absence of the blocking quotients."""
    g = _named(g)
    txc2 = reference("BTxC2")
    if has_quotient(g, txc2) is None:
        raise NoC22Quotient(f"{g.name} does not map onto BT x C2")
    eq = m_h(g) == m_h(txc2)
    blocking = []
    q = _quaternion_quotient(g, 6)
    if q:
        blocking.append(q[0])
    blocking += [name for name in TXC2_BLOCKERS if _quotient(g, name) is not None]
    return TxC2Report(g.name, eq, not blocking, blocking)
