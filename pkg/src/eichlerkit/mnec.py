"""Non-Eichler covers, catalog-restricted level graphs and their export."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .config import get_config
from .errors import InvalidSpec, NotQuotientClosed
from .quotients import (_named, analysis, has_quotient, is_S_eichler, m_h, quaternion_quotients,
                        quotient_kernel_bits)
from .zoo import NamedGroup, build, cyclic, default_catalog


def is_non_eichler_cover(g, h) -> bool:
    """G ->> H with m_H(G) > m_H(H)."""
    g, h = _named(g), _named(h)
    if m_h(g) <= m_h(h):
        return False
    return has_quotient(g, h) is not None


def is_minimal_nec(g, h, catalog=None) -> bool:
    """G is a non-Eichler cover of H and no proper quotient of G is one.

    m_H only drops along quotients, so it is enough to look at G/N for the
    minimal normal subgroups N: G/N ->> H exactly when some kernel of a map
    G ->> H contains N.
    """
    g, h = _named(g), _named(h)
    if not is_non_eichler_cover(g, h):
        return False
    an = analysis(g)
    target = m_h(h)
    kernels = quotient_kernel_bits(g, h)
    for n in an.minimal_normal_bits:
        if an.mh_quotient(n) <= target:
            continue
        if any(k & n == n for k in kernels):
            return False
    return True


# -- exclusions -----------------------------------------------------------------------


DEFAULT_EXCLUDED = ("Q8xC2", "Q12xC2", "Q16xC2", "Q20xC2", "BTxC2^2", "BOxC2", "BIxC2",
                    "C4.Q8", "C3:Q12", "C4.Q16", "C5:Q20")


@dataclass(frozen=True)
class ExclusionSet:
    """Known failures that the level construction does not extend.

    ``names`` are catalog members; ``quaternion_from`` is the smallest n for
    which every Q_4n is excluded (None switches the family off).
    """

    names: frozenset = frozenset(DEFAULT_EXCLUDED)
    quaternion_from: int | None = 6

    def family_quotient(self, g):
        """Order 4n of a quotient Q_4n (n >= quaternion_from) of G, or None."""
        if self.quaternion_from is None:
            return None
        found = quaternion_quotients(g, self.quaternion_from)
        return found[0][0] if found else None

    def __contains__(self, g):
        return (g if isinstance(g, str) else _named(g).name) in self.names


def no_exclusions() -> ExclusionSet:
    return ExclusionSet(frozenset(), None)


# -- level graphs --------------------------------------------------------------------------


@dataclass
class Node:
    group: NamedGroup
    mh: int
    level: int
    index: int
    status: str = "unknown"
    excluded: bool = False

    @property
    def name(self):
        return self.group.name

    @property
    def ident(self):
        return (self.level, self.index)


@dataclass
class EichlerGraph:
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)

    def level(self, k):
        return [n for n in self.nodes if n.level == k]

    def node(self, name):
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(name)

    def edges_to(self, name):
        return sorted((self.node(h).ident for g, h in self.edges if g == name))

    def to_json(self):
        return {
            "nodes": [{"name": n.name, "order": n.group.order(), "mH": n.mh, "level": n.level,
                       "id": list(n.ident), "status": n.status} for n in self.nodes],
            "edges": [{"from": g, "to": h} for g, h in self.edges],
        }

    def to_dot(self):
        return graph_to_dot(self)


_DOT_STYLE = {
    "PC": 'style=filled, fillcolor="#9be39b"',
    "FAILS_SFC": 'style=filled, fillcolor="#f29a9a"',
    "SFC_HOLDS_PC_OPEN": 'style=filled, fillcolor="#f5d67a"',
    "OPEN": 'style=filled, fillcolor="#ffffff"',
    "unknown": 'style=dashed',
}


def graph_to_dot(graph: EichlerGraph) -> str:
    lines = ["digraph gamma {", "  rankdir=LR;", "  node [shape=box];"]
    for k in sorted({n.level for n in graph.nodes}):
        members = " ".join(f'"{n.name}";' for n in graph.level(k))
        lines.append(f"  subgraph level{k} {{ rank=same; {members} }}")
    for n in graph.nodes:
        label = f"{n.name}\\n{n.ident} mH={n.mh}"
        lines.append(f'  "{n.name}" [label="{label}", {_DOT_STYLE.get(n.status, _DOT_STYLE["unknown"])}];')
    for g, h in graph.edges:
        lines.append(f'  "{g}" -> "{h}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(graph: EichlerGraph) -> str:
    return json.dumps(graph.to_json(), indent=2)


def gamma_levels(catalog=None, exclusions: ExclusionSet | None = None, depth: int = 3,
                 status: bool = False) -> EichlerGraph:
    """Levels of minimal non-Eichler covers, starting from the trivial group.

    A catalog group enters level k+1 when it is a minimal non-Eichler cover of
    an extendable level-k node and none of the other candidates is a proper
    quotient of it. Nodes are numbered by order, ties in catalog order.
    Excluded groups keep their place but are not extended, and candidates
    with a proper quotient among placed excluded nodes (or a quotient in the
    quaternion family) are dropped.
    """
    if depth < 0 or depth > get_config().max_depth:
        raise InvalidSpec(f"depth must lie in 0..{get_config().max_depth}")
    catalog = list(default_catalog() if catalog is None else catalog)
    # equal orders keep their catalog order, which fixes the within-level numbering
    position = {id(g): i for i, g in enumerate(catalog)}
    exclusions = exclusions or ExclusionSet()
    trivial = build(cyclic(1))
    trivial = NamedGroup("C1", trivial.group, spec=trivial.spec, declared_order=1)
    graph = EichlerGraph([Node(trivial, 0, 0, 1)])
    placed = {"C1"}
    frontier = [graph.nodes[0]]
    blocked = []
    for level in range(1, depth + 1):
        cands = []
        for g in sorted(catalog, key=lambda g: (g.order(), position[id(g)])):
            if g.name in placed:
                continue
            if not any(is_minimal_nec(g, n.group) for n in frontier):
                continue
            if exclusions.family_quotient(g) is not None:
                continue
            if any(b.group.order() < g.order() and has_quotient(g, b.group) for b in blocked):
                continue
            cands.append(g)
        chosen = [g for g in cands
                  if not any(o is not g and o.order() < g.order() and has_quotient(g, o) for o in cands)]
        frontier = []
        for i, g in enumerate(chosen, 1):
            node = Node(g, m_h(g), level, i, excluded=g in exclusions)
            graph.nodes.append(node)
            placed.add(g.name)
            (blocked if node.excluded else frontier).append(node)
        if not chosen:
            break
    for node in graph.nodes:
        for lower in graph.nodes:
            if lower.level < node.level and is_minimal_nec(node.group, lower.group):
                graph.edges.append((node.name, lower.name))
    if status:
        from .verdict import classify

        for node in graph.nodes:
            node.status = classify(node.group).status
    return graph


# -- Fundamental Lemma --------------------------------------------------------------------------


@dataclass
class FundamentalLemmaReport:
    group: str
    s_eichler: bool
    eichler_witness: str | None
    mnec_witness: str | None

    @property
    def agree(self) -> bool:
        return self.s_eichler == (self.mnec_witness is None)

    def to_json(self):
        return {"group": self.group, "s_eichler": self.s_eichler, "eichler_witness": self.eichler_witness,
                "mnec_witness": self.mnec_witness, "agree": self.agree}


def _member(k, s):
    return any(h.order() == k.order() and has_quotient(k, h) is not None for h in s)


def check_quotient_closed(s, catalog=None):
    """Every catalog group (or member of s) that is a quotient of s lies in s."""
    s = [_named(h) for h in s]
    pool = s + list(default_catalog() if catalog is None else catalog)
    for h in s:
        for k in pool:
            if k.order() >= h.order() or h.order() % k.order():
                continue
            if has_quotient(h, k) is not None and not _member(k, s):
                raise NotQuotientClosed(f"{h.name} maps onto {k.name}, which is not in the list")


def fundamental_lemma_check(g, s, mnec_s, catalog=None, quaternion_from: int | None = 6
                            ) -> FundamentalLemmaReport:
    """Compare 'G is S-Eichler' with 'G has no quotient in MNEC(S)'.

    ``mnec_s`` is a finite list; the infinite family Q_4n with
    n >= ``quaternion_from`` is checked by recognition (None skips it).
    """
    check_quotient_closed(s, catalog)
    g = _named(g)
    hit = is_S_eichler(g, s)
    witness = None
    for h in mnec_s:
        h = _named(h)
        if g.order() % h.order() == 0 and has_quotient(g, h) is not None:
            witness = h.name
            break
    if witness is None and quaternion_from is not None:
        found = quaternion_quotients(g, quaternion_from)
        if found:
            witness = f"Q{found[0][0]}"
    return FundamentalLemmaReport(g.name, hit is not None, hit[0].name if hit else None, witness)
