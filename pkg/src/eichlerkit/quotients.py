"""Normal subgroups, quotients G ->> H, isomorphism tests and Eichler predicates.

Normal subgroups are handled as sets of conjugacy classes of the group's
character table, encoded as Python int bitmasks.  Element-level work
(coset actions, isomorphism certificates) is used whenever the group is
within the enumeration cap; direct products beyond it are certified factor
by factor.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .chartab import CharacterTable, character_table
from .config import get_config
from .errors import ResourceExceeded, ValidationError
from .perm import Permutation, PermGroup, prime_factors
from .zoo import NamedGroup, build

# -- bit helpers -----------------------------------------------------------------


def _bits_of(indices) -> int:
    out = 0
    for i in indices:
        out |= 1 << int(i)
    return out


def _indices(bits: int) -> list[int]:
    out, i = [], 0
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def leaves(g: NamedGroup) -> list[NamedGroup]:
    """Direct factors of g that are not themselves products, in table order."""
    if not g.factors:
        return [g]
    out = []
    for f in g.factors:
        out.extend(leaves(f))
    return out


# -- fingerprints -------------------------------------------------------------------


@dataclass(frozen=True)
class IsoFingerprint:
    """Isomorphism invariants; unequal fingerprints prove non-isomorphism."""

    order: int
    abelian_invariants: tuple
    order_histogram: tuple
    class_sizes: tuple
    center_order: int
    derived_series: tuple
    degrees: tuple


def abelian_invariants_from_orders(orders) -> tuple:
    """Elementary divisors of an abelian group from its element orders."""
    orders = [int(o) for o in orders]
    n = len(orders)
    out = []
    for p in prime_factors(n) if n > 1 else []:
        full = _ppart(n, p)
        rest = n // full
        sums, j = [0], 1
        while p ** sums[-1] < full:
            c = sum(1 for o in orders if p**j % _ppart(o, p) == 0) // rest
            sums.append(round(math.log(c, p)))
            j += 1
        ranks = [sums[i] - sums[i - 1] for i in range(1, len(sums))] + [0]
        for j in range(1, len(ranks)):
            out.extend([p**j] * (ranks[j - 1] - ranks[j]))
    return tuple(sorted(out))


def _ppart(n, p):
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def perm_fingerprint(g: PermGroup) -> IsoFingerprint:
    """Fingerprint from element-level data."""
    tab = g.table()
    cls = tab.classes
    orders = tab.element_orders()
    series = [g.order()]
    cur = g
    while True:
        d = cur.derived_subgroup()
        if d.order() == series[-1]:
            break
        series.append(d.order())
        cur = d
    der = g.derived_subgroup()
    mask = np.zeros(tab.size, dtype=bool)
    mask[tab.index(der.table().elems)] = True
    quotient, _ = tab.quotient(mask)
    ab = abelian_invariants_from_orders(quotient.table().element_orders())
    chars = character_table(g)
    return IsoFingerprint(
        g.order(), ab, tuple(sorted(Counter(orders.tolist()).items())),
        tuple(sorted(cls.sizes.tolist())), int(np.sum(cls.sizes == 1)), tuple(series),
        tuple(sorted(chars.degrees.tolist())))


# -- normal subgroups -------------------------------------------------------------


@dataclass(eq=False)
class NormalSubgroup:
    """A normal subgroup, as a union of conjugacy classes of its parent."""

    parent: NamedGroup
    class_indices: tuple
    order: int

    @property
    def bits(self) -> int:
        return _bits_of(self.class_indices)

    @property
    def index(self) -> int:
        return analysis(self.parent).order // self.order

    @cached_property
    def generators(self) -> list[Permutation]:
        an = analysis(self.parent)
        if an.element_level:
            tab = an.group.table()
            mask = an.element_mask(self.bits)
            return [tab.perm(i) for i in tab.generators_for_mask(mask)]
        return an.product_generators(self.bits)

    def __repr__(self):
        return f"NormalSubgroup(order={self.order}, classes={list(self.class_indices)})"


@dataclass(eq=False)
class QuotientWitness:
    """Evidence for G ->> H: a kernel and a certified identification G/N = H."""

    kernel: NormalSubgroup
    target: str
    quotient: PermGroup | None = None
    iso_images: list = field(default_factory=list)
    method: str = "isomorphism"

    @property
    def index(self) -> int:
        return self.kernel.index

    def to_json(self):
        out = {
            "kernel_generators": [list(p.images) for p in self.kernel.generators],
            "kernel_order": self.kernel.order,
            "index": self.index,
            "target": self.target,
            "method": self.method,
            "iso_images": [[list(a.images), list(b.images)] for a, b in self.iso_images],
        }
        return out


class Analysis:
    """Cached lattice and quotient data for one NamedGroup."""

    def __init__(self, g: NamedGroup):
        self.g = g
        self.table: CharacterTable = character_table(g)
        self.k = len(self.table.info)
        self.sizes = [int(s) for s in self.table.info.sizes]
        self.order = self.table.order
        self._order_cache = {}
        self._quotients = {}

    # lattice -----------------------------------------------------------
    def order_of(self, bits: int) -> int:
        o = self._order_cache.get(bits)
        if o is None:
            o = sum(self.sizes[i] for i in _indices(bits))
            self._order_cache[bits] = o
        return o

    @cached_property
    def kernel_bits(self) -> list[int]:
        km = self.table.kernel_masks()
        return [_bits_of(np.nonzero(row)[0]) for row in km]

    @cached_property
    def full(self) -> int:
        return (1 << self.k) - 1

    def normal_bits_from_kernels(self) -> list[int]:
        gens = sorted(set(self.kernel_bits))
        found = set(gens) | {self.full}
        frontier = list(found)
        while frontier:
            nxt = []
            for x in frontier:
                for y in gens:
                    z = x & y
                    if z not in found:
                        found.add(z)
                        nxt.append(z)
            frontier = nxt
        return self._sorted(found)

    def _sorted(self, bitsets):
        return sorted(bitsets, key=lambda b: (self.order_of(b), _indices(b)))

    @cached_property
    def product_support(self):
        """support[j][k] = bits of classes met by C_j * C_k."""
        g = self.g
        if g.factors:
            subs = [analysis(f).product_support for f in g.factors]
            ks = [analysis(f).k for f in g.factors]
            sup = subs[0]
            kk = ks[0]
            for s, kb in zip(subs[1:], ks[1:]):
                sup = _compose_support(sup, kk, s, kb)
                kk *= kb
            return sup
        consts = self.g.group.conjugacy_classes().structure_constants
        return [[_bits_of(np.nonzero(consts[j, k])[0]) for k in range(self.k)] for j in range(self.k)]

    def _close(self, bits: int) -> int:
        sup = self.product_support
        bits |= 1
        while True:
            idx = _indices(bits)
            new = bits
            for j in idx:
                row = sup[j]
                for k in idx:
                    new |= row[k]
            if new == bits:
                return bits
            bits = new

    def normal_bits_from_closures(self) -> list[int]:
        """Join-closure of the normal closures of single classes."""
        singles = {self._close(1 << l) for l in range(self.k)}
        found = set(singles)
        frontier = list(found)
        while frontier:
            nxt = []
            for x in frontier:
                for y in singles:
                    z = self._close(x | y)
                    if z not in found:
                        found.add(z)
                        nxt.append(z)
            frontier = nxt
        return self._sorted(found)

    @cached_property
    def normal_bits(self) -> list[int]:
        return self.normal_bits_from_kernels()

    @cached_property
    def minimal_normal_bits(self) -> list[int]:
        nontriv = [b for b in self.normal_bits if b != 1]
        return [n for n in nontriv if not any(m != n and (m & ~n) == 0 for m in nontriv)]

    def join(self, a: int, b: int) -> int:
        u = a | b
        return next(n for n in self.normal_bits if (u & ~n) == 0)

    # quotient data ----------------------------------------------------------
    def quotient_rows(self, bits: int) -> np.ndarray:
        return np.array([(kb & bits) == bits for kb in self.kernel_bits])

    def mh_quotient(self, bits: int) -> int:
        rows = self.quotient_rows(bits)
        t = self.table
        return int(np.sum(rows & (t.degrees == 2) & (t.fs_indicators == -1)))

    @cached_property
    def derived_series_bits(self) -> list[int]:
        g = self.g
        if g.factors:
            parts = [analysis(f).derived_series_bits for f in g.factors]
            depth = max(len(p) for p in parts)
            ks = [analysis(f).k for f in g.factors]
            out = []
            for i in range(depth):
                terms = [p[min(i, len(p) - 1)] for p in parts]
                out.append(_product_bits(terms, ks))
            return out
        grp = g.group
        cls = grp.conjugacy_classes()
        out = [self.full]
        cur = grp
        while True:
            d = cur.derived_subgroup()
            bits = _bits_of(sorted({cls.class_index(p) for p in d.generators}))
            bits = self._close(bits) if self.k <= 400 else self._closure_by_lattice(bits)
            if bits == out[-1]:
                return out
            out.append(bits)
            cur = d

    def _closure_by_lattice(self, bits):
        return next(n for n in self.normal_bits if (bits & ~n) == 0)

    def fingerprint(self, bits: int = 1) -> IsoFingerprint:
        """Fingerprint of G/N computed from the character table."""
        t = self.table
        rows = np.nonzero(self.quotient_rows(bits))[0]
        n_order = self.order_of(bits)
        q_order = self.order // n_order
        keys = t.value_keys()[rows]
        groups = {}
        for l in range(self.k):
            groups.setdefault(keys[:, l, :].tobytes(), []).append(l)
        pm = t.info.power_map
        q_sizes, hist = [], Counter()
        for members in groups.values():
            size = sum(self.sizes[l] for l in members) // n_order
            l = members[0]
            o = next(s for s in range(1, len(pm[l]) + 1) if (bits >> int(pm[l][s % len(pm[l])])) & 1)
            q_sizes.append(size)
            hist[o] += size
        linear = [r for r in rows if t.degrees[r] == 1]
        sc = t.scalar_exponents()
        e = t.exponent
        lin_orders = [math.lcm(*(e // math.gcd(e, int(s)) for s in sc[r])) for r in linear]
        series = tuple(sorted({self.order_of(self.join(d, bits)) // n_order
                               for d in self.derived_series_bits}, reverse=True))
        return IsoFingerprint(
            q_order, abelian_invariants_from_orders(lin_orders), tuple(sorted(hist.items())),
            tuple(sorted(q_sizes)), sum(1 for s in q_sizes if s == 1), series,
            tuple(sorted(int(d) for d in t.degrees[rows])))

    # element level ------------------------------------------------------------
    @cached_property
    def element_level(self) -> bool:
        return self.order <= get_config().order_cap

    @property
    def group(self) -> PermGroup:
        return self.g.group

    def class_rep(self, l: int) -> np.ndarray:
        if not self.g.factors:
            cc = self.group.conjugacy_classes()
            return cc.table.elems[cc.rep_index[l]]
        parts = []
        for f in reversed(self.g.factors):
            kf = analysis(f).k
            l, r = divmod(l, kf)
            parts.append(analysis(f).class_rep(r))
        return np.concatenate([p + off for p, off in zip(parts[::-1], np.cumsum([0] + [len(p) for p in parts[::-1]])[:-1])])

    @cached_property
    def element_class_map(self) -> np.ndarray:
        """Element-table class index of each character-table class."""
        cc = self.group.conjugacy_classes()
        if not self.g.factors:
            return np.arange(self.k)
        reps = np.array([self.class_rep(l) for l in range(self.k)])
        return cc.class_of[cc.table.index(reps)]

    def element_mask(self, bits: int) -> np.ndarray:
        cc = self.group.conjugacy_classes()
        wanted = self.element_class_map[_indices(bits)]
        return np.isin(cc.class_of, wanted)

    def product_generators(self, bits: int) -> list[Permutation]:
        split = self.split_product(bits)
        if split is None:
            raise ResourceExceeded("generators of a non-product normal subgroup above the enumeration cap")
        degree = self.group.degree
        out, offset = [], 0
        for f, fb in zip(self.g.factors, split):
            sub = NormalSubgroup(f, tuple(_indices(fb)), analysis(f).order_of(fb))
            for p in sub.generators:
                img = np.arange(degree)
                img[offset:offset + len(p.images)] = np.array(p.images) + offset
                out.append(Permutation(img))
            offset += f.group.degree
        return out

    def split_product(self, bits: int):
        """Factor class sets if N is a product of factor normal subgroups."""
        if not self.g.factors:
            return None
        ks = [analysis(f).k for f in self.g.factors]
        coords = [set() for _ in ks]
        idx = _indices(bits)
        for l in idx:
            for pos in range(len(ks) - 1, -1, -1):
                l, r = divmod(l, ks[pos])
                coords[pos].add(r)
        if math.prod(len(c) for c in coords) != len(idx):
            return None
        return [_bits_of(c) for c in coords]

    def normal_subgroup(self, bits: int) -> NormalSubgroup:
        return NormalSubgroup(self.g, tuple(_indices(bits)), self.order_of(bits))


def _compose_support(sa, ka, sb, kb):
    out = []
    for i in range(ka):
        for j in range(kb):
            row = []
            for i2 in range(ka):
                ba = _indices(sa[i][i2])
                for j2 in range(kb):
                    bb = _indices(sb[j][j2])
                    row.append(_bits_of(x * kb + y for x in ba for y in bb))
            out.append(row)
    return out


def _product_bits(parts, ks):
    idx = [0]
    for bits, k in zip(parts, ks):
        idx = [i * k + j for i in idx for j in _indices(bits)]
    return _bits_of(idx)


def analysis(g: NamedGroup) -> Analysis:
    an = g.__dict__.get("_analysis")
    if an is None:
        an = Analysis(g)
        g.__dict__["_analysis"] = an
    return an


def _named(g) -> NamedGroup:
    if isinstance(g, NamedGroup):
        return g
    if isinstance(g, PermGroup):
        cached = g.__dict__.get("_named")
        if cached is None:
            cached = NamedGroup("G", g, provenance="external")
            g.__dict__["_named"] = cached
        return cached
    return build(g)


def normal_subgroups(g, method: str = "auto") -> list[NormalSubgroup]:
    """All normal subgroups, sorted by (order, class index set).

    ``method`` is "closures" (join-closure of normal closures of classes),
    "kernels" (intersections of character kernels) or "auto", which uses
    closures for small class counts.
    """
    an = analysis(_named(g))
    if method == "auto":
        method = "closures" if an.k <= 60 else "kernels"
    bits = an.normal_bits_from_closures() if method == "closures" else an.normal_bits
    return [an.normal_subgroup(b) for b in bits]


# -- isomorphism ------------------------------------------------------------------


@dataclass
class IsoResult:
    isomorphic: bool
    images: list = field(default_factory=list)  # (generator of a, image in b)
    reason: str = ""

    def __bool__(self):
        return self.isomorphic


def is_isomorphic(a: PermGroup, b: PermGroup, budget: int | None = None) -> IsoResult:
    """Fingerprint filter, then a certified backtracking search."""
    if a.order() != b.order():
        return IsoResult(False, reason="orders differ")
    fa, fb = perm_fingerprint(a), perm_fingerprint(b)
    if fa != fb:
        return IsoResult(False, reason="fingerprints differ")
    budget = get_config().backtrack_budget if budget is None else budget
    ta, tb = a.table(), b.table()
    if ta.size == 1:
        return IsoResult(True, [])
    gens = _two_generators(ta) or ta.generators_for_mask(np.ones(ta.size, dtype=bool))
    oa, ob = ta.element_orders(), tb.element_orders()
    sa = ta.classes.sizes[ta.classes.class_of]
    sb = tb.classes.sizes[tb.classes.class_of]
    cands = []
    for i, x in enumerate(gens):
        c = np.nonzero((ob == oa[x]) & (sb == sa[x]))[0]
        if i == 0:
            c = np.intersect1d(c, tb.classes.rep_index)
        cands.append(c)
    levels = _bfs_levels(ta, gens)
    maps_a = [ta.right_map(x) for x in gens]
    pair_orders = {(i, j): oa[ta.mul(gens[i], gens[j])[0]] for i in range(len(gens)) for j in range(i)}
    nodes = 0
    chosen = []

    def consistent(img):
        phi = np.full(ta.size, -1, dtype=np.int64)
        phi[0] = 0
        rmaps = [tb.right_map(int(y)) for y in img]
        for nodes_, parents, via in levels:
            for i in range(len(gens)):
                sel = via == i
                if sel.any():
                    phi[nodes_[sel]] = rmaps[i][phi[parents[sel]]]
        for i in range(len(gens)):
            if not np.array_equal(phi[maps_a[i]], rmaps[i][phi]):
                return False
        return len(np.unique(phi)) == ta.size

    def search(i):
        nonlocal nodes
        if i == len(gens):
            return consistent(chosen)
        live = cands[i]
        for j in range(i):
            live = live[ob[tb.right_map(chosen[j])[live]] == pair_orders[(i, j)]]
        for y in live:
            nodes += 1
            if nodes > budget:
                raise ResourceExceeded(f"isomorphism search exceeded {budget} nodes")
            chosen.append(int(y))
            if search(i + 1):
                return True
            chosen.pop()
        return False

    if search(0):
        return IsoResult(True, [(ta.perm(x), tb.perm(y)) for x, y in zip(gens, chosen)])
    return IsoResult(False, reason="no generator images extend to an isomorphism")


def _two_generators(tab, tries: int = 400):
    """A generating pair, searched deterministically among high-order elements."""
    orders = tab.element_orders()
    reps = sorted(tab.classes.rep_index.tolist(), key=lambda r: (-orders[r], r))
    ranked = np.lexsort((np.arange(tab.size), -orders))
    step = max(1, tab.size // tries)
    count = 0
    for x in reps[:3]:
        for y in ranked[::step]:
            count += 1
            if count > tries:
                return None
            if tab.subgroup_mask([x, int(y)]).all():
                return [int(x), int(y)]
    return None


def _bfs_levels(tab, gens):
    maps = [tab.right_map(x) for x in gens]
    seen = np.zeros(tab.size, dtype=bool)
    seen[0] = True
    frontier = np.array([0])
    levels = []
    while frontier.size:
        nodes_, parents, via = [], [], []
        for i, m in enumerate(maps):
            tgt = m[frontier]
            new = ~seen[tgt]
            tgt, src = tgt[new], frontier[new]
            tgt, first = np.unique(tgt, return_index=True)
            seen[tgt] = True
            nodes_.append(tgt)
            parents.append(src[first])
            via.append(np.full(tgt.size, i))
        frontier = np.concatenate(nodes_)
        if frontier.size:
            levels.append((frontier, np.concatenate(parents), np.concatenate(via)))
    return levels


def verify_iso_images(a: PermGroup, b: PermGroup, images) -> bool:
    """Check that generator images define an isomorphism a -> b."""
    ta, tb = a.table(), b.table()
    gens = [ta.index_of(x) for x, _ in images]
    imgs = [tb.index_of(y) for _, y in images]
    if ta.size == 1:
        return tb.size == 1
    if ta.subgroup_mask(gens).sum() != ta.size:
        return False
    levels = _bfs_levels(ta, gens)
    phi = np.full(ta.size, -1, dtype=np.int64)
    phi[0] = 0
    rmaps = [tb.right_map(y) for y in imgs]
    for nodes_, parents, via in levels:
        for i in range(len(gens)):
            sel = via == i
            phi[nodes_[sel]] = rmaps[i][phi[parents[sel]]]
    ok = all(np.array_equal(phi[ta.right_map(x)], rm[phi]) for x, rm in zip(gens, rmaps))
    return ok and len(np.unique(phi)) == ta.size == tb.size


# -- quotient detection ----------------------------------------------------------------


def _recognise(target: NamedGroup, fp: IsoFingerprint):
    """Certify G/N = target from the fingerprint alone, when a theorem allows it."""
    spec = target.spec
    while spec is not None and spec.kind == "catalog_ref":
        spec = spec.params[1]
    hist = dict(fp.order_histogram)
    n = fp.order
    if n == 1:
        return "trivial"
    if spec is not None and spec.kind == "cyclic":
        return "cyclic recogniser" if hist.get(n, 0) > 0 else None
    if spec is not None and spec.kind == "quaternion" and is_quaternion_histogram(hist, n):
        return "quaternion recogniser"
    return None


def is_quaternion_histogram(hist: dict, n: int) -> bool:
    """Element orders of a group of order n force it to be Q_n.

    With a unique involution z, a cyclic subgroup A of index 2 and every
    element outside A of order 4, any y outside A has y^2 = z and inverts A,
    which is the quaternion presentation. The count of order-4 elements
    detects the last condition.
    """
    if n < 8 or n % 4 or hist.get(2, 0) != 1 or hist.get(n // 2, 0) == 0 or hist.get(n, 0):
        return False
    inside = 2 if (n // 2) % 4 == 0 else 0
    return hist.get(4, 0) == n // 2 + inside


def quaternion_quotients(g, min_n: int = 2) -> list[tuple[int, QuotientWitness]]:
    """(order 4n, witness) for every quotient Q_4n of G with n >= min_n."""
    an = analysis(_named(g))
    out = []
    for bits in an.normal_bits:
        d = an.order // an.order_of(bits)
        if d % 4 or d // 4 < min_n or an.mh_quotient(bits) != d // 8:
            continue
        if is_quaternion_histogram(dict(an.fingerprint(bits).order_histogram), d):
            out.append((d, QuotientWitness(an.normal_subgroup(bits), f"Q{d}", None, [],
                                           "quaternion recogniser")))
    return out


def _certify(g: NamedGroup, an: Analysis, bits: int, target: NamedGroup):
    """Return a QuotientWitness for G/N = target, False if refuted, None if unknown."""
    kernel = an.normal_subgroup(bits)
    fp = an.fingerprint(bits)
    how = _recognise(target, fp)
    if how:
        return QuotientWitness(kernel, target.name, None, [], how)
    split = an.split_product(bits) if g.factors else None
    if split is not None:
        pieces = []
        for f, fb in zip(g.factors, split):
            fa = analysis(f)
            if fb != fa.full:
                pieces.append((f, fa, fb))
        targets = [h for h in leaves(target) if h.order() > 1]
        if _match_pieces(pieces, targets):
            return QuotientWitness(kernel, target.name, None, [], "factorwise")
    if an.element_level:
        quotient, _ = an.group.table().quotient(an.element_mask(bits))
        res = is_isomorphic(quotient, target.group)
        if res:
            return QuotientWitness(kernel, target.name, quotient, res.images, "isomorphism")
        return False
    return None


def _match_pieces(pieces, targets):
    if len(pieces) != len(targets):
        return False
    if not pieces:
        return True
    f, fa, fb = pieces[0]
    for t in range(len(targets)):
        h = targets[t]
        if fa.order // fa.order_of(fb) != h.order():
            continue
        if _quotient_is(f, fa, fb, h) and _match_pieces(pieces[1:], targets[:t] + targets[t + 1:]):
            return True
    return False


def _quotient_is(f, fa, fb, h):
    if fa.fingerprint(fb) != analysis(h).fingerprint():
        return False
    w = _certify(f, fa, fb, h)
    return bool(w)


def quotient_witnesses(g, h, first_only: bool = False) -> list[QuotientWitness]:
    """Witnesses G/N = H for every normal N (or the first one)."""
    g, h = _named(g), _named(h)
    an = analysis(g)
    key = (id(h), first_only)
    if key in an._quotients:
        return an._quotients[key]
    full_key = (id(h), False)
    if first_only and full_key in an._quotients:
        return an._quotients[full_key][:1]
    out = []
    order_h = h.order()
    if an.order % order_h == 0:
        han = analysis(h)
        target_fp = han.fingerprint()
        target_mh = han.table.m_quaternionic()
        want = an.order // order_h
        for bits in an.normal_bits:
            if an.order_of(bits) != want or an.mh_quotient(bits) != target_mh:
                continue
            if an.fingerprint(bits) != target_fp:
                continue
            w = _certify(g, an, bits, h)
            if w is None:
                raise ResourceExceeded(
                    f"cannot certify a quotient of {g.name} against {h.name} within the caps")
            if w:
                out.append(w)
                if first_only:
                    break
    an._quotients[key] = out
    return out


def quotient_kernel_bits(g, h) -> list[int]:
    return [w.kernel.bits for w in quotient_witnesses(g, h)]


def has_quotient(g, h) -> QuotientWitness | None:
    """First witness G ->> H in the deterministic normal-subgroup order."""
    ws = quotient_witnesses(g, h, first_only=True)
    return ws[0] if ws else None


def verify_witness(g, w: QuotientWitness, target=None) -> bool:
    """Re-check a witness: normality, index and the identification."""
    g = _named(g)
    an = analysis(g)
    bits = w.kernel.bits
    if bits not in set(an.normal_bits):
        return False
    if an.element_level:
        tab = an.group.table()
        mask = an.element_mask(bits)
        if int(mask.sum()) != w.kernel.order:
            return False
        for cm in tab.conj_maps:
            if not np.all(mask[cm[mask]]):
                return False
        if w.quotient is not None:
            if w.quotient.order() != w.index:
                return False
            if target is not None and not verify_iso_images(w.quotient, _named(target).group, w.iso_images):
                return False
    return True


# -- binary polyhedral quotients ----------------------------------------------------------


BINARY_POLYHEDRAL_NAMES = ("BT", "BO", "BI")


def binary_polyhedral_quotients(g):
    """All binary polyhedral quotients (image-set version) and the maximal ones."""
    from .zoo import BI, BO, BT, quaternion

    g = _named(g)
    an = analysis(g)
    found: dict[str, tuple[NamedGroup, QuotientWitness]] = {}
    for bits in an.normal_bits:
        d = an.order // an.order_of(bits)
        cands = []
        if d >= 8 and d % 4 == 0:
            cands.append(build(quaternion(d)))
        if d == 24:
            cands.append(build(BT))
        if d == 48:
            cands.append(build(BO))
        if d == 120:
            cands.append(build(BI))
        for h in cands:
            if h.name in found:
                continue
            han = analysis(h)
            if an.mh_quotient(bits) != han.table.m_quaternionic():
                continue
            if an.fingerprint(bits) != han.fingerprint():
                continue
            w = _certify(g, an, bits, h)
            if w is None:
                raise ResourceExceeded(f"cannot certify a binary polyhedral quotient of {g.name}")
            if w:
                found[h.name] = (h, w)
    items = sorted(found.items(), key=lambda kv: (kv[1][0].order(), kv[0]))
    all_q = [(name, w) for name, (h, w) in items]
    maximal = []
    for name, (h, w) in items:
        if not any(other != name and has_quotient(h2, h) for other, (h2, _) in items):
            maximal.append((name, w))
    return all_q, maximal


# -- Eichler predicates ------------------------------------------------------------------------


def m_h(g) -> int:
    return analysis(_named(g)).table.m_quaternionic()


def is_eichler(g) -> bool:
    return m_h(g) == 0


def is_eichler_quotient(g, h) -> bool:
    return has_quotient(g, h) is not None and m_h(g) == m_h(h)


def is_eichler_simple(g) -> bool:
    """No proper quotient keeps m_H; minimal normal subgroups decide this."""
    an = analysis(_named(g))
    target = an.table.m_quaternionic()
    return all(an.mh_quotient(b) != target for b in an.minimal_normal_bits)


def is_S_eichler(g, s):
    """First H in s that is an Eichler quotient of g, with its witness."""
    g = _named(g)
    mg = m_h(g)
    for h in s:
        h = _named(h)
        if m_h(h) != mg:
            continue
        w = has_quotient(g, h)
        if w is not None:
            return h, w
    return None


# -- periodic cohomology --------------------------------------------------------------------------


def sylow_shape(g, p: int) -> str:
    """'trivial', 'cyclic', 'quaternion' or 'other' for a Sylow p-subgroup."""
    g = _named(g)
    if g.factors:
        shapes = [sylow_shape(f, p) for f in g.factors]
        nontriv = [s for s in shapes if s != "trivial"]
        if not nontriv:
            return "trivial"
        return nontriv[0] if len(nontriv) == 1 else "other"
    n = g.order()
    if n % p:
        return "trivial"
    syl = g.group.sylow_subgroup(p)
    if syl.is_cyclic():
        return "cyclic"
    if syl.is_generalized_quaternion():
        return "quaternion"
    return "other"


def has_periodic_cohomology(g) -> bool:
    """Every Sylow subgroup cyclic or generalised quaternion (p = 2 only)."""
    g = _named(g)
    for p in prime_factors(g.order()):
        shape = sylow_shape(g, p)
        if shape == "other" or (shape == "quaternion" and p != 2):
            return False
    return True
