"""Permutation groups: Schreier-Sims, element tables, classes, Sylow subgroups.

Points are ``0..degree-1``.  A permutation is stored by its image list and
products are read left to right: ``(p * q)[i] == q[p[i]]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, reduce

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .config import get_config
from .errors import ElementNotInGroup, InvalidSpec, ResourceExceeded


class Permutation:
    """Immutable permutation given by its images."""

    __slots__ = ("images", "_hash")

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise InvalidSpec(f"not a permutation: {images[:20]}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, degree):
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles, degree):
        img = list(range(degree))
        for cyc in cycles:
            cyc = list(cyc)
            if len(set(cyc)) != len(cyc):
                raise InvalidSpec(f"repeated point in cycle {cyc}")
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if not 0 <= a < degree:
                    raise InvalidSpec(f"point {a} outside degree {degree}")
                img[a] = b
        return cls(img)

    @property
    def degree(self):
        return len(self.images)

    @property
    def array(self):
        return np.array(self.images, dtype=np.int64)

    def __mul__(self, other):
        o = other.images
        return Permutation(o[i] for i in self.images)

    def inverse(self):
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def cycles(self):
        seen, out = set(), []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc, j = [i], self.images[i]
            seen.add(i)
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self):
        return reduce(math.lcm, (len(c) for c in self.cycles()), 1)

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.images))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __hash__(self):
        return self._hash

    def __repr__(self):
        cyc = self.cycles()
        body = "".join("(" + ",".join(map(str, c)) + ")" for c in cyc) or "()"
        return f"Permutation[{self.degree}]{body}"


def _as_array(p, degree=None):
    if isinstance(p, Permutation):
        arr = np.array(p.images, dtype=np.int64)
    else:
        arr = np.asarray(p, dtype=np.int64)
    if degree is not None and arr.shape != (degree,):
        raise InvalidSpec(f"permutation of degree {arr.shape[0]} in group of degree {degree}")
    return arr


def _lowest_moved(arr):
    moved = np.nonzero(arr != np.arange(arr.shape[0]))[0]
    return int(moved[0]) if moved.size else None


class _Level:
    __slots__ = ("point", "gens", "trans", "inv")

    def __init__(self, point):
        self.point = point
        self.gens = []
        self.trans = {}
        self.inv = {}

    def rebuild(self, degree):
        ident = np.arange(degree)
        self.trans = {self.point: ident}
        self.inv = {}
        queue = [self.point]
        for beta in queue:
            u = self.trans[beta]
            for s in self.gens:
                gamma = int(s[beta])
                if gamma not in self.trans:
                    self.trans[gamma] = s[u]
                    queue.append(gamma)

    def inverse(self, beta):
        v = self.inv.get(beta)
        if v is None:
            v = np.argsort(self.trans[beta])
            self.inv[beta] = v
        return v


class BSGS:
    """Base and strong generating set from deterministic Schreier-Sims."""

    def __init__(self, gens, degree, known_order=None):
        self.degree = degree
        self.levels: list[_Level] = []
        gens = [g for g in gens if _lowest_moved(g) is not None]
        for g in gens:
            if all(g[lv.point] == lv.point for lv in self.levels):
                self.levels.append(_Level(_lowest_moved(g)))
        for i, lv in enumerate(self.levels):
            lv.gens = [g for g in gens if all(g[m.point] == m.point for m in self.levels[:i])]
            lv.rebuild(degree)
        # a known order certifies the stabiliser chain once the orbits reach it
        if known_order is None or self.order() != known_order:
            self._complete()

    @property
    def base(self):
        return [lv.point for lv in self.levels]

    def sift(self, g, start=0):
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            beta = int(g[lv.point])
            if beta not in lv.trans:
                return g, i
            g = lv.inverse(beta)[g]
        return g, len(self.levels)

    def _complete(self):
        degree = self.degree
        ident = np.arange(degree)
        i = len(self.levels) - 1
        while i >= 0:
            lv = self.levels[i]
            restart = False
            for beta in list(lv.trans):
                u = lv.trans[beta]
                for s in lv.gens:
                    gamma = int(s[beta])
                    h = lv.inverse(gamma)[s[u]]
                    h, j = self.sift(h, i + 1)
                    if j < len(self.levels) or not np.array_equal(h, ident):
                        if j == len(self.levels):
                            self.levels.append(_Level(_lowest_moved(h)))
                        for m in range(i + 1, j + 1):
                            self.levels[m].gens.append(h)
                            self.levels[m].rebuild(degree)
                        i = j
                        restart = True
                        break
                if restart:
                    break
            if not restart:
                i -= 1

    def order(self):
        return math.prod(len(lv.trans) for lv in self.levels)

    def contains(self, g):
        h, j = self.sift(np.asarray(g))
        return j == len(self.levels) and bool(np.all(h == np.arange(self.degree)))

    def transversals(self):
        return [np.array([lv.trans[b] for b in sorted(lv.trans)]) for lv in self.levels]


class PermGroup:
    """A permutation group given by generators; immutable once built."""

    def __init__(self, generators, degree=None, known_order=None):
        gens = list(generators)
        self._known_order = known_order
        if not gens:
            if degree is None:
                raise InvalidSpec("a group needs at least one generator or a degree")
            gens = [np.arange(degree)]
        if degree is None:
            first = gens[0]
            degree = first.degree if isinstance(first, Permutation) else len(first)
        self.degree = int(degree)
        self._gens = np.array([_as_array(g, self.degree) for g in gens], dtype=np.int64)
        for g in self._gens:
            if not np.array_equal(np.sort(g), np.arange(self.degree)):
                raise InvalidSpec("generator is not a permutation")

    @property
    def generators(self):
        return [Permutation(g) for g in self._gens]

    @property
    def gen_arrays(self):
        return self._gens

    @cached_property
    def bsgs(self):
        return BSGS(list(self._gens), self.degree, self._known_order)

    def order(self) -> int:
        return self.bsgs.order()

    def __len__(self):
        return self.order()

    def contains(self, g) -> bool:
        return self.bsgs.contains(_as_array(g, self.degree))

    def is_abelian(self) -> bool:
        gs = self._gens
        for a in range(len(gs)):
            for b in range(a + 1, len(gs)):
                if not np.array_equal(gs[b][gs[a]], gs[a][gs[b]]):
                    return False
        return True

    def table(self, cap=None) -> "ElementTable":
        """Explicit element table; refused above the raw-enumeration cap."""
        cap = get_config().order_cap if cap is None else cap
        cached = self.__dict__.get("_table")
        if cached is not None:
            return cached
        n = self.order()
        if n > cap:
            raise ResourceExceeded(f"group of order {n} exceeds element-enumeration cap {cap}")
        tab = ElementTable(self)
        self.__dict__["_table"] = tab
        return tab

    def elements(self):
        tab = self.table()
        return [Permutation(r) for r in tab.elems]

    def conjugacy_classes(self) -> "ConjugacyClasses":
        return self.table().classes

    def subgroup(self, generators) -> "PermGroup":
        gens = [_as_array(g, self.degree) for g in generators]
        for g in gens:
            if not self.contains(g):
                raise ElementNotInGroup(f"{Permutation(g)} is not in the group")
        return PermGroup(gens or [np.arange(self.degree)], self.degree)

    def normal_closure(self, seeds) -> "PermGroup":
        tab = self.table()
        idx = [tab.index_of(_as_array(s, self.degree)) for s in seeds]
        mask = tab.normal_closure_mask(idx)
        return tab.group_from_mask(mask)

    def center(self) -> "PermGroup":
        tab = self.table()
        cls = tab.classes
        central = [cls.rep_index[i] for i in range(len(cls)) if cls.sizes[i] == 1]
        return tab.group_from_mask(tab.subgroup_mask(central))

    def derived_subgroup(self) -> "PermGroup":
        tab = self.table()
        gs = self._gens
        comms = []
        for a in range(len(gs)):
            for b in range(a + 1, len(gs)):
                x, y = gs[a], gs[b]
                xi, yi = np.argsort(x), np.argsort(y)
                comms.append(tab.index_of(y[x[yi[xi]]]))
        return tab.group_from_mask(tab.normal_closure_mask(comms))

    def sylow_subgroup(self, p: int) -> "SylowSubgroup":
        tab = self.table()
        return SylowSubgroup(tab.group_from_mask(tab.sylow_mask(p)), p)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, ngens={len(self._gens)})"


def order(g: PermGroup) -> int:
    return g.order()


def conjugacy_classes(g: PermGroup) -> "ConjugacyClasses":
    return g.conjugacy_classes()


def normal_closure(g: PermGroup, seeds) -> PermGroup:
    return g.normal_closure(seeds)


def sylow_subgroup(g: PermGroup, p: int) -> "SylowSubgroup":
    return g.sylow_subgroup(p)


def _prime_part(n, p):
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def is_prime(n):
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class SylowSubgroup(PermGroup):
    """A Sylow p-subgroup, with the shape predicates callers need."""

    def __init__(self, group: PermGroup, p: int):
        super().__init__(list(group.gen_arrays), group.degree)
        self.p = p

    @cached_property
    def _order_hist(self):
        return self.table().element_orders()

    def is_cyclic(self) -> bool:
        n = self.order()
        return n == 1 or bool(np.any(self._order_hist == n))

    def is_generalized_quaternion(self) -> bool:
        if self.p != 2 or self.order() < 8:
            return False
        return int(np.sum(self._order_hist == 2)) == 1 and not self.is_cyclic()


def _key_dtype(degree):
    return np.uint8 if degree <= 256 else np.dtype(">u2") if degree <= 65536 else np.dtype(">u4")


class ElementTable:
    """All elements of a group, sorted lexicographically, with index maps.

    Index 0 is the identity.  ``gen_maps[k][i]`` is the index of
    ``element[i] * generator[k]``.
    """

    def __init__(self, group: PermGroup):
        self.group = group
        deg = group.degree
        elems = np.arange(deg)[None, :]
        for trans in reversed(group.bsgs.transversals()):
            # g = h * u  ->  u[h]
            elems = np.concatenate([u[elems] for u in trans], axis=0)
        self._dtype = _key_dtype(deg)
        elems = np.ascontiguousarray(elems.astype(self._dtype))
        keys = elems.view(np.dtype((np.void, elems.itemsize * deg))).ravel()
        order = np.argsort(keys, kind="stable")
        self.elems = elems[order].astype(np.int64)
        self._keys = keys[order]
        self.size = len(self.elems)
        self.gen_maps = np.array([self.index(g[self.elems]) for g in group.gen_arrays])

    def _keys_of(self, rows):
        rows = np.ascontiguousarray(np.asarray(rows).astype(self._dtype))
        if rows.ndim == 1:
            rows = rows[None, :]
        return rows.view(np.dtype((np.void, rows.itemsize * rows.shape[1]))).ravel()

    def index(self, rows, check=True):
        keys = self._keys_of(rows)
        pos = np.searchsorted(self._keys, keys)
        if check:
            ok = pos < self.size
            ok[ok] = self._keys[pos[ok]] == keys[ok]
            if not np.all(ok):
                raise ElementNotInGroup("element not in group")
        return pos

    def index_of(self, perm) -> int:
        return int(self.index(_as_array(perm, self.group.degree))[0])

    def perm(self, i) -> Permutation:
        return Permutation(self.elems[i])

    @cached_property
    def inv(self):
        return self.index(np.argsort(self.elems, axis=1))

    @cached_property
    def _tree(self):
        n = self.size
        parent = np.full(n, -1, dtype=np.int64)
        via = np.full(n, -1, dtype=np.int64)
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        frontier = np.array([0])
        while frontier.size:
            nxt = []
            for k, gm in enumerate(self.gen_maps):
                tgt = gm[frontier]
                new = ~seen[tgt]
                tgt_new, src = tgt[new], frontier[new]
                tgt_new, first = np.unique(tgt_new, return_index=True)
                seen[tgt_new] = True
                parent[tgt_new] = src[first]
                via[tgt_new] = k
                nxt.append(tgt_new)
            frontier = np.concatenate(nxt) if nxt else np.array([], dtype=np.int64)
        return parent, via

    def word(self, i):
        """Generator indices w with element[i] = g[w0] * g[w1] * ..."""
        parent, via = self._tree
        w = []
        while i != 0:
            w.append(int(via[i]))
            i = int(parent[i])
        return w[::-1]

    def right_map(self, i):
        cache = self.__dict__.setdefault("_rmaps", {})
        m = cache.get(i)
        if m is None:
            if len(cache) > 4096:
                cache.clear()
            m = np.arange(self.size)
            for k in self.word(int(i)):
                m = self.gen_maps[k][m]
            cache[i] = m
        return m

    def mul(self, a, b):
        """Index of element[a] * element[b], vectorised over arrays."""
        a = np.atleast_1d(a)
        b = np.atleast_1d(b)
        if b.size == 1:
            return self.right_map(int(b[0]))[a]
        rows = np.take_along_axis(self.elems[b], self.elems[a], axis=1)
        return self.index(rows, check=False)

    def power(self, a, k):
        """Vectorised k-th power of elements with indices ``a``."""
        a = np.atleast_1d(a)
        result = np.zeros_like(a)
        base = a.copy()
        while k:
            if k & 1:
                result = self.mul(result, base) if result.any() else base.copy()
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    @cached_property
    def conj_maps(self):
        inv = self.inv
        return [gm[inv[gm[inv]]] for gm in self.gen_maps]

    @cached_property
    def classes(self) -> "ConjugacyClasses":
        n = self.size
        src = np.concatenate([np.arange(n)] * len(self.conj_maps))
        dst = np.concatenate(self.conj_maps)
        graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
        _, labels = connected_components(graph, directed=True, connection="weak")
        return ConjugacyClasses.from_labels(self, labels)

    def element_orders(self):
        cls = self.classes
        return cls.orders[cls.class_of]

    def subgroup_mask(self, gens):
        """Boolean mask of the subgroup generated by elements ``gens``."""
        mask = np.zeros(self.size, dtype=bool)
        mask[0] = True
        gens = [int(g) for g in gens if int(g) != 0]
        if not gens:
            return mask
        maps = [self.right_map(g) for g in gens]
        frontier = np.array([0])
        while frontier.size:
            nxt = []
            for m in maps:
                tgt = np.unique(m[frontier])
                tgt = tgt[~mask[tgt]]
                mask[tgt] = True
                nxt.append(tgt)
            frontier = np.unique(np.concatenate(nxt))
        return mask

    def normal_closure_mask(self, seeds):
        gens = sorted({int(s) for s in seeds if int(s) != 0})
        mask = self.subgroup_mask(gens)
        while True:
            members = np.nonzero(mask)[0]
            missing = None
            for cm in self.conj_maps:
                img = cm[members]
                bad = img[~mask[img]]
                if bad.size:
                    missing = int(bad.min())
                    break
            if missing is None:
                return mask
            gens.append(missing)
            mask = self.subgroup_mask(gens)

    def generators_for_mask(self, mask):
        """A short generating list for the subgroup given by ``mask``."""
        target = int(mask.sum())
        members = np.nonzero(mask)[0]
        if target == 1:
            return []
        orders = self.element_orders()[members]
        ranked = members[np.lexsort((members, -orders))]
        gens, cur = [], np.zeros(self.size, dtype=bool)
        cur[0] = True
        for x in ranked:
            if cur[x]:
                continue
            gens.append(int(x))
            cur = self.subgroup_mask(gens)
            if cur.sum() == target:
                break
        return gens

    def group_from_mask(self, mask) -> PermGroup:
        gens = self.generators_for_mask(mask)
        if not gens:
            return PermGroup([np.arange(self.group.degree)], self.group.degree)
        return PermGroup([self.elems[g] for g in gens], self.group.degree)

    def coset_labels(self, mask):
        """Label each element by its coset of the normal subgroup ``mask``."""
        gens = self.generators_for_mask(mask)
        n = self.size
        if not gens:
            return np.arange(n), n
        src = np.concatenate([np.arange(n)] * len(gens))
        dst = np.concatenate([self.right_map(g) for g in gens])
        graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
        k, labels = connected_components(graph, directed=True, connection="weak")
        first = np.full(k, n, dtype=np.int64)
        np.minimum.at(first, labels, np.arange(n))
        relabel = np.empty(k, dtype=np.int64)
        relabel[np.argsort(first)] = np.arange(k)
        return relabel[labels], k

    def quotient(self, mask) -> tuple[PermGroup, np.ndarray]:
        """Coset action on G/N; returns the group and the element-to-coset map."""
        labels, k = self.coset_labels(mask)
        reps = np.zeros(k, dtype=np.int64)
        reps[labels[::-1]] = np.arange(self.size)[::-1]
        gens = [labels[gm[reps]] for gm in self.gen_maps]
        return PermGroup(gens, k), labels

    def sylow_mask(self, p):
        n = self.size
        target = _prime_part(n, p)
        orders = self.element_orders()
        pgens: list[int] = []
        mask = self.subgroup_mask([])
        everything = np.arange(n)
        while mask.sum() < target:
            normal = np.ones(n, dtype=bool)
            for s in pgens:
                # x^-1 s x for every x
                left = self.right_map(s)[self.inv]
                conj = self.mul(left, everything)
                normal &= mask[conj]
            p_elems = (orders > 1) & (target % np.maximum(orders, 1) == 0)
            cand = normal & ~mask & p_elems
            xp = self.power(everything, p)
            cand &= mask[xp]
            pick = int(np.nonzero(cand)[0][0])
            pgens.append(pick)
            mask = self.subgroup_mask(pgens)
        return mask


@dataclass
class ConjugacyClasses:
    """Conjugacy classes ordered by (element order, size, lex-min element)."""

    table: ElementTable
    rep_index: np.ndarray
    sizes: np.ndarray
    orders: np.ndarray
    class_of: np.ndarray

    @classmethod
    def from_labels(cls, table, labels):
        n = table.size
        k = int(labels.max()) + 1
        rep = np.full(k, n, dtype=np.int64)
        np.minimum.at(rep, labels, np.arange(n))
        sizes = np.bincount(labels, minlength=k)
        rows = table.elems[rep]
        orders = np.array([Permutation(r).order() for r in rows], dtype=np.int64)
        perm = np.lexsort((rep, sizes, orders))
        new = np.empty(k, dtype=np.int64)
        new[perm] = np.arange(k)
        return cls(table, rep[perm], sizes[perm].astype(np.int64), orders[perm], new[labels])

    def __len__(self):
        return len(self.rep_index)

    @property
    def representatives(self):
        return [self.table.perm(i) for i in self.rep_index]

    def class_index(self, perm) -> int:
        return int(self.class_of[self.table.index_of(perm)])

    def centralizer_orders(self):
        return self.table.size // self.sizes

    @cached_property
    def power_map(self):
        """``power_map[l][t]`` is the class of rep_l ** t for 0 <= t < order."""
        out = []
        for r, o in zip(self.rep_index, self.orders):
            row = self.table.elems[r]
            cur = np.arange(len(row))
            pw = []
            for _ in range(int(o)):
                pw.append(cur)
                cur = row[cur]
            idx = self.table.index(np.array(pw), check=False)
            out.append(self.class_of[idx])
        return out

    @cached_property
    def structure_constants(self):
        """c[j, k, l] = #{x in C_j : x^-1 z_l in C_k} for class reps z_l."""
        k = len(self)
        if k > get_config().class_cap:
            raise ResourceExceeded(f"{k} classes exceed class cap")
        tab = self.table
        c = np.zeros((k, k, k), dtype=np.int64)
        cls_x = self.class_of
        inv = tab.inv
        for l, z in enumerate(self.rep_index):
            y = self.class_of[tab.right_map(int(z))[inv]]
            c[:, :, l] = np.bincount(cls_x * k + y, minlength=k * k).reshape(k, k)
        return c
