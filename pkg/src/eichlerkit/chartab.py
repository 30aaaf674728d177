"""Exact character tables, Frobenius-Schur indicators and the count m_H(G).

Tables of groups with an element table are computed by Dixon-Schneider
over a prime field; tables of direct products are composed from the
factors' tables.  Character values are stored as eigenvalue
multiplicities: ``mult[i, l, a]`` is how often zeta_e**a occurs as an
eigenvalue of rho_i(g_l), where e is the group exponent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .cyclotomic import (Cyclotomic, primes_1_mod, reduction_bound, reduction_matrix,
                         root_of_unity, units)
from .errors import ResourceExceeded, ValidationError
from .perm import ConjugacyClasses, PermGroup

_MATERIALISE_LIMIT = 50_000_000


@dataclass
class ClassInfo:
    """Class-level data shared by direct and composed tables."""

    group_order: int
    sizes: np.ndarray
    orders: np.ndarray
    power_map: list
    conjugacy: ConjugacyClasses | None = None
    pairs: np.ndarray | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.sizes)

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*(int(o) for o in self.orders))

    def power_class(self, l, t):
        pm = self.power_map[l]
        return int(pm[t % len(pm)])

    @cached_property
    def inverse_class(self):
        return np.array([pm[-1] if len(pm) > 1 else l for l, pm in enumerate(self.power_map)])

    @cached_property
    def square_class(self):
        return np.array([pm[2 % len(pm)] for pm in self.power_map])

    @classmethod
    def from_conjugacy(cls, cc: ConjugacyClasses):
        return cls(cc.table.size, cc.sizes.copy(), cc.orders.copy(), cc.power_map, cc)

    @classmethod
    def product(cls, a: "ClassInfo", b: "ClassInfo"):
        ka, kb = len(a), len(b)
        ia, ib = np.divmod(np.arange(ka * kb), kb)
        orders = np.array([math.lcm(int(a.orders[i]), int(b.orders[j])) for i, j in zip(ia, ib)])
        pmaps = []
        for i, j, o in zip(ia, ib, orders):
            t = np.arange(o)
            pa, pb = a.power_map[i], b.power_map[j]
            pmaps.append(pa[t % len(pa)] * kb + pb[t % len(pb)])
        return cls(a.group_order * b.group_order, a.sizes[ia] * b.sizes[ib], orders, pmaps,
                   None, np.stack([ia, ib], axis=1))


class CharacterTable:
    """Irreducible characters of a finite group with exact values."""

    def __init__(self, info: ClassInfo, degrees, mult=None, factors=None, rows=None):
        self.info = info
        self.degrees = np.asarray(degrees, dtype=np.int64)
        self._mult = mult
        self.factors = factors
        self.rows = rows  # pairs of factor row indices for composed tables

    @property
    def classes(self):
        return self.info.conjugacy if self.info.conjugacy is not None else self.info

    @property
    def order(self) -> int:
        return self.info.group_order

    @property
    def exponent(self) -> int:
        return self.info.exponent

    def __len__(self):
        return len(self.degrees)

    # -- values -----------------------------------------------------------
    def row_multiplicities(self, i) -> np.ndarray:
        """(k, e) eigenvalue multiplicities of row i."""
        if self._mult is not None:
            return self._mult[i]
        a, b = self.factors
        ri, rj = self.rows[i]
        ma, mb = a.row_multiplicities(ri), b.row_multiplicities(rj)
        e = self.exponent
        sa, sb = e // a.exponent, e // b.exponent
        idx = (np.arange(a.exponent)[:, None] * sa + np.arange(b.exponent)[None, :] * sb) % e
        onehot = np.zeros((idx.size, e), dtype=np.int64)
        onehot[np.arange(idx.size), idx.ravel()] = 1
        prod = (ma[:, None, :, None] * mb[None, :, None, :]).reshape(len(ma) * len(mb), -1)
        return prod @ onehot

    @property
    def multiplicities(self) -> np.ndarray:
        if self._mult is None:
            n, k = len(self), len(self.info)
            if n * k * self.exponent > _MATERIALISE_LIMIT:
                raise ResourceExceeded("table too large to materialise explicitly")
            self._mult = np.stack([self.row_multiplicities(i) for i in range(n)])
        return self._mult

    def value(self, i, l) -> Cyclotomic:
        return Cyclotomic.from_exponents(self.row_multiplicities(i)[l], self.exponent)

    @property
    def characters(self):
        """Rows of Cyclotomic values (computed on demand)."""
        return [[self.value(i, l) for l in range(len(self.info))] for i in range(len(self))]

    def reduced_values(self) -> np.ndarray:
        """(n, k, phi(e)) integer power-basis coordinates of every value."""
        return self.multiplicities @ reduction_matrix(self.exponent)

    def evaluate(self, q: int, root: int) -> np.ndarray:
        """Values mod q under zeta_e -> root (root a primitive e-th root mod q)."""
        if self.factors is None:
            e = self.exponent
            pw = np.array([pow(root, a, q) for a in range(e)], dtype=np.int64)
            return (self._mult @ pw) % q
        a, b = self.factors
        e = self.exponent
        xa = a.evaluate(q, pow(root, e // a.exponent, q))
        xb = b.evaluate(q, pow(root, e // b.exponent, q))
        ra, rb = self.rows[:, 0], self.rows[:, 1]
        out = (xa[ra][:, :, None] * xb[rb][:, None, :]) % q
        return out.reshape(len(self), -1)

    def value_keys(self) -> np.ndarray:
        """(n, k, phi(e)) residues identifying every value exactly.

        A value is reduced at each primitive embedding modulo one prime
        q = 1 (mod e) with q > 2*max degree.  Two values with the same key
        differ by an algebraic integer whose norm is divisible by q**phi(e)
        yet bounded by (2*max degree)**phi(e), so they are equal.
        """
        cached = self.__dict__.get("_keys")
        if cached is None:
            e = self.exponent
            q = next(primes_1_mod(e, 2 * int(self.degrees.max()) + 1))
            w = root_of_unity(e, q)
            cached = np.stack([self.evaluate(q, pow(w, a, q)) for a in units(e)], axis=2).astype(np.int32)
            self.__dict__["_keys"] = cached
        return cached

    def scalar_exponents(self) -> np.ndarray:
        """a with rho_i(g_l) = zeta_e**a * I, or -1 when rho_i(g_l) is not scalar."""
        cached = self.__dict__.get("_scalar")
        if cached is not None:
            return cached
        if self.factors is None:
            hit = self._mult == self.degrees[:, None, None]
            out = np.where(hit.any(axis=2), hit.argmax(axis=2), -1)
        else:
            a, b = self.factors
            e = self.exponent
            sa = a.scalar_exponents()[self.rows[:, 0]]
            sb = b.scalar_exponents()[self.rows[:, 1]]
            both = (sa[:, :, None] >= 0) & (sb[:, None, :] >= 0)
            val = (sa[:, :, None] * (e // a.exponent) + sb[:, None, :] * (e // b.exponent)) % e
            out = np.where(both, val, -1).reshape(len(self), -1)
        self.__dict__["_scalar"] = out
        return out

    def kernel_masks(self) -> np.ndarray:
        """Boolean (n, k): class l lies in the kernel of character i."""
        return self.scalar_exponents() == 0

    # -- indicators -----------------------------------------------------------
    @cached_property
    def fs_indicators(self) -> np.ndarray:
        """nu(chi) = (1/|G|) sum_k |C_k| chi(g_k^2), summed exactly."""
        order, e = self.order, self.exponent
        q = next(primes_1_mod(e, 2 * order + 1))
        x = self.evaluate(q, root_of_unity(e, q))
        sizes = self.info.sizes % q
        total = (x[:, self.info.square_class] * sizes[None, :]) % q
        s = total.sum(axis=1) % q
        s = np.where(s > q // 2, s - q, s)
        if np.any(s % order):
            raise ValidationError("indicator sum not divisible by |G|")
        nu = s // order
        if np.any(np.abs(nu) > 1):
            raise ValidationError("Frobenius-Schur indicator outside {-1,0,1}")
        return nu.astype(np.int64)

    def is_real_row(self, i) -> bool:
        m = self.row_multiplicities(i)
        return bool(np.array_equal(m[self.info.inverse_class], m))

    def m_quaternionic(self) -> int:
        return int(np.sum((self.degrees == 2) & (self.fs_indicators == -1)))

    def to_json(self):
        return {
            "order": self.order,
            "exponent": self.exponent,
            "class_sizes": [int(s) for s in self.info.sizes],
            "class_orders": [int(o) for o in self.info.orders],
            "degrees": [int(d) for d in self.degrees],
            "fs_indicators": [int(v) for v in self.fs_indicators],
            "characters": [[v.to_json() for v in row] for row in self.characters],
        }

    def format_grid(self) -> str:
        k = len(self.info)
        cells = [[str(v) for v in row] for row in self.characters]
        head = ["class"] + [f"{int(o)}{chr(97 + l % 26)}" if k <= 26 else str(l) for l, o in enumerate(self.info.orders)] + ["nu"]
        body = [[f"X.{i + 1}"] + cells[i] + [str(int(self.fs_indicators[i]))] for i in range(len(self))]
        sizes = ["size"] + [str(int(s)) for s in self.info.sizes] + [""]
        widths = [max(len(r[c]) for r in [head, sizes] + body) for c in range(len(head))]
        fmt = lambda r: "  ".join(x.rjust(w) for x, w in zip(r, widths))
        return "\n".join(fmt(r) for r in [head, sizes] + body)


# -- modular linear algebra -------------------------------------------------
def _rref(m, p):
    m = m.copy() % p
    rows, cols = m.shape
    piv, r = [], 0
    for c in range(cols):
        nz = np.nonzero(m[r:, c])[0]
        if not nz.size:
            continue
        pr = r + nz[0]
        m[[r, pr]] = m[[pr, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        if others.size:
            m[others] = (m[others] - m[others, c][:, None] * m[r][None, :]) % p
        piv.append(c)
        r += 1
        if r == rows:
            break
    return m[:r], piv


def _nullspace(m, p):
    """Basis rows of {x : m @ x = 0} over F_p."""
    r, piv = _rref(m, p)
    n = m.shape[1]
    free = [c for c in range(n) if c not in piv]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, c in enumerate(piv):
            basis[t, c] = (-r[i, f]) % p
    return basis


def _charpoly(a, p):
    """Coefficients (lowest first) of det(xI - a) over F_p, Faddeev-LeVerrier."""
    d = a.shape[0]
    coeffs = [0] * d + [1]
    m = np.zeros_like(a)
    ident = np.eye(d, dtype=np.int64)
    for k in range(1, d + 1):
        m = (a @ m + coeffs[d - k + 1] * ident) % p
        tr = int(np.trace((a @ m) % p)) % p
        coeffs[d - k] = (-tr * pow(k, -1, p)) % p
    return coeffs


def _roots(coeffs, p):
    x = np.arange(p, dtype=np.int64)
    val = np.zeros(p, dtype=np.int64)
    for c in reversed(coeffs):
        val = (val * x + c) % p
    return np.nonzero(val == 0)[0]


def _split_spaces(consts, p):
    """Common eigenvectors of the class-multiplication matrices over F_p."""
    k = consts.shape[0]
    spaces = [np.eye(k, dtype=np.int64)] if k > 1 else []
    done = [] if k > 1 else [np.eye(1, dtype=np.int64)]
    for j in range(1, k):
        if not spaces:
            break
        a = consts[j] % p
        nxt = []
        for basis in spaces:
            r, piv = _rref(basis, p)
            restricted = (a @ r.T % p)[piv, :]
            d = len(piv)
            pieces = []
            for lam in _roots(_charpoly(restricted, p), p):
                ns = _nullspace((restricted - lam * np.eye(d, dtype=np.int64)) % p, p)
                pieces.append((ns @ r) % p)
            if sum(len(x) for x in pieces) != d:
                raise ValidationError("class matrix not diagonalisable mod p", d, sum(len(x) for x in pieces))
            for piece in pieces:
                (done if len(piece) == 1 else nxt).append(piece)
        spaces = nxt
    if spaces:
        raise ValidationError("could not separate all characters")
    return [v[0] for v in done]


def dixon_table(cc: ConjugacyClasses) -> CharacterTable:
    """Dixon-Schneider table from element-level conjugacy classes."""
    info = ClassInfo.from_conjugacy(cc)
    order, k, e = info.group_order, len(info), info.exponent
    p = next(primes_1_mod(e, max(2 * math.isqrt(order) + 2, k + 1)))
    consts = cc.structure_constants % p
    vecs = _split_spaces(consts, p)
    sizes = info.sizes
    inv_sizes = np.array([pow(int(s), -1, p) for s in sizes], dtype=np.int64)
    inv_cls = info.inverse_class
    w = root_of_unity(e, p)
    chis, degrees = [], []
    for v in vecs:
        v = (v * pow(int(v[0]), -1, p)) % p
        s = int(((v * v[inv_cls]) % p * inv_sizes % p).sum() % p)
        d2 = (order * pow(s, -1, p)) % p
        d = next((d for d in range(1, math.isqrt(order) + 1) if d * d % p == d2), None)
        if d is None:
            raise ValidationError("no integer degree matches the class-algebra eigenvector")
        degrees.append(d)
        chis.append((v * d % p) * inv_sizes % p)
    chis = np.array(chis, dtype=np.int64)
    degrees = np.array(degrees, dtype=np.int64)
    n = len(chis)
    mult = np.zeros((n, k, e), dtype=np.int64)
    for l in range(k):
        o = int(info.orders[l])
        pm = info.power_map[l]
        step = e // o
        t = np.arange(o)
        dft = np.array([[pow(w, int((-step * b * tt) % e), p) for b in range(o)] for tt in range(o)], dtype=np.int64)
        m = (chis[:, pm] @ dft) % p * pow(o, -1, p) % p
        if np.any(m > degrees[:, None]) or np.any(m.sum(axis=1) != degrees):
            raise ValidationError(f"value lift failed on class {l}")
        mult[:, l, t * step] = m
    tab = CharacterTable(info, degrees, mult)
    return _sorted(tab)


def _sorted(tab: CharacterTable) -> CharacterTable:
    red = tab.reduced_values().reshape(len(tab), -1)
    keys = [-red[:, c] for c in range(red.shape[1] - 1, -1, -1)] + [tab.degrees]
    perm = np.lexsort(keys)
    return CharacterTable(tab.info, tab.degrees[perm], tab._mult[perm])


def product_table(a: CharacterTable, b: CharacterTable) -> CharacterTable:
    """Table of A x B composed from the factors' tables.

    Classes are pairs (i, j) numbered i*len(B) + j; rows are pairs of
    factor rows sorted by degree, then by factor row indices.
    """
    info = ClassInfo.product(a.info, b.info)
    na, nb = len(a), len(b)
    ra, rb = np.divmod(np.arange(na * nb), nb)
    deg = a.degrees[ra] * b.degrees[rb]
    perm = np.lexsort((rb, ra, deg))
    rows = np.stack([ra[perm], rb[perm]], axis=1)
    return CharacterTable(info, deg[perm], None, (a, b), rows)


def _float_matmul_mod(x, y, q):
    return np.remainder(x.astype(np.float64) @ y.astype(np.float64), q).astype(np.int64)


def verify_table(tab: CharacterTable) -> None:
    """Check sum of squared degrees, column one, and both orthogonality relations exactly.

    Values are evaluated at every primitive embedding modulo enough primes
    q = 1 (mod e) that a vanishing residue forces exact vanishing.
    """
    order, e = tab.order, tab.exponent
    n, k = len(tab), len(tab.info)
    if n != k:
        raise ValidationError("row count differs from class count", k, n)
    if int((tab.degrees**2).sum()) != order:
        raise ValidationError("sum of squared degrees", order, int((tab.degrees**2).sum()))
    dmax = int(tab.degrees.max())
    bound = 2 * (reduction_bound(e) * order * dmax * dmax + order) + 1
    qmax = int(math.sqrt(2.0**52 / max(n, k)))
    primes, prod = [], 1
    for q in primes_1_mod(e, qmax // 2):
        if q > qmax:
            raise ResourceExceeded("table too large for the modular orthogonality check")
        primes.append(q)
        prod *= q
        if prod > bound:
            break
    sizes = tab.info.sizes
    cent = order // sizes
    for q in primes:
        w = root_of_unity(e, q)
        for a in units(e):
            x = tab.evaluate(q, pow(w, a, q))
            xc = tab.evaluate(q, pow(w, (-a) % e, q))
            if not np.array_equal(x[:, 0] % q, tab.degrees % q):
                raise ValidationError("first column differs from degrees")
            row = _float_matmul_mod((x * (sizes % q)[None, :]) % q, xc.T, q)
            if not np.array_equal(row, (order % q) * np.eye(n, dtype=np.int64)):
                raise ValidationError("row orthogonality fails")
            col = _float_matmul_mod(x.T, xc, q)
            if not np.array_equal(col, np.diag(cent % q)):
                raise ValidationError("column orthogonality fails")


def character_table(g, verify: bool = True) -> CharacterTable:
    """Character table of a PermGroup or NamedGroup.

    Named direct products are composed from their factors; anything else is
    computed by Dixon-Schneider and cached on the permutation group.
    """
    if isinstance(g, PermGroup):
        tab = g.__dict__.get("_chartab")
        if tab is None:
            tab = dixon_table(g.conjugacy_classes())
            if verify:
                verify_table(tab)
            g.__dict__["_chartab"] = tab
        return tab
    tab = getattr(g, "_chartab", None)
    if tab is not None:
        return tab
    if g.factors:
        tabs = [character_table(f, verify=False) for f in g.factors]
        tab = tabs[0]
        for t in tabs[1:]:
            tab = product_table(tab, t)
        if verify:
            verify_table(tab)
    else:
        tab = character_table(g.group, verify)
    g._chartab = tab
    return tab


def m_quaternionic(g) -> int:
    """Number of irreducible characters of degree 2 with indicator -1."""
    tab = g if isinstance(g, CharacterTable) else character_table(g)
    return tab.m_quaternionic()
