"""Exact cyclotomic numbers and small modular-arithmetic helpers."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .perm import is_prime, prime_factors


def cyclotomic_poly(n: int) -> tuple:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


cyclotomic_poly = lru_cache(maxsize=None)(cyclotomic_poly)


def _poly_div(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        q = num[i + len(den) - 1] // den[-1]
        out[i] = q
        for j, c in enumerate(den):
            num[i + j] -= q * c
    assert not any(num[: len(den) - 1]), "inexact division"
    return out


def phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


@lru_cache(maxsize=None)
def reduction_matrix(e: int) -> np.ndarray:
    """Row a holds the power-basis coefficients of zeta_e**a reduced mod Phi_e."""
    poly = cyclotomic_poly(e)
    f = len(poly) - 1
    rows = np.zeros((e, f), dtype=np.int64)
    cur = np.zeros(f, dtype=np.int64)
    cur[0] = 1
    for a in range(e):
        rows[a] = cur
        top = cur[-1]
        cur = np.concatenate([[0], cur[:-1]])
        if top:
            cur = cur - top * np.array(poly[:-1], dtype=np.int64)
    rows.setflags(write=False)
    return rows


def reduction_bound(e: int) -> int:
    """Largest absolute coefficient of any zeta_e**a in the power basis."""
    return int(np.abs(reduction_matrix(e)).max())


def units(e: int):
    return [a for a in range(1, e + 1) if math.gcd(a, e) == 1] if e > 1 else [1]


def primes_1_mod(e: int, lower: int):
    """Primes q = 1 (mod e) with q > lower, ascending."""
    q = (lower // e + 1) * e + 1
    while True:
        if is_prime(q):
            yield q
        q += e


@lru_cache(maxsize=None)
def primitive_root(q: int) -> int:
    fac = prime_factors(q - 1)
    for g in range(2, q):
        if all(pow(g, (q - 1) // r, q) != 1 for r in fac):
            return g
    return 1


def root_of_unity(e: int, q: int) -> int:
    """A fixed primitive e-th root of unity in F_q (requires q = 1 mod e)."""
    if (q - 1) % e:
        raise ValueError(f"{q} is not 1 mod {e}")
    return pow(primitive_root(q), (q - 1) // e, q)


class Cyclotomic:
    """An element of Q(zeta_n) stored in its minimal conductor.

    ``coeffs`` are rational coordinates in the power basis
    1, zeta, ..., zeta**(phi(n)-1) with zeta = exp(2*pi*i/n).
    """

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs):
        self.conductor = conductor
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    @classmethod
    def from_exponents(cls, vec, e: int) -> "Cyclotomic":
        """Value of sum_a vec[a] * zeta_e**a."""
        red = np.asarray(vec, dtype=np.int64) @ reduction_matrix(e)
        return cls._minimise(e, [Fraction(int(c)) for c in red])

    @classmethod
    def rational(cls, x) -> "Cyclotomic":
        return cls(1, [x])

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "Cyclotomic":
        vec = np.zeros(n, dtype=np.int64)
        vec[k % n] = 1
        return cls.from_exponents(vec, n)

    @staticmethod
    def _expand(coeffs, f, e):
        vec = [Fraction(0)] * e
        step = e // f
        for b, c in enumerate(coeffs):
            vec[(b * step) % e] += c
        return vec

    @staticmethod
    def _reduce(vec, e):
        R = reduction_matrix(e)
        out = [Fraction(0)] * R.shape[1]
        for a, c in enumerate(vec):
            if c:
                for j in np.nonzero(R[a])[0]:
                    out[j] += c * int(R[a, j])
        return out

    @classmethod
    def _minimise(cls, e, red):
        for f in sorted(d for d in range(1, e + 1) if e % d == 0):
            if f % 4 == 2:
                continue
            if not cls._fixed_by(e, f, red):
                continue
            basis = [cls._reduce(cls._expand([0] * b + [1], f, e), e) for b in range(phi(f))]
            sol = _solve(basis, red)
            if sol is not None:
                return cls(f, sol)
        return cls(e, red)

    @classmethod
    def _fixed_by(cls, e, f, red):
        vec = cls._expand(red, e, e)
        for a in units(e):
            if a % f != 1 % f:
                continue
            moved = [Fraction(0)] * e
            for i, c in enumerate(vec):
                if c:
                    moved[(a * i) % e] += c
            if cls._reduce(moved, e) != list(red):
                return False
        return True

    def _in(self, e):
        return self._reduce(self._expand(self.coeffs, self.conductor, e), e)

    def _combine(self, other, op):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other)
        e = math.lcm(self.conductor, other.conductor)
        if op == "+":
            vec = [x + y for x, y in zip(self._in(e), other._in(e))]
            return Cyclotomic._minimise(e, vec)
        a = self._expand(self._in(e), e, e)
        b = self._expand(other._in(e), e, e)
        prod = [Fraction(0)] * e
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[(i + j) % e] += x * y
        return Cyclotomic._minimise(e, self._reduce(prod, e))

    def __add__(self, other):
        return self._combine(other, "+")

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.conductor, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyclotomic) else Cyclotomic.rational(-other))

    def __mul__(self, other):
        return self._combine(other, "*")

    __rmul__ = __mul__

    def galois(self, a: int) -> "Cyclotomic":
        e = self.conductor
        vec = self._expand(self.coeffs, e, e)
        moved = [Fraction(0)] * e
        for i, c in enumerate(vec):
            moved[(a * i) % e] += c
        return Cyclotomic._minimise(e, self._reduce(moved, e))

    def conjugate(self) -> "Cyclotomic":
        return self.galois(-1)

    def trace(self) -> Fraction:
        """Field trace from Q(zeta_conductor) down to Q."""
        total = Cyclotomic.rational(0)
        for a in units(self.conductor):
            total = total + self.galois(a)
        return total.coeffs[0]

    def is_rational(self) -> bool:
        return self.conductor == 1

    def __eq__(self, other):
        if not isinstance(other, Cyclotomic):
            if isinstance(other, (int, Fraction)):
                return self.is_rational() and self.coeffs[0] == other
            return NotImplemented
        return self.conductor == other.conductor and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.conductor, self.coeffs))

    def __complex__(self):
        z = complex(math.cos(2 * math.pi / self.conductor), math.sin(2 * math.pi / self.conductor))
        return complex(sum(float(c) * z**b for b, c in enumerate(self.coeffs)))

    def to_json(self):
        return {"conductor": self.conductor, "coefficients": [str(c) for c in self.coeffs]}

    def __str__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        terms = []
        for b, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "1" if b == 0 else f"z{self.conductor}" + (f"^{b}" if b > 1 else "")
            if b == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return "+".join(terms).replace("+-", "-") or "0"

    def __repr__(self):
        return f"Cyclotomic({self})"


def _solve(columns, target):
    """Exact solution x of sum_b x[b]*columns[b] = target, or None."""
    m, n = len(target), len(columns)
    aug = [[columns[b][r] for b in range(n)] + [target[r]] for r in range(m)]
    row, piv = 0, []
    for col in range(n):
        pr = next((r for r in range(row, m) if aug[r][col] != 0), None)
        if pr is None:
            continue
        aug[row], aug[pr] = aug[pr], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(m):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        piv.append(col)
        row += 1
    if any(aug[r][n] != 0 for r in range(row, m)):
        return None
    x = [Fraction(0)] * n
    for r, col in enumerate(piv):
        x[col] = aug[r][n]
    return x
