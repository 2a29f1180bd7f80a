"""Exact arithmetic in the cyclotomic field Q(zeta_M).

Elements are stored in the power basis 1, z, ..., z^(phi(M)-1) with
z = exp(2*pi*i/M), reduced modulo the M-th cyclotomic polynomial.
Operands of different orders are lifted to the lcm order before combining.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

from gmpy2 import mpq

__all__ = ["CycScalar", "cyclotomic_poly", "totient", "lcm"]


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    # Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_divide_int(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_divide_int(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    assert not any(num), "inexact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def _power_table(order: int) -> tuple[tuple[int, ...], ...]:
    """Row e holds the reduced coefficients of z^e for 0 <= e < order."""
    phi = totient(order)
    cyc = cyclotomic_poly(order)
    rows = []
    cur = [1] + [0] * (phi - 1)
    for _ in range(order):
        rows.append(tuple(cur))
        # multiply by z and reduce with the monic relation z^phi = -sum cyc[i] z^i
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * cyc[i] for i, c in enumerate(cur)]
    return tuple(rows)


_MPQ = type(mpq(0))
_ZERO = mpq(0)


def _coerce_rational(x):
    # coefficients are held as gmpy2 rationals; Fraction stays the public type
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Rational):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        f = Fraction(x)
        return mpq(f.numerator, f.denominator)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class CycScalar:
    """An exact element of Q(zeta_order)."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, coeffs, order: int = 1):
        if order < 1:
            raise ValueError("cyclotomic order must be positive")
        phi = totient(order)
        cs = [_coerce_rational(c) for c in coeffs]
        if len(cs) > phi:
            cs = _reduce(cs, order)
        cs.extend([_ZERO] * (phi - len(cs)))
        self.order = order
        self.coeffs = tuple(cs)
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def _raw(cls, coeffs: tuple, order: int) -> "CycScalar":
        obj = object.__new__(cls)
        obj.order = order
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, value, order: int = 1) -> "CycScalar":
        phi = totient(order)
        return cls._raw((_coerce_rational(value),) + (_ZERO,) * (phi - 1), order)

    @classmethod
    def zero(cls, order: int = 1) -> "CycScalar":
        return cls.rational(0, order)

    @classmethod
    def one(cls, order: int = 1) -> "CycScalar":
        return cls.rational(1, order)

    @classmethod
    def root_of_unity(cls, m: int, power: int = 1, order: int | None = None) -> "CycScalar":
        """zeta_m^power, represented in Q(zeta_order) (default order m)."""
        order = m if order is None else order
        if order % m:
            raise ValueError(f"zeta_{m} does not lie in Q(zeta_{order})")
        e = (power % m) * (order // m)
        row = _power_table(order)[e]
        return cls._raw(tuple(mpq(c) for c in row), order)

    @classmethod
    def gaussian(cls, re, im=0) -> "CycScalar":
        """re + i*im in Q(zeta_4)."""
        return cls([_coerce_rational(re), _coerce_rational(im)], 4)

    # structure ----------------------------------------------------------
    def lift(self, order: int) -> "CycScalar":
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot lift order {self.order} to {order}")
        step = order // self.order
        table = _power_table(order)
        phi = totient(order)
        out = [_ZERO] * phi
        for i, c in enumerate(self.coeffs):
            if c:
                for t, r in enumerate(table[i * step]):
                    if r:
                        out[t] += c * r
        return CycScalar._raw(tuple(out), order)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        c = self.coeffs[0]
        return Fraction(int(c.numerator), int(c.denominator))

    def conjugate(self) -> "CycScalar":
        """Complex conjugation, zeta -> zeta^-1."""
        table = _power_table(self.order)
        phi = totient(self.order)
        out = [_ZERO] * phi
        for i, c in enumerate(self.coeffs):
            if c:
                for t, r in enumerate(table[(-i) % self.order]):
                    if r:
                        out[t] += c * r
        return CycScalar._raw(tuple(out), self.order)

    def __complex__(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.order)
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + float(c)
        return acc

    # arithmetic ---------------------------------------------------------
    def _align(self, other):
        if not isinstance(other, CycScalar):
            try:
                other = CycScalar.rational(other, self.order)
            except TypeError:
                return None, None
        if other.order == self.order:
            return self, other
        m = lcm(self.order, other.order)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return CycScalar._raw(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), a.order)

    __radd__ = __add__

    def __neg__(self):
        return CycScalar._raw(tuple(-x for x in self.coeffs), self.order)

    def __sub__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return CycScalar._raw(tuple(x - y for x, y in zip(a.coeffs, b.coeffs)), a.order)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, _MPQ)):
            other = _coerce_rational(other)
            return CycScalar._raw(tuple(x * other for x in self.coeffs), self.order)
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        phi = len(a.coeffs)
        if phi == 1:
            return CycScalar._raw((a.coeffs[0] * b.coeffs[0],), a.order)
        prod = [0] * (2 * phi - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycScalar._raw(tuple(_reduce(prod, a.order)), a.order)

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        phi = len(self.coeffs)
        if phi == 1:
            return CycScalar._raw((1 / self.coeffs[0],), self.order)
        # solve (multiplication-by-self matrix) x = e_0 over Q
        cols = []
        basis = [CycScalar._raw(tuple(mpq(int(i == j)) for i in range(phi)), self.order)
                 for j in range(phi)]
        for b in basis:
            cols.append((self * b).coeffs)
        mat = [[cols[j][i] for j in range(phi)] + [mpq(int(i == 0))] for i in range(phi)]
        sol = _solve_rational(mat, phi)
        return CycScalar._raw(tuple(sol), self.order)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, _MPQ)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / _coerce_rational(other))
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = CycScalar.one(self.order)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, CycScalar):
            if other.order == self.order:
                return self.coeffs == other.coeffs
            a, b = self._align(other)
            return a.coeffs == b.coeffs
        if isinstance(other, (int, Fraction, _MPQ)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        # equal values across orders must hash alike; only the rational
        # coordinate is order independent
        if self._hash is None:
            self._hash = hash(self.coeffs[0]) if self.is_rational() else hash("irrational")
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"CycScalar({[str(c) for c in self.coeffs]}, order={self.order})"

    def __str__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else (f"z{self.order}" if i == 1 else f"z{self.order}^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


def _reduce(prod, order: int) -> list[Fraction]:
    phi = totient(order)
    out = [_coerce_rational(c) for c in prod[:phi]]
    out.extend([_ZERO] * (phi - len(out)))
    if len(prod) > phi:
        table = _power_table(order)
        for e in range(phi, len(prod)):
            c = prod[e]
            if c:
                for t, r in enumerate(table[e % order]):
                    if r:
                        out[t] += c * r
    return out


def _solve_rational(aug: list[list[Fraction]], n: int) -> list[Fraction]:
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]
