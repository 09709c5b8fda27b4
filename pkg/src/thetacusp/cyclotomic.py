"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) as integer
numerators over one positive common denominator, reduced modulo the N-th
cyclotomic polynomial.  Orders N = 2 mod 4 are folded to N/2 (the fields
coincide) and rational values always carry order 1; no other descent is
attempted.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Union

from .numeric_base import RationalLike, frac_p, is_prime, factorize, lcm, legendre, prime_factors

ORDER_CAP = 2**20


class OrderCapError(ValueError):
    pass


@lru_cache(maxsize=None)
def _squarefree_cyclotomic(r: int) -> tuple[int, ...]:
    # x^r - 1 divided by Phi_d for every proper divisor d of r
    poly = [-1] + [0] * (r - 1) + [1]
    for d in range(1, r):
        if r % d == 0:
            poly = _exact_div(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            out[i - dn] = c
            for j, dj in enumerate(den):
                if dj:
                    num[i - dn + j] -= c * dj
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n == 1:
        return (-1, 1)
    rad = 1
    for p in prime_factors(n):
        rad *= p
    if rad == n:
        return _squarefree_cyclotomic(n)
    base = cyclotomic_polynomial(rad)
    step = n // rad
    out = [0] * ((len(base) - 1) * step + 1)
    for i, c in enumerate(base):
        out[i * step] = c
    return tuple(out)


@lru_cache(maxsize=None)
def _reducer(n: int) -> tuple[int, tuple[tuple[int, int], ...]]:
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    terms = tuple((j, c) for j, c in enumerate(phi[:-1]) if c)
    return deg, terms


def _reduce(coeffs: list[int], n: int) -> list[int]:
    """Remainder of an integer polynomial modulo Phi_n (modifies ``coeffs``)."""
    deg, terms = _reducer(n)
    for i in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[i]
        if c:
            base = i - deg
            for j, t in terms:
                coeffs[base + j] -= c * t
    if len(coeffs) < deg:
        coeffs.extend([0] * (deg - len(coeffs)))
    return coeffs[:deg]


def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def _canonical_order(n: int) -> int:
    return n // 2 if n % 4 == 2 else n


def _check_order(n: int) -> None:
    if n > ORDER_CAP:
        raise OrderCapError(f"cyclotomic order {n} exceeds cap {ORDER_CAP}")


def _from_exponents(n: int, terms: Iterable[tuple[int, int]], den: int = 1) -> "Cyclo":
    """sum c * zeta_n^k over (k, c) pairs, divided by den."""
    n0 = n
    n = _canonical_order(n0)
    _check_order(n)
    full = [0] * n
    if n != n0:
        # zeta_{2m} = -zeta_m^{(m+1)/2} for odd m
        half = (n + 1) // 2
        for k, c in terms:
            k %= n0
            full[(k * half) % n] += -c if k % 2 else c
    else:
        for k, c in terms:
            full[k % n] += c
    return Cyclo._make(n, _reduce(full, n), den)


Scalar = Union["Cyclo", int, Fraction]


class Cyclo:
    """An element of Q(zeta_order)."""

    __slots__ = ("order", "num", "den")

    def __init__(self, order: int, num: Iterable[int], den: int = 1):
        num = tuple(num)
        if len(num) != euler_phi(order) or den <= 0:
            raise ValueError("malformed cyclotomic element")
        self.order = order
        self.num = num
        self.den = den

    @classmethod
    def _make(cls, order: int, num: list[int], den: int, demote: bool = True) -> "Cyclo":
        if den < 0:
            num = [-c for c in num]
            den = -den
        if demote and order > 1 and not any(num[1:]):
            order, num = 1, [num[0]]
        g = gcd(den, *num)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        obj = object.__new__(cls)
        obj.order = order
        obj.num = tuple(num)
        obj.den = den
        return obj

    @classmethod
    def from_rational(cls, x: RationalLike) -> "Cyclo":
        x = Fraction(x)
        return cls._make(1, [x.numerator], x.denominator)

    @classmethod
    def one(cls) -> "Cyclo":
        return cls._make(1, [1], 1)

    @classmethod
    def zero(cls) -> "Cyclo":
        return cls._make(1, [0], 1)

    @staticmethod
    def coerce(x: Scalar) -> "Cyclo":
        if isinstance(x, Cyclo):
            return x
        if isinstance(x, (int, Fraction)):
            return Cyclo.from_rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Cyclo")

    # promotion -------------------------------------------------------------
    def promote(self, m: int) -> "Cyclo":
        """Same value written in Q(zeta_m); the order must divide m."""
        m = _canonical_order(m)
        if m == self.order:
            return self
        if m % self.order:
            raise ValueError(f"order {self.order} does not divide {m}")
        _check_order(m)
        step = m // self.order
        full = [0] * ((len(self.num) - 1) * step + 1)
        for k, c in enumerate(self.num):
            if c:
                full[k * step] = c
        return Cyclo._make(m, _reduce(full, m), self.den, demote=False)

    def _common(self, other: "Cyclo") -> tuple["Cyclo", "Cyclo"]:
        if self.order == other.order:
            return self, other
        m = _canonical_order(lcm(self.order, other.order))
        return self.promote(m), other.promote(m)

    # ring operations -------------------------------------------------------
    def __add__(self, other: Scalar) -> "Cyclo":
        try:
            other = Cyclo.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._common(other)
        num = [x * b.den + y * a.den for x, y in zip(a.num, b.num)]
        return Cyclo._make(a.order, num, a.den * b.den)

    __radd__ = __add__

    def __neg__(self) -> "Cyclo":
        return Cyclo._make(self.order, [-c for c in self.num], self.den)

    def __sub__(self, other: Scalar) -> "Cyclo":
        try:
            other = Cyclo.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Cyclo":
        return Cyclo.coerce(other) - self

    def __mul__(self, other: Scalar) -> "Cyclo":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return Cyclo._make(self.order, [c * other.numerator for c in self.num], self.den * other.denominator)
        if not isinstance(other, Cyclo):
            return NotImplemented
        a, b = self._common(other)
        if a.order == 1:
            return Cyclo._make(1, [a.num[0] * b.num[0]], a.den * b.den)
        an = [(i, c) for i, c in enumerate(a.num) if c]
        bn = [(i, c) for i, c in enumerate(b.num) if c]
        if not an or not bn:
            return Cyclo._make(a.order, [0] * len(a.num), 1)
        prod = [0] * (len(a.num) * 2 - 1)
        for i, x in an:
            for j, y in bn:
                prod[i + j] += x * y
        return Cyclo._make(a.order, _reduce(prod, a.order), a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "Cyclo":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(zeta)")
            return self * (1 / Fraction(other))
        if not isinstance(other, Cyclo):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Scalar) -> "Cyclo":
        return Cyclo.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "Cyclo":
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclo.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyclo.from_rational(other)
        if not isinstance(other, Cyclo):
            return NotImplemented
        a, b = self._common(other)
        return a.den == b.den and a.num == b.num

    __hash__ = None  # equality crosses orders, so there is no cheap canonical hash

    def __bool__(self) -> bool:
        return any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return Fraction(self.num[0], self.den)

    def conj(self) -> "Cyclo":
        n = self.order
        return _from_exponents(n, ((-k, c) for k, c in enumerate(self.num) if c), self.den)

    def galois(self, t: int) -> "Cyclo":
        """Image under zeta -> zeta^t, gcd(t, order) = 1."""
        n = self.order
        if gcd(t, n) != 1:
            raise ValueError("Galois twist must be coprime to the order")
        return _from_exponents(n, ((k * t, c) for k, c in enumerate(self.num) if c), self.den)

    def inverse(self) -> "Cyclo":
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        if self.is_rational():
            return Cyclo.from_rational(1 / self.to_fraction())
        inv = _poly_inverse([Fraction(c, self.den) for c in self.num], cyclotomic_polynomial(self.order))
        den = 1
        for c in inv:
            den = lcm(den, c.denominator)
        inv += [Fraction(0)] * (len(self.num) - len(inv))
        return Cyclo._make(self.order, [int(c * den) for c in inv], den)

    def abs2(self) -> "Cyclo":
        return self * self.conj()

    def embed(self) -> complex:
        n = self.order
        total = 0j
        for k, c in enumerate(self.num):
            if c:
                total += (c / self.den) * cmath.exp(2j * cmath.pi * k / n)
        return total

    def __complex__(self) -> complex:
        return self.embed()

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [str(Fraction(c, self.den)) for c in self.num]}

    def __repr__(self) -> str:
        if self.is_rational():
            return f"Cyclo({self.to_fraction()})"
        terms = [f"{Fraction(c, self.den)}*z^{k}" for k, c in enumerate(self.num) if c]
        return f"Cyclo[{self.order}](" + " + ".join(terms) + ")"


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_inverse(a: list[Fraction], modulus: tuple[int, ...]) -> list[Fraction]:
    """Inverse of a modulo an irreducible polynomial, via extended Euclid."""
    r0 = [Fraction(c) for c in modulus]
    r1 = _poly_trim(list(a))
    s0: list[Fraction] = [Fraction(0)]
    s1: list[Fraction] = [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if r1[0] == 0:
        raise ZeroDivisionError("element is not invertible")
    c = r1[0]
    out = [x / c for x in s1]
    if len(out) >= len(modulus):
        _, out = _poly_divmod(out, [Fraction(x) for x in modulus])
    return out


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_trim(out)


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _poly_trim([Fraction(x) for x in out])


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(a) - 1 < db:
        return [Fraction(0)], _poly_trim(a)
    q = [Fraction(0)] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / lead
        if c:
            q[i - db] = c
            for j, y in enumerate(b):
                a[i - db + j] -= c * y
    rem = _poly_trim(a[:db] if db > 0 else [Fraction(0)])
    return _poly_trim(q), rem


# constructors ---------------------------------------------------------------

def root_of_unity(n: int, k: int) -> Cyclo:
    """exp(2 pi i k / n)."""
    if n < 1:
        raise ValueError("order must be positive")
    k %= n
    g = gcd(n, k)
    n, k = n // g, k // g
    return _from_exponents(n, [(k, 1)])


I = root_of_unity(4, 1)


def e_inf_rat(x: RationalLike) -> Cyclo:
    """exp(2 pi i x) for rational x."""
    x = Fraction(x)
    return root_of_unity(x.denominator, x.numerator)


def e_p(x: RationalLike, p: int) -> Cyclo:
    """The p-adic additive character exp(-2 pi i {x}_p)."""
    f = frac_p(x, p)
    return root_of_unity(f.denominator, -f.numerator)


@lru_cache(maxsize=None)
def sqrt_of_prime(p: int) -> Cyclo:
    """Positive square root of the prime p inside a cyclotomic field."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        return root_of_unity(8, 1) + root_of_unity(8, -1)
    gauss = _from_exponents(p, [(n, legendre(n, p)) for n in range(1, p)])
    if p % 4 == 1:
        return gauss
    return gauss * root_of_unity(4, -1)


def sqrt_rational(x: RationalLike) -> Cyclo:
    """Positive square root of a positive rational."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("sqrt_rational needs a positive rational")
    out = Cyclo.one()
    coef = Fraction(1)
    for n, sign in ((x.numerator, 1), (x.denominator, -1)):
        for p, e in factorize(n).items():
            coef *= Fraction(p) ** (sign * (e // 2))
            if e % 2:
                out = out * sqrt_of_prime(p) if sign > 0 else out * sqrt_of_prime(p) / p
    return out * coef


def embed(x: Scalar) -> complex:
    return Cyclo.coerce(x).embed()


def conj(x: Scalar) -> Cyclo:
    return Cyclo.coerce(x).conj()


def inverse(x: Scalar) -> Cyclo:
    return Cyclo.coerce(x).inverse()
