"""Exact rationals, p-adic valuations, quadratic symbols and Hilbert symbols."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Union

RationalLike = Union[int, Fraction]


def Q(x: RationalLike | str, y: int = 1) -> Fraction:
    """Shorthand for building a Fraction."""
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x, y)


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Sorted distinct prime divisors of |n| (empty for 0 and ±1)."""
    n = abs(n)
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def factorize(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    for p in prime_factors(n):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out[p] = e
    return out


def lcm(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else 0


@dataclass(frozen=True)
class Place:
    """A place of Q: ``prime`` is None for the real place."""

    prime: int | None = None

    def __post_init__(self) -> None:
        if self.prime is not None and not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")

    @property
    def is_infinite(self) -> bool:
        return self.prime is None

    def __repr__(self) -> str:
        return "Place(inf)" if self.prime is None else f"Place({self.prime})"


INF = Place(None)
PlaceLike = Union[Place, int, str, None]


def as_place(v: PlaceLike) -> Place:
    """Place from a prime, None or "inf"."""
    if isinstance(v, Place):
        return v
    if v is None or (isinstance(v, str) and v.lower() in ("inf", "infinity")):
        return INF
    return Place(int(v))


def vp(x: RationalLike, p: int) -> int:
    """Exponent of p in the nonzero rational x."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero is undefined")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def unit_part(x: RationalLike, p: int) -> Fraction:
    """x / p^vp(x)."""
    x = Fraction(x)
    return x / Fraction(p) ** vp(x, p)


def frac_p(x: RationalLike, p: int) -> Fraction:
    """p-adic fractional part: the m/p^k in [0,1) with x - m/p^k p-integral."""
    x = Fraction(x)
    n, d = x.numerator, x.denominator
    k = 0
    while d % p == 0:
        d //= p
        k += 1
    if k == 0:
        return Fraction(0)
    pk = p**k
    # x = n / (d * p^k) with gcd(d, p) = 1, so x = n * d^{-1} / p^k mod Z_p
    m = (n * pow(d, -1, pk)) % pk
    return Fraction(m, pk)


def to_residue(x: RationalLike, modulus: int) -> int:
    """Integer congruent to x modulo ``modulus`` (denominator must be invertible)."""
    x = Fraction(x)
    return (x.numerator * pow(x.denominator, -1, modulus)) % modulus


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi symbol needs an odd positive modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    if p == 2 or not is_prime(p):
        raise ValueError("legendre symbol needs an odd prime")
    return jacobi(a, p)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for arbitrary integers."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * jacobi(a, n)


def eps_d(d: int):
    """1 if d = 1 mod 4, i if d = 3 mod 4, as a cyclotomic number."""
    from .cyclotomic import Cyclo, root_of_unity

    if d % 2 == 0:
        raise ValueError("eps_d needs odd d")
    return Cyclo.one() if d % 4 == 1 else root_of_unity(4, 1)


def hilbert_symbol(a: RationalLike, b: RationalLike, v: PlaceLike) -> int:
    """(a, b)_v for nonzero rationals."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    v = as_place(v)
    if v.is_infinite:
        return -1 if (a < 0 and b < 0) else 1
    p = v.prime
    alpha, beta = vp(a, p), vp(b, p)
    u, w = unit_part(a, p), unit_part(b, p)
    if p != 2:
        sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
        lu = legendre(to_residue(u, p), p)
        lw = legendre(to_residue(w, p), p)
        return sign * (lu**beta if beta >= 0 else lu ** (-beta)) * (lw**alpha if alpha >= 0 else lw ** (-alpha))
    u8 = to_residue(u, 8)
    w8 = to_residue(w, 8)

    def eps(t: int) -> int:
        return ((t - 1) // 2) % 2

    def omega(t: int) -> int:
        return ((t * t - 1) // 8) % 2

    e = eps(u8) * eps(w8) + alpha * omega(w8) + beta * omega(u8)
    return -1 if e % 2 else 1
