"""Independent brute-force oracles and random generators shared by the tests."""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from thetacusp.characters import DirichletCharacter
from thetacusp.cyclotomic import root_of_unity
from thetacusp.metaplectic import Diag, Flip, Mat2Q, Upper


# Hilbert symbols by searching for Hensel-liftable solutions --------------------

def _val(x: np.ndarray, p: int, cap: int) -> np.ndarray:
    out = np.zeros(x.shape, dtype=np.int64)
    y = x.copy()
    for _ in range(cap):
        hit = (y % p == 0) & (out < cap)
        if not np.any(hit):
            break
        out[hit] += 1
        y = np.where(hit, y // p, y)
    out[x == 0] = cap
    return out


def _solvable_mod(a: int, b: int, p: int, k: int) -> bool:
    """Primitive solution of z^2 = a x^2 + b y^2 mod p^k that lifts by Hensel.

    A solution lifts once some partial derivative has valuation m with 2m < k.
    Solutions are scaled so that one coordinate equals 1.
    """
    q = p**k
    r = np.arange(q, dtype=np.int64)
    s, t = np.meshgrid(r, r, indexing="ij")
    charts = (
        (np.ones_like(s), s, t),  # x = 1
        (s, np.ones_like(s), t),  # y = 1
        (s, t, np.ones_like(s)),  # z = 1
    )
    for x, y, z in charts:
        f = (a * x * x + b * y * y - z * z) % q
        ok = f == 0
        if not np.any(ok):
            continue
        dx = _val((2 * a * x)[ok] % q, p, k)
        dy = _val((2 * b * y)[ok] % q, p, k)
        dz = _val((2 * z)[ok] % q, p, k)
        m = np.minimum(np.minimum(dx, dy), dz)
        if np.any(2 * m < k):
            return True
    return False


@lru_cache(maxsize=None)
def _squares_mod(q: int) -> frozenset[int]:
    return frozenset((x * x) % q for x in range(q))


def _strip_squares(a: int, p: int) -> int:
    while a % (p * p) == 0:
        a //= p * p
    return a


def _square_class(a: int, p: int, k: int) -> tuple[int, int]:
    """(v_p(a) mod 2, smallest unit u in 1..p^k with unit part / u a square mod p^k)."""
    a = _strip_squares(a, p)
    v = 1 if a % p == 0 else 0
    unit = a // p if v else a
    q = p**k
    sq = _squares_mod(q)
    for u in range(1, q):
        if u % p and (unit * pow(u, -1, q)) % q in sq:
            return v, u
    raise AssertionError("no square class found")


@lru_cache(maxsize=None)
def _hilbert_class(ca: tuple[int, int], cb: tuple[int, int], p: int, k: int) -> int:
    a = ca[1] * (p if ca[0] else 1)
    b = cb[1] * (p if cb[0] else 1)
    return 1 if _solvable_mod(a, b, p, k) else -1


def hilbert_bruteforce(a: int, b: int, p: int) -> int:
    """(a, b)_p for nonzero integers by searching modulo p^3 (p odd) or 2^5."""
    k = 5 if p == 2 else 3
    return _hilbert_class(_square_class(a, p, k), _square_class(b, p, k), p, k)


def hilbert_real(a: int, b: int) -> int:
    return -1 if a < 0 and b < 0 else 1


# cusps of Gamma_0(N) as <T>-orbits on right cosets ------------------------------

class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[rx] = ry


def _unit_generators(N: int) -> list[int]:
    units = [u for u in range(1, N) if gcd(u, N) == 1] or [1]
    gens: list[int] = []
    span = {1 % N}
    for u in units:
        if u in span:
            continue
        gens.append(u)
        frontier = list(span)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = (x * g) % N
                if y not in span:
                    span.add(y)
                    frontier.append(y)
        if len(span) == len(units):
            break
    return gens


class CosetOrbits:
    """Gamma_0(N) right cosets, keyed by bottom rows (c : d) in P^1(Z/N), modulo T."""

    def __init__(self, N: int):
        self.N = N
        self.uf = _UnionFind(N * N)
        gens = _unit_generators(N)
        for c in range(N):
            for d in range(N):
                if gcd(gcd(c, d), N) != 1:
                    continue
                i = c * N + d
                self.uf.union(i, c * N + (c + d) % N)
                for g in gens:
                    self.uf.union(i, ((g * c) % N) * N + (g * d) % N)
        self.valid = [
            c * N + d for c in range(N) for d in range(N) if gcd(gcd(c, d), N) == 1
        ]

    def count(self) -> int:
        return len({self.uf.find(i) for i in self.valid})

    def orbit_of_cusp(self, u: int, w: int) -> int:
        """Orbit of the coset of g = [[u, b], [w, d]] with g(inf) = u/w."""
        if w == 0:
            c, d = 0, 1
        else:
            _, d = _bezout(u, w)
            c = w
        return self.uf.find((c % self.N) * self.N + d % self.N)


def _bezout(u: int, w: int) -> tuple[int, int]:
    # integers b, d with u d - b w = 1
    g, x, y = _egcd(u, w)
    assert g in (1, -1)
    # u x + w y = g
    d, b = x * g, -y * g
    return b, d


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return a, 1, 0
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


# random group elements --------------------------------------------------------------

def rand_rational(rng: random.Random, span: int = 30, den: int = 30) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def rand_nonzero_rational(rng: random.Random, span: int = 30, den: int = 30) -> Fraction:
    while True:
        x = rand_rational(rng, span, den)
        if x:
            return x


def rand_sl2q(rng: random.Random) -> Mat2Q:
    """Random element of SL(2, Q), with the c = 0 and a = 0 strata represented."""
    kind = rng.random()
    if kind < 0.15:
        a = rand_nonzero_rational(rng)
        return Mat2Q(a, rand_rational(rng), 0, 1 / a)
    if kind < 0.25:
        c = rand_nonzero_rational(rng)
        return Mat2Q(0, -1 / c, c, rand_rational(rng))
    a, b, c = rand_nonzero_rational(rng), rand_rational(rng), rand_rational(rng)
    return Mat2Q(a, b, c, (1 + b * c) / a)


def rand_sl2z(rng: random.Random, steps: int = 6, span: int = 3) -> Mat2Q:
    g = Mat2Q(1, 0, 0, 1)
    for _ in range(steps):
        g = g @ Mat2Q(1, rng.randint(-span, span), 0, 1) @ Mat2Q(0, -1, 1, 0)
    return -g if rng.random() < 0.3 else g


def conj_level(g: Mat2Q, M: int) -> Mat2Q:
    """diag(M, 1)^-1 g diag(M, 1): SL(2, Z) onto Gamma^(M)."""
    return Mat2Q(g.a, g.b / M, g.c * M, g.d)


def p_integral(rng: random.Random, p: int, span: int = 40) -> Fraction:
    while True:
        den = rng.randint(1, 12)
        if den % p:
            return Fraction(rng.randint(-span, span), den)


def p_unit(rng: random.Random, p: int) -> Fraction:
    while True:
        x = p_integral(rng, p)
        if x and x.numerator % p:
            return x


def rand_token(rng: random.Random, p: int):
    k = rng.random()
    if k < 0.4:
        return Upper(p_integral(rng, p))
    if k < 0.7:
        return Diag(p_unit(rng, p))
    return Flip()


def rand_kp(rng: random.Random, p: int, M: int, length: int = 5) -> Mat2Q:
    g = Mat2Q(1, 0, 0, 1)
    for _ in range(length):
        g = g @ rand_token(rng, p).matrix(M)
    return g


def primitive_characters(q: int) -> list:
    """All primitive characters mod an odd prime power q, built from a generator."""
    units = [n for n in range(q) if gcd(n, q) == 1]
    g = next(x for x in units if len({pow(x, k, q) for k in range(len(units))}) == len(units))
    order = len(units)
    out = []
    for k in range(order):
        table = [None] * q
        for e in range(order):
            table[pow(g, e, q)] = root_of_unity(order, k * e)
        chi = DirichletCharacter(q, table)
        if chi.is_primitive():
            out.append(chi)
    return out
