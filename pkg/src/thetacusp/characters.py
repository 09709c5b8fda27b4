"""Dirichlet characters with exact cyclotomic values and Gauss sums."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Callable

import numpy as np

from .cyclotomic import Cyclo, e_p, root_of_unity
from .numeric_base import factorize, is_prime, lcm, prime_factors


class DirichletCharacter:
    """A Dirichlet character mod q, held as its full table of values.

    ``table[n]`` is None when gcd(n, q) > 1.
    """

    __slots__ = ("modulus", "table", "_complex")

    def __init__(self, modulus: int, table: list[Cyclo | None]):
        if modulus < 1 or len(table) != modulus:
            raise ValueError("table length must equal the modulus")
        self.modulus = modulus
        self.table = tuple(table)
        self._complex = None

    @classmethod
    def from_function(cls, modulus: int, f: Callable[[int], Cyclo | int]) -> "DirichletCharacter":
        table: list[Cyclo | None] = []
        for n in range(modulus):
            table.append(Cyclo.coerce(f(n)) if gcd(n, modulus) == 1 else None)
        return cls(modulus, table)

    def __call__(self, n: int) -> Cyclo:
        v = self.table[n % self.modulus]
        return Cyclo.zero() if v is None else v

    def complex_table(self) -> np.ndarray:
        """Float values indexed by residue, zero off the unit group."""
        if self._complex is None:
            self._complex = np.array([0j if v is None else v.embed() for v in self.table])
        return self._complex

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        q = lcm(self.modulus, other.modulus)
        return DirichletCharacter.from_function(q, lambda n: self(n) * other(n))

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, [None if v is None else v.conj() for v in self.table])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        q = lcm(self.modulus, other.modulus)
        return all(self(n) == other(n) for n in range(q) if gcd(n, q) == 1) and self.modulus == other.modulus

    __hash__ = None

    def is_even(self) -> bool:
        return self(-1) == 1

    def is_principal(self) -> bool:
        return all(v is None or v == 1 for v in self.table)

    def is_primitive(self) -> bool:
        q = self.modulus
        for p in prime_factors(q):
            d = q // p
            # trivial on the kernel of reduction mod d means it factors through d
            if all(self(n) == 1 for n in range(1, q, d) if gcd(n, q) == 1):
                return False
        return True

    def __repr__(self) -> str:
        return f"DirichletCharacter(mod {self.modulus})"


def principal(q: int) -> DirichletCharacter:
    return DirichletCharacter.from_function(q, lambda n: 1)


def char_chi2() -> DirichletCharacter:
    """The nontrivial character mod 4."""
    return DirichletCharacter.from_function(4, lambda n: 1 if n % 4 == 1 else -1)


def char_chi3() -> DirichletCharacter:
    """The nontrivial character mod 3."""
    return DirichletCharacter.from_function(3, lambda n: 1 if n % 3 == 1 else -1)


def char_chi12() -> DirichletCharacter:
    return char_chi2() * char_chi3()


def is_primitive_root(g: int, p: int) -> bool:
    if g % p == 0:
        return False
    return all(pow(g, (p - 1) // q, p) != 1 for q in prime_factors(p - 1))


def least_primitive_root(p: int) -> int:
    for g in range(2, p):
        if is_primitive_root(g, p):
            return g
    return 1


def psi_j(p: int, g: int | None, j: int) -> DirichletCharacter:
    """The even character mod p sending the generator g to e(2j/(p-1))."""
    if not is_prime(p) or p < 5:
        raise ValueError("psi_j needs a prime p >= 5")
    if g is None:
        g = least_primitive_root(p)
    if not is_primitive_root(g, p):
        raise ValueError(f"{g} does not generate (Z/{p})^x")
    table: list[Cyclo | None] = [None] * p
    x = 1
    for k in range(p - 1):
        table[x] = root_of_unity(p - 1, 2 * j * k)
        x = x * g % p
    return DirichletCharacter(p, table)


def local_components(chi: DirichletCharacter) -> list[tuple[int, DirichletCharacter]]:
    """Factor chi as a product of characters of prime-power modulus."""
    q = chi.modulus
    out = []
    for p, e in sorted(factorize(q).items()):
        pe = p**e
        rest = q // pe
        inv = pow(rest, -1, pe) if rest > 1 else 0

        def lift(n: int, pe: int = pe, rest: int = rest, inv: int = inv) -> int:
            # n' = n mod p^e and n' = 1 mod rest
            if rest == 1:
                return n % pe
            return (1 + rest * ((n - 1) * inv % pe)) % q

        out.append((p, DirichletCharacter.from_function(pe, lambda n, lift=lift: chi(lift(n)))))
    return out


def tau(mu: DirichletCharacter, p: int) -> Cyclo:
    """Gauss sum sum_i mu(i) e_p(i / p^f) for mu primitive mod p^f."""
    q = mu.modulus
    if q == 1 or factorize(q).keys() != {p}:
        raise ValueError("tau needs a character of modulus a power of p")
    if not mu.is_primitive():
        raise ValueError("tau needs a primitive character")
    total = Cyclo.zero()
    for i in range(1, q):
        if i % p:
            total = total + mu(i) * e_p(Fraction(i, q), p)
    return total
