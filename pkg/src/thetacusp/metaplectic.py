"""SL(2,Q) matrices, the Kubota cocycle, generator words and scaling matrices."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Union

from .numeric_base import (
    PlaceLike,
    RationalLike,
    as_place,
    hilbert_symbol,
    lcm,
    prime_factors,
    vp,
)

MAX_WORD_LENGTH = 10_000


@dataclass(frozen=True)
class Mat2Q:
    """A rational 2x2 matrix of determinant one."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self) -> None:
        for name in "abcd":
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant is {self.a * self.d - self.b * self.c}, not 1")

    @classmethod
    def of(cls, rows: Iterable[Iterable[RationalLike | str]]) -> "Mat2Q":
        (a, b), (c, d) = [[Fraction(x) for x in row] for row in rows]
        return cls(a, b, c, d)

    def __matmul__(self, other: "Mat2Q") -> "Mat2Q":
        return Mat2Q(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    __mul__ = __matmul__

    def inverse(self) -> "Mat2Q":
        return Mat2Q(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> "Mat2Q":
        return Mat2Q(-self.a, -self.b, -self.c, -self.d)

    def rows(self) -> list[list[Fraction]]:
        return [[self.a, self.b], [self.c, self.d]]

    def act(self, z: complex) -> complex:
        a, b, c, d = (float(x) for x in (self.a, self.b, self.c, self.d))
        return (a * z + b) / (c * z + d)

    def cusp_image(self) -> tuple[int, int]:
        """Image of infinity as a reduced pair (u, w); infinity itself is (1, 0)."""
        if self.c == 0:
            return (1, 0)
        x = self.a / self.c
        return (x.numerator, x.denominator)

    def is_upper(self) -> bool:
        return self.c == 0

    def __repr__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY = Mat2Q(1, 0, 0, 1)


def upper(x: RationalLike) -> Mat2Q:
    return Mat2Q(1, x, 0, 1)


def lower(y: RationalLike) -> Mat2Q:
    return Mat2Q(1, 0, y, 1)


def diagonal(t: RationalLike) -> Mat2Q:
    t = Fraction(t)
    return Mat2Q(t, 0, 0, 1 / t)


def flip(M: RationalLike) -> Mat2Q:
    """The matrix [[0, 1/M], [-M, 0]]."""
    M = Fraction(M)
    return Mat2Q(0, 1 / M, -M, 0)


# cocycle ---------------------------------------------------------------------

def kubota_x(g: Mat2Q) -> Fraction:
    return g.c if g.c != 0 else g.d


def s_v(g: Mat2Q, v: PlaceLike) -> int:
    v = as_place(v)
    if v.is_infinite or g.c == 0 or g.d == 0:
        return 1
    if vp(g.c, v.prime) % 2 == 0:
        return 1
    return hilbert_symbol(g.c, g.d, v)


def beta_v(g1: Mat2Q, g2: Mat2Q, v: PlaceLike) -> int:
    """The Kubota 2-cocycle at the place v."""
    v = as_place(v)
    g3 = g1 @ g2
    x1, x2, x3 = kubota_x(g1), kubota_x(g2), kubota_x(g3)
    val = hilbert_symbol(x1, x2, v) * hilbert_symbol(-x1 * x2, x3, v)
    if not v.is_infinite:
        val *= s_v(g1, v) * s_v(g2, v) * s_v(g3, v)
    return val


def _rational_primes(*xs: Fraction) -> set[int]:
    out: set[int] = set()
    for x in xs:
        x = Fraction(x)
        if x != 0:
            out.update(prime_factors(x.numerator))
            out.update(prime_factors(x.denominator))
    return out


def s_A(g: Mat2Q) -> int:
    """Product of s_p over the primes where it can be nontrivial."""
    if g.c == 0 or g.d == 0:
        return 1
    out = 1
    for p in sorted(_rational_primes(2, g.c, g.d)):
        out *= s_v(g, p)
    return out


@dataclass(frozen=True)
class MetaElem:
    g: Mat2Q
    zeta: int = 1

    def __post_init__(self) -> None:
        if self.zeta not in (1, -1):
            raise ValueError("zeta must be +1 or -1")


def meta_mul(x: MetaElem, y: MetaElem, v: PlaceLike) -> MetaElem:
    return MetaElem(x.g @ y.g, beta_v(x.g, y.g, v) * x.zeta * y.zeta)


# generator words ---------------------------------------------------------------

@dataclass(frozen=True)
class Flip:
    def matrix(self, M: int) -> Mat2Q:
        return flip(M)


@dataclass(frozen=True)
class Upper:
    """[[1, x/M], [0, 1]] with x p-integral."""

    x: Fraction

    def matrix(self, M: int) -> Mat2Q:
        return upper(Fraction(self.x) / M)


@dataclass(frozen=True)
class Diag:
    """diag(u, 1/u) with u a p-adic unit."""

    u: Fraction

    def matrix(self, M: int) -> Mat2Q:
        return diagonal(self.u)


Token = Union[Flip, Upper, Diag]


@dataclass
class GeneratorWord:
    p: int
    M: int
    tokens: list[Token] = field(default_factory=list)

    def matrices(self) -> list[Mat2Q]:
        return [t.matrix(self.M) for t in self.tokens]

    def product(self) -> Mat2Q:
        out = IDENTITY
        for m in self.matrices():
            out = out @ m
        return out

    def __len__(self) -> int:
        return len(self.tokens)


class MembershipError(ValueError):
    pass


def _integral(x: Fraction, p: int, shift: int = 0) -> bool:
    return x == 0 or vp(x, p) >= shift


def check_in_Kp(g: Mat2Q, p: int, M: int) -> None:
    """Raise MembershipError unless g lies in diag(1,M) SL(2,Z_p) diag(1,1/M)."""
    m = vp(M, p)
    if not _integral(g.a, p):
        raise MembershipError(f"entry a = {g.a} is not {p}-integral")
    if not _integral(g.d, p):
        raise MembershipError(f"entry d = {g.d} is not {p}-integral")
    if not _integral(g.b, p, -m):
        raise MembershipError(f"entry b = {g.b} is not in M^-1 Z_{p}")
    if not _integral(g.c, p, m):
        raise MembershipError(f"entry c = {g.c} is not in M Z_{p}")


def in_Kp(g: Mat2Q, p: int, M: int) -> bool:
    try:
        check_in_Kp(g, p, M)
    except MembershipError:
        return False
    return True


def _lower_conj_tokens(y: Fraction) -> list[Token]:
    # [[1,0],[M y,1]] = w U(-y/M) w^-1 with w^-1 = w^3
    return [Flip(), Upper(-y), Flip(), Flip(), Flip()]


def diag_expansion(u: Fraction) -> list[Token]:
    """Upper/Flip word for diag(u, 1/u), u a unit.

    Uses diag(u) = U(u-1) L(1) U(-(u-1)/u) L(-u) conjugated into K_p^(M).
    """
    u = Fraction(u)
    return (
        [Upper(u - 1)]
        + _lower_conj_tokens(Fraction(1))
        + [Upper(-(u - 1) / u)]
        + _lower_conj_tokens(-u)
    )


def decompose_in_Kp(g: Mat2Q, p: int, M: int, expand_diagonals: bool = False) -> GeneratorWord:
    """Write g in K_p^(M) as a word in Flip, Upper (and Diag) tokens."""
    check_in_Kp(g, p, M)
    M = int(M)
    a, b, c, d = g.a, g.b, g.c, g.d
    if c == 0:
        tokens: list[Token] = [Diag(a), Upper(M * b / a)]
    elif vp(c, p) == vp(M, p):
        tokens = [Upper(a * M / c), Diag(-Fraction(M) / c), Flip(), Upper(d * M / c)]
    else:
        tokens = [Upper(M * b / d), Diag(1 / d), Flip(), Upper(-c / (d * M)), Diag(Fraction(-1)), Flip()]
    tokens = [t for t in tokens if not (isinstance(t, Upper) and t.x == 0)]
    tokens = [t for t in tokens if not (isinstance(t, Diag) and t.u == 1)]
    if expand_diagonals:
        expanded: list[Token] = []
        for t in tokens:
            expanded.extend(diag_expansion(t.u) if isinstance(t, Diag) else [t])
        tokens = expanded
    if len(tokens) > MAX_WORD_LENGTH:
        raise RuntimeError("generator word exceeds the length cap")
    word = GeneratorWord(p, M, tokens)
    if word.product() != g:
        raise AssertionError("generator word does not reproduce the matrix")
    return word


# scaling matrices and cusps ---------------------------------------------------

@dataclass(frozen=True)
class Cusp:
    """Reduced cusp u/w; infinity is (1, 0)."""

    u: int
    w: int

    def __post_init__(self) -> None:
        if self.w < 0:
            raise ValueError("cusp denominator must be nonnegative")
        if self.w == 0 and self.u != 1:
            raise ValueError("infinity is encoded as (1, 0)")
        if gcd(self.u, self.w) != 1:
            raise ValueError(f"cusp {self.u}/{self.w} is not reduced")

    @property
    def is_infinity(self) -> bool:
        return self.w == 0

    @classmethod
    def parse(cls, text: str) -> "Cusp":
        text = text.strip().lower()
        if text in ("inf", "infinity", "oo"):
            return cls(1, 0)
        if "/" in text:
            u, w = text.split("/")
            return cls(int(u), int(w))
        return cls(int(text), 1)

    def __str__(self) -> str:
        return "inf" if self.is_infinity else f"{self.u}/{self.w}"


def _scaling_params(u: int, w: int, M: int) -> tuple[int, int]:
    """Solve u M s' - r' w = (M, w) for (r', s')."""
    if gcd(u, w) != 1:
        raise ValueError(f"gcd({u}, {w}) != 1")
    g = gcd(M, w)
    wg, mg = w // g, M // g
    if u == 0:
        return -1, 0
    s = pow(u * mg, -1, wg) if wg > 1 else 1
    if s == 0:
        s = wg
    r, rem = divmod(u * M * s - g, w)
    assert rem == 0
    return r, s


def scaling_matrix(u: int, w: int, M: int) -> Mat2Q:
    """Scaling matrix for u/w inside Gamma^(M); identity for infinity."""
    if w == 0:
        if u != 1:
            raise ValueError("infinity is encoded as (1, 0)")
        return IDENTITY
    r, s = _scaling_params(u, w, M)
    L = lcm(M, w)
    return Mat2Q(Fraction(L * u, w), Fraction(r, M), L, s)


def sigma0_matrix(u: int, w: int, M: int) -> Mat2Q:
    """The diagonal-times-lower scaling matrix with sigma = sigma0 U(t)."""
    if u == 0:
        raise ValueError("sigma0 needs u != 0")
    L = lcm(M, w)
    a = Fraction(u * L, w)
    return Mat2Q(a, 0, L, 1 / a)


def sigma0_shift(u: int, w: int, M: int) -> Fraction:
    """t with scaling_matrix = sigma0_matrix @ upper(t)."""
    if u == 0:
        raise ValueError("sigma0 needs u != 0")
    r, _ = _scaling_params(u, w, M)
    return Fraction(w * r, M * u * lcm(M, w))


def in_gamma_M(g: Mat2Q, M: int) -> bool:
    """Membership in diag(1,M) SL(2,Z) diag(1,1/M)."""
    return (
        g.a.denominator == 1
        and g.d.denominator == 1
        and (g.b * M).denominator == 1
        and (g.c / M).denominator == 1
    )


def sigma_inverse_decomposition(u: int, w: int, M: int, p: int) -> tuple[str, list[Mat2Q]]:
    """Factor sigma^-1 into matrices lying in K_p^(M).

    Returns ("three", factors) when v_p(w) <= v_p(M) and ("five", factors)
    otherwise.
    """
    r, s = _scaling_params(u, w, M)
    L = lcm(M, w)
    if vp(w, p) <= vp(M, p):
        factors = [upper(Fraction(-s, L)), flip(L), upper(Fraction(-u, w))]
        kind = "three"
    else:
        factors = [
            upper(Fraction(-r * w, L * M * u)),
            diagonal(Fraction(-w, L * u)),
            flip(M),
            upper(Fraction(w, u * M * M)),
            flip(M),
        ]
        kind = "five"
    prod = IDENTITY
    for f in factors:
        prod = prod @ f
    if prod != scaling_matrix(u, w, M).inverse():
        raise AssertionError("decomposition does not reproduce sigma^-1")
    return kind, factors


def cusps_of_gamma0(N: int) -> list[Cusp]:
    """Representatives u/w (w | N, u mod gcd(w, N/w)) of the cusps of Gamma_0(N)."""
    out = []
    for w in range(1, N + 1):
        if N % w:
            continue
        if w == N:
            out.append(Cusp(1, 0))
            continue
        g = gcd(w, N // w)
        for u in range(g if g > 1 else 1):
            if gcd(u, g) != 1:
                continue
            lift = u
            while gcd(lift, w) != 1:
                lift += g
            out.append(Cusp(lift, w))
    return out
