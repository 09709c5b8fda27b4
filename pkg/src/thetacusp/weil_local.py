"""Local Weil-representation data at finite primes.

The invariant space V at a prime p >= 5 has two bases:

* B1: indicators of the boxes {x in Z_p : x^2 = i^2 mod p}, i = 1..(p-1)/2,
  followed by the indicator of pZ_p;
* B2: phi^{psi_j} for j = 1..(p-3)/2, then the indicator of Z_p, then the
  indicator of pZ_p.

All representation matrices are stored in B1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .characters import DirichletCharacter, char_chi2, char_chi3, least_primitive_root, psi_j, tau
from .cyclotomic import Cyclo, I, e_p, root_of_unity, sqrt_of_prime, sqrt_rational
from .metaplectic import (
    Diag,
    Flip,
    GeneratorWord,
    IDENTITY,
    Mat2Q,
    Token,
    Upper,
    beta_v,
    decompose_in_Kp,
)
from .numeric_base import (
    PlaceLike,
    RationalLike,
    as_place,
    eps_d,
    is_prime,
    kronecker,
    legendre,
    to_residue,
    unit_part,
    vp,
)

Matrix = list[list[Cyclo]]

ZETA8 = root_of_unity(8, 1)


# matrix helpers ----------------------------------------------------------------

def mat_identity(n: int) -> Matrix:
    return [[Cyclo.one() if i == j else Cyclo.zero() for j in range(n)] for i in range(n)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, m, k = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = Cyclo.zero()
            for t in range(m):
                if A[i][t] and B[t][j]:
                    acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_scale(A: Matrix, s: Cyclo | int) -> Matrix:
    return [[x * s for x in row] for row in A]


def mat_conj_transpose(A: Matrix) -> Matrix:
    return [[A[j][i].conj() for j in range(len(A))] for i in range(len(A[0]))]


def mat_eq(A: Matrix, B: Matrix) -> bool:
    return len(A) == len(B) and all(x == y for ra, rb in zip(A, B) for x, y in zip(ra, rb))


def mat_inverse(A: Matrix) -> Matrix:
    """Gauss-Jordan inverse over a cyclotomic field."""
    n = len(A)
    aug = [list(row) + mat_identity(n)[i] for i, row in enumerate(A)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def mat_diag(entries: Sequence[Cyclo | int]) -> Matrix:
    n = len(entries)
    return [[Cyclo.coerce(entries[i]) if i == j else Cyclo.zero() for j in range(n)] for i in range(n)]


@dataclass
class WeilMatrix:
    p: int
    basis: str
    entries: Matrix

    def __matmul__(self, other: "WeilMatrix") -> "WeilMatrix":
        if self.basis != other.basis or self.p != other.p:
            raise ValueError("basis mismatch")
        return WeilMatrix(self.p, self.basis, mat_mul(self.entries, other.entries))

    def scaled(self, s: Cyclo | int) -> "WeilMatrix":
        return WeilMatrix(self.p, self.basis, mat_scale(self.entries, s))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeilMatrix):
            return NotImplemented
        return self.p == other.p and self.basis == other.basis and mat_eq(self.entries, other.entries)

    __hash__ = None

    @property
    def dim(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "basis": self.basis,
            "exact": [[x.to_json() for x in row] for row in self.entries],
            "re": [[x.embed().real for x in row] for row in self.entries],
            "im": [[x.embed().imag for x in row] for row in self.entries],
        }


# Weil constants --------------------------------------------------------------

def gauss_gamma(p: int, a: RationalLike) -> Cyclo:
    """The Weil index gamma(e_{p,a}) for nonzero rational a viewed in Q_p."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("gamma needs a nonzero argument")
    r = vp(a, p)
    alpha = unit_part(a, p)
    if p == 2:
        star = to_residue(alpha, 16)
        neg = (-star) % 16
        eps_inv = Cyclo.one() if neg % 4 == 1 else -I
        sign = kronecker(2, neg) ** (r % 2)
        return ZETA8 * eps_inv * sign
    if r % 2 == 0:
        return Cyclo.one()
    star = to_residue(alpha, p**3)
    sym = legendre(-star, p)
    return Cyclo.from_rational(sym) if p % 4 == 1 else I * sym


def gauss_gamma_inf(a: RationalLike) -> Cyclo:
    """The archimedean Weil index exp(sign(a) pi i / 4)."""
    return ZETA8 if Fraction(a) > 0 else ZETA8.conj()


def alpha_norm(v: PlaceLike, a: RationalLike) -> Cyclo:
    """|2a|_v^(1/2) as an exact positive algebraic number."""
    a = Fraction(a)
    v = as_place(v)
    if v.is_infinite:
        return sqrt_rational(abs(2 * a))
    return sqrt_rational(Fraction(v.prime) ** (-vp(2 * a, v.prime)))


def flip_on_phi_mu(p: int, mu: DirichletCharacter) -> tuple[Cyclo, DirichletCharacter]:
    """Scalar by which the flip [[0,1/p^f],[-p^f,0]] sends phi^mu to phi^(conj mu)."""
    f = vp(mu.modulus, p)
    if f < 1 or p**f != mu.modulus:
        raise ValueError("character modulus must be a power of p")
    if not mu.is_primitive():
        raise ValueError("character must be primitive")
    sign = legendre(-1, p) ** f
    num = tau(mu, p) * mu(2).conj() * sign
    den = sqrt_rational(Fraction(p) ** f) * gauss_gamma(p, Fraction(1, p**f))
    return num / den, mu.conj()


# the space V -------------------------------------------------------------------

def _check_p(p: int) -> None:
    if not is_prime(p) or p < 5:
        raise ValueError("the invariant space V needs a prime p >= 5")


def dim_V(p: int) -> int:
    return (p + 1) // 2


def box_index(x: int, p: int) -> int:
    """0-based B1 index of the box containing the integer x."""
    x %= p
    if x == 0:
        return (p - 1) // 2
    for i in range(1, (p - 1) // 2 + 1):
        if (i * i - x * x) % p == 0:
            return i - 1
    raise AssertionError("unreachable")


def gram_B1(p: int) -> list[Fraction]:
    """Diagonal of the L^2 Gram matrix of B1."""
    _check_p(p)
    return [Fraction(2, p)] * ((p - 1) // 2) + [Fraction(1, p)]


@lru_cache(maxsize=None)
def _psis(p: int, g: int) -> tuple[DirichletCharacter, ...]:
    return tuple(psi_j(p, g, j) for j in range((p - 1) // 2))


def _default_g(p: int, g: int | None) -> int:
    return least_primitive_root(p) if g is None else g


@lru_cache(maxsize=None)
def _change_of_basis(p: int, g: int) -> tuple[Matrix, Matrix]:
    _check_p(p)
    h = (p - 1) // 2
    psis = _psis(p, g)
    n = h + 1
    c = [[Cyclo.zero() for _ in range(n)] for _ in range(n)]
    for i in range(1, h + 1):
        for j in range(1, h):
            c[i - 1][j - 1] = psis[j](i)
        c[i - 1][h - 1] = Cyclo.one()
    c[h][h - 1] = Cyclo.one()
    c[h][h] = Cyclo.one()
    return c, mat_inverse(c)


def change_of_basis(p: int, g: int | None = None) -> Matrix:
    """Matrix whose columns express the B2 vectors in B1."""
    return _change_of_basis(p, _default_g(p, g))[0]


def to_B2(m: WeilMatrix, g: int | None = None) -> WeilMatrix:
    c, cinv = _change_of_basis(m.p, _default_g(m.p, g))
    return WeilMatrix(m.p, "B2", mat_mul(cinv, mat_mul(m.entries, c)))


def from_B2(m: WeilMatrix, g: int | None = None) -> WeilMatrix:
    c, cinv = _change_of_basis(m.p, _default_g(m.p, g))
    return WeilMatrix(m.p, "B1", mat_mul(c, mat_mul(m.entries, cinv)))


@lru_cache(maxsize=None)
def _upper_B1(p: int, x_mod_p: int) -> Matrix:
    h = (p - 1) // 2
    return mat_diag([e_p(Fraction(i * i * x_mod_p, p), p) for i in range(1, h + 1)] + [1])


@lru_cache(maxsize=None)
def _diag_B2(p: int, g: int, a_mod_p: int) -> Matrix:
    psis = _psis(p, g)
    return mat_diag([psis[j](a_mod_p) for j in range(1, (p - 1) // 2)] + [1, 1])


@lru_cache(maxsize=None)
def _flip_B2(p: int, g: int) -> Matrix:
    h = (p - 1) // 2
    n = h + 1
    psis = _psis(p, g)
    m = [[Cyclo.zero() for _ in range(n)] for _ in range(n)]
    for j in range(1, h):
        scalar, _ = flip_on_phi_mu(p, psis[j])
        # conj psi_j = psi_{h - j}
        m[h - j - 1][j - 1] = scalar
    gam = gauss_gamma(p, Fraction(1, p))
    sign = legendre(-1, p)
    root = sqrt_of_prime(p)
    m[h][h - 1] = root * sign / gam
    m[h - 1][h] = Cyclo.one() * sign / (root * gam)
    return m


@lru_cache(maxsize=None)
def _diag_B1(p: int, g: int, a_mod_p: int) -> Matrix:
    c, cinv = _change_of_basis(p, g)
    return mat_mul(c, mat_mul(_diag_B2(p, g, a_mod_p), cinv))


@lru_cache(maxsize=None)
def _flip_B1(p: int, g: int) -> Matrix:
    c, cinv = _change_of_basis(p, g)
    return mat_mul(c, mat_mul(_flip_B2(p, g), cinv))


def rho_generator(p: int, token: Token, basis: str = "B1", g: int | None = None) -> WeilMatrix:
    """Matrix of a K_p^(p) generator acting on V."""
    _check_p(p)
    g = _default_g(p, g)
    if isinstance(token, Upper):
        m = WeilMatrix(p, "B1", _upper_B1(p, to_residue(token.x, p)))
    elif isinstance(token, Diag):
        m = WeilMatrix(p, "B1", _diag_B1(p, g, to_residue(token.u, p)))
    elif isinstance(token, Flip):
        m = WeilMatrix(p, "B1", _flip_B1(p, g))
    else:
        raise TypeError(f"unknown token {token!r}")
    if basis == "B2":
        return to_B2(m, g)
    if basis != "B1":
        raise ValueError("basis must be B1 or B2")
    return m


def word_value(
    tokens: Sequence[Token],
    M: int,
    p: int,
    value: Callable[[Token], object],
    one: object,
    mul: Callable[[object, object], object],
) -> tuple[object, int]:
    """Product of generator values along a word plus the accumulated cocycle sign."""
    acc = one
    prefix = IDENTITY
    sign = 1
    for t in tokens:
        m = t.matrix(M)
        if prefix is not IDENTITY:
            sign *= beta_v(prefix, m, p)
        prefix = prefix @ m
        acc = mul(acc, value(t))
    return acc, sign


def rho_word(p: int, word: GeneratorWord, zeta: int = 1, g: int | None = None) -> WeilMatrix:
    vals, sign = word_value(
        word.tokens,
        word.M,
        p,
        lambda t: rho_generator(p, t, "B1", g).entries,
        mat_identity(dim_V(p)),
        mat_mul,
    )
    return WeilMatrix(p, "B1", mat_scale(vals, sign * zeta))


def rho_B1(p: int, gmat: Mat2Q, zeta: int = 1, g: int | None = None, expand_diagonals: bool = False) -> WeilMatrix:
    """rho_{B1,p}(gmat, zeta) for gmat in K_p^(p)."""
    _check_p(p)
    return rho_word(p, decompose_in_Kp(gmat, p, p, expand_diagonals), zeta, g)


def rho_B1_factors(p: int, factors: Sequence[Mat2Q], g: int | None = None) -> WeilMatrix:
    """rho_{B1,p} of a product, evaluated factor by factor with cocycle corrections."""
    out = mat_identity(dim_V(p))
    prefix = IDENTITY
    sign = 1
    for f in factors:
        if prefix is not IDENTITY:
            sign *= beta_v(prefix, f, p)
        prefix = prefix @ f
        out = mat_mul(out, rho_B1(p, f, 1, g).entries)
    return WeilMatrix(p, "B1", mat_scale(out, sign))


# direct finite-Fourier model in B1, used as an independent check -------------------

def rho_generator_direct(p: int, token: Token) -> WeilMatrix:
    _check_p(p)
    h = (p - 1) // 2
    n = h + 1
    m = [[Cyclo.zero() for _ in range(n)] for _ in range(n)]
    if isinstance(token, Upper):
        return WeilMatrix(p, "B1", _upper_B1(p, to_residue(token.x, p)))
    if isinstance(token, Diag):
        a = to_residue(token.u, p)
        ainv = pow(a, -1, p)
        for j in range(1, h + 1):
            # f(a x) is supported where a x lies in box j
            m[box_index(j * ainv, p)][j - 1] = Cyclo.one()
        m[h][h] = Cyclo.one()
        return WeilMatrix(p, "B1", m)
    # r(w) f(x) = (1/(eps_p sqrt p)) sum_t f(t) e_p(2xt/p)
    c = eps_d(p).inverse() / sqrt_of_prime(p)
    for j in range(1, h + 1):
        for i in range(1, h + 1):
            m[i - 1][j - 1] = c * (e_p(Fraction(2 * i * j, p), p) + e_p(Fraction(-2 * i * j, p), p))
        m[h][j - 1] = c * 2
    for i in range(n):
        m[i][h] = c
    return WeilMatrix(p, "B1", m)


# the characters xi_2 and xi_3 --------------------------------------------------

def xi_generator_value(p: int, token: Token) -> Cyclo:
    """Generator values of xi_2 (on K_2^(8)) and xi_3 (on K_3^(3))."""
    if p == 2:
        if isinstance(token, Upper):
            return e_p(Fraction(token.x) / 8, 2)
        if isinstance(token, Diag):
            a = to_residue(token.u, 4)
            return -I * eps_d(-a) * char_chi2()(a)
        return -ZETA8
    if p == 3:
        if isinstance(token, Upper):
            return e_p(Fraction(token.x) / 3, 3)
        if isinstance(token, Diag):
            return char_chi3()(to_residue(token.u, 3))
        return Cyclo.one()
    raise ValueError("xi is defined at p = 2 and p = 3 only")


XI_LEVEL = {2: 8, 3: 3}


def xi_word(p: int, word: GeneratorWord, zeta: int = 1) -> Cyclo:
    val, sign = word_value(
        word.tokens, word.M, p, lambda t: xi_generator_value(p, t), Cyclo.one(), lambda x, y: x * y
    )
    return val * (sign * zeta)


def xi_local(p: int, gmat: Mat2Q, zeta: int = 1, expand_diagonals: bool = False) -> Cyclo:
    return xi_word(p, decompose_in_Kp(gmat, p, XI_LEVEL[p], expand_diagonals), zeta)


def xi2(gmat: Mat2Q, zeta: int = 1, expand_diagonals: bool = False) -> Cyclo:
    return xi_local(2, gmat, zeta, expand_diagonals)


def xi3(gmat: Mat2Q, zeta: int = 1, expand_diagonals: bool = False) -> Cyclo:
    return xi_local(3, gmat, zeta, expand_diagonals)


def xi_local_factors(p: int, factors: Sequence[Mat2Q]) -> Cyclo:
    out = Cyclo.one()
    prefix = IDENTITY
    sign = 1
    for f in factors:
        if prefix is not IDENTITY:
            sign *= beta_v(prefix, f, p)
        prefix = prefix @ f
        out = out * xi_local(p, f)
    return out * sign
