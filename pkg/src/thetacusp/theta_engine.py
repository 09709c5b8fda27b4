"""Exact Fourier coefficients of twisted theta functions at cusps.

For sigma in Gamma^(24), theta_chi sliced by sigma equals xi(sigma^-1) theta_chi,
where xi(g) = xi_2(g) xi_3(g) s_A(g) beta_inf(g^-1, g).  For a twist by an even
character psi_j mod p the slash mixes the theta functions attached to the
(p+1)/2 basis vectors of V, and the coefficients are read off from the
column rho_{B1,p}(sigma^-1) c e_j.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

from .characters import DirichletCharacter, char_chi12, least_primitive_root, psi_j
from .cyclotomic import Cyclo, I, e_inf_rat, e_p, root_of_unity, sqrt_of_prime
from .metaplectic import (
    Cusp,
    Diag,
    Upper,
    decompose_in_Kp,
    IDENTITY,
    Mat2Q,
    MembershipError,
    beta_v,
    check_in_Kp,
    cusps_of_gamma0,
    diagonal,
    flip,
    in_gamma_M,
    s_A,
    scaling_matrix,
    sigma0_shift,
    sigma_inverse_decomposition,
    upper,
)
from .numeric_base import INF, lcm, legendre, to_residue, vp
from .weil_local import (
    Matrix,
    change_of_basis,
    mat_identity,
    mat_mul,
    mat_scale,
    rho_B1,
    rho_B1_factors,
    xi2,
    xi3,
    xi_local_factors,
    box_index,
    word_value,
)

__all__ = [
    "CoeffResult",
    "Cusp",
    "ThetaTwist",
    "xi_global",
    "coeff_first_twist",
    "coeff_higher_twist",
    "coeff_sigma0_transfer",
    "gg_check",
]


@dataclass(frozen=True)
class CoeffResult:
    frequency: int
    exact: Cyclo
    approx: complex
    absolute: float

    @classmethod
    def of(cls, nu: int, exact: Cyclo) -> "CoeffResult":
        z = exact.embed()
        return cls(nu, exact, z, abs(z))


def _square_root(nu: int) -> int | None:
    if nu < 1:
        return None
    m = isqrt(nu)
    return m if m * m == nu else None


def xi_global(sigma: Mat2Q, path: str = "direct", factors: dict[int, Sequence[Mat2Q]] | None = None) -> Cyclo:
    """xi(sigma) = xi_2(sigma) xi_3(sigma) s_A(sigma) beta_inf(sigma^-1, sigma)."""
    check_in_Kp(sigma, 2, 8)
    check_in_Kp(sigma, 3, 3)
    if factors is not None:
        x2 = xi_local_factors(2, factors[2])
        x3 = xi_local_factors(3, factors[3])
    else:
        expand = path == "expanded"
        x2 = xi2(sigma, 1, expand)
        x3 = xi3(sigma, 1, expand)
    return x2 * x3 * (s_A(sigma) * beta_v(sigma.inverse(), sigma, INF))


def coeff_first_twist(sigma: Mat2Q, nu: int, xi_inv: Cyclo | None = None) -> CoeffResult:
    """A(sigma, nu) for theta_chi, chi the character mod 12."""
    if not in_gamma_M(sigma, 24):
        raise MembershipError("sigma is not in Gamma^(24)")
    m = _square_root(nu)
    if m is None:
        return CoeffResult.of(nu, Cyclo.zero())
    if xi_inv is None:
        xi_inv = xi_global(sigma.inverse())
    return CoeffResult.of(nu, xi_inv * char_chi12()(m))


def coeff_sigma0_transfer(result: CoeffResult, u: int, w: int, M: int) -> CoeffResult:
    """Coefficient at sigma0 from the coefficient at the scaling matrix."""
    t = sigma0_shift(u, w, M)
    return CoeffResult.of(result.frequency, result.exact * e_inf_rat(-result.frequency * t))


def residue_index(m: int, p: int) -> int:
    """0-based B1 index i(m): the box containing m."""
    return box_index(m, p)


def higher_twist_column(
    p: int, j: int, sigma: Mat2Q, g: int | None = None, factors: dict[int, Sequence[Mat2Q]] | None = None,
    path: str = "direct",
) -> tuple[Cyclo, list[Cyclo]]:
    """(xi(sigma^-1), rho_{B1,p}(sigma^-1) c e_j)."""
    if not 1 <= j <= (p - 3) // 2:
        raise ValueError(f"j must lie in 1..{(p - 3) // 2}")
    if not in_gamma_M(sigma, 24 * p):
        raise MembershipError(f"sigma is not in Gamma^({24 * p})")
    inv = sigma.inverse()
    if factors is not None:
        xi_inv = xi_global(inv, factors=factors)
        rho = rho_B1_factors(p, factors[p], g)
    else:
        xi_inv = xi_global(inv, path=path)
        rho = rho_B1(p, inv, 1, g, expand_diagonals=(path == "expanded"))
    c = change_of_basis(p, g)
    col = [row[j - 1] for row in mat_mul(rho.entries, c)]
    return xi_inv, col


def coeff_higher_twist(
    p: int, j: int, sigma: Mat2Q, nu: int, g: int | None = None,
    column: tuple[Cyclo, list[Cyclo]] | None = None,
) -> CoeffResult:
    """A(sigma, nu) for theta_{chi psi_j}; normalization constant 1."""
    if column is None:
        column = higher_twist_column(p, j, sigma, g)
    m = _square_root(nu)
    if m is None:
        return CoeffResult.of(nu, Cyclo.zero())
    xi_inv, col = column
    return CoeffResult.of(nu, xi_inv * char_chi12()(m) * col[residue_index(m, p)])


@dataclass
class ThetaTwist:
    """theta_chi (p None) or theta_{chi psi_j} with psi_j even mod p."""

    p: int | None = None
    j: int = 1
    g: int | None = None

    def __post_init__(self) -> None:
        if self.p is not None and self.g is None:
            self.g = least_primitive_root(self.p)

    @property
    def M(self) -> int:
        return 24 if self.p is None else 24 * self.p

    @property
    def level(self) -> int:
        return self.M * self.M

    def character(self) -> DirichletCharacter:
        chi = char_chi12()
        return chi if self.p is None else chi * psi_j(self.p, self.g, self.j)

    def cusps(self) -> list[Cusp]:
        return cusps_of_gamma0(self.level)

    def scaling_matrix(self, cusp: Cusp) -> Mat2Q:
        return scaling_matrix(cusp.u, cusp.w, self.M)

    def validate_cusp(self, cusp: Cusp) -> None:
        if not cusp.is_infinity and self.level % cusp.w:
            raise ValueError(f"denominator {cusp.w} does not divide the level {self.level}")

    def explicit_factors(self, cusp: Cusp) -> dict[int, list[Mat2Q]]:
        """Per-prime factorizations of sigma^-1 from the explicit decompositions."""
        primes = [2, 3] + ([] if self.p is None else [self.p])
        out: dict[int, list[Mat2Q]] = {}
        for q in primes:
            if cusp.is_infinity:
                out[q] = [IDENTITY]
            else:
                out[q] = sigma_inverse_decomposition(cusp.u, cusp.w, self.M, q)[1]
        return out

    def coefficients(self, cusp: Cusp, nus: Iterable[int], path: str = "direct") -> list[CoeffResult]:
        """Coefficient table at a cusp.

        ``path`` selects how sigma^-1 is factored: "direct" (one generator word
        per prime), "expanded" (diagonal tokens rewritten through unipotents and
        flips) or "factored" (explicit scaling-matrix decompositions).
        """
        self.validate_cusp(cusp)
        sigma = self.scaling_matrix(cusp)
        factors = self.explicit_factors(cusp) if path == "factored" else None
        nus = list(nus)
        if self.p is None:
            xi_inv = xi_global(sigma.inverse(), path=path, factors=factors)
            return [coeff_first_twist(sigma, nu, xi_inv) for nu in nus]
        column = higher_twist_column(self.p, self.j, sigma, self.g, factors, path)
        return [coeff_higher_twist(self.p, self.j, sigma, nu, self.g, column) for nu in nus]


# the five-twist in the three-function basis ---------------------------------------

def m5_generator(kind: str, x: Fraction | int = 0) -> Matrix:
    """Generator tables of M_5 in the basis (theta_{chi chi_5}, theta_chi, theta_chi^(5)).

    Written with cos_5(2 pi a/5) = (e_5(a/5) + e_5(-a/5))/2 and
    sin_5(2 pi a/5) = -(e_5(a/5) - e_5(-a/5))/(2i).
    """
    one, zero = Cyclo.one(), Cyclo.zero()
    if kind == "upper":
        ep, em = e_p(Fraction(x) / 5, 5), e_p(-Fraction(x) / 5, 5)
        cos5 = (ep + em) * Fraction(1, 2)
        sin5 = -(ep - em) / (I * 2)
        return [[cos5, -I * sin5, zero], [-I * sin5, cos5, zero], [I * sin5, one - cos5, one]]
    if kind == "diag":
        return [[Cyclo.from_rational(legendre(to_residue(x, 5), 5)), zero, zero], [zero, one, zero], [zero, zero, one]]
    if kind == "flip":
        r5 = sqrt_of_prime(5)
        return [[-one, zero, zero], [zero, zero, r5.inverse()], [zero, r5, zero]]
    raise ValueError(kind)


def m5_matrix(gmat: Mat2Q) -> Matrix:
    """M_5 on K_5^(5) assembled from the three generator tables and beta_5."""
    word = decompose_in_Kp(gmat, 5, 5)

    def value(t):
        if isinstance(t, Upper):
            return m5_generator("upper", t.x)
        if isinstance(t, Diag):
            return m5_generator("diag", t.u)
        return m5_generator("flip")

    vals, sign = word_value(word.tokens, 5, 5, value, mat_identity(3), mat_mul)
    return mat_scale(vals, sign)


def five_twist_three_column(sigma: Mat2Q, nus: Iterable[int]) -> list[CoeffResult]:
    """Five-twist coefficients from the first column of M(sigma^-1)."""
    inv = sigma.inverse()
    scalar = xi2(inv) * xi3(inv) * (s_A(inv) * beta_v(sigma, inv, INF))
    M = m5_matrix(inv)
    c1, c2, c3 = (M[i][0] * scalar for i in range(3))
    chi = char_chi12()
    out = []
    for nu in nus:
        m = _square_root(nu)
        if m is None:
            out.append(CoeffResult.of(nu, Cyclo.zero()))
        elif m % 5:
            chi5 = 1 if m % 5 in (1, 4) else -1
            out.append(CoeffResult.of(nu, chi(m) * (c1 * chi5 + c2)))
        else:
            out.append(CoeffResult.of(nu, chi(m) * (c2 + c3)))
    return out


# Goldfeld-Gunnells pattern check -------------------------------------------------

def _sin_exact(num: int, den: int) -> Cyclo:
    """sin(2 pi num/den) in Q(zeta)."""
    z = root_of_unity(den, num)
    return (z - z.conj()) / (I * 2)


def gg_constants() -> tuple[Cyclo, Cyclo]:
    """a = 2 sin(4 pi/5)/sqrt 5 and b = 2 sin(2 pi/5)/sqrt 5, exactly."""
    r5 = sqrt_of_prime(5)
    a = _sin_exact(2, 5) * 2 / r5
    b = _sin_exact(1, 5) * 2 / r5
    return a, b


@dataclass
class GGCuspReport:
    cusp: Cusp
    case: str
    pattern: str
    ok: bool
    unit_abs: list[float] = field(default_factory=list)
    zero_abs: float = 0.0


@dataclass
class GGReport:
    cusps: list[GGCuspReport]
    product_ok: bool

    @property
    def ok(self) -> bool:
        return self.product_ok and all(c.ok for c in self.cusps)

    def failures(self) -> list[GGCuspReport]:
        return [c for c in self.cusps if not c.ok]


GG_FLOAT_A = 0.5257311121
GG_FLOAT_B = 0.8506508083
GG_TOL = 1e-9


def _classify(vals: dict[int, Cyclo], w: int) -> tuple[str, str, bool]:
    a, b = gg_constants()
    a2, b2 = a * a, b * b
    units = [vals[m] for m in vals if m % 5]
    zeros = [vals[m] for m in vals if m % 5 == 0]
    ua = [x.abs2() for x in units]
    za = [x.abs2() for x in zeros]
    v5 = vp(w, 5) if w else 2  # infinity is 1/14400
    if v5 != 1:
        case = "5 does not divide w" if v5 == 0 else "25 divides w"
        ok = all(x == 1 for x in ua) and all(x == 0 for x in za)
        return case, "(1, 0)", ok
    fu = [abs(x.embed()) for x in units]
    fz = [abs(x.embed()) for x in zeros]
    if all(x == a2 for x in ua) and all(x == b2 * 4 for x in za):
        floats = all(abs(x - GG_FLOAT_A) < GG_TOL for x in fu) and all(abs(x - 2 * GG_FLOAT_B) < GG_TOL for x in fz)
        return "5 exactly divides w", "(a, 2b)", floats
    if all(x == b2 for x in ua) and all(x == a2 * 4 for x in za):
        floats = all(abs(x - GG_FLOAT_B) < GG_TOL for x in fu) and all(abs(x - 2 * GG_FLOAT_A) < GG_TOL for x in fz)
        return "5 exactly divides w", "(b, 2a)", floats
    return "5 exactly divides w", "none", False


def gg_product_check(u: int, w: int) -> bool:
    """Check the explicit flip * diag * unipotent product for a cusp with 25 not dividing w.

    The first column must have entries of absolute values
    |cos_5(2 pi u/w)|, |sin_5(2 pi u/w)|/sqrt 5 and sqrt 5 |sin_5(2 pi u/w)|
    (the first scaled by |chi_5([24, w_1])|).
    """
    w1 = w // gcd(w, 5)
    L = lcm(24, w1)
    prod = mat_mul(mat_mul(m5_matrix(flip(5)), m5_matrix(diagonal(L))), m5_matrix(upper(Fraction(-u, w))))
    sign = beta_v(flip(5), diagonal(L), 5) * beta_v(flip(5) @ diagonal(L), upper(Fraction(-u, w)), 5)
    prod = mat_scale(prod, sign)
    x = Fraction(u, w)
    ep, em = e_p(x, 5), e_p(-x, 5)
    cos5 = (ep + em) * Fraction(1, 2)
    sin5 = -(ep - em) / (I * 2)
    r5 = sqrt_of_prime(5)
    chi5 = legendre(L, 5)
    expected = [
        [-cos5 * chi5, -I * sin5 * chi5, Cyclo.zero()],
        [I * sin5 / r5, (1 - cos5) / r5, r5.inverse()],
        [r5 * I * sin5, r5 * cos5, Cyclo.zero()],
    ]
    return all(prod[i][0].abs2() == expected[i][0].abs2() for i in range(3))


def gg_check(p: int = 5, sample: Sequence[int] = (1, 5, 7, 11, 13, 17, 19, 23, 25, 29)) -> GGReport:
    """Classify |A(sigma, m^2)| at every cusp of Gamma_0(14400)."""
    if p != 5:
        raise ValueError("the conjectured patterns are stated for p = 5")
    twist = ThetaTwist(5, 1)
    reports = []
    for cusp in twist.cusps():
        sigma = twist.scaling_matrix(cusp)
        column = higher_twist_column(5, 1, sigma, twist.g)
        vals = {m: coeff_higher_twist(5, 1, sigma, m * m, twist.g, column).exact for m in sample if gcd(m, 6) == 1}
        case, pattern, ok = _classify(vals, cusp.w)
        reports.append(
            GGCuspReport(
                cusp,
                case,
                pattern,
                ok,
                [abs(v.embed()) for m, v in vals.items() if m % 5],
                max((abs(v.embed()) for m, v in vals.items() if m % 5 == 0), default=0.0),
            )
        )
    product_ok = all(
        gg_product_check(c.u, c.w) for c in twist.cusps() if not c.is_infinity and c.w % 25 != 0
    )
    return GGReport(reports, product_ok)
