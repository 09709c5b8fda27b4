import random
from fractions import Fraction

import pytest

from thetacusp.characters import char_chi2, char_chi3, psi_j
from thetacusp.cyclotomic import I, Cyclo, e_p
from thetacusp.cyclotomic import sqrt_of_prime
from thetacusp.metaplectic import (
    IDENTITY,
    Diag,
    Flip,
    GeneratorWord,
    MembershipError,
    Upper,
    beta_v,
    diagonal,
    flip,
    upper,
)
from thetacusp.numeric_base import INF, eps_d
from thetacusp.theta_engine import m5_generator
from thetacusp.weil_local import (
    ZETA8,
    alpha_norm,
    change_of_basis,
    flip_on_phi_mu,
    from_B2,
    gauss_gamma,
    gauss_gamma_inf,
    gram_B1,
    mat_conj_transpose,
    mat_diag,
    mat_eq,
    mat_identity,
    mat_inverse,
    mat_mul,
    mat_scale,
    rho_B1,
    rho_generator,
    rho_generator_direct,
    rho_word,
    to_B2,
    xi2,
    xi3,
    xi_generator_value,
)

from helpers import p_integral, rand_kp, rand_token

PRIMES = [5, 7, 11, 13]


def test_gamma_examples():
    assert gauss_gamma(3, Fraction(1, 3)) == -I
    assert gauss_gamma(7, 49) == 1
    assert gauss_gamma(5, Fraction(3, 25)) == 1
    assert gauss_gamma(2, 1) == (1 - I) / sqrt_of_prime(2)
    assert gauss_gamma_inf(3) == ZETA8
    assert gauss_gamma_inf(-3) == ZETA8.conj()
    with pytest.raises(ValueError):
        gauss_gamma(5, 0)


def _rand_nonzero(rng, p):
    num = rng.choice([x for x in range(-200, 201) if x])
    return Fraction(num, rng.randint(1, 50)) * Fraction(p) ** rng.randint(-3, 3)


def test_gamma_eighth_root():
    rng = random.Random(2)
    for _ in range(100):
        p = rng.choice([2, 3, 5, 7, 11, 13])
        g = gauss_gamma(p, _rand_nonzero(rng, p))
        assert g**8 == 1


def test_gamma_local_constancy():
    rng = random.Random(4)
    for _ in range(100):
        p = rng.choice([2, 3, 5, 7, 11])
        a = _rand_nonzero(rng, p)
        t = p_integral(rng, p)
        b = a * (1 + p**3 * t)
        if b:
            assert gauss_gamma(p, a) == gauss_gamma(p, b)


def test_alpha_norm():
    assert alpha_norm(5, 1) == 1
    assert alpha_norm(2, 1) * alpha_norm(2, 1) == Fraction(1, 2)
    assert alpha_norm(INF, 3) * alpha_norm(INF, 3) == 6
    assert alpha_norm(3, Fraction(2, 9)) * alpha_norm(3, Fraction(2, 9)) == 9


def test_flip_scalars():
    assert flip_on_phi_mu(3, char_chi3())[0] == 1
    assert flip_on_phi_mu(5, psi_j(5, 2, 1))[0] == -1
    with pytest.raises(ValueError):
        flip_on_phi_mu(5, psi_j(5, 2, 0))


def test_flip_scalar_on_chi3_by_finite_fourier():
    # r(w) phi(x) = (eps_3 sqrt 3)^-1 sum_t phi(t) e_3(2xt/3) on functions constant mod 3
    chi = char_chi3()
    c = eps_d(3).inverse() / sqrt_of_prime(3)
    for x in range(3):
        total = sum((chi(t) * e_p(Fraction(2 * x * t, 3), 3) for t in range(3)), Cyclo.zero())
        assert c * total == chi(x) * flip_on_phi_mu(3, chi)[0]


def test_basis_data_p5():
    one = Cyclo.one()
    c = change_of_basis(5)
    assert mat_eq(c, [[one, one, 0 * one], [-one, one, 0 * one], [0 * one, one, one]])
    assert gram_B1(5) == [Fraction(2, 5), Fraction(2, 5), Fraction(1, 5)]


@pytest.mark.parametrize("p", PRIMES)
def test_change_of_basis_shape(p):
    c = change_of_basis(p)
    h = (p - 1) // 2
    assert all(c[i][h - 1] == 1 for i in range(h + 1))
    assert all(c[h][j] == 0 for j in range(h - 1))
    assert mat_eq(mat_mul(c, mat_inverse(c)), mat_identity(h + 1))
    assert sum(gram_B1(p)) == 1


def test_upper_example():
    m = rho_generator(5, Upper(Fraction(1)))
    expected = mat_diag([e_p(Fraction(1, 5), 5), e_p(Fraction(4, 5), 5), 1])
    assert mat_eq(m.entries, expected)


def test_flip_b2_p5():
    m = rho_generator(5, Flip(), "B2")
    r5 = sqrt_of_prime(5)
    one, zero = Cyclo.one(), Cyclo.zero()
    assert mat_eq(m.entries, [[-one, zero, zero], [zero, zero, r5.inverse()], [zero, r5, zero]])


@pytest.mark.parametrize("p", PRIMES)
def test_diag_eigenvalues(p):
    h = (p - 1) // 2
    for a in range(1, p):
        m = rho_generator(p, Diag(Fraction(a)), "B2").entries
        expected = [psi_j(p, None, j)(a) for j in range(1, h)] + [1, 1]
        assert mat_eq(m, mat_diag(expected))


@pytest.mark.parametrize("p", PRIMES)
def test_generator_formulas_match_direct_model(p):
    tokens = [Flip()] + [Upper(Fraction(x)) for x in range(p)] + [Diag(Fraction(a)) for a in range(1, p)]
    for t in tokens:
        assert rho_generator(p, t) == rho_generator_direct(p, t)


@pytest.mark.parametrize("x", [0, 1, 2, 3, 4, Fraction(1, 3), Fraction(-7, 2)])
def test_m5_upper_table(x):
    assert mat_eq(rho_generator(5, Upper(Fraction(x)), "B2").entries, m5_generator("upper", x))


@pytest.mark.parametrize("a", [1, 2, 3, 4, Fraction(3, 7)])
def test_m5_diag_table(a):
    assert mat_eq(rho_generator(5, Diag(Fraction(a)), "B2").entries, m5_generator("diag", a))


def test_m5_flip_table():
    assert mat_eq(rho_generator(5, Flip(), "B2").entries, m5_generator("flip"))


@pytest.mark.parametrize("p", [5, 7])
def test_rho_identity_and_sign(p):
    n = (p + 1) // 2
    assert mat_eq(rho_B1(p, IDENTITY, -1).entries, mat_scale(mat_identity(n), -1))
    f = rho_generator(p, Flip()).entries
    expected = mat_scale(mat_mul(f, f), beta_v(flip(p), flip(p), p))
    assert mat_eq(rho_B1(p, flip(p) @ flip(p)).entries, expected)


@pytest.mark.parametrize("p", [5, 7])
def test_word_independence(p):
    rng = random.Random(p)
    for _ in range(15):
        tokens = [rand_token(rng, p) for _ in range(rng.randint(1, 5))]
        word = GeneratorWord(p, p, tokens)
        g = word.product()
        assert rho_word(p, word) == rho_B1(p, g)
        assert rho_B1(p, g) == rho_B1(p, g, expand_diagonals=True)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_projective_law(p):
    rng = random.Random(100 + p)
    for _ in range(20):
        g1, g2 = rand_kp(rng, p, p), rand_kp(rng, p, p)
        lhs = rho_B1(p, g1) @ rho_B1(p, g2)
        assert lhs == rho_B1(p, g1 @ g2).scaled(beta_v(g1, g2, p))


def _gram_unitary(p, m):
    G = mat_diag(gram_B1(p))
    return mat_eq(mat_mul(mat_conj_transpose(m), mat_mul(G, m)), G)


@pytest.mark.parametrize("p", PRIMES)
def test_gram_unitarity_generators(p):
    for t in [Flip()] + [Upper(Fraction(x)) for x in range(p)] + [Diag(Fraction(a)) for a in range(1, p)]:
        assert _gram_unitary(p, rho_generator(p, t).entries)


def test_gram_unitarity_words():
    rng = random.Random(9)
    for _ in range(20):
        p = rng.choice([5, 7])
        assert _gram_unitary(p, rho_B1(p, rand_kp(rng, p, p)).entries)


def test_b2_view_round_trip():
    m = rho_generator(7, Flip())
    assert from_B2(to_B2(m)) == m


def test_rho_membership():
    with pytest.raises(MembershipError):
        rho_B1(5, upper(Fraction(1, 25)))
    with pytest.raises(ValueError):
        rho_generator(3, Flip())


def test_xi_examples():
    assert xi3(IDENTITY, -1) == -1
    assert xi2(IDENTITY, -1) == -1
    assert xi2(flip(8)) == -(1 + I) / sqrt_of_prime(2)
    assert xi3(diagonal(2)) == -1
    assert xi3(flip(3)) == 1
    assert xi2(upper(Fraction(1, 8))) == e_p(Fraction(1, 8), 2)
    assert xi3(upper(Fraction(1, 3))) == e_p(Fraction(1, 3), 3)


def test_xi2_diagonal_against_gamma_ratio():
    chi2 = char_chi2()
    for a in (1, 3, 5, 7, Fraction(-1, 3), Fraction(5, 11)):
        lhs = xi_generator_value(2, Diag(Fraction(a)))
        rhs = gauss_gamma(2, 1) / gauss_gamma(2, a) * chi2(int(Fraction(a).numerator * Fraction(a).denominator))
        assert lhs == rhs


@pytest.mark.parametrize("p,M,xi", [(2, 8, xi2), (3, 3, xi3)])
def test_xi_projective_law(p, M, xi):
    rng = random.Random(p)
    for _ in range(100):
        g1, g2 = rand_kp(rng, p, M), rand_kp(rng, p, M)
        v1, v2, v12 = xi(g1), xi(g2), xi(g1 @ g2)
        assert v1 * v2 == v12 * beta_v(g1, g2, p)
        assert v1.abs2() == 1
        assert xi(g1, 1, True) == v1


def test_xi_rejects_other_primes():
    with pytest.raises(ValueError):
        xi_generator_value(5, Flip())
