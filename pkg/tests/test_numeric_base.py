import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from thetacusp.cyclotomic import I, Cyclo
from thetacusp.numeric_base import (
    INF,
    Place,
    Q,
    eps_d,
    factorize,
    frac_p,
    hilbert_symbol,
    is_prime,
    jacobi,
    kronecker,
    legendre,
    to_residue,
    unit_part,
    vp,
)

from helpers import hilbert_bruteforce

PLACES = [INF, 2, 3, 5, 7, 11, 13]
nonzero_rationals = st.builds(
    Fraction,
    st.integers(-500, 500).filter(bool),
    st.integers(1, 500),
)


def test_rational_parsing():
    assert Q("3/6") == Fraction(1, 2)
    assert Q(4, 6) == Fraction(2, 3)


def test_primes_and_factorization():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert factorize(14400) == {2: 6, 3: 2, 5: 2}


def test_valuation_examples():
    assert vp(Fraction(50, 3), 5) == 2
    assert vp(Fraction(50, 3), 3) == -1
    assert unit_part(Fraction(-50, 3), 5) == Fraction(-2, 3)
    with pytest.raises(ValueError):
        vp(0, 5)


def test_frac_p_examples():
    assert frac_p(Fraction(1, 5), 5) == Fraction(1, 5)
    assert frac_p(Fraction(7, 5), 5) == Fraction(2, 5)
    assert frac_p(Fraction(1, 10), 5) == Fraction(3, 5)  # 1/10 = 3/5 - 1/2, and 1/2 is 5-integral
    assert frac_p(Fraction(1, 3), 5) == 0


@given(nonzero_rationals, st.sampled_from([2, 3, 5, 7]))
def test_frac_p_properties(x, p):
    f = frac_p(x, p)
    assert 0 <= f < 1
    assert f.denominator == p ** max(0, -vp(x, p))
    rest = x - f
    assert rest == 0 or vp(rest, p) >= 0


@given(nonzero_rationals, nonzero_rationals, st.sampled_from([2, 3, 5]))
def test_frac_p_additive_mod_integers(x, y, p):
    d = frac_p(x + y, p) - frac_p(x, p) - frac_p(y, p)
    assert d in (0, -1)


def test_residue_symbols():
    assert legendre(2, 7) == 1
    assert legendre(3, 7) == -1
    assert legendre(14, 7) == 0
    assert jacobi(2, 15) == 1
    assert kronecker(5, 2) == -1
    assert kronecker(-1, 3) == -1
    assert kronecker(3, -1) == 1
    assert kronecker(-3, -1) == -1


def test_eps_d():
    assert eps_d(5) == Cyclo.one()
    assert eps_d(3) == I
    assert eps_d(-1) == I
    with pytest.raises(ValueError):
        eps_d(4)


@pytest.mark.parametrize(
    "a,b,p,expected",
    # frozen from the brute-force solver in helpers.py
    [
        (2, 3, 3, -1), (-1, -1, 2, -1), (2, 5, 5, -1), (5, 5, 5, 1), (3, 7, 7, -1),
        (-1, 3, 3, -1), (2, 3, 2, -1), (5, -3, 2, 1), (3, 3, 2, -1), (-1, 2, 2, 1),
        (6, 10, 5, 1), (7, -7, 7, 1), (10, 15, 5, 1), (-2, -5, 2, 1), (12, 18, 3, -1),
    ],
)
def test_hilbert_frozen(a, b, p, expected):
    assert hilbert_symbol(a, b, p) == expected


def test_hilbert_infinite_place():
    assert hilbert_symbol(-1, -1, INF) == -1
    assert hilbert_symbol(-1, 3, INF) == 1
    assert hilbert_symbol(Fraction(-1, 2), Fraction(-3, 7), None) == -1
    assert hilbert_symbol(2, 3, Place(5)) == 1


@settings(max_examples=200)
@given(nonzero_rationals, nonzero_rationals, st.sampled_from(PLACES))
def test_hilbert_symmetric(a, b, v):
    assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)


@settings(max_examples=200)
@given(nonzero_rationals, nonzero_rationals, nonzero_rationals, st.sampled_from(PLACES))
def test_hilbert_bimultiplicative(a, b, c, v):
    assert hilbert_symbol(a * b, c, v) == hilbert_symbol(a, c, v) * hilbert_symbol(b, c, v)


@given(nonzero_rationals, nonzero_rationals)
def test_hilbert_standard_identities(a, b):
    for v in PLACES:
        assert hilbert_symbol(a, -a, v) == 1
        assert hilbert_symbol(a, 1 - a, v) == 1 if a != 1 else True
        assert hilbert_symbol(a, b * b, v) == 1


def _primes_of(*xs):
    out = set()
    for x in xs:
        out.update(factorize(abs(x.numerator)))
        out.update(factorize(x.denominator))
    return out | {2}


@settings(max_examples=200)
@given(nonzero_rationals, nonzero_rationals)
def test_hilbert_product_formula(a, b):
    prod = hilbert_symbol(a, b, INF)
    for p in _primes_of(a, b):
        prod *= hilbert_symbol(a, b, p)
    # every other prime sees two units, where the symbol is 1
    for p in (17, 19, 23):
        if p not in _primes_of(a, b):
            assert hilbert_symbol(a, b, p) == 1
    assert prod == 1


def test_hilbert_matches_bruteforce_small():
    rng = random.Random(3)
    for _ in range(150):
        p = rng.choice([2, 3, 5, 7])
        a = rng.choice([x for x in range(-30, 31) if x])
        b = rng.choice([x for x in range(-30, 31) if x])
        assert hilbert_symbol(a, b, p) == hilbert_bruteforce(a, b, p), (a, b, p)


def test_hilbert_rejects_zero():
    with pytest.raises(ValueError):
        hilbert_symbol(0, 3, 5)


def test_to_residue():
    assert to_residue(Fraction(1, 3), 8) == 3
    assert to_residue(-1, 16) == 15
