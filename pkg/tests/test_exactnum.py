from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pamreach.errors import EnumerationTooLarge, UnfactorableCoefficient, ZeroHasNoWeight
from pamreach.exactnum import (
    INFINITE,
    PrimeBasis,
    basis_for,
    enumerate_bounded_weight,
    extend_basis,
    factor_integer,
    is_prime,
    m_weight,
    m_weight_vector,
    padic_weight,
    valuation,
    weight_lower_bound,
)

from .oracles import naive_valuation, naive_weight, small_primes

nonzero = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6).filter(lambda x: x != 0)


@pytest.mark.parametrize(
    "x, p, expected",
    [(12, 2, -2), (Fraction(1, 8), 2, 3), (Fraction(5, 6), 3, 1)],
)
def test_padic_weight_examples(x, p, expected):
    assert padic_weight(x, p) == expected


def test_zero_has_no_weight():
    with pytest.raises(ZeroHasNoWeight):
        padic_weight(0, 2)
    with pytest.raises(ZeroHasNoWeight):
        m_weight_vector(0, PrimeBasis.of(2))


def test_m_weight_vector_examples():
    b = PrimeBasis.of(2, 3)
    v = m_weight_vector(Fraction(5, 6), b)
    assert (v.per_prime, v.m_weight, v.residual) == ((1, 1), 1, False)
    v = m_weight_vector(Fraction(9, 4), b)
    assert (v.per_prime, v.m_weight) == ((2, -2), 2)
    v = m_weight_vector(Fraction(1, 5), b)
    assert v.residual and v.m_weight == INFINITE


@given(st.integers(min_value=1, max_value=10**40), st.sampled_from([2, 3, 5, 7, 101]))
def test_valuation_matches_naive(n, p):
    assert valuation(n, p) == naive_valuation(n, p)


@given(st.integers(min_value=0, max_value=3000), st.sampled_from([3, 5, 7]))
def test_valuation_of_large_powers(k, p):
    assert valuation(p**k * 11, p) == k


def test_is_prime_agrees_with_sieve():
    sieve = set(small_primes(5000))
    assert [n for n in range(5000) if is_prime(n)] == sorted(sieve)
    assert is_prime(2**61 - 1)
    assert not is_prime((2**31 - 1) * (2**61 - 1))


def test_factor_integer():
    assert factor_integer(360) == {2: 3, 3: 2, 5: 1}
    assert factor_integer(-(2**89 - 1)) == {2**89 - 1: 1}
    with pytest.raises(UnfactorableCoefficient):
        factor_integer((10**9 + 7) * (10**9 + 9), trial_bound=100)


def test_basis_helpers():
    assert basis_for([Fraction(3, 2), Fraction(-2), Fraction(2, 5)]).primes == (2, 3, 5)
    assert basis_for([1, 0]).primes == (2,)
    assert extend_basis(PrimeBasis.of(2), Fraction(1, 14)).primes == (2, 7)
    with pytest.raises(ValueError):
        PrimeBasis((3, 2))
    with pytest.raises(ValueError):
        PrimeBasis((2, 4))


@pytest.mark.parametrize("a, primes, expected", [(1, (2,), -1), (2, (2, 3), -6), (3, (2,), -3)])
def test_weight_lower_bound_examples(a, primes, expected):
    assert weight_lower_bound(a, PrimeBasis(primes)) == expected


@pytest.mark.parametrize("a, primes", [(1, (2,)), (2, (2, 3)), (3, (2,)), (2, (2, 3, 5)), (3, (3,))])
def test_weight_lower_bound_holds_on_every_small_weight_point(a, primes):
    basis = PrimeBasis(primes)
    b = weight_lower_bound(a, basis)
    q = basis.m ** (a - 1)
    for j in range(1, q + 1):
        x = Fraction(j, q)
        if naive_weight(x, basis) < a:
            for p in small_primes(max(j, 2) + 1):
                assert naive_valuation(x.denominator, p) - naive_valuation(x.numerator, p) >= b


@pytest.mark.parametrize(
    "a, primes, expected",
    [
        (1, (2, 3), {Fraction(0), Fraction(1)}),
        (2, (2,), {Fraction(0), Fraction(1, 2), Fraction(1)}),
        (2, (2, 3), {Fraction(j, 6) for j in range(7)}),
    ],
)
def test_enumerate_examples(a, primes, expected):
    assert enumerate_bounded_weight(a, PrimeBasis(primes)) == expected


def test_enumeration_cap():
    with pytest.raises(EnumerationTooLarge):
        enumerate_bounded_weight(12, PrimeBasis.of(2, 3), cap=10**6)


# algebraic properties of the weights
@given(nonzero, nonzero, st.sampled_from([2, 3, 5]))
def test_weight_of_product_is_sum(x, y, p):
    assert padic_weight(x * y, p) == padic_weight(x, p) + padic_weight(y, p)


@given(nonzero, nonzero, st.sampled_from([2, 3, 5]))
def test_smaller_weight_is_absorbed(x, y, p):
    if padic_weight(x, p) < padic_weight(y, p):
        assert padic_weight(x + y, p) == padic_weight(y, p)


@given(nonzero, nonzero, st.sampled_from([2, 3, 5]))
def test_equal_weights_do_not_grow(x, y, p):
    if padic_weight(x, p) == padic_weight(y, p) and x + y != 0:
        assert padic_weight(x + y, p) <= padic_weight(x, p)


@given(nonzero, st.integers(min_value=1, max_value=12), st.sampled_from([2, 3, 5]))
def test_weight_of_power(x, r, p):
    assert padic_weight(x**r, p) == r * padic_weight(x, p)


@given(
    st.lists(st.integers(min_value=-8, max_value=8), min_size=3, max_size=3),
    st.sampled_from([1, -1]),
)
def test_reconstruction_from_weights(exps, sign):
    basis = PrimeBasis.of(2, 3, 5)
    x = Fraction(sign)
    for p, e in zip(basis.primes, exps):
        x *= Fraction(p) ** e
    v = m_weight_vector(x, basis)
    assert not v.residual
    rebuilt = Fraction(1)
    for p, w in zip(basis.primes, v.per_prime):
        rebuilt *= Fraction(p) ** (-w)
    assert rebuilt == abs(x)


@pytest.mark.parametrize("a, primes", [(1, (2,)), (3, (2,)), (2, (2, 3)), (3, (2, 3)), (2, (2, 3, 5))])
def test_enumeration_closed_under_reflection(a, primes):
    pts = enumerate_bounded_weight(a, PrimeBasis(primes))
    assert {1 - x for x in pts} == pts


def test_m_weight_counts_base_m_digits():
    # 7/36 = 7 * 6**-2 has two base-6 fractional digits
    assert m_weight(Fraction(7, 36), PrimeBasis.of(2, 3)) == 2
    assert m_weight(Fraction(6), PrimeBasis.of(2, 3)) == -1
