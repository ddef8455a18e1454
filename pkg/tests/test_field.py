import math

import pytest
from hypothesis import given, strategies as st

from supalg.field import (
    FpScalar,
    binom_mod,
    check_prime,
    digit,
    digit_factorial_inverse_int,
    digit_factorial_product,
    digit_sum,
    digits_of,
    factorial_mod,
    inverse_mod,
    is_prime,
    p_adic,
)

PRIMES = st.sampled_from([3, 5, 7, 11, 13])


def test_is_prime_small_values():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("bad", [2, 4, 9, 1, 0, -3])
def test_check_prime_rejects_even_and_composite(bad):
    with pytest.raises(ValueError):
        check_prime(bad)


@given(PRIMES, st.integers(min_value=0, max_value=3000), st.integers(min_value=0, max_value=3000))
def test_lucas_binomial_agrees_with_exact_binomial(p, n, k):
    expected = math.comb(n, k) % p if k <= n else 0
    assert binom_mod(n, k, p) == expected


@given(PRIMES, st.integers(min_value=0, max_value=10**6))
def test_digits_reconstruct_the_number(p, n):
    ds = digits_of(n, p)
    assert sum(d * p**i for i, d in enumerate(ds)) == n
    assert all(0 <= d < p for d in ds)
    assert digit_sum(n, p) == sum(ds)
    assert all(digit(n, p, i) == d for i, d in enumerate(ds))
    assert digit(n, p, len(ds) + 2) == 0
    assert p_adic(n, p).value == n


@given(PRIMES, st.integers(min_value=1, max_value=10**6))
def test_inverse_mod(p, a):
    if a % p == 0:
        with pytest.raises((ValueError, ZeroDivisionError)):
            inverse_mod(a, p)
    else:
        assert a * inverse_mod(a, p) % p == 1


@given(PRIMES, st.integers(min_value=0, max_value=5000))
def test_digit_factorial_inverse(p, j):
    prod = 1
    for d in digits_of(j, p):
        prod *= math.factorial(d)
    assert digit_factorial_product(j, p) == prod % p
    assert digit_factorial_inverse_int(j, p) * prod % p == 1


def test_factorial_mod_range():
    assert [factorial_mod(n, 5) for n in range(5)] == [1, 1, 2, 1, 4]
    with pytest.raises(ValueError):
        factorial_mod(5, 5)


@given(PRIMES, st.integers(), st.integers())
def test_scalar_field_axioms(p, a, b):
    x, y = FpScalar(p, a), FpScalar(p, b)
    assert int(x + y) == (a + b) % p
    assert int(x * y) == (a * b) % p
    assert int(x - y) == (a - b) % p
    assert int(-x) == (-a) % p
    if a % p:
        assert x * x.inverse() == 1
        assert (y / x) * x == y
    assert x ** (p - 1) == (1 if a % p else 0)


@given(PRIMES, st.integers(min_value=0, max_value=400), st.integers(min_value=0, max_value=400))
def test_divided_power_products_follow_lucas(p, i, j):
    # gamma_i gamma_j = C(i+j, i) gamma_{i+j}: the coefficient vanishes exactly when adding digits carries
    carries = any(digit(i, p, k) + digit(j, p, k) >= p for k in range(8))
    assert (binom_mod(i + j, i, p) == 0) == carries
