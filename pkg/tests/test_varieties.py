import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from supalg.groups import PPolynomial
from supalg.varieties import (
    BudgetExceeded,
    VrPoint,
    annihilating_p_polynomial,
    check_point,
    covering_check,
    enumerate_endos,
    enumerate_Vr,
    enumerate_Vrfeta,
    frobenius_twist_point,
    parametrised_endomorphisms,
    endomorphism_parameter_count,
    point_from_entries,
    point_to_module,
    regular_point,
)


def naive_count(r, p, f=None, eta=0):
    """Points of V_{r;f,eta}(GL_{1|1})(F_p) by direct matrix arithmetic on 2x2 integer matrices."""
    count = 0
    for entries in itertools.product(range(p), repeat=2 * r + 2):
        alphas = [np.diag(entries[2 * i : 2 * i + 2]) for i in range(r)]
        beta = np.array([[0, entries[-2]], [entries[-1], 0]])
        mats = alphas + [beta]
        if any(np.any((a @ b - b @ a) % p) for a, b in itertools.combinations(mats, 2)):
            continue
        power = lambda A, k: np.linalg.matrix_power(A, k) % p
        if any(np.any(power(a, p)) for a in alphas[:-1]):
            continue
        if np.any((power(alphas[-1], p) + beta @ beta) % p):
            continue
        if f is not None:
            value = eta * alphas[0]
            for i, a in enumerate(f.coeffs):
                value = value + a * power(alphas[-1], p**i)
            if np.any(value % p):
                continue
        count += 1
    return count


def test_known_counts():
    assert len(enumerate_Vrfeta(1, 1, 1, 3)) == 9
    assert len(enumerate_Vrfeta(1, 1, 1, 3, PPolynomial.parse("T^3", 3))) == 5


COUNT_CASES = [(r, None, 0) for r in (1, 2)] + [
    (r, f_text, eta) for r in (1, 2) for f_text in ("T^3", "T^9", "T^9+T^3", "T^9+2T^3") for eta in (0, 1)
]


@pytest.mark.parametrize("r,f_text,eta", COUNT_CASES)
def test_enumeration_matches_direct_count(r, f_text, eta):
    f = PPolynomial.parse(f_text, 3) if f_text else None
    assert len(enumerate_Vrfeta(1, 1, r, 3, f, eta)) == naive_count(r, 3, f, eta)


def test_points_are_modules():
    f = PPolynomial.parse("T^9+T^3", 3)
    for eta in (0, 2):
        for pt in enumerate_Vrfeta(1, 1, 2, 3, f, eta):
            module = point_to_module(pt, f, eta)
            assert module.verified, module.failure


def test_zero_point_acts_trivially_and_bad_point_is_rejected():
    f = PPolynomial.parse("T^3", 3)
    zero = point_from_entries(1, 1, 1, 3, (0, 0, 0, 0))
    assert point_to_module(zero, f).acts_trivially()
    # alpha = diag(1, 0) violates alpha^3 + beta^2 = 0
    bad = point_from_entries(1, 1, 1, 3, (1, 0, 0, 0))
    assert not check_point(bad, f)
    assert not point_to_module(bad, f).verified


def test_regular_point_is_a_point():
    f = PPolynomial.parse("T^9+2T^3", 3)
    for eta in (0, 1):
        pt = regular_point(3, 2, f, eta)
        assert check_point(pt, f, eta)
        assert point_to_module(pt, f, eta).verified


def test_point_validation():
    with pytest.raises(ValueError):
        VrPoint(1, 1, 1, 3, (np.array([[0, 1], [0, 0]]),), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        VrPoint(1, 1, 1, 3, (np.zeros((2, 2)),), np.eye(2))


@given(st.lists(st.integers(0, 2), min_size=6, max_size=6))
def test_entries_roundtrip(entries):
    assert point_from_entries(1, 1, 2, 3, entries).entries() == tuple(entries)


@given(st.sampled_from(enumerate_Vr(1, 1, 2, 3)))
def test_twist_fixes_points_over_the_prime_field(pt):
    # over F_p the entrywise p^r-th power is the identity on values
    assert frobenius_twist_point(pt) == pt


def test_twist_rejects_non_points():
    with pytest.raises(ValueError):
        frobenius_twist_point(point_from_entries(1, 1, 1, 3, (1, 0, 0, 0)))


@given(st.lists(st.integers(0, 2), min_size=4, max_size=4))
def test_annihilating_polynomial_is_minimal(entries):
    alpha = np.array(entries).reshape(2, 2)
    f = annihilating_p_polynomial(alpha, 3, 3)
    if f is None:
        return
    assert not np.any(f.evaluate_matrix(alpha))
    for g_t in range(1, f.t):
        for middle in itertools.product(range(3), repeat=g_t - 1):
            g = PPolynomial(3, (0,) + middle + (1,))
            assert np.any(g.evaluate_matrix(alpha))


@pytest.mark.parametrize("m,n,r", [(1, 1, 1), (1, 1, 2), (2, 0, 1)])
def test_covering(m, n, r):
    report = covering_check(m, n, r, 3, 3)
    assert report.passed and report.twist_is_bijection and report.twist_is_identity


@pytest.mark.parametrize("r,s,count", [(1, 1, 9), (1, 2, 9), (2, 1, 27)])
def test_endomorphisms_by_search_match_the_parametrisation(r, s, count):
    found = enumerate_endos(3, r, s)
    listed = parametrised_endomorphisms(3, r, s)
    assert len(found) == len(listed) == endomorphism_parameter_count(3, r, s) == count
    by_key = {e.key(): e for e in listed}
    for e in found:
        assert np.array_equal(e.matrix % 3, by_key[e.key()].matrix % 3)


def test_enumeration_budget(monkeypatch):
    monkeypatch.setenv("SUPALG_BUDGET", "5")
    with pytest.raises(BudgetExceeded):
        enumerate_Vr(1, 1, 1, 3)
    assert len(enumerate_Vr(1, 1, 1, 3, force=True)) == 9
