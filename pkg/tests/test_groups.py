import numpy as np
import pytest
from hypothesis import given, strategies as st

from supalg.groups import (
    PPolynomial,
    all_monic_inseparable,
    closed_form_mismatches,
    compose,
    coordinate_Mrfeta,
    coordinate_Mrs,
    duality_report,
    group_algebra_Mrfeta,
    morphism_F,
    morphism_phi_iso,
    morphism_pi,
    morphism_q,
    morphism_q_minus,
    canonical_quotient,
    standard_morphisms,
)
from supalg.hopf import check_hopf_map, same_structure, verify_axioms
from supalg.superlin import sp_equal


def test_parse_and_print():
    f = PPolynomial.parse("T^9 + 2T^3", 3)
    assert f.coeffs == (0, 2, 1) and f.t == 2 and f.s == 1 and str(f) == "T^9+2T^3"
    g, changed = PPolynomial.parse_with_notice("2T^9", 3)
    assert changed and g == PPolynomial.monomial(3, 2)
    assert f.frobenius().coeffs == (0, 0, 2, 1)


@pytest.mark.parametrize("text", ["T", "T^9+1", "T^4", "", "3T^3"])
def test_parse_rejects_bad_input(text):
    with pytest.raises(ValueError):
        PPolynomial.parse(text, 3)


@given(st.sampled_from([3, 5]), st.integers(1, 3))
def test_number_of_monic_inseparable_polynomials(p, max_t):
    assert len(all_monic_inseparable(p, max_t)) == sum(p ** (t - 1) for t in range(1, max_t + 1))


@given(st.lists(st.integers(0, 2), min_size=4, max_size=4))
def test_matrix_evaluation_matches_repeated_multiplication(entries):
    A = np.array(entries).reshape(2, 2)
    f = PPolynomial.parse("T^9+2T^3", 3)
    expected = (np.linalg.matrix_power(A, 9) + 2 * np.linalg.matrix_power(A, 3)) % 3
    assert np.array_equal(f.evaluate_matrix(A), expected)


@pytest.mark.parametrize("f_text", ["T^3", "T^9", "T^9+T^3", "T^9+2T^3"])
@pytest.mark.parametrize("eta", [0, 1, 2])
def test_defining_relations_hold_in_rank_one(f_text, eta):
    p = 3
    f = PPolynomial.parse(f_text, p)
    G = group_algebra_Mrfeta(p, 1, f, eta)
    assert G.dim == 2 * p**f.t
    u = G.basis_vector(G.named["u0"])
    v = G.basis_vector(G.named["v"])
    assert np.array_equal(G.multiply(v, v), (-G.power(u, p)) % p)
    total = eta * u
    for i, a in enumerate(f.coeffs):
        total = total + a * G.power(u, p**i)
    assert not np.any(total % p)


@pytest.mark.parametrize("p,r,s", [(3, 2, 1), (3, 2, 2), (5, 2, 1)])
def test_defining_relations_hold_in_rank_two(p, r, s):
    G = group_algebra_Mrfeta(p, r, PPolynomial.monomial(p, s))
    assert G.dim == 2 * p ** (r + s - 1)
    u0, u1, v = (G.basis_vector(G.named[k]) for k in ("u0", "u1", "v"))
    assert not np.any(G.power(u0, p))
    assert np.array_equal(G.multiply(v, v), (-G.power(u1, p)) % p)
    assert not np.any(G.power(u1, p**s))
    assert np.any(G.power(u1, p**s - 1))
    unit = G.unit_index()
    assert G.coproduct_terms(G.named["u0"]) == {(G.named["u0"], unit): 1, (unit, G.named["u0"]): 1}
    assert G.coproduct_terms(G.named["v"]) == {(G.named["v"], unit): 1, (unit, G.named["v"]): 1}


@pytest.mark.parametrize("p,r,s", [(3, 1, 1), (3, 2, 2), (5, 2, 1)])
def test_closed_form_coordinate_ring_is_the_rescaled_dual(p, r, s):
    closed = coordinate_Mrs(p, r, s)
    assert verify_axioms(closed, supercommutative=True).passed
    assert same_structure(closed, coordinate_Mrfeta(p, r, PPolynomial.monomial(p, s)))


@pytest.mark.parametrize("eta", [0, 1, 2])
@pytest.mark.parametrize("f", all_monic_inseparable(3, 2), ids=str)
def test_rank_one_closed_form_coproduct(f, eta):
    assert closed_form_mismatches(3, f, eta) == []


def test_literal_tau_conditions_disagree_with_the_dual():
    # the variant with i + j >= p^t in the tau (x) tau terms is kept for comparison only
    assert len(closed_form_mismatches(3, PPolynomial.parse("T^3", 3), 1, literal=True)) == 8


@pytest.mark.parametrize("p,r,s", [(3, 2, 1), (5, 1, 2)])
def test_duality_report_passes(p, r, s):
    rows = duality_report(p, r, PPolynomial.monomial(p, s))
    assert all(ok for _, ok, _ in rows), rows


@pytest.mark.parametrize("eta", [0, 1])
@pytest.mark.parametrize("f_text", ["T^3", "T^9+T^3"])
def test_standard_morphisms_are_verified_hopf_maps(f_text, eta):
    f = PPolynomial.parse(f_text, 3)
    maps = standard_morphisms(3, 2, f, eta)
    names = {m.name for m in maps}
    assert "F" in names and "q-" in names
    assert ("q" in names) == (eta == 0)
    for m in maps:
        ok, why = check_hopf_map(m.source.group_algebra, m.target.group_algebra, m.matrix.matrix, algebra_only=not m.is_hopf)
        assert ok, (m.name, why)
        if m.is_hopf:
            ok, why = check_hopf_map(m.target.coordinate, m.source.coordinate, m.comorphism())
            assert ok, (m.name, why)


def test_q_and_pi_need_eta_zero():
    f = PPolynomial.parse("T^3", 3)
    with pytest.raises(ValueError):
        morphism_q(3, 1, f, 1)
    with pytest.raises(ValueError):
        morphism_pi(3, 1, f, 2)
    with pytest.raises(ValueError):
        morphism_phi_iso(3, 1, f, 0)


@pytest.mark.parametrize("eta", [1, 2])
@pytest.mark.parametrize("f_text", ["T^3", "T^9+2T^3"])
def test_frobenius_factors_through_the_eta_isomorphism(f_text, eta):
    p, r = 3, 1
    f = PPolynomial.parse(f_text, p)
    phi = morphism_phi_iso(p, r, f, eta)
    assert not phi.is_hopf
    with pytest.raises(ValueError):
        phi.comorphism()
    F = morphism_F(p, r + 1, f, eta)
    quotient = canonical_quotient(p, r, f.frobenius(), f)
    assert sp_equal(compose(quotient, phi), F.matrix.matrix, p)


def test_q_minus_kills_the_even_generators():
    qm = morphism_q_minus(3, 2, PPolynomial.monomial(3, 1))
    G = qm.source.group_algebra
    for name in ("u0", "u1"):
        assert not qm.matrix.matrix[:, G.named[name]].count_nonzero()
