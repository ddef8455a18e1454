import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, strategies as st

from supalg.groups import coordinate_Mrs, group_algebra_Ga_minus, group_algebra_Mrs
from supalg.hopf import (
    augmentation_filtration,
    build_hopf,
    check_hopf_map,
    dualize,
    from_json,
    primitives,
    rescale_basis,
    same_structure,
    to_json,
    verify_axioms,
)
from supalg.superlin import sp_identity

SMALL = [(3, 1, 1), (3, 1, 2), (3, 2, 1), (5, 1, 1)]


def exterior_algebra(p):
    """Lambda(x) with x odd and primitive, written by hand."""
    return build_hopf(
        p,
        labels=("1", "x"),
        parities=(0, 1),
        mult_table={(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}},
        unit_index=0,
        comult_table={0: {(0, 0): 1}, 1: {(1, 0): 1, (0, 1): 1}},
        counit={0: 1},
        antipode_table={0: {0: 1}, 1: {1: -1}},
        name="Lambda(x)",
    )


def test_hand_built_exterior_algebra_is_hopf():
    H = exterior_algebra(3)
    assert verify_axioms(H, supercommutative=True, cocommutative=True).passed
    assert same_structure(H, group_algebra_Ga_minus(3))


def test_wrong_antipode_sign_is_caught():
    bad = build_hopf(
        3,
        labels=("1", "x"),
        parities=(0, 1),
        mult_table={(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}},
        unit_index=0,
        comult_table={0: {(0, 0): 1}, 1: {(1, 0): 1, (0, 1): 1}},
        counit={0: 1},
        antipode_table={0: {0: 1}, 1: {1: 1}},
    )
    report = verify_axioms(bad)
    assert not report.passed
    assert not report.results["antipode"]


def test_dropping_the_koszul_sign_breaks_the_bialgebra_law():
    # x odd primitive with x^2 = 0: without the sign, Delta(x)^2 = 2 x (x) x is nonzero
    H = exterior_algebra(3)
    assert verify_axioms(H).results["comultiplication is an algebra map"]
    unsigned = build_hopf(
        3,
        labels=("1", "x"),
        parities=(0, 0),
        mult_table={(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}},
        unit_index=0,
        comult_table={0: {(0, 0): 1}, 1: {(1, 0): 1, (0, 1): 1}},
        counit={0: 1},
        antipode_table={0: {0: 1}, 1: {1: -1}},
    )
    assert not verify_axioms(unsigned).results["comultiplication is an algebra map"]


def test_corrupted_structure_constant_fails():
    H = coordinate_Mrs(3, 1, 1)
    mult = H.mult.tolil()
    mult[1, 1 * H.dim + 1] = (mult[1, 1 * H.dim + 1] + 1) % 3
    broken = type(H)(H.p, H.labels, H.parities, mult.tocsr(), H.unit, H.comult, H.counit, H.antipode)
    assert not verify_axioms(broken).passed


@pytest.mark.parametrize("p,r,s", SMALL)
def test_double_dual_and_json_roundtrip(p, r, s):
    for H in (group_algebra_Mrs(p, r, s), coordinate_Mrs(p, r, s)):
        assert same_structure(dualize(dualize(H)), H)
        back = from_json(to_json(H))
        assert same_structure(back, H) and back.labels == H.labels


@pytest.mark.parametrize("p,r,s", SMALL)
def test_primitive_counts(p, r, s):
    # Lie superalgebra of M_{r;s}: u_0 and the nonzero u_{r-1}^{p^k} (k >= 1) are even, v is odd;
    # on the coordinate side the primitives are the r additive characters and tau
    prim_group = primitives(group_algebra_Mrs(p, r, s))
    prim_coord = primitives(coordinate_Mrs(p, r, s))
    assert (len(prim_group[0]), len(prim_group[1])) == (s, 1)
    assert (len(prim_coord[0]), len(prim_coord[1])) == (r, 1)


@given(st.lists(st.integers(1, 2), min_size=6, max_size=6))
def test_rescaled_basis_is_still_hopf_and_isomorphic(scales):
    H = coordinate_Mrs(3, 1, 1)
    K = rescale_basis(H, scales, H.labels)
    assert verify_axioms(K).passed
    diag = sp.diags(scales, format="csr", dtype=np.int64)
    ok, why = check_hopf_map(K, H, diag)
    assert ok, why


def test_identity_is_a_hopf_map_and_zero_is_not():
    H = group_algebra_Mrs(3, 1, 2)
    assert check_hopf_map(H, H, sp_identity(H.dim))[0]
    assert not check_hopf_map(H, H, sp.csr_matrix((H.dim, H.dim), dtype=np.int64))[0]


def test_augmentation_filtration_of_divided_powers():
    # in k[M_{1;1}] = k[sigma_1]/(sigma_1^3) (x) Lambda(tau), I^k is spanned by monomials of length >= k
    H = coordinate_Mrs(3, 1, 1)
    filt = augmentation_filtration(H)
    sigma2 = H.basis_vector(H.index((0, 2, 0)))
    tau = H.basis_vector(H.index((0, 0, 1)))
    assert filt.element_level(sigma2) == 2
    assert filt.element_level(tau) == 1
    assert filt.element_level(H.multiply(sigma2, tau)) == 3
    assert filt.nilpotency == 4
