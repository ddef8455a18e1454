import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from supalg.superlin import (
    EchelonBasis,
    FpSparseMatrix,
    SuperMatrix,
    SuperSpace,
    block_decompose,
    dense_rank_kernel,
    dense_solve,
    rank,
    rank_kernel,
    rank_of_vectors,
    supertwist,
    tensor_map,
    twist_matrix,
)

P = 3


def small_matrices(max_rows=4, max_cols=4, p=P):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.integers(0, p - 1), min_size=m * n, max_size=m * n).map(
                lambda xs: np.array(xs, dtype=np.int64).reshape(m, n)
            )
        )
    )


def brute_force_rank(A, p):
    """rank = ncols - log_p |{x : A x = 0}|, counting kernel vectors one by one."""
    ncols = A.shape[1]
    count = sum(1 for x in itertools.product(range(p), repeat=ncols) if not np.any(A @ np.array(x) % p))
    nullity = round(np.log(count) / np.log(p))
    return ncols - nullity


@given(small_matrices())
def test_sparse_rank_matches_brute_force(A):
    assert rank(FpSparseMatrix.from_dense(P, A)) == brute_force_rank(A, P)


@given(small_matrices(5, 5))
def test_rank_kernel_gives_a_kernel_basis(A):
    M = FpSparseMatrix.from_dense(P, A)
    r, kernel = rank_kernel(M)
    assert r + len(kernel) == A.shape[1]
    for v in kernel:
        assert not np.any(A @ v % P)
    if kernel:
        assert dense_rank_kernel(np.array(kernel), P)[0] == len(kernel)
    assert dense_rank_kernel(A, P)[0] == r
    assert rank(M.transpose()) == r


@given(small_matrices(4, 4), st.lists(st.integers(0, P - 1), min_size=4, max_size=4))
def test_dense_solve_finds_solutions_when_they_exist(A, x):
    x = np.array(x[: A.shape[1]], dtype=np.int64)
    b = A @ x % P
    sol = dense_solve(A, b, P)
    assert sol is not None and np.array_equal(A @ sol % P, b)


def test_dense_solve_reports_inconsistency():
    assert dense_solve(np.array([[1, 1], [2, 2]]), np.array([1, 0]), P) is None


@given(st.lists(st.dictionaries(st.integers(0, 6), st.integers(0, P - 1), max_size=4), max_size=6))
def test_echelon_basis_tracks_combinations(vectors):
    basis = EchelonBasis(P, track=True)
    for v in vectors:
        basis.add(v)
    assert len(basis) == rank_of_vectors(vectors, P)
    target = {}
    for i, v in enumerate(vectors):
        for k, c in v.items():
            target[k] = (target.get(k, 0) + (i + 1) * c) % P
    combo = basis.solve(target)
    assert combo is not None
    rebuilt = {}
    for i, c in combo.items():
        for k, v in vectors[i].items():
            rebuilt[k] = (rebuilt.get(k, 0) + c * v) % P
    assert {k: v for k, v in rebuilt.items() if v} == {k: v for k, v in target.items() if v}


def test_parity_is_enforced():
    space = SuperSpace.standard(1, 1)
    with pytest.raises(ValueError):
        SuperMatrix.from_dense(P, space, space, 0, [[0, 1], [0, 0]])
    odd = SuperMatrix.from_dense(P, space, space, 1, [[0, 1], [2, 0]])
    blocks = block_decompose(odd)
    assert blocks.diagonal == SuperMatrix.zero(P, space, space, 0)
    assert blocks.antidiagonal == odd


def test_supertwist_sign_on_two_odd_vectors():
    space = SuperSpace.standard(1, 1)
    assert supertwist(1, 1, space, space) == (-1, (1, 1))
    assert supertwist(0, 1, space, space) == (1, (1, 0))
    tw = twist_matrix(space, space, P)
    assert not np.any((tw @ tw).toarray() % P - np.eye(4, dtype=np.int64))


def homogeneous(space, parity):
    size = space.dim
    par = np.array(space.parities)
    mask = (par[:, None] + par[None, :]) % 2 == parity
    return st.lists(st.integers(0, P - 1), min_size=size * size, max_size=size * size).map(
        lambda xs: SuperMatrix.from_dense(P, space, space, parity, np.where(mask, np.array(xs).reshape(size, size), 0))
    )


SPACE = SuperSpace.standard(1, 2)


@given(st.data())
def test_koszul_interchange_law(data):
    """(f (x) g)(h (x) k) = (-1)^{|g||h|} (fh (x) gk)."""
    f, g, h, k = (data.draw(homogeneous(SPACE, data.draw(st.integers(0, 1)))) for _ in range(4))
    lhs = tensor_map(f, g) @ tensor_map(h, k)
    rhs = tensor_map(f @ h, g @ k)
    if g.parity and h.parity:
        rhs = -rhs
    assert lhs == rhs


@given(st.data())
def test_twist_is_natural(data):
    """tau (f (x) g) = (-1)^{|f||g|} (g (x) f) tau."""
    f, g = (data.draw(homogeneous(SPACE, data.draw(st.integers(0, 1)))) for _ in range(2))
    tw = SuperMatrix(P, SPACE.tensor(SPACE), SPACE.tensor(SPACE), 0, twist_matrix(SPACE, SPACE, P))
    lhs = tw @ tensor_map(f, g)
    rhs = tensor_map(g, f) @ tw
    if f.parity and g.parity:
        rhs = -rhs
    assert lhs == rhs
