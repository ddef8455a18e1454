"""
Finite-dimensional Hopf superalgebras given by structure tensors.

A ``HopfSuperalgebra`` of dimension d over F_p stores

* ``mult``     sparse (d, d*d): column ``a*d + b`` holds the product e_a e_b,
* ``unit``     length-d vector,
* ``comult``   sparse (d*d, d): column k holds Delta(e_k) in the tensor basis,
* ``counit``   length-d vector,
* ``antipode`` sparse (d, d).

The product on H (x) H is ``(a (x) b)(c (x) d) = (-1)^{|b||c|} ac (x) bd``.
This single rule is implemented in ``tensor_left_multiplication`` and
``tensor_square_product`` and everything else goes through them.

Duals pair a tensor of functionals with a tensor of vectors by
``<phi (x) psi, a (x) b> = (-1)^{|psi||a|} phi(a) psi(b)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .field import check_prime, inverse_mod
from .superlin import (
    EchelonBasis,
    FpSparseMatrix,
    SuperMatrix,
    SuperSpace,
    rank_kernel,
    sp_equal,
    sp_identity,
    sp_mod,
    twist_matrix,
)

# ---------------------------------------------------------------------------
# the data type


@dataclass(frozen=True, eq=False)
class HopfSuperalgebra:
    p: int
    labels: Tuple[Hashable, ...]
    parities: Tuple[int, ...]
    mult: sp.csr_matrix = dc_field(repr=False)
    unit: np.ndarray = dc_field(repr=False)
    comult: sp.csr_matrix = dc_field(repr=False)
    counit: np.ndarray = dc_field(repr=False)
    antipode: sp.csr_matrix = dc_field(repr=False)
    degrees: Optional[Tuple[int, ...]] = None
    generators: Optional[Tuple[int, ...]] = None
    name: str = ""
    named: Mapping[str, int] = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        check_prime(self.p)
        d = len(self.labels)
        if len(self.parities) != d:
            raise ValueError("labels and parities must have the same length")
        p = self.p
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "parities", tuple(int(x) % 2 for x in self.parities))
        object.__setattr__(self, "mult", sp_mod(self.mult, p))
        object.__setattr__(self, "comult", sp_mod(self.comult, p))
        object.__setattr__(self, "antipode", sp_mod(self.antipode, p))
        object.__setattr__(self, "unit", np.asarray(self.unit, dtype=np.int64) % p)
        object.__setattr__(self, "counit", np.asarray(self.counit, dtype=np.int64) % p)
        if self.degrees is not None:
            object.__setattr__(self, "degrees", tuple(int(x) for x in self.degrees))
        if self.generators is not None:
            object.__setattr__(self, "generators", tuple(int(x) for x in self.generators))
        object.__setattr__(self, "named", dict(self.named))
        shapes = {
            "mult": (self.mult.shape, (d, d * d)),
            "comult": (self.comult.shape, (d * d, d)),
            "antipode": (self.antipode.shape, (d, d)),
            "unit": (self.unit.shape, (d,)),
            "counit": (self.counit.shape, (d,)),
        }
        for key, (got, want) in shapes.items():
            if got != want:
                raise ValueError(f"{key} has shape {got}, expected {want}")

    # -- basic accessors -----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def space(self) -> SuperSpace:
        return SuperSpace(self.parities)

    def index(self, label) -> int:
        return self.labels.index(label)

    def antipode_map(self) -> SuperMatrix:
        return SuperMatrix(self.p, self.space, self.space, 0, self.antipode)

    def basis_vector(self, k: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[k] = 1
        return v

    def left_multiplication(self, k: int) -> sp.csr_matrix:
        """Matrix of x -> e_k x."""
        d = self.dim
        return self.mult[:, k * d:(k + 1) * d]

    def left_multiplication_by(self, vector) -> sp.csr_matrix:
        d = self.dim
        out = sp.csr_matrix((d, d), dtype=np.int64)
        for k in np.nonzero(np.asarray(vector) % self.p)[0]:
            out = out + int(vector[k]) * self.left_multiplication(int(k))
        return sp_mod(out, self.p)

    def multiply(self, x, y) -> np.ndarray:
        """Product of two elements given as coefficient vectors."""
        return np.asarray(self.left_multiplication_by(x) @ np.asarray(y, dtype=np.int64)).ravel() % self.p

    def power(self, x, exponent: int) -> np.ndarray:
        out = self.unit.copy()
        for _ in range(exponent):
            out = self.multiply(out, x)
        return out

    def coproduct(self, x) -> np.ndarray:
        """Delta(x) as a vector of length d*d."""
        return np.asarray(self.comult @ np.asarray(x, dtype=np.int64)).ravel() % self.p

    def coproduct_terms(self, k: int) -> Dict[Tuple[int, int], int]:
        col = self.comult[:, k].tocoo()
        d = self.dim
        return {(int(i) // d, int(i) % d): int(v) for i, v in zip(col.row, col.data)}

    def product_terms(self, a: int, b: int) -> Dict[int, int]:
        col = self.mult[:, a * self.dim + b].tocoo()
        return {int(i): int(v) for i, v in zip(col.row, col.data)}

    def unit_index(self) -> Optional[int]:
        """Index of the unit if the unit is a basis vector, else None."""
        nz = np.nonzero(self.unit)[0]
        if len(nz) == 1 and self.unit[nz[0]] == 1:
            return int(nz[0])
        return None

    def vector_parity(self, x) -> Optional[int]:
        """Parity of a homogeneous vector (None for zero or mixed vectors)."""
        nz = np.nonzero(np.asarray(x) % self.p)[0]
        pars = {self.parities[i] for i in nz}
        if len(pars) == 1:
            return pars.pop()
        return None

    def describe(self, x, digits: bool = False) -> str:
        """Human readable form of an element."""
        terms = []
        for k in np.nonzero(np.asarray(x) % self.p)[0]:
            terms.append(f"{int(x[k]) % self.p}*{self.labels[k]}")
        return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# tensor-square products


def parity_sign_matrix(H: HopfSuperalgebra) -> sp.csr_matrix:
    return H.space.sign_matrix(H.p)


def tensor_left_multiplication(H: HopfSuperalgebra, i: int, j: int) -> sp.csr_matrix:
    """Matrix of X -> (e_i (x) e_j) X on H (x) H with the Koszul sign."""
    left = H.left_multiplication(i)
    if H.parities[j]:
        left = left @ parity_sign_matrix(H)
    return sp.kron(left, H.left_multiplication(j), format="csr")


def tensor_left_multiplication_by(H: HopfSuperalgebra, tensor) -> sp.csr_matrix:
    d = H.dim
    out = sp.csr_matrix((d * d, d * d), dtype=np.int64)
    tensor = np.asarray(tensor) % H.p
    for idx in np.nonzero(tensor)[0]:
        i, j = divmod(int(idx), d)
        out = out + int(tensor[idx]) * tensor_left_multiplication(H, i, j)
    return sp_mod(out, H.p)


def tensor_square_product(H: HopfSuperalgebra, X: Mapping[Tuple[int, int], int], Y: Mapping[Tuple[int, int], int]) -> Dict[Tuple[int, int], int]:
    """Product in H (x) H of tensors given as {(a, b): coefficient}."""
    p = H.p
    out: Dict[Tuple[int, int], int] = {}
    for (a, b), x in X.items():
        for (c, e), y in Y.items():
            coeff = x * y
            if H.parities[b] and H.parities[c]:
                coeff = -coeff
            left = H.product_terms(a, c)
            if not left:
                continue
            right = H.product_terms(b, e)
            for k1, v1 in left.items():
                for k2, v2 in right.items():
                    key = (k1, k2)
                    out[key] = (out.get(key, 0) + coeff * v1 * v2) % p
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# axiom verification


@dataclass
class AxiomReport:
    """Outcome of ``verify_axioms``.  Failures are recorded, never raised."""

    name: str
    results: Dict[str, bool] = dc_field(default_factory=dict)
    details: Dict[str, str] = dc_field(default_factory=dict)
    optional: Dict[str, bool] = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.results.values())

    def record(self, key: str, ok: bool, detail: str = "", optional: bool = False):
        if optional:
            self.optional[key] = bool(ok)
        else:
            self.results[key] = bool(ok)
        if detail and not ok:
            self.details[key] = detail

    def rows(self) -> List[Tuple[str, str]]:
        out = [(k, "pass" if v else "FAIL") for k, v in self.results.items()]
        out += [(k + " (informational)", "yes" if v else "no") for k, v in self.optional.items()]
        return out


def _first_difference(a, b, p: int) -> Optional[Tuple[int, int]]:
    diff = sp_mod(sp.csr_matrix(a, dtype=np.int64) - sp.csr_matrix(b, dtype=np.int64), p).tocoo()
    if diff.nnz == 0:
        return None
    order = np.lexsort((diff.row, diff.col))
    k = order[0]
    return int(diff.row[k]), int(diff.col[k])


def _generated_span_dimension(H: HopfSuperalgebra, generators: Sequence[int]) -> int:
    """Dimension of the subalgebra generated by the given basis elements."""
    basis = EchelonBasis(H.p)
    start = H.unit.copy()
    basis.add({i: int(v) for i, v in enumerate(start) if v})
    queue = [start]
    gens = [H.left_multiplication(g) for g in generators]
    while queue:
        x = queue.pop()
        for L in gens:
            y = np.asarray(L @ x).ravel() % H.p
            vec = {i: int(v) for i, v in enumerate(y) if v}
            if vec and basis.add(vec):
                queue.append(y)
    return len(basis)


EXHAUSTIVE_ALGEBRA_MAP_DIM = 60


def verify_axioms(
    H: HopfSuperalgebra,
    supercommutative: Optional[bool] = None,
    cocommutative: Optional[bool] = None,
    exhaustive: Optional[bool] = None,
) -> AxiomReport:
    """Check the Hopf superalgebra axioms exactly.

    ``supercommutative`` / ``cocommutative``: ``True`` makes the property a
    required check, ``None`` records it as informational only.
    ``exhaustive``: check that Delta is an algebra map on every pair of basis
    elements.  By default this happens when dim <= 60; above that the check
    runs on the declared generators together with a proof that they
    generate, which is equivalent.
    """
    p, d = H.p, H.dim
    report = AxiomReport(H.name or "algebra")
    I = sp_identity(d)
    mult, comult = H.mult, H.comult
    unit_col = sp.csr_matrix(H.unit.reshape(d, 1))
    counit_row = sp.csr_matrix(H.counit.reshape(1, d))

    # parity of structure maps
    par = np.array(H.parities)
    coo = mult.tocoo()
    ok = True
    if coo.nnz:
        a, b = np.divmod(coo.col, d)
        ok = bool(np.all((par[coo.row] - par[a] - par[b]) % 2 == 0))
    coo = comult.tocoo()
    if ok and coo.nnz:
        a, b = np.divmod(coo.row, d)
        ok = bool(np.all((par[coo.col] - par[a] - par[b]) % 2 == 0))
    coo = H.antipode.tocoo()
    if ok and coo.nnz:
        ok = bool(np.all(par[coo.row] == par[coo.col]))
    if ok:
        ok = not np.any(H.unit[par == 1]) and not np.any(H.counit[par == 1])
    report.record("structure maps are even", ok)

    # associativity, one left factor at a time
    bad = None
    for k in range(d):
        L = H.left_multiplication(k)
        lhs = mult @ sp.kron(L, I, format="csr")
        rhs = L @ mult
        if not sp_equal(lhs, rhs, p):
            bad = k
            break
    report.record("associativity", bad is None, f"fails for left factor {H.labels[bad]}" if bad is not None else "")

    # unit
    ok = sp_equal(mult @ sp.kron(unit_col, I, format="csr"), I, p) and sp_equal(
        mult @ sp.kron(I, unit_col, format="csr"), I, p
    )
    report.record("unit", ok)

    # coassociativity
    lhs = sp.kron(comult, I, format="csr") @ comult
    rhs = sp.kron(I, comult, format="csr") @ comult
    diff = _first_difference(lhs, rhs, p)
    report.record("coassociativity", diff is None, f"fails on {H.labels[diff[1]]}" if diff else "")

    # counit
    ok = sp_equal(sp.kron(counit_row, I, format="csr") @ comult, I, p) and sp_equal(
        sp.kron(I, counit_row, format="csr") @ comult, I, p
    )
    report.record("counit", ok)

    # Delta and epsilon are unital and multiplicative
    unit_tensor = np.kron(H.unit, H.unit) % p
    ok = np.array_equal(H.coproduct(H.unit), unit_tensor) and int(H.counit @ H.unit) % p == 1
    report.record("unit is grouplike", ok)
    eps_mult = np.asarray((counit_row @ mult).toarray()).ravel() % p
    ok = np.array_equal(eps_mult, np.kron(H.counit, H.counit) % p)
    report.record("counit is multiplicative", ok)

    if exhaustive is None:
        exhaustive = d <= EXHAUSTIVE_ALGEBRA_MAP_DIM or not H.generators
    checked = list(range(d)) if exhaustive else list(H.generators)
    bad = None
    for g in checked:
        lhs = comult @ H.left_multiplication(g)
        rhs = tensor_left_multiplication_by(H, H.coproduct(H.basis_vector(g))) @ comult
        if not sp_equal(lhs, rhs, p):
            bad = g
            break
    detail = f"fails for left factor {H.labels[bad]}" if bad is not None else ""
    ok = bad is None
    if ok and not exhaustive:
        span = _generated_span_dimension(H, H.generators)
        if span != d:
            ok = False
            detail = f"declared generators span only {span} of {d} dimensions"
    report.record("comultiplication is an algebra map", ok, detail)

    # antipode
    S = H.antipode
    target = sp.csr_matrix(np.outer(H.unit, H.counit) % p)
    ok1 = sp_equal(mult @ sp.kron(S, I, format="csr") @ comult, target, p)
    ok2 = sp_equal(mult @ sp.kron(I, S, format="csr") @ comult, target, p)
    report.record("antipode", ok1 and ok2)

    # grading
    if H.degrees is not None:
        deg = np.array(H.degrees)
        ok = True
        coo = mult.tocoo()
        if coo.nnz:
            a, b = np.divmod(coo.col, d)
            ok = bool(np.all(deg[coo.row] == deg[a] + deg[b]))
        coo = comult.tocoo()
        if ok and coo.nnz:
            a, b = np.divmod(coo.row, d)
            ok = bool(np.all(deg[coo.col] == deg[a] + deg[b]))
        coo = H.antipode.tocoo()
        if ok and coo.nnz:
            ok = bool(np.all(deg[coo.row] == deg[coo.col]))
        report.record("internal grading preserved", ok)

    T = twist_matrix(H.space, H.space, p)
    sc = sp_equal(mult, mult @ T, p)
    report.record("supercommutative", sc, optional=not supercommutative)
    cc = sp_equal(comult, T @ comult, p)
    report.record("cocommutative", cc, optional=not cocommutative)
    return report


# ---------------------------------------------------------------------------
# duality and change of basis


def dualize(H: HopfSuperalgebra, labels: Optional[Sequence[Hashable]] = None, name: str = "") -> HopfSuperalgebra:
    """The dual Hopf superalgebra on the dual basis e^k.

    Applying ``dualize`` twice returns exactly the original structure
    tensors, so the canonical identification of H with its double dual is
    the identity on coordinates.
    """
    p, d = H.p, H.dim
    par = np.array(H.parities)
    pair_sign = np.where(np.outer(par, par).ravel() % 2 == 1, p - 1, 1)  # index a*d+b
    S = sp.diags(pair_sign, format="csr", dtype=np.int64)
    new_mult = (H.comult.T.tocsr() @ S)  # (d, d*d): [k, (i,j)] = sign * Delta[(i,j), k]
    new_comult = S @ H.mult.T.tocsr()  # (d*d, d): [(a,b), k] = sign * m[k, (a,b)]
    return HopfSuperalgebra(
        p=p,
        labels=tuple(labels) if labels is not None else tuple(("dual", lab) for lab in H.labels),
        parities=H.parities,
        mult=new_mult,
        unit=H.counit.copy(),
        comult=new_comult,
        counit=H.unit.copy(),
        antipode=H.antipode.T.tocsr(),
        degrees=H.degrees,
        generators=None,
        name=name or f"dual of {H.name}",
    )


def change_basis(
    H: HopfSuperalgebra,
    P,
    P_inverse,
    labels: Sequence[Hashable],
    name: str = "",
    degrees: Optional[Sequence[int]] = None,
    generators: Optional[Sequence[int]] = None,
    named: Optional[Mapping[str, int]] = None,
) -> HopfSuperalgebra:
    """Rewrite H in the basis f_k = sum_j P[j, k] e_j (P must be even)."""
    p = H.p
    P = sp_mod(P, p)
    Pi = sp_mod(P_inverse, p)
    if not sp_equal(P @ Pi, sp_identity(H.dim), p):
        raise ValueError("P_inverse is not the inverse of P")
    parities = []
    for k in range(H.dim):
        col = P[:, k].tocoo()
        pars = {H.parities[i] for i in col.row}
        if len(pars) != 1:
            raise ValueError("change of basis must send basis vectors to homogeneous vectors")
        parities.append(pars.pop())
    return HopfSuperalgebra(
        p=p,
        labels=tuple(labels),
        parities=tuple(parities),
        mult=Pi @ H.mult @ sp.kron(P, P, format="csr"),
        unit=np.asarray(Pi @ H.unit).ravel(),
        comult=sp.kron(Pi, Pi, format="csr") @ H.comult @ P,
        counit=np.asarray(H.counit @ P.toarray()).ravel(),
        antipode=Pi @ H.antipode @ P,
        degrees=degrees,
        generators=generators,
        name=name or H.name,
        named=named or {},
    )


def rescale_basis(H: HopfSuperalgebra, scales: Sequence[int], labels: Sequence[Hashable], **kwargs) -> HopfSuperalgebra:
    """Rewrite H in the basis f_k = scales[k] * e_k."""
    p = H.p
    s = [int(x) % p for x in scales]
    P = sp.diags(s, format="csr", dtype=np.int64)
    Pi = sp.diags([inverse_mod(x, p) for x in s], format="csr", dtype=np.int64)
    return change_basis(H, P, Pi, labels, **kwargs)


def same_structure(H1: HopfSuperalgebra, H2: HopfSuperalgebra) -> bool:
    """Exact equality of all structure tensors (labels are ignored)."""
    p = H1.p
    return (
        H1.p == H2.p
        and H1.parities == H2.parities
        and sp_equal(H1.mult, H2.mult, p)
        and sp_equal(H1.comult, H2.comult, p)
        and sp_equal(H1.antipode, H2.antipode, p)
        and np.array_equal(H1.unit % p, H2.unit % p)
        and np.array_equal(H1.counit % p, H2.counit % p)
    )


# ---------------------------------------------------------------------------
# primitives and the augmentation filtration


def primitives(H: HopfSuperalgebra) -> Dict[int, List[np.ndarray]]:
    """Basis of the primitive elements, split by parity.

    A primitive element x satisfies eps(x) = 0 and Delta(x) = x(x)1 + 1(x)x.
    """
    p, d = H.p, H.dim
    u = sp.csr_matrix(H.unit.reshape(d, 1))
    I = sp_identity(d)
    system = sp.vstack(
        [
            H.comult - sp.kron(I, u, format="csr") - sp.kron(u, I, format="csr"),
            sp.csr_matrix(H.counit.reshape(1, d)),
        ],
        format="csr",
    )
    out = {0: [], 1: []}
    for parity in (0, 1):
        cols = [k for k in range(d) if H.parities[k] == parity]
        if not cols:
            continue
        sub = FpSparseMatrix.from_scipy(p, system[:, cols])
        _, kernel = rank_kernel(sub)
        for vec in kernel:
            full = np.zeros(d, dtype=np.int64)
            full[cols] = vec
            out[parity].append(full)
    return out


def dense_inverse(A, p: int) -> np.ndarray:
    """Inverse of an invertible dense matrix over F_p."""
    A = np.asarray(A, dtype=np.int64) % p
    n = A.shape[0]
    M = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        nz = np.nonzero(M[c:, c])[0]
        if len(nz) == 0:
            raise ValueError("matrix is singular")
        k = c + nz[0]
        M[[c, k]] = M[[k, c]]
        M[c] = (M[c] * inverse_mod(int(M[c, c]), p)) % p
        for i in range(n):
            if i != c and M[i, c]:
                M[i] = (M[i] - M[i, c] * M[c]) % p
    return M[:, n:]


@dataclass
class AugmentationFiltration:
    """Powers of the augmentation ideal and the induced filtration of H (x) H.

    ``adapted`` holds a basis of H (as columns) in which every power of the
    ideal is spanned by a subset of the columns; ``levels[k]`` is the
    largest i with column k in (I_eps)^i.
    """

    algebra: HopfSuperalgebra
    power_dims: List[int]
    adapted: np.ndarray
    levels: np.ndarray
    adapted_inverse: np.ndarray

    @property
    def nilpotency(self) -> int:
        """Smallest i with (I_eps)^i = 0."""
        return len(self.power_dims)

    def ideal_power_basis(self, i: int) -> np.ndarray:
        """Columns spanning (I_eps)^i (i = 0 gives all of H)."""
        return self.adapted[:, self.levels >= i]

    def element_level(self, x) -> int:
        """Largest i with x in (I_eps)^i (a large number for x = 0)."""
        coords = (self.adapted_inverse @ np.asarray(x, dtype=np.int64)) % self.algebra.p
        nz = np.nonzero(coords)[0]
        if len(nz) == 0:
            return 10**9
        return int(self.levels[nz].min())

    def in_ideal_power(self, x, i: int) -> bool:
        return self.element_level(x) >= i

    def tensor_level(self, tensor) -> int:
        """Largest i with the tensor (length d*d vector) in F^i(H (x) H)."""
        d = self.algebra.dim
        X = np.asarray(tensor, dtype=np.int64).reshape(d, d) % self.algebra.p
        C = (self.adapted_inverse @ X @ self.adapted_inverse.T) % self.algebra.p
        rows, cols = np.nonzero(C)
        if len(rows) == 0:
            return 10**9
        return int((self.levels[rows] + self.levels[cols]).min())

    def tensor_in_filtration(self, tensor, i: int) -> bool:
        return self.tensor_level(tensor) >= i


def augmentation_filtration(H: HopfSuperalgebra, max_power: int = 10**6) -> AugmentationFiltration:
    """Compute (I_eps)^i for all i until the powers stabilise."""
    p, d = H.p, H.dim
    eps = FpSparseMatrix.from_dense(p, H.counit.reshape(1, d))
    _, ideal = rank_kernel(eps)
    ideal = [v % p for v in ideal]
    powers = [ideal]
    while len(powers) < max_power:
        prev = powers[-1]
        basis = EchelonBasis(p)
        new = []
        for a in prev:
            La = H.left_multiplication_by(a)
            for b in ideal:
                y = np.asarray(La @ b).ravel() % p
                vec = {i: int(v) for i, v in enumerate(y) if v}
                if vec and basis.add(vec):
                    new.append(y)
        if not new:
            break
        if len(new) == len(prev):
            powers.append(new)
            break
        powers.append(new)
    # adapted basis from the deepest power outwards
    columns: List[np.ndarray] = []
    levels: List[int] = []
    span = EchelonBasis(p)
    layered = [[H.unit.copy()]] + powers
    for level in range(len(layered) - 1, -1, -1):
        for v in layered[level]:
            vec = {i: int(x) for i, x in enumerate(v) if x}
            if span.add(vec):
                columns.append(v)
                levels.append(level)
    for k in range(d):
        if span.add({k: 1}):
            columns.append(H.basis_vector(k))
            levels.append(0)
    B = np.array(columns, dtype=np.int64).T % p
    return AugmentationFiltration(
        algebra=H,
        power_dims=[d] + [len(x) for x in powers],
        adapted=B,
        levels=np.array(levels, dtype=np.int64),
        adapted_inverse=dense_inverse(B, p),
    )


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass
class HomomorphismResult:
    ok: bool
    matrix: Optional[sp.csr_matrix]
    failure: str = ""


def check_hopf_map(H1: HopfSuperalgebra, H2: HopfSuperalgebra, phi, algebra_only: bool = False) -> Tuple[bool, str]:
    """Exact check that phi: H1 -> H2 is an even Hopf superalgebra map.

    With ``algebra_only`` only the augmented-algebra conditions (parity,
    unit, product, counit) are checked.
    """
    p = H1.p
    phi = sp_mod(phi, p)
    if phi.shape != (H2.dim, H1.dim):
        return False, f"matrix has shape {phi.shape}, expected {(H2.dim, H1.dim)}"
    coo = phi.tocoo()
    if coo.nnz:
        par2 = np.array(H2.parities)[coo.row]
        par1 = np.array(H1.parities)[coo.col]
        if np.any(par1 != par2):
            k = int(np.nonzero(par1 != par2)[0][0])
            return False, f"not even: image of {H1.labels[coo.col[k]]} has the wrong parity"
    if not np.array_equal(np.asarray(phi @ H1.unit).ravel() % p, H2.unit % p):
        return False, "unit not preserved"
    kron = sp.kron(phi, phi, format="csr")
    diff = _first_difference(H2.mult @ kron, phi @ H1.mult, p)
    if diff is not None:
        a, b = divmod(diff[1], H1.dim)
        return False, f"not multiplicative on ({H1.labels[a]}, {H1.labels[b]})"
    if algebra_only:
        if not np.array_equal(np.asarray(H2.counit @ phi.toarray()).ravel() % p, H1.counit % p):
            return False, "counit not preserved"
        return True, ""
    diff = _first_difference(H2.comult @ phi, kron @ H1.comult, p)
    if diff is not None:
        return False, f"not comultiplicative on {H1.labels[diff[1]]}"
    if not np.array_equal(np.asarray(H2.counit @ phi.toarray()).ravel() % p, H1.counit % p):
        return False, "counit not preserved"
    diff = _first_difference(H2.antipode @ phi, phi @ H1.antipode, p)
    if diff is not None:
        return False, f"antipode not preserved on {H1.labels[diff[1]]}"
    return True, ""


def hopf_hom_from_generators(
    H1: HopfSuperalgebra,
    H2: HopfSuperalgebra,
    images: Mapping[int, Sequence[int]],
    algebra_only: bool = False,
) -> HomomorphismResult:
    """Extend generator images multiplicatively and verify the result.

    ``images`` maps a basis index of H1 to a coefficient vector in H2.
    Words in the generators are explored breadth first; every time a word
    is linearly dependent on earlier ones, the same dependence is required
    of the images, which is exactly well-definedness on the relations.
    """
    if H1.p != H2.p:
        return HomomorphismResult(False, None, "different primes")
    p = H1.p
    gens = sorted(images)
    img = {g: np.asarray(images[g], dtype=np.int64) % p for g in gens}
    span = EchelonBasis(p, track=True)
    found_x: List[np.ndarray] = []
    found_y: List[np.ndarray] = []

    def insert(x, y) -> Optional[str]:
        vec = {i: int(v) for i, v in enumerate(x) if v}
        combo = span.solve(vec) if vec else {}
        if combo is not None:
            expected = np.zeros(H2.dim, dtype=np.int64)
            for idx, c in combo.items():
                expected = (expected + c * found_y[idx]) % p
            if not np.array_equal(expected, y % p):
                return "relation violated"
            return None
        span.add(vec)
        found_x.append(x)
        found_y.append(y % p)
        return "new"

    insert(H1.unit.copy(), H2.unit.copy())
    queue = [0]
    while queue:
        idx = queue.pop(0)
        x, y = found_x[idx], found_y[idx]
        for g in gens:
            gx = H1.multiply(H1.basis_vector(g), x)
            gy = H2.multiply(img[g], y)
            status = insert(gx, gy)
            if status == "relation violated":
                return HomomorphismResult(
                    False,
                    None,
                    f"relation violated: {H1.labels[g]} * ({H1.describe(x)}) is dependent on earlier words but its image is not",
                )
            if status == "new":
                queue.append(len(found_x) - 1)
    if len(found_x) != H1.dim:
        return HomomorphismResult(False, None, f"generators span only {len(found_x)} of {H1.dim} dimensions")
    columns = []
    for k in range(H1.dim):
        combo = span.solve({k: 1})
        col = np.zeros(H2.dim, dtype=np.int64)
        for idx, c in combo.items():
            col = (col + c * found_y[idx]) % p
        columns.append(col)
    phi = sp.csr_matrix(np.array(columns, dtype=np.int64).T % p)
    ok, failure = check_hopf_map(H1, H2, phi, algebra_only=algebra_only)
    if not ok:
        return HomomorphismResult(False, phi, failure)
    return HomomorphismResult(True, phi, "")


# ---------------------------------------------------------------------------
# JSON serialisation


def _label_to_json(label):
    if isinstance(label, tuple):
        return [_label_to_json(x) for x in label]
    return label


def _label_from_json(obj):
    if isinstance(obj, list):
        return tuple(_label_from_json(x) for x in obj)
    return obj


def _sparse_triples(matrix) -> List[List[int]]:
    coo = sp.csr_matrix(matrix).tocoo()
    order = np.lexsort((coo.row, coo.col))
    return [[int(coo.row[k]), int(coo.col[k]), int(coo.data[k])] for k in order]


def to_json(H: HopfSuperalgebra) -> dict:
    """Plain-data form of the structure tensors.

    ``mult`` entries are [k, a, b, c] meaning e_a e_b has coefficient c on
    e_k; ``comult`` entries are [a, b, k, c] meaning Delta(e_k) has
    coefficient c on e_a (x) e_b.
    """
    d = H.dim
    mult = [[r, c // d, c % d, v] for r, c, v in _sparse_triples(H.mult)]
    comult = [[r // d, r % d, c, v] for r, c, v in _sparse_triples(H.comult)]
    return {
        "name": H.name,
        "p": H.p,
        "labels": [_label_to_json(x) for x in H.labels],
        "parities": list(H.parities),
        "degrees": list(H.degrees) if H.degrees is not None else None,
        "generators": list(H.generators) if H.generators is not None else None,
        "named": dict(sorted(H.named.items())),
        "unit": [[int(k), int(v)] for k, v in enumerate(H.unit) if v],
        "counit": [[int(k), int(v)] for k, v in enumerate(H.counit) if v],
        "mult": sorted(mult),
        "comult": sorted(comult),
        "antipode": sorted(_sparse_triples(H.antipode)),
    }


def from_json(data: dict) -> HopfSuperalgebra:
    p = int(data["p"])
    d = len(data["labels"])

    def vec(entries):
        v = np.zeros(d, dtype=np.int64)
        for k, c in entries:
            v[k] = c
        return v

    m = data["mult"]
    mult = sp.csr_matrix(
        ([e[3] for e in m], ([e[0] for e in m], [e[1] * d + e[2] for e in m])), shape=(d, d * d), dtype=np.int64
    )
    c = data["comult"]
    comult = sp.csr_matrix(
        ([e[3] for e in c], ([e[0] * d + e[1] for e in c], [e[2] for e in c])), shape=(d * d, d), dtype=np.int64
    )
    s = data["antipode"]
    antipode = sp.csr_matrix(([e[2] for e in s], ([e[0] for e in s], [e[1] for e in s])), shape=(d, d), dtype=np.int64)
    return HopfSuperalgebra(
        p=p,
        labels=tuple(_label_from_json(x) for x in data["labels"]),
        parities=tuple(data["parities"]),
        mult=mult,
        unit=vec(data["unit"]),
        comult=comult,
        counit=vec(data["counit"]),
        antipode=antipode,
        degrees=tuple(data["degrees"]) if data.get("degrees") is not None else None,
        generators=tuple(data["generators"]) if data.get("generators") is not None else None,
        name=data.get("name", ""),
        named=data.get("named") or {},
    )


# ---------------------------------------------------------------------------
# assembling structure tensors from dictionaries


def build_hopf(
    p: int,
    labels: Sequence[Hashable],
    parities: Sequence[int],
    mult_table: Mapping[Tuple[int, int], Mapping[int, int]],
    unit_index: int,
    comult_table: Mapping[int, Mapping[Tuple[int, int], int]],
    counit: Mapping[int, int],
    antipode_table: Mapping[int, Mapping[int, int]],
    **kwargs,
) -> HopfSuperalgebra:
    """Assemble a HopfSuperalgebra from dictionaries of structure constants."""
    d = len(labels)
    rows, cols, vals = [], [], []
    for (a, b), terms in mult_table.items():
        for k, v in terms.items():
            if v % p:
                rows.append(k)
                cols.append(a * d + b)
                vals.append(v % p)
    mult = sp.csr_matrix((vals, (rows, cols)), shape=(d, d * d), dtype=np.int64)
    rows, cols, vals = [], [], []
    for k, terms in comult_table.items():
        for (a, b), v in terms.items():
            if v % p:
                rows.append(a * d + b)
                cols.append(k)
                vals.append(v % p)
    comult = sp.csr_matrix((vals, (rows, cols)), shape=(d * d, d), dtype=np.int64)
    rows, cols, vals = [], [], []
    for k, terms in antipode_table.items():
        for j, v in terms.items():
            if v % p:
                rows.append(j)
                cols.append(k)
                vals.append(v % p)
    antipode = sp.csr_matrix((vals, (rows, cols)), shape=(d, d), dtype=np.int64)
    unit = np.zeros(d, dtype=np.int64)
    unit[unit_index] = 1
    eps = np.zeros(d, dtype=np.int64)
    for k, v in counit.items():
        eps[k] = v % p
    return HopfSuperalgebra(
        p=p,
        labels=tuple(labels),
        parities=tuple(parities),
        mult=mult,
        unit=unit,
        comult=comult,
        counit=eps,
        antipode=antipode,
        **kwargs,
    )
