"""
Z/2-graded linear algebra over F_p.

Conventions
-----------
* A superspace is an ordered list of basis parities.  The standard space
  k^{m|n} lists the m even vectors first, then the n odd ones, so the
  four blocks of a matrix are positional.
* The tensor product of two superspaces uses the index ``a * dim(W) + b``
  for the basis vector ``e_a (x) f_b``.
* The tensor product of maps follows the Koszul rule
  ``(f (x) g)(v (x) w) = (-1)^{|v| |g|} f(v) (x) g(w)``.

Exact elimination works on sparse rows stored as ``{column: value}``
dictionaries.  Pivots are chosen Markowitz style: the remaining row with
the fewest nonzeros (lowest row index on ties), then inside that row the
column that occurs in the fewest remaining rows (lowest column index on
ties).  The choice is fully deterministic, so kernels are reproducible.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field as dc_field
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .field import check_prime, inverse_mod

SparseVector = Dict[Hashable, int]


# ---------------------------------------------------------------------------
# superspaces and signs


@dataclass(frozen=True)
class SuperSpace:
    """A finite-dimensional superspace given by the parity of each basis vector."""

    parities: Tuple[int, ...]

    def __post_init__(self):
        parities = tuple(int(x) for x in self.parities)
        if any(x not in (0, 1) for x in parities):
            raise ValueError("parities must be 0 or 1")
        object.__setattr__(self, "parities", parities)

    @classmethod
    def standard(cls, m: int, n: int) -> "SuperSpace":
        """k^{m|n}: m even basis vectors followed by n odd ones."""
        return cls((0,) * m + (1,) * n)

    @property
    def dim(self) -> int:
        return len(self.parities)

    @property
    def even_dim(self) -> int:
        return self.parities.count(0)

    @property
    def odd_dim(self) -> int:
        return self.parities.count(1)

    def parity_array(self) -> np.ndarray:
        return np.array(self.parities, dtype=np.int64)

    def tensor(self, other: "SuperSpace") -> "SuperSpace":
        return SuperSpace(tuple((a + b) % 2 for a in self.parities for b in other.parities))

    def sign_matrix(self, p: int) -> sp.csr_matrix:
        """The parity operator diag((-1)^{|e_i|}) with entries in F_p."""
        return sp.diags([(p - 1) if x else 1 for x in self.parities], format="csr", dtype=np.int64)


def supertwist_sign(parity_v: int, parity_w: int) -> int:
    """Sign (-1)^{|v| |w|} picked up when v and w are swapped."""
    return -1 if (parity_v % 2) and (parity_w % 2) else 1


def supertwist(i: int, j: int, space_v: SuperSpace, space_w: SuperSpace) -> Tuple[int, Tuple[int, int]]:
    """Apply the supertwist to the basis tensor e_i (x) f_j.

    Returns the sign and the index pair of f_j (x) e_i.
    """
    return supertwist_sign(space_v.parities[i], space_w.parities[j]), (j, i)


def twist_matrix(space_v: SuperSpace, space_w: SuperSpace, p: int) -> sp.csr_matrix:
    """Matrix of the supertwist V (x) W -> W (x) V in the tensor bases."""
    dv, dw = space_v.dim, space_w.dim
    rows, cols, vals = [], [], []
    for a in range(dv):
        for b in range(dw):
            rows.append(b * dv + a)
            cols.append(a * dw + b)
            vals.append(p - 1 if space_v.parities[a] and space_w.parities[b] else 1)
    return sp.csr_matrix((vals, (rows, cols)), shape=(dv * dw, dv * dw), dtype=np.int64)


# ---------------------------------------------------------------------------
# sparse helpers over F_p


def sp_mod(matrix, p: int) -> sp.csr_matrix:
    """Reduce a sparse integer matrix mod p and drop explicit zeros."""
    out = sp.csr_matrix(matrix, dtype=np.int64, copy=True)
    out.data %= p
    out.eliminate_zeros()
    return out


def sp_equal(a, b, p: int) -> bool:
    """Exact equality of two sparse matrices over F_p."""
    if a.shape != b.shape:
        return False
    diff = sp_mod(sp.csr_matrix(a, dtype=np.int64) - sp.csr_matrix(b, dtype=np.int64), p)
    return diff.nnz == 0


def sp_identity(n: int) -> sp.csr_matrix:
    return sp.identity(n, dtype=np.int64, format="csr")


# ---------------------------------------------------------------------------
# supermatrices


@dataclass(frozen=True, eq=False)
class SuperMatrix:
    """A homogeneous linear map between superspaces with entries in F_p.

    ``matrix`` has shape (codomain.dim, domain.dim).  Entry (i, j) may only be
    nonzero when parity(row i) + parity(column j) equals the map's parity.
    """

    p: int
    domain: SuperSpace
    codomain: SuperSpace
    parity: int
    matrix: sp.csr_matrix = dc_field(repr=False)

    def __post_init__(self):
        check_prime(self.p)
        mat = sp_mod(self.matrix, self.p)
        if mat.shape != (self.codomain.dim, self.domain.dim):
            raise ValueError(f"matrix shape {mat.shape} does not match {self.codomain.dim}x{self.domain.dim}")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "parity", int(self.parity) % 2)
        coo = mat.tocoo()
        row_par = self.codomain.parity_array()[coo.row] if coo.nnz else np.zeros(0, dtype=np.int64)
        col_par = self.domain.parity_array()[coo.col] if coo.nnz else np.zeros(0, dtype=np.int64)
        if np.any((row_par + col_par) % 2 != self.parity):
            raise ValueError("entries are not compatible with the declared parity")

    @classmethod
    def from_dense(cls, p, domain, codomain, parity, array) -> "SuperMatrix":
        return cls(p, domain, codomain, parity, sp.csr_matrix(np.asarray(array, dtype=np.int64) % p))

    @classmethod
    def identity(cls, p: int, space: SuperSpace) -> "SuperMatrix":
        return cls(p, space, space, 0, sp_identity(space.dim))

    @classmethod
    def zero(cls, p: int, domain: SuperSpace, codomain: SuperSpace, parity: int = 0) -> "SuperMatrix":
        return cls(p, domain, codomain, parity, sp.csr_matrix((codomain.dim, domain.dim), dtype=np.int64))

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def compose(self, other: "SuperMatrix") -> "SuperMatrix":
        """self after other."""
        if other.p != self.p:
            raise ValueError("mixed moduli")
        if other.codomain != self.domain:
            raise ValueError("composition of incompatible superspaces")
        return SuperMatrix(self.p, other.domain, self.codomain, self.parity + other.parity, self.matrix @ other.matrix)

    __matmul__ = compose

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        if (other.p, other.domain, other.codomain, other.parity) != (self.p, self.domain, self.codomain, self.parity):
            raise ValueError("can only add maps with the same shape and parity")
        return SuperMatrix(self.p, self.domain, self.codomain, self.parity, self.matrix + other.matrix)

    def __neg__(self) -> "SuperMatrix":
        return self.scale(-1)

    def __sub__(self, other: "SuperMatrix") -> "SuperMatrix":
        return self + (-other)

    def scale(self, c: int) -> "SuperMatrix":
        return SuperMatrix(self.p, self.domain, self.codomain, self.parity, self.matrix * (int(c) % self.p))

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (
            self.p == other.p
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.parity == other.parity
            and sp_equal(self.matrix, other.matrix, self.p)
        )

    def __hash__(self):
        return id(self)


def tensor_map(f: SuperMatrix, g: SuperMatrix) -> SuperMatrix:
    """Koszul-signed tensor product of two homogeneous maps."""
    if f.p != g.p:
        raise ValueError("mixed moduli")
    p = f.p
    left = f.matrix
    if g.parity:
        left = left @ f.domain.sign_matrix(p)
    mat = sp.kron(left, g.matrix, format="csr")
    return SuperMatrix(
        p,
        f.domain.tensor(g.domain),
        f.codomain.tensor(g.codomain),
        f.parity + g.parity,
        mat,
    )


@dataclass(frozen=True)
class BlockDecomposition:
    """The four blocks of an endomorphism of k^{m|n}, each re-embedded."""

    upper_left: SuperMatrix
    lower_right: SuperMatrix
    upper_right: SuperMatrix
    lower_left: SuperMatrix

    @property
    def diagonal(self) -> SuperMatrix:
        return self.upper_left + self.lower_right

    @property
    def antidiagonal(self) -> SuperMatrix:
        return self.upper_right + self.lower_left


def block_masks(space: SuperSpace):
    """Boolean masks selecting the even-even, odd-odd, even-odd and odd-even blocks."""
    par = space.parity_array()
    even = par == 0
    odd = ~even
    return (
        np.outer(even, even),
        np.outer(odd, odd),
        np.outer(even, odd),
        np.outer(odd, even),
    )


def block_decompose(M: SuperMatrix) -> BlockDecomposition:
    """Split a square supermatrix into its four positional blocks.

    Each block is returned as a matrix of the full size with zeros outside
    the block, so that products like (upper-left)(upper-right) make sense.
    An even map has only diagonal blocks and an odd map only off-diagonal
    blocks; the blocks that do not match M's parity come back as zero.
    """
    if M.domain != M.codomain:
        raise ValueError("block decomposition needs an endomorphism")
    space = M.domain
    dense = M.to_dense()
    masks = block_masks(space)
    parts = []
    for mask, parity in zip(masks, (0, 0, 1, 1)):
        parts.append(SuperMatrix.from_dense(M.p, space, space, parity, np.where(mask, dense, 0)))
    return BlockDecomposition(*parts)


def dense_blocks(array: np.ndarray, m: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Embedded blocks of a dense (m+n)x(m+n) array in the order of ``BlockDecomposition``."""
    size = array.shape[0]
    space = SuperSpace.standard(m, size - m)
    return tuple(np.where(mask, array, 0) for mask in block_masks(space))


# ---------------------------------------------------------------------------
# sparse matrices and exact elimination


class FpSparseMatrix:
    """A sparse matrix over F_p stored as a dictionary of nonzero rows."""

    def __init__(self, p: int, nrows: int, ncols: int, rows: Optional[Dict[int, SparseVector]] = None):
        self.p = check_prime(p)
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        self.rows: Dict[int, SparseVector] = {}
        for i, row in (rows or {}).items():
            if not 0 <= i < self.nrows:
                raise IndexError(f"row {i} out of range")
            clean = {}
            for j, v in row.items():
                if not 0 <= j < self.ncols:
                    raise IndexError(f"column {j} out of range")
                v %= p
                if v:
                    clean[j] = v
            if clean:
                self.rows[i] = clean

    @classmethod
    def from_dense(cls, p: int, array) -> "FpSparseMatrix":
        arr = np.asarray(array, dtype=np.int64) % p
        rows = {}
        for i in range(arr.shape[0]):
            nz = np.nonzero(arr[i])[0]
            if len(nz):
                rows[i] = {int(j): int(arr[i, j]) for j in nz}
        return cls(p, arr.shape[0], arr.shape[1], rows)

    @classmethod
    def from_scipy(cls, p: int, matrix) -> "FpSparseMatrix":
        csr = sp_mod(matrix, p)
        rows = {}
        for i in range(csr.shape[0]):
            start, end = csr.indptr[i], csr.indptr[i + 1]
            if end > start:
                rows[i] = {int(j): int(v) for j, v in zip(csr.indices[start:end], csr.data[start:end])}
        return cls(p, csr.shape[0], csr.shape[1], rows)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for i, row in self.rows.items():
            for j, v in row.items():
                out[i, j] = v
        return out

    def transpose(self) -> "FpSparseMatrix":
        rows: Dict[int, SparseVector] = {}
        for i, row in self.rows.items():
            for j, v in row.items():
                rows.setdefault(j, {})[i] = v
        return FpSparseMatrix(self.p, self.ncols, self.nrows, rows)

    def apply(self, vector: Sequence[int]) -> np.ndarray:
        out = np.zeros(self.nrows, dtype=np.int64)
        for i, row in self.rows.items():
            out[i] = sum(v * int(vector[j]) for j, v in row.items()) % self.p
        return out

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())


def _axpy(target: SparseVector, factor: int, source: SparseVector, p: int) -> None:
    """target -= factor * source, in place, over F_p."""
    for c, v in source.items():
        new = (target.get(c, 0) - factor * v) % p
        if new:
            target[c] = new
        else:
            target.pop(c, None)


def _markowitz_eliminate(rows: Dict[int, SparseVector], p: int, full: bool):
    """Gaussian elimination with Markowitz pivoting on a dict of sparse rows.

    The rows are modified in place.  Returns the list of (row id, pivot
    column) pairs in the order they were chosen.  With ``full`` the pivot
    columns are also cleared from earlier pivot rows (reduced echelon form).
    """
    col_rows: Dict[Hashable, set] = {}
    for rid, row in rows.items():
        for c in row:
            col_rows.setdefault(c, set()).add(rid)
    active = set(rows)
    heap = [(len(row), rid) for rid, row in rows.items()]
    heapq.heapify(heap)
    pivots = []
    while heap:
        length, rid = heapq.heappop(heap)
        if rid not in active or len(rows[rid]) != length:
            continue
        row = rows[rid]
        active.discard(rid)
        if not row:
            continue
        col = min(row, key=lambda c: (len(col_rows[c]), c))
        inv = inverse_mod(row[col], p)
        if inv != 1:
            for c in row:
                row[c] = (row[c] * inv) % p
        others = [o for o in col_rows[col] if o != rid and (full or o in active)]
        for other in sorted(others):
            target = rows[other]
            factor = target[col]
            before = set(target)
            _axpy(target, factor, row, p)
            after = set(target)
            for c in before - after:
                col_rows[c].discard(other)
            for c in after - before:
                col_rows.setdefault(c, set()).add(other)
            if other in active:
                heapq.heappush(heap, (len(target), other))
        if not full:
            for c in row:
                col_rows[c].discard(rid)
        pivots.append((rid, col))
    return pivots


def rank(M: FpSparseMatrix) -> int:
    """Rank of a sparse matrix over F_p."""
    rows = {i: dict(r) for i, r in M.rows.items()}
    return len(_markowitz_eliminate(rows, M.p, full=False))


def rank_of_vectors(vectors: Iterable[SparseVector], p: int) -> int:
    """Rank of a family of sparse vectors with arbitrary hashable, sortable keys."""
    rows = {}
    for i, v in enumerate(vectors):
        clean = {k: x % p for k, x in v.items() if x % p}
        if clean:
            rows[i] = clean
    return len(_markowitz_eliminate(rows, p, full=False))


def rank_kernel(M: FpSparseMatrix) -> Tuple[int, List[np.ndarray]]:
    """Rank and a kernel basis of M (vectors x with M x = 0).

    Kernel vectors are indexed by the free columns in increasing order; the
    vector for free column f has a 1 in position f.
    """
    rows = {i: dict(r) for i, r in M.rows.items()}
    pivots = _markowitz_eliminate(rows, M.p, full=True)
    pivot_cols = {col: rid for rid, col in pivots}
    kernel = []
    for free in range(M.ncols):
        if free in pivot_cols:
            continue
        vec = np.zeros(M.ncols, dtype=np.int64)
        vec[free] = 1
        for col, rid in pivot_cols.items():
            v = rows[rid].get(free, 0)
            if v:
                vec[col] = (-v) % M.p
        kernel.append(vec)
    return len(pivots), kernel


def dense_rank_kernel(array, p: int) -> Tuple[int, List[np.ndarray]]:
    """Reference dense Gauss-Jordan elimination (first nonzero pivot in each column)."""
    A = np.asarray(array, dtype=np.int64) % p
    A = A.copy()
    nrows, ncols = A.shape
    pivot_cols = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + nz[0]
        A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * inverse_mod(int(A[r, c]), p)) % p
        for i in range(nrows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivot_cols.append(c)
        r += 1
    kernel = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = np.zeros(ncols, dtype=np.int64)
        vec[free] = 1
        for i, c in enumerate(pivot_cols):
            vec[c] = (-A[i, free]) % p
        kernel.append(vec)
    return len(pivot_cols), kernel


def dense_solve(A, b, p: int) -> Optional[np.ndarray]:
    """One solution x of A x = b over F_p, or None if the system is inconsistent."""
    A = np.asarray(A, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1) % p
    augmented = np.hstack([A, (-b) % p])
    _, kernel = dense_rank_kernel(augmented, p)
    last = A.shape[1]
    for vec in kernel:
        if vec[last] == 1:
            return vec[:last] % p
    return None


def dense_row_space(array, p: int) -> np.ndarray:
    """Reduced row echelon form (nonzero rows only) of a dense matrix."""
    A = np.asarray(array, dtype=np.int64) % p
    A = A.copy()
    nrows, ncols = A.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + nz[0]
        A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * inverse_mod(int(A[r, c]), p)) % p
        for i in range(nrows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        r += 1
    return A[:r]


class EchelonBasis:
    """Incrementally maintained echelon basis of a span of sparse vectors.

    Each stored row has a pivot equal to its smallest key and is normalised
    so the pivot entry is 1.  Keys may be any mutually comparable hashables
    (integers, tuples of integers, ...).  With ``track=True`` every stored
    row remembers how it was formed from the inserted vectors, which makes
    ``solve`` available.
    """

    def __init__(self, p: int, track: bool = False):
        self.p = check_prime(p)
        self.track = track
        self.pivot_rows: Dict[Hashable, SparseVector] = {}
        self.pivot_combos: Dict[Hashable, SparseVector] = {}
        self.count = 0

    def __len__(self):
        return len(self.pivot_rows)

    def _reduce(self, vector: SparseVector, combo: Optional[SparseVector]):
        p = self.p
        vec = {k: v % p for k, v in vector.items() if v % p}
        heap = [k for k in vec if k in self.pivot_rows]
        heapq.heapify(heap)
        while heap:
            key = heapq.heappop(heap)
            coeff = vec.get(key)
            if not coeff:
                continue
            row = self.pivot_rows[key]
            for c, v in row.items():
                new = (vec.get(c, 0) - coeff * v) % p
                if new:
                    if c not in vec and c in self.pivot_rows:
                        heapq.heappush(heap, c)
                    vec[c] = new
                else:
                    vec.pop(c, None)
            if combo is not None:
                _axpy(combo, coeff, self.pivot_combos[key], p)
        return vec, combo

    def reduce(self, vector: SparseVector) -> SparseVector:
        """Remainder of the vector after reduction by the stored basis."""
        return self._reduce(vector, None)[0]

    def contains(self, vector: SparseVector) -> bool:
        return not self.reduce(vector)

    def add(self, vector: SparseVector) -> bool:
        """Insert a vector; returns True if it enlarged the span."""
        index = self.count
        self.count += 1
        combo = {index: 1} if self.track else None
        vec, combo = self._reduce(vector, combo)
        if not vec:
            return False
        pivot = min(vec)
        inv = inverse_mod(vec[pivot], self.p)
        self.pivot_rows[pivot] = {k: (v * inv) % self.p for k, v in vec.items()}
        if self.track:
            self.pivot_combos[pivot] = {k: (v * inv) % self.p for k, v in combo.items()}
        return True

    def solve(self, vector: SparseVector) -> Optional[SparseVector]:
        """Coefficients c with sum_i c_i * (inserted vector i) == vector, or None."""
        if not self.track:
            raise ValueError("solve needs an EchelonBasis built with track=True")
        vec, combo = self._reduce(vector, {})
        if vec:
            return None
        return {k: (-v) % self.p for k, v in combo.items() if v % self.p}
