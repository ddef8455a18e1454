"""
F_p-points of the varieties V_r(GL_{m|n}) and V_{r;f,eta}(GL_{m|n}).

A point is a tuple (alpha_0, ..., alpha_{r-1} | beta) of (m+n)x(m+n) matrices
over F_p, each alpha_i even (supported on the diagonal blocks) and beta odd
(supported on the off-diagonal blocks), subject to

    [alpha_i, alpha_j] = 0,  [alpha_i, beta] = 0,
    alpha_i^p = 0 for i <= r-2,  alpha_{r-1}^p + beta^2 = 0,

and, for V_{r;f,eta}, f(alpha_{r-1}) + eta * alpha_0 = 0.  Such tuples are
exactly the kM_{r;f,eta}-supermodule structures on k^{m|n}: u_i acts by
alpha_i and v acts by beta.

Also here: the search for the least p-polynomial annihilating a matrix,
the covering of V_r by the V_{r;f}, and the Hopf endomorphisms of k[M_{r;s}].
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .field import check_prime, digit, factorial_mod, inverse_mod
from .groups import (
    PPolynomial,
    coordinate_Mrs,
    group_algebra_Mrfeta,
    matrix_power_mod,
)
from .hopf import HopfSuperalgebra, hopf_hom_from_generators, primitives
from .superlin import SuperMatrix, SuperSpace, dense_rank_kernel, dense_solve

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """The search space is larger than the configured budget."""


def enumeration_budget(default: int = DEFAULT_BUDGET) -> int:
    value = os.environ.get("SUPALG_BUDGET")
    if value:
        try:
            return int(value)
        except ValueError:
            raise ValueError(f"SUPALG_BUDGET must be an integer, got {value!r}") from None
    return default


# ---------------------------------------------------------------------------
# points


def _even_mask(m: int, n: int) -> np.ndarray:
    par = np.array([0] * m + [1] * n)
    return (par[:, None] == par[None, :])


@dataclass(frozen=True, eq=False)
class VrPoint:
    """A candidate tuple (alpha_0, ..., alpha_{r-1} | beta) for GL_{m|n} over F_p."""

    m: int
    n: int
    r: int
    p: int
    alphas: Tuple[np.ndarray, ...]
    beta: np.ndarray

    def __post_init__(self):
        check_prime(self.p)
        size = self.m + self.n
        if self.m < 0 or self.n < 0 or size == 0:
            raise ValueError("need m, n >= 0 with m + n > 0")
        if self.r < 1:
            raise ValueError("r must be at least 1")
        alphas = tuple(np.asarray(a, dtype=np.int64) % self.p for a in self.alphas)
        beta = np.asarray(self.beta, dtype=np.int64) % self.p
        if len(alphas) != self.r:
            raise ValueError(f"expected {self.r} alpha matrices, got {len(alphas)}")
        for a in alphas + (beta,):
            if a.shape != (size, size):
                raise ValueError(f"matrix of shape {a.shape}, expected {(size, size)}")
        even = _even_mask(self.m, self.n)
        for i, a in enumerate(alphas):
            if np.any(a[~even]):
                raise ValueError(f"alpha_{i} is not even (off-diagonal blocks must vanish)")
        if np.any(beta[even]):
            raise ValueError("beta is not odd (diagonal blocks must vanish)")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "beta", beta)

    @property
    def size(self) -> int:
        return self.m + self.n

    def entries(self) -> Tuple[int, ...]:
        """The free entries in canonical order: each alpha's diagonal blocks, then beta's."""
        even = _even_mask(self.m, self.n)
        out = []
        for a in self.alphas:
            out.extend(int(x) for x in a[even])
        out.extend(int(x) for x in self.beta[~even])
        return tuple(out)

    def key(self):
        return (self.m, self.n, self.r, self.p, self.entries())

    def __eq__(self, other):
        return isinstance(other, VrPoint) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def super_matrices(self) -> Tuple[Tuple[SuperMatrix, ...], SuperMatrix]:
        space = SuperSpace.standard(self.m, self.n)
        alphas = tuple(SuperMatrix.from_dense(self.p, space, space, 0, a) for a in self.alphas)
        return alphas, SuperMatrix.from_dense(self.p, space, space, 1, self.beta)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "r": self.r,
            "p": self.p,
            "alphas": [a.tolist() for a in self.alphas],
            "beta": self.beta.tolist(),
        }

    def __repr__(self):
        return f"VrPoint(m={self.m}, n={self.n}, r={self.r}, p={self.p}, entries={self.entries()})"


def point_from_entries(m: int, n: int, r: int, p: int, entries: Sequence[int]) -> VrPoint:
    """Inverse of VrPoint.entries."""
    size = m + n
    even = _even_mask(m, n)
    per_alpha = int(even.sum())
    per_beta = size * size - per_alpha
    if len(entries) != r * per_alpha + per_beta:
        raise ValueError("wrong number of entries")
    alphas = []
    pos = 0
    for _ in range(r):
        a = np.zeros((size, size), dtype=np.int64)
        a[even] = entries[pos : pos + per_alpha]
        alphas.append(a)
        pos += per_alpha
    b = np.zeros((size, size), dtype=np.int64)
    b[~even] = entries[pos:]
    return VrPoint(m, n, r, p, tuple(alphas), b)


@dataclass(frozen=True)
class PointCheck:
    ok: bool
    violation: str = ""

    def __bool__(self):
        return self.ok


def check_point(point: VrPoint, f: Optional[PPolynomial] = None, eta: int = 0) -> PointCheck:
    """Evaluate every defining equation; report the first one that fails."""
    p, r = point.p, point.r
    A, B = point.alphas, point.beta
    for i in range(r):
        for j in range(i + 1, r):
            if np.any((A[i] @ A[j] - A[j] @ A[i]) % p):
                return PointCheck(False, f"[alpha_{i}, alpha_{j}] != 0")
    for i in range(r):
        if np.any((A[i] @ B - B @ A[i]) % p):
            return PointCheck(False, f"[alpha_{i}, beta] != 0")
    for i in range(r - 1):
        if np.any(matrix_power_mod(A[i], p, p)):
            return PointCheck(False, f"alpha_{i}^p != 0")
    if np.any((matrix_power_mod(A[r - 1], p, p) + B @ B) % p):
        return PointCheck(False, f"alpha_{r - 1}^p + beta^2 != 0")
    if f is not None:
        if f.p != p:
            raise ValueError("polynomial modulus differs from p")
        if np.any((f.evaluate_matrix(A[r - 1]) + (eta % p) * A[0]) % p):
            return PointCheck(False, f"f(alpha_{r - 1}) + eta*alpha_0 != 0")
    return PointCheck(True)


def frobenius_twist_point(point: VrPoint, r: Optional[int] = None) -> VrPoint:
    """Raise every matrix entry to the p^r-th power (the input must lie on V_r)."""
    if not check_point(point):
        raise ValueError("the Frobenius twist is only taken of points of V_r")
    r = point.r if r is None else r
    e = point.p**r
    twist = lambda a: np.vectorize(lambda x: pow(int(x), e, point.p), otypes=[np.int64])(a)
    out = VrPoint(point.m, point.n, point.r, point.p, tuple(twist(a) for a in point.alphas), twist(point.beta))
    if not check_point(out):
        raise AssertionError("Frobenius twist left the variety")
    return out


# ---------------------------------------------------------------------------
# enumeration


def search_space_size(m: int, n: int, r: int, p: int) -> int:
    return p ** (r * (m * m + n * n) + 2 * m * n)


def enumerate_Vr(m: int, n: int, r: int, p: int, force: bool = False) -> List[VrPoint]:
    """All F_p-points of V_r(GL_{m|n}), in lexicographic order of their entries."""
    return enumerate_Vrfeta(m, n, r, p, None, 0, force=force)


def enumerate_Vrfeta(
    m: int, n: int, r: int, p: int, f: Optional[PPolynomial] = None, eta: int = 0, force: bool = False
) -> List[VrPoint]:
    """All F_p-points of V_{r;f,eta}(GL_{m|n}) (of V_r when f is None)."""
    check_prime(p)
    size = search_space_size(m, n, r, p)
    budget = enumeration_budget()
    if size > budget and not force:
        raise BudgetExceeded(f"search space has {size} candidates, above the budget {budget}")
    even = _even_mask(m, n)
    per_alpha = int(even.sum())
    per_beta = (m + n) ** 2 - per_alpha
    out = []
    for entries in itertools.product(range(p), repeat=r * per_alpha + per_beta):
        point = point_from_entries(m, n, r, p, entries)
        if check_point(point, f, eta):
            out.append(point)
    return out


# ---------------------------------------------------------------------------
# points as modules


@dataclass(frozen=True, eq=False)
class ModuleStructure:
    """The action of every basis element of kM_{r;f,eta} on k^{m|n}."""

    algebra: HopfSuperalgebra
    point: VrPoint
    action: Tuple[np.ndarray, ...]
    verified: bool
    failure: str = ""

    def acts_trivially(self) -> bool:
        """Every element of the augmentation ideal acts by zero."""
        unit = self.algebra.unit_index()
        return all(not np.any(a) for k, a in enumerate(self.action) if k != unit)


def point_to_module(point: VrPoint, f: PPolynomial, eta: int = 0) -> ModuleStructure:
    """Let u_i act by alpha_i and v by beta; check every product of basis elements."""
    p, r = point.p, point.r
    G = group_algebra_Mrfeta(p, r, f, eta)
    N = G.dim // 2
    top = p ** (r - 1)
    size = point.size
    identity = np.eye(size, dtype=np.int64)
    action = []
    for k in range(G.dim):
        e, n = divmod(k, N)
        mat = identity.copy()
        scale = 1
        for l in range(r - 1):
            d = digit(n, p, l)
            mat = (mat @ matrix_power_mod(point.alphas[l], d, p)) % p
            scale = (scale * factorial_mod(d, p)) % p
        mat = (mat @ matrix_power_mod(point.alphas[r - 1], n // top, p)) % p
        scale = (scale * factorial_mod(digit(n, p, r - 1), p)) % p
        mat = (mat * inverse_mod(scale, p)) % p
        if e:
            mat = (point.beta @ mat) % p
        action.append(mat)
    failure = ""
    if not np.array_equal(action[G.unit_index()], identity):
        failure = "unit does not act as the identity"
    mult = G.mult.tocsc()
    for a in range(G.dim):
        if failure:
            break
        for b in range(G.dim):
            col = mult[:, a * G.dim + b].tocoo()
            expected = np.zeros((size, size), dtype=np.int64)
            for k, c in zip(col.row, col.data):
                expected = (expected + int(c) * action[k]) % p
            if not np.array_equal((action[a] @ action[b]) % p, expected):
                failure = f"product {G.labels[a]} * {G.labels[b]} is not respected"
                break
    return ModuleStructure(G, point, tuple(action), not failure, failure)


def regular_point(p: int, r: int, f: PPolynomial, eta: int = 0) -> VrPoint:
    """The left regular representation of kM_{r;f,eta} as a point of V_{r;f,eta}(GL_{N|N})."""
    G = group_algebra_Mrfeta(p, r, f, eta)
    N = G.dim // 2
    alphas = tuple(G.left_multiplication(G.named[f"u{l}"]).toarray() % p for l in range(r))
    beta = G.left_multiplication(G.named["v"]).toarray() % p
    return VrPoint(N, N, r, p, alphas, beta)


# ---------------------------------------------------------------------------
# annihilating p-polynomials and the covering


def annihilating_p_polynomial(alpha, p: int, max_t: int) -> Optional[PPolynomial]:
    """The least-degree monic inseparable p-polynomial f with f(alpha) = 0.

    For each t the equation alpha^{p^t} = -sum_{1<=i<t} a_i alpha^{p^i} is a
    linear system in the a_i; the first t with a solution wins.  At that t
    the lower powers are linearly independent, so the solution is unique.
    """
    check_prime(p)
    alpha = np.asarray(alpha, dtype=np.int64) % p
    powers = [alpha]
    for t in range(1, max_t + 1):
        powers.append(matrix_power_mod(powers[-1], p, p))
        target = powers[t].ravel()
        if t == 1:
            if not np.any(target):
                return PPolynomial(p, (0, 1))
            continue
        A = np.array([powers[i].ravel() for i in range(1, t)], dtype=np.int64).T
        solution = dense_solve(A, (-target) % p, p)
        if solution is not None:
            return PPolynomial(p, (0,) + tuple(int(x) for x in solution) + (1,))
    return None


@dataclass(frozen=True)
class CoveringReport:
    passed: bool
    rows: Tuple[Tuple[VrPoint, Optional[PPolynomial]], ...]
    twist_is_bijection: bool
    twist_is_identity: bool


def covering_check(m: int, n: int, r: int, p: int, max_t: int, force: bool = False) -> CoveringReport:
    """Every point of V_r(GL_{m|n})(F_p) lies in V_{r;f}(F_p) for its least f."""
    points = enumerate_Vr(m, n, r, p, force=force)
    rows = []
    ok = True
    for point in points:
        f = annihilating_p_polynomial(point.alphas[r - 1], p, max_t)
        if f is None or not check_point(point, f, 0):
            ok = False
        rows.append((point, f))
    twisted = [frobenius_twist_point(pt) for pt in points]
    bijection = sorted(pt.key() for pt in twisted) == sorted(pt.key() for pt in points)
    identity = all(a == b for a, b in zip(points, twisted))
    return CoveringReport(ok and bijection, tuple(rows), bijection, identity)


# ---------------------------------------------------------------------------
# Hopf endomorphisms of k[M_{r;s}]


@dataclass(frozen=True, eq=False)
class EndoParams:
    """A verified Hopf endomorphism of k[M_{r;s}] and its parameters.

    ``mu``: tau -> mu tau.  ``a``: theta -> sum_i a_i theta^{p^i}.
    ``b`` (s >= 2): coefficient of sigma_1 in the image of sigma_{p^{s-1}}.
    """

    p: int
    r: int
    s: int
    mu: int
    a: Tuple[int, ...]
    b: Optional[int]
    matrix: np.ndarray = dc_field(repr=False)

    def key(self):
        return (self.mu,) + self.a + ((self.b,) if self.b is not None else ())

    def satisfies_constraints(self) -> bool:
        if self.s == 1:
            return True
        return (self.mu * self.mu - pow(self.a[0], self.p**self.r, self.p)) % self.p == 0


def _generator_images_from_params(H: HopfSuperalgebra, p: int, r: int, s: int, mu: int, a, b) -> Dict[int, np.ndarray]:
    """The comorphism on generators described by the parameters (mu, a_0..a_{r-1}, b)."""
    theta = H.basis_vector(H.named["theta"])
    images = {H.named["tau"]: (mu * H.basis_vector(H.named["tau"])) % p}
    image_theta = np.zeros(H.dim, dtype=np.int64)
    for i, ai in enumerate(a):
        image_theta = (image_theta + ai * H.power(theta, p**i)) % p
    images[H.named["theta"]] = image_theta
    for k in range(1, s):
        key = H.named[f"sigma{p**k}"]
        vec = (pow(a[0], p ** (r + k - 1), p) * H.basis_vector(key)) % p
        if k == s - 1 and b is not None:
            vec = (vec + b * H.basis_vector(H.named["sigma1"])) % p
        images[key] = vec
    return images


def parametrised_endomorphisms(p: int, r: int, s: int) -> List[EndoParams]:
    """The closed parametrised family of endomorphisms, each realised and verified."""
    H = coordinate_Mrs(p, r, s)
    out = []
    for mu in range(p):
        for a in itertools.product(range(p), repeat=r):
            for b in (range(p) if s >= 2 else [None]):
                if s >= 2 and (mu * mu - pow(a[0], p**r, p)) % p:
                    continue
                images = _generator_images_from_params(H, p, r, s, mu, a, b)
                result = hopf_hom_from_generators(H, H, images)
                if not result.ok:
                    raise AssertionError(f"parameters {(mu, a, b)} do not give a Hopf map: {result.failure}")
                out.append(EndoParams(p, r, s, mu, tuple(a), b, result.matrix.toarray() % p))
    return sorted(out, key=lambda e: e.key())


def _span(vectors: Sequence[np.ndarray], p: int):
    for coeffs in itertools.product(range(p), repeat=len(vectors)):
        v = np.zeros_like(vectors[0]) if vectors else None
        for c, x in zip(coeffs, vectors):
            v = (v + c * x) % p
        yield v


def enumerate_endos(p: int, r: int, s: int) -> List[EndoParams]:
    """All Hopf endomorphisms of k[M_{r;s}] over F_p by constrained brute force.

    tau and theta must go to primitives of their parity.  The image y of
    sigma_{p^k} must satisfy Dbar(y) = (phi (x) phi)(Dbar(sigma_{p^k})), where
    the right side only involves images already chosen; the solutions form a
    coset of the even primitives.  Every candidate is then validated by
    extending multiplicatively and checking all Hopf axioms.
    """
    H = coordinate_Mrs(p, r, s)
    d = H.dim
    unit = H.unit_index()
    prims = primitives(H)
    even_prims = [v % p for v in prims[0]]
    odd_prims = [v % p for v in prims[1]]
    tau_key, theta_key = H.named["tau"], H.named["theta"]
    sigma_keys = [H.named[f"sigma{p**k}"] for k in range(1, s)]
    comult = H.comult.toarray() % p
    # reduced coproduct matrix restricted to even, augmentation-ideal columns
    even_cols = [k for k in range(d) if H.parities[k] == 0 and k != unit]
    reduced = comult.copy()
    for k in range(d):
        reduced[k * d + unit, :] = 0
        reduced[unit * d + k, :] = 0
    reduced_even = reduced[:, even_cols]

    def sigma_images(images: Dict[int, np.ndarray], upto: int) -> Dict[int, np.ndarray]:
        """phi(sigma_u) and phi(sigma_u tau) for u < p^upto from generator images."""
        top = p ** (r - 1)
        sigma1 = H.power(images[theta_key], top)
        gens = [sigma1] + [images[key] for key in sigma_keys[: upto - 1]]
        out = {}
        for u in range(p**upto):
            vec = H.basis_vector(unit)
            scale = 1
            for i in range(upto):
                di = digit(u, p, i)
                vec = H.multiply(vec, H.power(gens[i], di))
                scale = (scale * factorial_mod(di, p)) % p
            vec = (vec * inverse_mod(scale, p)) % p
            out[H.index((0, u, 0))] = vec
            out[H.index((0, u, 1))] = H.multiply(vec, images[tau_key])
        return out

    results = []
    for tau_img in _span(odd_prims, p):
        for theta_img in _span(even_prims, p):
            partial = [{tau_key: tau_img, theta_key: theta_img}]
            for k, key in enumerate(sigma_keys, start=1):
                extended = []
                for images in partial:
                    known = sigma_images(images, k)
                    target = np.zeros(d * d, dtype=np.int64)
                    for (x, y), c in H.coproduct_terms(key).items():
                        if x == unit or y == unit:
                            continue
                        target = (target + c * np.kron(known[x], known[y])) % p
                    particular = dense_solve(reduced_even, target, p)
                    if particular is None:
                        continue
                    base = np.zeros(d, dtype=np.int64)
                    base[even_cols] = particular
                    for prim in _span(even_prims, p):
                        new = dict(images)
                        new[key] = (base + prim) % p
                        extended.append(new)
                partial = extended
            for images in partial:
                result = hopf_hom_from_generators(H, H, images)
                if not result.ok:
                    continue
                results.append(_params_of(H, p, r, s, result.matrix.toarray() % p))
    return sorted(results, key=lambda e: e.key())


def _params_of(H: HopfSuperalgebra, p: int, r: int, s: int, matrix: np.ndarray) -> EndoParams:
    tau, theta = H.named["tau"], H.named["theta"]
    mu = int(matrix[tau, tau])
    theta_vec = H.basis_vector(theta)
    a = []
    for i in range(r):
        power = H.power(theta_vec, p**i)
        k = int(np.nonzero(power)[0][0])
        a.append(int(matrix[k, theta] * inverse_mod(int(power[k]), p)) % p)
    b = None
    if s >= 2:
        b = int(matrix[H.named["sigma1"], H.named[f"sigma{p ** (s - 1)}"]])
    return EndoParams(p, r, s, mu, tuple(a), b, matrix)


def endomorphism_parameter_count(p: int, r: int, s: int) -> int:
    """Size of the parametrised family over F_p."""
    if s == 1:
        return p ** (r + 1)
    pairs = sum(1 for mu in range(p) for a0 in range(p) if (mu * mu - pow(a0, p**r, p)) % p == 0)
    return pairs * p ** (r - 1) * p
