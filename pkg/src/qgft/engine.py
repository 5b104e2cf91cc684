"""Multiplicative-unitary engine.

Builds and checks the full structure carried by a multiplicative unitary W on
the tensor square of an n-dimensional Hilbert space: the pentagon relation,
the two slice algebras M (leg-2 slices of W) and Mhat (leg-1 slices), the
comultiplications, the antipodes recovered from slice consistency, invariant
(Haar) weights realized as implementing vectors, the sharp involution on
functionals, and the double-dual (Pontryagin) span check.

Comultiplications act by conjugation with W:

    delta(x)     = W^* (1 (x) x) W
    delta_hat(y) = Sigma W (y (x) 1) W^* Sigma

Heavy identities on the generated algebras (coassociativity, invariance) are
checked in coefficient space: with orthonormal algebra bases the coefficient
tensor of delta reproduces the operator-level Frobenius deviations exactly, up
to the separately reported span-membership residual, and never materializes
operators on the tensor cube.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    Functional,
    Tolerance,
    as_complex_matrix,
    deviation,
    flip,
    kron,
    leg_embed,
    max_abs,
    membership_residual,
    span_basis,
    span_coords,
    span_reconstruct,
    subspace_equal,
)

DENSE_PENTAGON_MAX_DIM = 12
DENSE_PENTAGON_TOL = 1e-12


class ClosureFailure(ValueError):
    """Products or adjoints of generated slices leave the span: W is not of
    the expected regular type."""


class InconsistentSlices(ValueError):
    """The slice relation does not define a linear antipode on the span."""


class SingularAntipode(ValueError):
    """The assembled antipode matrix is not invertible within tolerance."""


class NotInAlgebra(ValueError):
    """An operand lies outside the relevant algebra span."""


class WeightDerivationError(ValueError):
    """No (or no unique) invariant implementing vector could be recovered."""


@dataclass
class CheckReport:
    name: str
    passed: bool
    deviation: float
    tolerance: float
    elapsed_ms: float = 0.0
    note: str = ""


class MultiplicativeUnitary:
    """A unitary on the tensor square, dense or in structured permutation form.

    The permutation form stores index maps (s, t) -> (sig[s, t], tau[s, t]);
    pentagon and unitarity checks on it are exact integer computations.
    """

    def __init__(self, n: int, dense: np.ndarray | None = None,
                 perm: tuple[np.ndarray, np.ndarray] | None = None):
        if (dense is None) == (perm is None):
            raise ValueError("provide exactly one of dense or perm")
        self.n = n
        self._dense = dense
        self.perm = perm

    @classmethod
    def from_dense(cls, w) -> "MultiplicativeUnitary":
        w = as_complex_matrix(w)
        n = math.isqrt(w.shape[0])
        if w.shape != (n * n, n * n):
            raise ValueError(f"operator shape {w.shape} is not a square tensor square")
        return cls(n, dense=w)

    @classmethod
    def from_permutation(cls, sig, tau) -> "MultiplicativeUnitary":
        sig = np.asarray(sig, dtype=np.intp)
        tau = np.asarray(tau, dtype=np.intp)
        if sig.shape != tau.shape or sig.ndim != 2 or sig.shape[0] != sig.shape[1]:
            raise ValueError("permutation maps must be square index tables of equal shape")
        return cls(sig.shape[0], perm=(sig, tau))

    @property
    def is_permutation(self) -> bool:
        return self.perm is not None

    @property
    def dense(self) -> np.ndarray:
        if self._dense is None:
            sig, tau = self.perm
            n = self.n
            w = np.zeros((n * n, n * n), dtype=complex)
            s, t = np.divmod(np.arange(n * n), n)
            w[sig[s, t] * n + tau[s, t], s * n + t] = 1.0
            self._dense = w
        return self._dense

    def unitarity_deviation(self) -> float:
        if self.is_permutation:
            sig, tau = self.perm
            flat = np.sort((sig * self.n + tau).ravel())
            return 0.0 if np.array_equal(flat, np.arange(self.n * self.n)) else 1.0
        w = self.dense
        eye = np.eye(w.shape[0])
        return max(deviation(w @ w.conj().T, eye), deviation(w.conj().T @ w, eye))


def _pentagon_permutation_deviation(mu: MultiplicativeUnitary) -> float:
    """Exact pentagon check on all n^3 basis triples of a permutation W."""
    sig, tau = mu.perm
    n = mu.n
    s, t, u = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")

    # W12 W13 W23, applied right to left.
    a, b, c = s, sig[t, u], tau[t, u]
    a, b, c = sig[a, c], b, tau[a, c]
    a, b, c = sig[a, b], tau[a, b], c

    # W23 W12.
    p, q, r = sig[s, t], tau[s, t], u
    p, q, r = p, sig[q, r], tau[q, r]

    same = np.array_equal(a, p) and np.array_equal(b, q) and np.array_equal(c, r)
    return 0.0 if same else 1.0


def check_pentagon(mu: MultiplicativeUnitary, tol: float | None = None) -> CheckReport:
    """Verify W12 W13 W23 = W23 W12.

    Permutation forms are checked exactly on basis triples; dense forms build
    the three leg embeddings, which limits them to n <= 12.
    """
    if mu.is_permutation:
        dev = _pentagon_permutation_deviation(mu)
        tolerance = 0.0 if tol is None else tol
        return CheckReport("pentagon", dev <= tolerance, dev, tolerance, note="exact")
    if mu.n > DENSE_PENTAGON_MAX_DIM:
        raise ValueError(
            f"dense pentagon check needs n <= {DENSE_PENTAGON_MAX_DIM}, got n = {mu.n}")
    w, n = mu.dense, mu.n
    lhs = leg_embed(w, 12, n) @ leg_embed(w, 13, n) @ leg_embed(w, 23, n)
    rhs = leg_embed(w, 23, n) @ leg_embed(w, 12, n)
    dev = deviation(lhs, rhs)
    tolerance = DENSE_PENTAGON_TOL if tol is None else tol
    return CheckReport("pentagon", dev <= tolerance, dev, tolerance)


def slice_family_leg2(w: np.ndarray, n: int) -> np.ndarray:
    """All leg-2 slices (id (x) theta)(w) over matrix-unit functionals
    theta = E_kl, stacked in (k, l) order; shape (n^2, n, n)."""
    w4 = np.asarray(w, dtype=complex).reshape(n, n, n, n)
    return np.ascontiguousarray(np.transpose(w4, (3, 1, 0, 2)).reshape(n * n, n, n))


def slice_family_leg1(w: np.ndarray, n: int) -> np.ndarray:
    """All leg-1 slices (omega (x) id)(w) over matrix units E_ij, in (i, j)
    order; shape (n^2, n, n)."""
    w4 = np.asarray(w, dtype=complex).reshape(n, n, n, n)
    return np.ascontiguousarray(np.transpose(w4, (2, 0, 1, 3)).reshape(n * n, n, n))


def _family_membership(mats: np.ndarray, basis: np.ndarray) -> float:
    coeffs = np.einsum("qab,kab->qk", mats, basis.conj())
    recon = np.einsum("qk,kab->qab", coeffs, basis)
    return max_abs(mats - recon)


def algebra_closure_deviation(basis: np.ndarray) -> float:
    """How far products and adjoints of basis elements leave the span."""
    if basis.shape[0] == 0:
        return 0.0
    m = basis.shape[0]
    products = np.einsum("iab,jbc->ijac", basis, basis).reshape(m * m, *basis.shape[1:])
    adjoints = basis.conj().transpose(0, 2, 1)
    return max(_family_membership(products, basis), _family_membership(adjoints, basis))


def slice_span_m(mu: MultiplicativeUnitary, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    return span_basis(slice_family_leg2(mu.dense, mu.n), tol)


def slice_span_mhat(mu: MultiplicativeUnitary, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    return span_basis(slice_family_leg1(mu.dense, mu.n), tol)


def generate_M(mu: MultiplicativeUnitary, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the span of leg-2 slices of W, verified closed
    under multiplication and adjoint.  Raises ClosureFailure otherwise."""
    basis = slice_span_m(mu, tol)
    dev = algebra_closure_deviation(basis)
    if dev > tol.bound(1.0):
        raise ClosureFailure(f"leg-2 slice span is not an algebra (deviation {dev:.3e})")
    return basis


def generate_Mhat(mu: MultiplicativeUnitary, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the span of leg-1 slices of W; see generate_M."""
    basis = slice_span_mhat(mu, tol)
    dev = algebra_closure_deviation(basis)
    if dev > tol.bound(1.0):
        raise ClosureFailure(f"leg-1 slice span is not an algebra (deviation {dev:.3e})")
    return basis


def comultiply(mu: MultiplicativeUnitary, x: np.ndarray) -> np.ndarray:
    """delta(x) = W^* (1 (x) x) W."""
    w, n = mu.dense, mu.n
    x = as_complex_matrix(x, n, n)
    return w.conj().T @ kron(np.eye(n, dtype=complex), x) @ w


def dual_comultiply(mu: MultiplicativeUnitary, y: np.ndarray) -> np.ndarray:
    """delta_hat(y) = Sigma W (y (x) 1) W^* Sigma."""
    w, n = mu.dense, mu.n
    y = as_complex_matrix(y, n, n)
    sigma = flip(n)
    return sigma @ (w @ kron(y, np.eye(n, dtype=complex)) @ w.conj().T) @ sigma


def comult_coeff_tensor(comult, basis: np.ndarray) -> tuple[np.ndarray, float]:
    """Coefficient tensor D of a comultiplication over an orthonormal basis:
    comult(x_i) = sum_{k,l} D[k, l, i] x_k (x) x_l, plus the largest
    membership residual of any comult(x_i) in span (x) span."""
    m = basis.shape[0]
    n = basis.shape[1]
    coeffs = np.zeros((m, m, m), dtype=complex)
    residual = 0.0
    for i in range(m):
        t4 = comult(basis[i]).reshape(n, n, n, n)
        c = np.einsum("kac,lbd,abcd->kl", basis.conj(), basis.conj(), t4, optimize=True)
        recon = np.einsum("kl,kac,lbd->abcd", c, basis, basis, optimize=True)
        residual = max(residual, max_abs(t4 - recon))
        coeffs[:, :, i] = c
    return coeffs, residual


def check_coassociativity(mu: MultiplicativeUnitary, basis: np.ndarray, comult,
                          tol: Tolerance = DEFAULT_TOL,
                          coeffs: tuple[np.ndarray, float] | None = None) -> CheckReport:
    """Deviation of (delta (x) id) delta from (id (x) delta) delta on the basis.

    Evaluated in coefficient space, where the orthonormal basis makes the
    coefficient norm equal the operator Frobenius norm; the reported deviation
    includes the span-membership residual of delta itself.
    """
    d, residual = comult_coeff_tensor(comult, basis) if coeffs is None else coeffs
    lhs = np.einsum("kla,abi->klbi", d, d)
    rhs = np.einsum("lmb,abi->almi", d, d)
    diff = lhs - rhs
    per_input = np.sqrt(np.sum(np.abs(diff) ** 2, axis=(0, 1, 2)))
    dev = max(float(np.max(per_input)) if per_input.size else 0.0, residual)
    return CheckReport("coassociativity", dev <= tol.bound(1.0), dev, tol.bound(1.0))


@dataclass(frozen=True)
class Weight:
    """A positive functional given by an implementing vector:
    phi(x) = <x xi, xi>, with GNS map Lambda(x) = x xi."""

    xi: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=complex).reshape(-1)
        if not (np.all(np.isfinite(xi.real)) and np.all(np.isfinite(xi.imag))):
            raise ValueError("implementing vector must be finite")
        object.__setattr__(self, "xi", xi)

    @property
    def dim(self) -> int:
        return self.xi.shape[0]

    def value(self, x: np.ndarray) -> complex:
        return complex(np.vdot(self.xi, x @ self.xi))

    def gns(self, x: np.ndarray) -> np.ndarray:
        return x @ self.xi

    def values_on(self, basis: np.ndarray) -> np.ndarray:
        return np.einsum("kab,b,a->k", basis, self.xi, self.xi.conj())

    def gns_rank(self, basis: np.ndarray, rtol: float = 1e-8) -> int:
        """Rank of Lambda on the basis; equals len(basis) iff faithful there."""
        if basis.shape[0] == 0:
            return 0
        vectors = basis @ self.xi
        svals = np.linalg.svd(vectors, compute_uv=False)
        return int(np.sum(svals > rtol * svals[0])) if svals[0] > 0 else 0


def check_left_invariance(weight: Weight, comult, basis: np.ndarray,
                          tol: Tolerance = DEFAULT_TOL,
                          coeffs: tuple[np.ndarray, float] | None = None) -> CheckReport:
    """phi((omega (x) id)(delta x)) = phi(x) omega(1) over all matrix-unit
    functionals omega and basis elements x."""
    d, residual = comult_coeff_tensor(comult, basis) if coeffs is None else coeffs
    f = weight.values_on(basis)
    got = np.einsum("kli,kvu,l->uvi", d, basis, f)
    want = np.einsum("uv,i->uvi", np.eye(weight.dim), f)
    dev = max(deviation(got, want), residual)
    return CheckReport("left-invariance", dev <= tol.bound(1.0), dev, tol.bound(1.0))


def check_right_invariance(psi_values: np.ndarray, comult, basis: np.ndarray,
                           tol: Tolerance = DEFAULT_TOL,
                           coeffs: tuple[np.ndarray, float] | None = None) -> CheckReport:
    """psi((id (x) omega)(delta x)) = psi(x) omega(1), for a right-invariant
    functional given by its values on the basis."""
    d, residual = comult_coeff_tensor(comult, basis) if coeffs is None else coeffs
    g = np.asarray(psi_values, dtype=complex)
    n = basis.shape[1]
    got = np.einsum("kli,k,lvu->uvi", d, g, basis)
    want = np.einsum("uv,i->uvi", np.eye(n), g)
    dev = max(deviation(got, want), residual)
    return CheckReport("right-invariance", dev <= tol.bound(1.0), dev, tol.bound(1.0))


def _fit_slice_map(sources: np.ndarray, targets: np.ndarray, basis: np.ndarray,
                   tol: Tolerance, error: type, what: str) -> tuple[np.ndarray, float]:
    """Least-squares linear map on span(basis) sending each source slice to
    its target slice, with the worst operator-level residual."""
    coords_src = np.einsum("qab,kab->kq", sources, basis.conj())
    coords_tgt = np.einsum("qab,kab->kq", targets, basis.conj())
    mem = max(_family_membership(sources, basis), _family_membership(targets, basis))
    # Solve S @ coords_src = coords_tgt in the least-squares sense.
    s_mat, *_ = np.linalg.lstsq(coords_src.T, coords_tgt.T, rcond=None)
    s_mat = s_mat.T
    fit = max_abs(s_mat @ coords_src - coords_tgt)
    residual = max(fit, mem)
    if residual > tol.bound(1.0):
        raise error(f"{what} is not well defined on the span (residual {residual:.3e})")
    return s_mat, residual


def antipode_from_slices(mu: MultiplicativeUnitary, basis: np.ndarray,
                         tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """Antipode on M in basis coordinates, as the unique linear map with
    S((id (x) theta)(W)) = (id (x) theta)(W^*) over all matrix-unit theta."""
    n = mu.n
    sources = slice_family_leg2(mu.dense, n)
    targets = slice_family_leg2(mu.dense.conj().T, n)
    return _fit_slice_map(sources, targets, basis, tol, InconsistentSlices, "antipode")


def antipode_hat_from_slices(mu: MultiplicativeUnitary, basis_hat: np.ndarray,
                             tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """Dual antipode on Mhat: Shat((omega (x) id)(W^*)) = (omega (x) id)(W)."""
    n = mu.n
    sources = slice_family_leg1(mu.dense.conj().T, n)
    targets = slice_family_leg1(mu.dense, n)
    return _fit_slice_map(sources, targets, basis_hat, tol, InconsistentSlices,
                          "dual antipode")


def lam(mu: MultiplicativeUnitary, omega: Functional) -> np.ndarray:
    """Canonical embedding of a functional into Mhat: lam(omega) =
    (omega (x) id)(W)."""
    n = mu.n
    return np.einsum("ij,jkil->kl", omega.density, mu.dense.reshape(n, n, n, n))


def lam_hat(mu: MultiplicativeUnitary, theta: Functional) -> np.ndarray:
    """Canonical embedding of a functional into M: lam_hat(theta) =
    (id (x) theta)(W^*)."""
    n = mu.n
    wadj4 = mu.dense.conj().T.reshape(n, n, n, n)
    return np.einsum("kl,iljk->ij", theta.density, wadj4)


def sharp(omega: Functional, s_mat: np.ndarray, basis: np.ndarray) -> Functional:
    """The sharp of a functional, omega_sharp(x) = conj(omega(S(x)^*)),
    re-encoded as a density supported on the span."""
    star_vals = np.einsum("ij,lij->l", omega.density, basis.conj())
    f = s_mat.T @ star_vals.conj()
    density = np.einsum("k,kab->ba", f, basis.conj())
    return Functional(density)


@dataclass(frozen=True)
class SharpFunctional:
    """A functional paired with its sharp; satisfies
    ((omega (x) id)(W))^* = (omega_sharp (x) id)(W) and is involutive on the
    algebra."""

    omega: Functional
    omega_sharp: Functional

    @classmethod
    def of(cls, omega: Functional, s_mat: np.ndarray,
           basis: np.ndarray) -> "SharpFunctional":
        return cls(omega, sharp(omega, s_mat, basis))

    def adjoint_deviation(self, mu: MultiplicativeUnitary) -> float:
        return deviation(lam(mu, self.omega).conj().T, lam(mu, self.omega_sharp))


def tensor_functional(omega1: Functional, omega2: Functional, x: np.ndarray) -> complex:
    """(omega1 (x) omega2)(x) for an operator on the tensor square."""
    n = omega1.dim
    x4 = np.asarray(x, dtype=complex).reshape(n, n, n, n)
    return complex(np.einsum("ij,kl,jlik->", omega1.density, omega2.density, x4))


def fixed_leg_vectors(mu: MultiplicativeUnitary, leg: int,
                      rtol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis of {v : W(eta (x) v) = eta (x) v for all eta}
    (leg = 2), or of the mirrored leg-1 condition (leg = 1)."""
    n = mu.n
    w4 = mu.dense.reshape(n, n, n, n)
    if leg == 2:
        lhs = w4.reshape(n * n * n, n)                      # rows (a,b,i), cols t
        rhs = np.einsum("ai,bt->abit", np.eye(n), np.eye(n)).reshape(n * n * n, n)
    elif leg == 1:
        lhs = np.transpose(w4, (0, 1, 3, 2)).reshape(n * n * n, n)  # rows (a,b,j), cols s
        rhs = np.einsum("bj,as->abjs", np.eye(n), np.eye(n)).reshape(n * n * n, n)
    else:
        raise ValueError("leg must be 1 or 2")
    _, svals, vh = np.linalg.svd(lhs - rhs, full_matrices=True)
    cutoff = max(1e-10, rtol * (svals[0] if svals.size else 1.0))
    null_dim = int(np.sum(svals <= cutoff)) + (n - svals.size)
    return vh[n - null_dim:].conj() if null_dim else np.zeros((0, n), dtype=complex)


def derive_haar_vectors(mu: MultiplicativeUnitary, m_basis: np.ndarray,
                        tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Implementing vectors for the Haar weights of a generic W.

    The GNS relation W^*(Lambda(x) (x) Lambda(y)) = (Lambda (x) Lambda)
    (delta(y)(x (x) 1)) forces W(eta (x) xi_phi) = eta (x) xi_phi for every
    eta, and dually for xi_phihat; each fixed-vector space must be a line.
    xi_phi is normalized to |xi_phi|^2 = n (counting convention); the scale of
    xi_phihat is pinned by the dual GNS relation
    <Lambda_hat((omega (x) id)(W)), Lambda(x)> = omega(x^*).
    """
    n = mu.n
    v2 = fixed_leg_vectors(mu, 2)
    if v2.shape[0] != 1:
        raise WeightDerivationError(
            f"leg-2 fixed space has dimension {v2.shape[0]}, expected 1 "
            "(is W the multiplicative unitary of a quantum group in GNS position?)")
    xi_phi = v2[0] * math.sqrt(n)

    v1 = fixed_leg_vectors(mu, 1)
    if v1.shape[0] != 1:
        raise WeightDerivationError(
            f"leg-1 fixed space has dimension {v1.shape[0]}, expected 1")
    unit = v1[0]

    lam_family = slice_family_leg1(mu.dense, n)              # lambda(E_uv), (u, v) order
    lhs = (lam_family @ unit) @ (m_basis @ xi_phi).conj().T  # (n^2, m)
    rhs = m_basis.conj().reshape(m_basis.shape[0], n * n).T
    denom = float(np.sum(np.abs(lhs) ** 2))
    if denom <= tol.absolute:
        raise WeightDerivationError("dual weight scale is undetermined")
    scale = complex(np.sum(lhs.conj() * rhs)) / denom
    return xi_phi, scale * unit


class QuantumGroupPair:
    """The bundle (M basis, Mhat basis, W, weights, antipodes) on a common
    carrier space; the object all Fourier and pairing operations consume.

    Instances are immutable after construction; cached derived data (dense W,
    comultiplication coefficient tensors) is computed once on first use.
    """

    def __init__(self, mu: MultiplicativeUnitary, m_basis: np.ndarray,
                 mhat_basis: np.ndarray, phi: Weight, phihat: Weight,
                 s_mat: np.ndarray, shat_mat: np.ndarray):
        self.mu = mu
        self.n = mu.n
        self.m_basis = np.asarray(m_basis, dtype=complex)
        self.mhat_basis = np.asarray(mhat_basis, dtype=complex)
        self.phi = phi
        self.phihat = phihat
        self.s_mat = np.asarray(s_mat, dtype=complex)
        self.shat_mat = np.asarray(shat_mat, dtype=complex)

    @cached_property
    def w(self) -> np.ndarray:
        return self.mu.dense

    @cached_property
    def w4(self) -> np.ndarray:
        return self.w.reshape(self.n, self.n, self.n, self.n)

    @cached_property
    def w_adj4(self) -> np.ndarray:
        return self.w.conj().T.reshape(self.n, self.n, self.n, self.n)

    def delta(self, x: np.ndarray) -> np.ndarray:
        return comultiply(self.mu, x)

    def delta_hat(self, y: np.ndarray) -> np.ndarray:
        return dual_comultiply(self.mu, y)

    @cached_property
    def delta_coeffs(self) -> tuple[np.ndarray, float]:
        return comult_coeff_tensor(self.delta, self.m_basis)

    @cached_property
    def delta_hat_coeffs(self) -> tuple[np.ndarray, float]:
        return comult_coeff_tensor(self.delta_hat, self.mhat_basis)

    @cached_property
    def phi_values(self) -> np.ndarray:
        return self.phi.values_on(self.m_basis)

    @cached_property
    def phihat_values(self) -> np.ndarray:
        return self.phihat.values_on(self.mhat_basis)

    def coords_m(self, x: np.ndarray) -> np.ndarray:
        return span_coords(x, self.m_basis)

    def coords_mhat(self, y: np.ndarray) -> np.ndarray:
        return span_coords(y, self.mhat_basis)

    def require_in_m(self, x: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
        res = membership_residual(x, self.m_basis)
        if res > tol.bound(max_abs(x)):
            raise NotInAlgebra(f"operand lies outside M (residual {res:.3e})")
        return self.coords_m(x)

    def require_in_mhat(self, y: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
        res = membership_residual(y, self.mhat_basis)
        if res > tol.bound(max_abs(y)):
            raise NotInAlgebra(f"operand lies outside Mhat (residual {res:.3e})")
        return self.coords_mhat(y)

    @cached_property
    def s_inv_mat(self) -> np.ndarray:
        svals = np.linalg.svd(self.s_mat, compute_uv=False)
        if svals.size == 0 or svals[-1] <= 1e-10 * svals[0]:
            raise SingularAntipode("antipode matrix is singular within tolerance")
        return np.linalg.inv(self.s_mat)

    @cached_property
    def shat_inv_mat(self) -> np.ndarray:
        svals = np.linalg.svd(self.shat_mat, compute_uv=False)
        if svals.size == 0 or svals[-1] <= 1e-10 * svals[0]:
            raise SingularAntipode("dual antipode matrix is singular within tolerance")
        return np.linalg.inv(self.shat_mat)

    def apply_s(self, x: np.ndarray) -> np.ndarray:
        return span_reconstruct(self.s_mat @ self.coords_m(x), self.m_basis)

    def apply_s_inv(self, x: np.ndarray) -> np.ndarray:
        return span_reconstruct(self.s_inv_mat @ self.coords_m(x), self.m_basis)

    def apply_shat(self, y: np.ndarray) -> np.ndarray:
        return span_reconstruct(self.shat_mat @ self.coords_mhat(y), self.mhat_basis)

    def apply_shat_inv(self, y: np.ndarray) -> np.ndarray:
        return span_reconstruct(self.shat_inv_mat @ self.coords_mhat(y), self.mhat_basis)

    @cached_property
    def w_membership_residual(self) -> float:
        """Residual of W against span(M (x) Mhat)."""
        ma, mb = self.m_basis, self.mhat_basis
        coeffs = np.einsum("kac,lbd,abcd->kl", ma.conj(), mb.conj(), self.w4,
                           optimize=True)
        recon = np.einsum("kl,kac,lbd->abcd", coeffs, ma, mb, optimize=True)
        return max_abs(self.w4 - recon)


def pair_from_unitary(w, tol: Tolerance = DEFAULT_TOL) -> QuantumGroupPair:
    """Build the full quantum-group bundle from a multiplicative unitary.

    Checks unitarity and the pentagon relation, generates both slice algebras
    (with closure verification), recovers the Haar implementing vectors, and
    assembles both antipodes from slice consistency.
    """
    mu = w if isinstance(w, MultiplicativeUnitary) else MultiplicativeUnitary.from_dense(w)
    udev = mu.unitarity_deviation()
    if udev > tol.bound(1.0):
        raise ValueError(f"W is not unitary (deviation {udev:.3e})")
    pentagon = check_pentagon(mu)
    if not pentagon.passed:
        raise ValueError(f"pentagon equation fails (deviation {pentagon.deviation:.3e})")
    m_basis = generate_M(mu, tol)
    mhat_basis = generate_Mhat(mu, tol)
    xi_phi, xi_phihat = derive_haar_vectors(mu, m_basis, tol)
    s_mat, _ = antipode_from_slices(mu, m_basis, tol)
    shat_mat, _ = antipode_hat_from_slices(mu, mhat_basis, tol)
    return QuantumGroupPair(mu, m_basis, mhat_basis, Weight(xi_phi), Weight(xi_phihat),
                            s_mat, shat_mat)


def check_gns_consistency(qg: QuantumGroupPair, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """<Lambda(x), Lambda(y)> = phi(y^* x) on all basis pairs, on both sides,
    plus faithfulness (full GNS rank) of both weights."""
    dev = 0.0
    for basis, weight in ((qg.m_basis, qg.phi), (qg.mhat_basis, qg.phihat)):
        vectors = basis @ weight.xi
        gram = vectors @ vectors.conj().T                   # [x, y] = <L(x), L(y)>
        m = basis.shape[0]
        prods = np.einsum("ycb,xca->yxba", basis.conj(), basis)  # y^* x, as (y, x) pairs
        phivals = np.einsum("yxba,a,b->xy", prods, weight.xi, weight.xi.conj())
        dev = max(dev, deviation(gram, phivals))
        if weight.gns_rank(basis) < m:
            dev = max(dev, 1.0)
    return CheckReport("gns-consistency", dev <= tol.bound(1.0), dev, tol.bound(1.0))


def check_gns_duality_phihat(qg: QuantumGroupPair, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """<Lambda_hat((omega (x) id)(W)), Lambda(x)> = omega(x^*), over all
    matrix-unit omega and M-basis x."""
    lam_family = slice_family_leg1(qg.w, qg.n)
    lhs = (lam_family @ qg.phihat.xi) @ (qg.m_basis @ qg.phi.xi).conj().T
    rhs = qg.m_basis.conj().reshape(qg.m_basis.shape[0], -1).T
    dev = deviation(lhs, rhs)
    return CheckReport("gns-duality-phihat", dev <= tol.bound(1.0), dev, tol.bound(1.0))


def check_gns_duality_phihatdual(qg: QuantumGroupPair,
                                 tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """<Lambda((id (x) omega)(W^*)), Lambda_hat(y)> = omega(y^*), over all
    matrix-unit omega and Mhat-basis y."""
    lamhat_family = slice_family_leg2(qg.w.conj().T, qg.n)
    lhs = (lamhat_family @ qg.phi.xi) @ (qg.mhat_basis @ qg.phihat.xi).conj().T
    rhs = qg.mhat_basis.conj().reshape(qg.mhat_basis.shape[0], -1).T
    dev = deviation(lhs, rhs)
    return CheckReport("gns-duality-phihatdual", dev <= tol.bound(1.0), dev, tol.bound(1.0))


def check_antipode(qg: QuantumGroupPair, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """Slice consistency of both antipodes against the stored matrices,
    anti-multiplicativity of S, and the Kac property S(x^*)^* = S^{-1}(x)."""
    dev = 0.0
    try:
        s_fit, s_res = antipode_from_slices(qg.mu, qg.m_basis, tol)
        shat_fit, shat_res = antipode_hat_from_slices(qg.mu, qg.mhat_basis, tol)
    except InconsistentSlices:
        return CheckReport("antipode-slices", False, 1.0, tol.bound(1.0),
                           note="slice relation inconsistent")
    dev = max(s_res, shat_res, deviation(s_fit, qg.s_mat), deviation(shat_fit, qg.shat_mat))

    basis = qg.m_basis
    m = basis.shape[0]
    s_on_basis = np.einsum("pk,pab->kab", qg.s_mat, basis)
    for i in range(m):
        for j in range(m):
            anti = deviation(qg.apply_s(basis[i] @ basis[j]),
                             s_on_basis[j] @ s_on_basis[i])
            dev = max(dev, anti)

    s2dev = deviation(qg.s_mat @ qg.s_mat, np.eye(m))
    if s2dev <= tol.bound(1.0):  # Kac case: S(x^*)^* = S^{-1}(x)
        for i in range(m):
            twisted = qg.apply_s(basis[i].conj().T).conj().T
            dev = max(dev, deviation(twisted, qg.apply_s_inv(basis[i])))
    return CheckReport("antipode-slices", dev <= tol.bound(1.0), dev, tol.bound(1.0),
                       note=f"S^2 deviation from id: {s2dev:.3e}")


def check_sharp_involution(qg: QuantumGroupPair, rng: np.random.Generator,
                           samples: int = 20, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """((omega (x) id)(W))^* = (omega_sharp (x) id)(W) for random omega, and
    involutivity of sharp on the algebra."""
    n = qg.n
    dev = 0.0
    for _ in range(samples):
        density = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        omega = Functional(density)
        omega_sharp = sharp(omega, qg.s_mat, qg.m_basis)
        lhs = _slice_leg1(omega.density, qg.w4).conj().T
        rhs = _slice_leg1(omega_sharp.density, qg.w4)
        dev = max(dev, deviation(lhs, rhs))
        twice = sharp(omega_sharp, qg.s_mat, qg.m_basis)
        vals = np.einsum("ij,kji->k", omega.density, qg.m_basis)
        vals_twice = np.einsum("ij,kji->k", twice.density, qg.m_basis)
        dev = max(dev, deviation(vals, vals_twice))
    return CheckReport("sharp-involution", dev <= tol.bound(1.0), dev, tol.bound(1.0))


def _slice_leg1(density: np.ndarray, x4: np.ndarray) -> np.ndarray:
    return np.einsum("ij,jkil->kl", density, x4)


def _slice_leg2(density: np.ndarray, x4: np.ndarray) -> np.ndarray:
    return np.einsum("kl,iljk->ij", density, x4)


def check_slice_product_laws(qg: QuantumGroupPair, rng: np.random.Generator,
                             samples: int = 5, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """Multiplicativity of W: products of slices are slices of the
    comultiplied functionals, on both legs and for W^* on leg 2.

    The comultiplied functionals (e.g. mu = (omega1 (x) omega2) o delta) are
    evaluated on all matrix units in one contraction against W, never forming
    operators on the tensor square per unit.
    """
    n = qg.n
    w4 = qg.w4
    wadj4 = qg.w_adj4
    dev = 0.0

    def random_density():
        return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))

    for _ in range(samples):
        r1, r2 = random_density(), random_density()

        # (omega1 (x) id)(W)(omega2 (x) id)(W) = (mu (x) id)(W),
        # mu = (omega1 (x) omega2) o delta.  mu(E_ab) tabulated directly.
        mu_vals = np.einsum("ij,kl,pajl,pbik->ab", r1, r2, w4.conj(), w4,
                            optimize=True)
        lhs = _slice_leg1(r1, w4) @ _slice_leg1(r2, w4)
        dev = max(dev, deviation(lhs, _slice_leg1(mu_vals.T, w4)))

        # (id (x) theta1)(W)(id (x) theta2)(W) = (id (x) nu)(W),
        # nu = (theta1 (x) theta2) o delta_hat_cop with delta_hat_cop(y) = W(y (x) 1)W^*.
        nu_vals = np.einsum("ij,kl,jlaq,ikbq->ab", r1, r2, w4, w4.conj(),
                            optimize=True)
        lhs = _slice_leg2(r1, w4) @ _slice_leg2(r2, w4)
        dev = max(dev, deviation(lhs, _slice_leg2(nu_vals.T, w4)))

        # Same law for W^*, now with the unflipped delta_hat.
        nu_prime_vals = np.einsum("ij,kl,ljaq,kibq->ab", r1, r2, w4, w4.conj(),
                                  optimize=True)
        lhs = _slice_leg2(r1, wadj4) @ _slice_leg2(r2, wadj4)
        dev = max(dev, deviation(lhs, _slice_leg2(nu_prime_vals.T, wadj4)))

    return CheckReport("slice-product-laws", dev <= tol.bound(1.0), dev, tol.bound(1.0))


def pontryagin_check(mu: MultiplicativeUnitary, m_basis: np.ndarray,
                     mhat_basis: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """Double duality: with What = Sigma W^* Sigma, the leg-1 slices of What
    span M and its leg-2 slices span Mhat."""
    n = mu.n
    sigma = flip(n)
    what = sigma @ mu.dense.conj().T @ sigma
    hat_m = span_basis(slice_family_leg2(what, n))     # the dual's "M": should be Mhat
    hat_mhat = span_basis(slice_family_leg1(what, n))  # the dual's "Mhat": should be M
    cmp1 = subspace_equal(hat_mhat, m_basis, tol)
    cmp2 = subspace_equal(hat_m, mhat_basis, tol)
    dev = max(cmp1.deviation, cmp2.deviation)
    return CheckReport("pontryagin", cmp1.equal and cmp2.equal, dev, tol.bound(1.0))
