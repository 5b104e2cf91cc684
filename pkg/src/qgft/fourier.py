"""Fourier transform, inversion, Plancherel, convolution products and the
dual pairing on a quantum group pair.

The transform and its inverse are weighted slices of W,

    F(a)      = (phi (x) id)(W (a (x) 1))
    F^{-1}(b) = (id (x) phihat)(W^* (1 (x) b)),

computed by contracting the sliced leg with the weight's implementing vector
on both sides.  This is exact because the sliced leg always lies in the
algebra on which the vector state agrees with the weight, which the span
membership preconditions guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import CheckReport, Functional, QuantumGroupPair, sharp
from .linalg import DEFAULT_TOL, Tolerance, as_complex_matrix, deviation, inner, max_abs


def fourier(qg: QuantumGroupPair, a) -> np.ndarray:
    """Fourier transform of an element of M; lands in Mhat."""
    a = as_complex_matrix(a, qg.n, qg.n)
    qg.require_in_m(a)
    return np.einsum("i,ikpl,pj,j->kl", qg.phi.xi.conj(), qg.w4, a, qg.phi.xi,
                     optimize=True)


def inverse_fourier(qg: QuantumGroupPair, b) -> np.ndarray:
    """Inverse Fourier transform of an element of Mhat; lands in M."""
    b = as_complex_matrix(b, qg.n, qg.n)
    qg.require_in_mhat(b)
    return np.einsum("k,ikjp,pl,l->ij", qg.phihat.xi.conj(), qg.w_adj4, b,
                     qg.phihat.xi, optimize=True)


@dataclass(frozen=True)
class FourierReport:
    """A transform together with its GNS transport: the transform is isometric
    on GNS vectors, Lambda_hat(F(a)) = Lambda(a)."""

    input: np.ndarray
    output: np.ndarray
    gns_input: np.ndarray
    gns_output: np.ndarray

    @property
    def deviation(self) -> float:
        return max_abs(self.gns_output - self.gns_input)


def fourier_report(qg: QuantumGroupPair, a) -> FourierReport:
    out = fourier(qg, a)
    return FourierReport(np.asarray(a, dtype=complex), out,
                         qg.phi.gns(np.asarray(a, dtype=complex)), qg.phihat.gns(out))


def inverse_fourier_report(qg: QuantumGroupPair, b) -> FourierReport:
    out = inverse_fourier(qg, b)
    return FourierReport(np.asarray(b, dtype=complex), out,
                         qg.phihat.gns(np.asarray(b, dtype=complex)), qg.phi.gns(out))


def check_inversion(qg: QuantumGroupPair, tol: Tolerance = DEFAULT_TOL,
                    rng: np.random.Generator | None = None,
                    samples: int = 0) -> CheckReport:
    """Both composites of F and F^{-1} deviate from the identity by at most
    tol, on full algebra bases and optionally on random samples."""
    dev = 0.0
    elements_m = list(qg.m_basis)
    elements_mhat = list(qg.mhat_basis)
    if rng is not None and samples > 0:
        for _ in range(samples):
            cm = rng.standard_normal(qg.m_basis.shape[0]) \
                + 1j * rng.standard_normal(qg.m_basis.shape[0])
            elements_m.append(np.einsum("k,kab->ab", cm, qg.m_basis))
            ch = rng.standard_normal(qg.mhat_basis.shape[0]) \
                + 1j * rng.standard_normal(qg.mhat_basis.shape[0])
            elements_mhat.append(np.einsum("k,kab->ab", ch, qg.mhat_basis))
    for a in elements_m:
        dev = max(dev, deviation(inverse_fourier(qg, fourier(qg, a)), a))
    for b in elements_mhat:
        dev = max(dev, deviation(fourier(qg, inverse_fourier(qg, b)), b))
    return CheckReport("fourier-inversion", dev <= tol.bound(1.0), dev, tol.bound(1.0))


def check_gns_transport(qg: QuantumGroupPair, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """Lambda_hat(F(a)) = Lambda(a) and Lambda(F^{-1}(b)) = Lambda_hat(b) on
    full bases."""
    dev = 0.0
    for a in qg.m_basis:
        dev = max(dev, fourier_report(qg, a).deviation)
    for b in qg.mhat_basis:
        dev = max(dev, inverse_fourier_report(qg, b).deviation)
    return CheckReport("gns-transport", dev <= tol.bound(1.0), dev, tol.bound(1.0))


@dataclass(frozen=True)
class PlancherelResult:
    lhs: complex  # phihat(F(a)^* F(a))
    rhs: complex  # phi(a^* a)

    @property
    def deviation(self) -> float:
        return abs(self.lhs - self.rhs)


def check_plancherel(qg: QuantumGroupPair, a) -> PlancherelResult:
    a = np.asarray(a, dtype=complex)
    fa = fourier(qg, a)
    return PlancherelResult(qg.phihat.value(fa.conj().T @ fa),
                            qg.phi.value(a.conj().T @ a))


def convolve(qg: QuantumGroupPair, a, c) -> np.ndarray:
    """Convolution on M: a * c = F^{-1}(F(a) F(c))."""
    return inverse_fourier(qg, fourier(qg, a) @ fourier(qg, c))


def convolve_direct(qg: QuantumGroupPair, a, c) -> np.ndarray:
    """Convolution on M without the transform:
    a * c = (phi (x) id)([(S^{-1} (x) id)(delta c)](a (x) 1)),
    evaluated through the comultiplication coefficient tensor."""
    a = as_complex_matrix(a, qg.n, qg.n)
    qg.require_in_m(a)
    c_coords = qg.require_in_m(as_complex_matrix(c, qg.n, qg.n))
    d, _ = qg.delta_coeffs
    pair_coeffs = np.einsum("kli,i->kl", d, c_coords)
    sinv_on_basis = np.einsum("pk,pab->kab", qg.s_inv_mat, qg.m_basis)
    z = a @ qg.phi.xi
    vals = np.einsum("kuv,v,u->k", sinv_on_basis, z, qg.phi.xi.conj())
    return np.einsum("kl,k,lab->ab", pair_coeffs, vals, qg.m_basis)


def convolve_dual(qg: QuantumGroupPair, b, d) -> np.ndarray:
    """Convolution on Mhat: b * d = F(F^{-1}(b) F^{-1}(d))."""
    return fourier(qg, inverse_fourier(qg, b) @ inverse_fourier(qg, d))


def convolve_dual_direct(qg: QuantumGroupPair, b, d) -> np.ndarray:
    """Dual-side convolution through delta_hat and the dual antipode."""
    b = as_complex_matrix(b, qg.n, qg.n)
    qg.require_in_mhat(b)
    d_coords = qg.require_in_mhat(as_complex_matrix(d, qg.n, qg.n))
    dh, _ = qg.delta_hat_coeffs
    pair_coeffs = np.einsum("kli,i->kl", dh, d_coords)
    shinv_on_basis = np.einsum("pk,pab->kab", qg.shat_inv_mat, qg.mhat_basis)
    z = b @ qg.phihat.xi
    vals = np.einsum("kuv,v,u->k", shinv_on_basis, z, qg.phihat.xi.conj())
    return np.einsum("kl,k,lab->ab", pair_coeffs, vals, qg.mhat_basis)


def check_convolution(qg: QuantumGroupPair, rng: np.random.Generator,
                      samples: int = 20, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """Both convolution routes agree, on both sides, for random pairs."""
    dev = 0.0
    m, mh = qg.m_basis.shape[0], qg.mhat_basis.shape[0]
    for _ in range(samples):
        a = np.einsum("k,kab->ab", rng.standard_normal(m) + 1j * rng.standard_normal(m),
                      qg.m_basis)
        c = np.einsum("k,kab->ab", rng.standard_normal(m) + 1j * rng.standard_normal(m),
                      qg.m_basis)
        dev = max(dev, deviation(convolve(qg, a, c), convolve_direct(qg, a, c)))
        b = np.einsum("k,kab->ab", rng.standard_normal(mh) + 1j * rng.standard_normal(mh),
                      qg.mhat_basis)
        e = np.einsum("k,kab->ab", rng.standard_normal(mh) + 1j * rng.standard_normal(mh),
                      qg.mhat_basis)
        dev = max(dev, deviation(convolve_dual(qg, b, e), convolve_dual_direct(qg, b, e)))
    return CheckReport("convolution-agreement", dev <= tol.bound(1.0), dev, tol.bound(1.0))


@dataclass(frozen=True)
class PairingValue:
    """The dual pairing <b|a> along its three Haar-weight routes."""

    via_inverse: complex  # phi(a F^{-1}(b))
    via_forward: complex  # phihat(F(a^*)^* b)
    via_w: complex        # (phi (x) phihat)[(a (x) 1) W^* (1 (x) b)]

    @property
    def spread(self) -> float:
        vals = (self.via_inverse, self.via_forward, self.via_w)
        return max(abs(x - y) for x in vals for y in vals)

    @property
    def value(self) -> complex:
        return self.via_inverse


def pairing(qg: QuantumGroupPair, b, a) -> PairingValue:
    """Evaluate <b|a> for b in Mhat, a in M, independently along all three
    Haar-weight descriptions."""
    a = as_complex_matrix(a, qg.n, qg.n)
    b = as_complex_matrix(b, qg.n, qg.n)
    qg.require_in_m(a)
    qg.require_in_mhat(b)
    via_inverse = qg.phi.value(a @ inverse_fourier(qg, b))
    via_forward = qg.phihat.value(fourier(qg, a.conj().T).conj().T @ b)
    via_w = complex(np.einsum("i,k,ip,pkjq,ql,j,l->", qg.phi.xi.conj(),
                              qg.phihat.xi.conj(), a, qg.w_adj4, b,
                              qg.phi.xi, qg.phihat.xi, optimize=True))
    return PairingValue(via_inverse, via_forward, via_w)


def check_pairing_axioms(qg: QuantumGroupPair, rng: np.random.Generator,
                         samples: int = 20, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """The defining properties of the dual pairing, for elements presented as
    explicit slices b = (omega (x) id)(W), a = (id (x) theta)(W) so that
    <b|a> = omega(a) = theta(b):

      (1) <b1 b2 | a> = (omega1 (x) omega2)(delta a)
      (2) <b | a1 a2> = (theta1 (x) theta2)(delta_hat_cop b)
      (3) <b | S(a)>  = <Shat^{-1}(b) | a>, with omega built from a sharp.
    """
    n = qg.n
    d, _ = qg.delta_coeffs
    dh, _ = qg.delta_hat_coeffs
    dev = 0.0

    def rand_density():
        return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))

    def lam(density):   # (omega (x) id)(W)
        return np.einsum("ij,jkil->kl", density, qg.w4)

    def rho_slice(density):  # (id (x) theta)(W)
        return np.einsum("kl,iljk->ij", density, qg.w4)

    def vals_on(density, basis):
        return np.einsum("ij,kji->k", density, basis)

    for _ in range(samples):
        w1, w2 = rand_density(), rand_density()
        t1, t2 = rand_density(), rand_density()

        # (1): theta-presentation of a evaluates the left side.
        a = rho_slice(t1)
        b1, b2 = lam(w1), lam(w2)
        lhs = complex(np.einsum("ij,ji->", t1, b1 @ b2))
        a_coords = qg.coords_m(a)
        rhs = complex(np.einsum("i,kli,k,l->", a_coords, d,
                                vals_on(w1, qg.m_basis), vals_on(w2, qg.m_basis)))
        dev = max(dev, abs(lhs - rhs))

        # (2): omega-presentation of b evaluates the left side.
        b = lam(w1)
        a1, a2 = rho_slice(t1), rho_slice(t2)
        lhs = complex(np.einsum("ij,ji->", w1, a1 @ a2))
        b_coords = qg.coords_mhat(b)
        rhs = complex(np.einsum("i,kli,l,k->", b_coords, dh,
                                vals_on(t1, qg.mhat_basis), vals_on(t2, qg.mhat_basis)))
        dev = max(dev, abs(lhs - rhs))

        # (3): omega = (omega0)^sharp exercises the sharp construction.
        omega = sharp(Functional(w2), qg.s_mat, qg.m_basis)
        b = lam(omega.density)
        a = rho_slice(t2)
        lhs = complex(np.einsum("ij,ji->", omega.density, qg.apply_s(a)))
        rhs = complex(np.einsum("ij,ji->", t2, qg.apply_shat_inv(b)))
        dev = max(dev, abs(lhs - rhs))

    return CheckReport("pairing-axioms", dev <= tol.bound(1.0), dev, tol.bound(1.0))


def check_ft_pairing(qg: QuantumGroupPair, a, b, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """Inner-product description of the pairing:
    <b|a> = <Lambda_hat(b), Lambda(a^*)>."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    lhs = pairing(qg, b, a).via_inverse
    rhs = inner(qg.phihat.gns(b), qg.phi.gns(a.conj().T))
    dev = abs(lhs - rhs)
    return CheckReport("ft-pairing", dev <= tol.bound(1.0), dev, tol.bound(1.0))
