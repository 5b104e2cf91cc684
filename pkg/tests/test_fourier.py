"""Fourier transform, inversion, Plancherel, convolutions and the dual
pairing, checked against the classical finite-group formulas computed by
independent brute-force oracles."""

import numpy as np
import pytest

from qgft import groups, models
from qgft.engine import NotInAlgebra
from qgft.fourier import (
    check_ft_pairing,
    check_gns_transport,
    check_inversion,
    check_pairing_axioms,
    check_plancherel,
    convolve,
    convolve_direct,
    convolve_dual,
    convolve_dual_direct,
    fourier,
    fourier_report,
    inverse_fourier,
    inverse_fourier_report,
    pairing,
)

RNG = np.random.default_rng(23)


def model(group):
    return models.build(group)


def random_function(n):
    return RNG.standard_normal(n) + 1j * RNG.standard_normal(n)


def conv_oracle(group, a, c):
    """(a * c)(y) = sum_x a(x) c(x^{-1} y), by explicit loops."""
    n = group.order
    out = np.zeros(n, dtype=complex)
    for y in range(n):
        for x in range(n):
            out[y] += a[x] * c[group.multiply(group.inverse(x), y)]
    return out


# ---------------------------------------------------------------- transform

def test_fourier_delta_at_identity_is_one():
    mdl = model(groups.cyclic(2))
    out = fourier(mdl.qg, np.diag([1.0, 0.0]))
    np.testing.assert_allclose(out, np.eye(2), atol=1e-13)


def test_fourier_delta_at_generator_is_shift():
    mdl = model(groups.cyclic(2))
    out = fourier(mdl.qg, np.diag([0.0, 1.0]))
    np.testing.assert_allclose(out, np.array([[0.0, 1.0], [1.0, 0.0]]), atol=1e-13)


@pytest.mark.parametrize("group", [groups.cyclic(3), groups.cyclic(6),
                                   groups.dihedral(3), groups.symmetric(3)])
def test_fourier_is_left_regular_representation(group):
    mdl = model(group)
    for _ in range(5):
        a = random_function(group.order)
        np.testing.assert_allclose(fourier(mdl.qg, models.pi(mdl, a)),
                                   models.L(mdl, a), atol=1e-12)


def test_inverse_fourier_of_identity():
    mdl = model(groups.cyclic(2))
    out = inverse_fourier(mdl.qg, np.eye(2))
    np.testing.assert_allclose(out, np.diag([1.0, 0.0]), atol=1e-13)


@pytest.mark.parametrize("group", [groups.cyclic(4), groups.symmetric(3)])
def test_inverse_fourier_is_multiplication_operator(group):
    mdl = model(group)
    for _ in range(5):
        b = random_function(group.order)
        np.testing.assert_allclose(inverse_fourier(mdl.qg, models.L(mdl, b)),
                                   models.pi(mdl, b), atol=1e-12)


def test_inversion_random_elements_s3():
    mdl = model(groups.symmetric(3))
    for _ in range(10):
        a = models.pi(mdl, random_function(6))
        np.testing.assert_allclose(inverse_fourier(mdl.qg, fourier(mdl.qg, a)), a,
                                   atol=1e-11)


@pytest.mark.parametrize("group", [groups.cyclic(1), groups.cyclic(6),
                                   groups.dihedral(3)])
def test_check_inversion(group):
    report = check_inversion(model(group).qg)
    assert report.passed and report.deviation <= 1e-10


def test_fourier_rejects_off_algebra_input():
    mdl = model(groups.cyclic(2))
    off_diagonal = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(NotInAlgebra):
        fourier(mdl.qg, off_diagonal)
    with pytest.raises(NotInAlgebra):
        inverse_fourier(mdl.qg, np.diag([1.0, 2.0]))


def test_fourier_linearity():
    mdl = model(groups.dihedral(2))
    a, c = random_function(4), random_function(4)
    z = complex(RNG.standard_normal() + 1j * RNG.standard_normal())
    lhs = fourier(mdl.qg, models.pi(mdl, a + z * c))
    rhs = fourier(mdl.qg, models.pi(mdl, a)) + z * fourier(mdl.qg, models.pi(mdl, c))
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_inverse_fourier_linearity():
    mdl = model(groups.cyclic(5))
    b, d = models.L(mdl, random_function(5)), models.L(mdl, random_function(5))
    z = complex(RNG.standard_normal() + 1j * RNG.standard_normal())
    lhs = inverse_fourier(mdl.qg, b + z * d)
    rhs = inverse_fourier(mdl.qg, b) + z * inverse_fourier(mdl.qg, d)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_convolution_linear_in_each_slot():
    mdl = model(groups.symmetric(3))
    a1, a2, c = (models.pi(mdl, random_function(6)) for _ in range(3))
    z = complex(RNG.standard_normal() + 1j * RNG.standard_normal())
    np.testing.assert_allclose(convolve(mdl.qg, a1 + z * a2, c),
                               convolve(mdl.qg, a1, c) + z * convolve(mdl.qg, a2, c),
                               atol=1e-11)
    np.testing.assert_allclose(convolve(mdl.qg, c, a1 + z * a2),
                               convolve(mdl.qg, c, a1) + z * convolve(mdl.qg, c, a2),
                               atol=1e-11)


# ------------------------------------------------------------ GNS transport

@pytest.mark.parametrize("group", [groups.cyclic(2), groups.cyclic(5),
                                   groups.symmetric(3)])
def test_gns_transport(group):
    report = check_gns_transport(model(group).qg)
    assert report.passed and report.deviation <= 1e-10


def test_fourier_report_vectors():
    mdl = model(groups.cyclic(3))
    a = random_function(3)
    report = fourier_report(mdl.qg, models.pi(mdl, a))
    # Lambda(pi_a) is the function itself; Lambda_hat(L_a) likewise
    np.testing.assert_allclose(report.gns_input, a, atol=1e-13)
    np.testing.assert_allclose(report.gns_output, a, atol=1e-12)
    assert report.deviation <= 1e-12
    inv = inverse_fourier_report(mdl.qg, models.L(mdl, a))
    assert inv.deviation <= 1e-12


def test_plancherel_as_isometry():
    mdl = model(groups.dihedral(3))
    for _ in range(5):
        a = random_function(6)
        report = fourier_report(mdl.qg, models.pi(mdl, a))
        assert np.linalg.norm(report.gns_output) == pytest.approx(
            np.linalg.norm(report.gns_input), abs=1e-11)


# --------------------------------------------------------------- plancherel

def test_plancherel_z3_frozen_value():
    mdl = model(groups.cyclic(3))
    a = np.array([1.0, 2.0j, -1.0])
    result = check_plancherel(mdl.qg, models.pi(mdl, a))
    assert result.rhs == pytest.approx(6.0, abs=1e-12)   # 1 + 4 + 1
    assert result.lhs == pytest.approx(6.0, abs=1e-12)


def test_plancherel_zero():
    mdl = model(groups.cyclic(3))
    result = check_plancherel(mdl.qg, np.zeros((3, 3)))
    assert result.lhs == 0 and result.rhs == 0


def test_plancherel_z2_ones():
    mdl = model(groups.cyclic(2))
    result = check_plancherel(mdl.qg, models.pi(mdl, [1.0, 1.0]))
    assert result.lhs == pytest.approx(2.0, abs=1e-12)
    assert result.rhs == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("group", [groups.cyclic(7), groups.symmetric(3)])
def test_plancherel_matches_norm_squared(group):
    mdl = model(group)
    for _ in range(10):
        a = random_function(group.order)
        result = check_plancherel(mdl.qg, models.pi(mdl, a))
        assert result.lhs == pytest.approx(np.sum(np.abs(a) ** 2), abs=1e-10)
        assert abs(result.lhs.imag) < 1e-12 and result.lhs.real >= 0


# -------------------------------------------------------------- convolution

def test_convolve_z2_frozen():
    mdl = model(groups.cyclic(2))
    out = convolve(mdl.qg, models.pi(mdl, [1.0, 2.0]), models.pi(mdl, [3.0, 4.0]))
    np.testing.assert_allclose(np.diagonal(out), [11.0, 10.0], atol=1e-12)


def test_convolve_delta_identity_is_unit():
    mdl = model(groups.symmetric(3))
    c = random_function(6)
    delta_e = np.zeros(6); delta_e[mdl.group.identity] = 1.0
    out = convolve(mdl.qg, models.pi(mdl, delta_e), models.pi(mdl, c))
    np.testing.assert_allclose(np.diagonal(out), c, atol=1e-12)


def test_convolve_uniform_z3():
    mdl = model(groups.cyclic(3))
    ones = models.pi(mdl, [1.0, 1.0, 1.0])
    out = convolve(mdl.qg, ones, ones)
    np.testing.assert_allclose(np.diagonal(out), [3.0, 3.0, 3.0], atol=1e-12)


def test_convolve_direct_same_outputs():
    mdl = model(groups.cyclic(2))
    a, c = models.pi(mdl, [1.0, 2.0]), models.pi(mdl, [3.0, 4.0])
    np.testing.assert_allclose(np.diagonal(convolve_direct(mdl.qg, a, c)),
                               [11.0, 10.0], atol=1e-12)
    out = convolve_direct(mdl.qg, models.pi(mdl, [1.0, 0.0]), models.pi(mdl, [0.0, 1.0]))
    np.testing.assert_allclose(np.diagonal(out), [0.0, 1.0], atol=1e-13)


def test_convolve_trivial_group_is_scalar_product():
    mdl = model(groups.cyclic(1))
    out = convolve_direct(mdl.qg, np.array([[3.0]]), np.array([[5.0]]))
    np.testing.assert_allclose(out, [[15.0]], atol=1e-13)


@pytest.mark.parametrize("group", [groups.cyclic(5), groups.dihedral(3),
                                   groups.symmetric(3)])
def test_convolution_matches_classical_oracle(group):
    mdl = model(group)
    for _ in range(5):
        a, c = random_function(group.order), random_function(group.order)
        out = convolve(mdl.qg, models.pi(mdl, a), models.pi(mdl, c))
        np.testing.assert_allclose(np.diagonal(out), conv_oracle(group, a, c),
                                    atol=1e-10)
        direct = convolve_direct(mdl.qg, models.pi(mdl, a), models.pi(mdl, c))
        np.testing.assert_allclose(out, direct, atol=1e-10)


def test_convolve_dual_pointwise_frozen():
    mdl = model(groups.cyclic(2))
    out = convolve_dual(mdl.qg, models.L(mdl, [5.0, 7.0]), models.L(mdl, [2.0, 3.0]))
    np.testing.assert_allclose(models.L_function(mdl, out), [10.0, 21.0], atol=1e-12)


def test_convolve_dual_constant_one_is_unit():
    mdl = model(groups.cyclic(4))
    b = random_function(4)
    out = convolve_dual(mdl.qg, models.L(mdl, b), models.L(mdl, np.ones(4)))
    np.testing.assert_allclose(models.L_function(mdl, out), b, atol=1e-12)


def test_convolve_dual_routes_agree_z4():
    mdl = model(groups.cyclic(4))
    for _ in range(5):
        b, d = models.L(mdl, random_function(4)), models.L(mdl, random_function(4))
        np.testing.assert_allclose(convolve_dual(mdl.qg, b, d),
                                   convolve_dual_direct(mdl.qg, b, d), atol=1e-10)


def test_convolve_dual_pointwise_nonabelian():
    mdl = model(groups.symmetric(3))
    fb, fd = random_function(6), random_function(6)
    out = convolve_dual(mdl.qg, models.L(mdl, fb), models.L(mdl, fd))
    np.testing.assert_allclose(models.L_function(mdl, out), fb * fd, atol=1e-10)


# ------------------------------------------------------------------ pairing

def test_pairing_z2_frozen():
    mdl = model(groups.cyclic(2))
    value = pairing(mdl.qg, models.L(mdl, [3.0, 4.0]), models.pi(mdl, [1.0, 2.0]))
    assert value.via_inverse == pytest.approx(11.0, abs=1e-12)
    assert value.via_forward == pytest.approx(11.0, abs=1e-12)
    assert value.via_w == pytest.approx(11.0, abs=1e-12)
    assert value.spread <= 1e-12


def test_pairing_zero():
    mdl = model(groups.cyclic(2))
    value = pairing(mdl.qg, models.L(mdl, [3.0, 4.0]), np.zeros((2, 2)))
    assert abs(value.via_inverse) < 1e-14 and value.spread < 1e-14


def test_pairing_deltas_disjoint_support():
    mdl = model(groups.cyclic(3))
    da = np.zeros(3); da[1] = 1.0
    db = np.zeros(3); db[2] = 1.0
    value = pairing(mdl.qg, models.L(mdl, db), models.pi(mdl, da))
    assert abs(value.via_inverse) < 1e-12
    same = pairing(mdl.qg, models.L(mdl, da), models.pi(mdl, da))
    assert same.via_inverse == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("group", [groups.cyclic(6), groups.dihedral(3),
                                   groups.symmetric(3)])
def test_pairing_equals_group_sum(group):
    mdl = model(group)
    for _ in range(10):
        fa, fb = random_function(group.order), random_function(group.order)
        value = pairing(mdl.qg, models.L(mdl, fb), models.pi(mdl, fa))
        expected = complex(np.sum(fa * fb))
        assert value.via_inverse == pytest.approx(expected, abs=1e-10)
        assert value.spread <= 1e-10


def test_pairing_bilinear():
    mdl = model(groups.cyclic(3))
    fa1, fa2, fb1, fb2 = (random_function(3) for _ in range(4))
    z = complex(RNG.standard_normal() + 1j * RNG.standard_normal())
    b = models.L(mdl, fb1)
    lhs = pairing(mdl.qg, b, models.pi(mdl, fa1 + z * fa2)).via_inverse
    rhs = pairing(mdl.qg, b, models.pi(mdl, fa1)).via_inverse \
        + z * pairing(mdl.qg, b, models.pi(mdl, fa2)).via_inverse
    assert lhs == pytest.approx(rhs, abs=1e-11)
    a = models.pi(mdl, fa1)
    lhs = pairing(mdl.qg, models.L(mdl, fb1 + z * fb2), a).via_inverse
    rhs = pairing(mdl.qg, models.L(mdl, fb1), a).via_inverse \
        + z * pairing(mdl.qg, models.L(mdl, fb2), a).via_inverse
    assert lhs == pytest.approx(rhs, abs=1e-11)


def test_pairing_axioms_trivial_group():
    qg = model(groups.cyclic(1)).qg
    report = check_pairing_axioms(qg, np.random.default_rng(1), samples=5)
    assert report.passed and report.deviation <= 1e-12


@pytest.mark.parametrize("group", [groups.cyclic(4), groups.symmetric(3)])
def test_pairing_axioms(group):
    qg = model(group).qg
    report = check_pairing_axioms(qg, np.random.default_rng(2), samples=20)
    assert report.passed and report.deviation <= 1e-10


def test_ft_pairing_frozen():
    mdl = model(groups.cyclic(2))
    report = check_ft_pairing(mdl.qg, models.pi(mdl, [1.0, 2.0]),
                              models.L(mdl, [3.0, 4.0]))
    assert report.passed


def test_ft_pairing_identity_overlap():
    # <Lambda_hat(1), Lambda(1)> = <xi_phihat, xi_phi> = 1 for group models
    for group in [groups.cyclic(3), groups.symmetric(3)]:
        mdl = model(group)
        qg = mdl.qg
        value = pairing(mdl.qg, np.eye(group.order), np.eye(group.order))
        overlap = np.vdot(qg.phi.gns(np.eye(group.order)),
                          qg.phihat.gns(np.eye(group.order)))
        assert overlap == pytest.approx(1.0, abs=1e-12)
        assert value.via_inverse == pytest.approx(1.0, abs=1e-11)
        assert check_ft_pairing(qg, np.eye(group.order), np.eye(group.order)).passed


def test_ft_pairing_zero():
    mdl = model(groups.cyclic(2))
    report = check_ft_pairing(mdl.qg, models.pi(mdl, [1.0, 1.0]), np.zeros((2, 2)))
    assert report.passed and report.deviation < 1e-14
