import cmath
import math
import warnings

import mpmath
import numpy as np
import pytest

from deformkernel import transform
from deformkernel.params import DeformParams, parse_real
from deformkernel.specfun import DomainError, laguerre
from deformkernel.transform import (
    EigenIndex,
    QuadratureError,
    QuadratureWarning,
    apply_transform,
    build_quadrature,
    eigenfunction,
    eigenvalue,
    gram_matrix,
    hankel_laguerre_check,
    moment_errors,
    normalization_constant,
    reproducing_kernel_check,
    snap_phase,
    transform_norm_ratio,
    verify_eigenrelation,
)

A_VALUES = [2.0, 1.0, 2 / 3]


@pytest.fixture(scope="module")
def quads():
    return {a: build_quadrature(DeformParams(a, 2)) for a in A_VALUES}


def test_eigen_index_rules():
    with pytest.raises(DomainError):
        EigenIndex(0, 0, "sin")
    with pytest.raises(DomainError):
        EigenIndex(-1, 0)
    with pytest.raises(DomainError):
        EigenIndex(0, 1, "tan")


def test_normalization_constant():
    for a in (2.0, 1.0, 0.37):
        assert normalization_constant(DeformParams(a, 2)) == pytest.approx(1 / (2 * math.pi), rel=1e-15)
    # a = 2 gives the classical (2 pi)^(-m/2)
    for m in (3, 4, 5):
        assert normalization_constant(DeformParams(2, m)) == pytest.approx((2 * math.pi) ** (-m / 2), rel=1e-14)


def test_eigenfunction_examples():
    p = DeformParams(2, 2)
    assert eigenfunction(p, EigenIndex(0, 0), 0.0, 0.3) == 1.0
    assert eigenfunction(p, EigenIndex(0, 1, "cos"), 1.3, math.pi / 2) == pytest.approx(0.0, abs=1e-16)
    assert eigenfunction(p, EigenIndex(1, 0), 1.0, 0.0) == pytest.approx(0.0, abs=1e-16)


def test_eigenfunction_formula():
    a = 2 / 3
    p = DeformParams(a, 2)
    idx = EigenIndex(2, 3, "sin")
    r, th = 1.7, 0.4
    u = r**a / a
    ref = float(mpmath.laguerre(2, 2 * 3 / a, 2 * u)) * r**3 * math.sin(3 * th) * math.exp(-u)
    assert eigenfunction(p, idx, r, th) == pytest.approx(ref, rel=1e-13)


def test_eigenvalue_table():
    p = DeformParams(parse_real("2/3"), 2)
    assert eigenvalue(p, EigenIndex(0, 1)) == 1j
    assert eigenvalue(p, EigenIndex(1, 1)) == -1j
    assert eigenvalue(DeformParams(2, 2), EigenIndex(1, 0)) == -1
    q = DeformParams(0.37, 2)
    assert eigenvalue(q, EigenIndex(1, 2)) == pytest.approx(cmath.exp(-1j * math.pi * (1 + 2 / 0.37)))


# -- quadrature ------------------------------------------------------------------


@pytest.mark.parametrize("a", A_VALUES + [0.5, 1.5])
def test_quadrature_moments(a):
    quad = build_quadrature(DeformParams(a, 2))
    assert moment_errors(quad).max() < 1e-10
    assert np.all(quad.radial_weights > 0)
    assert np.all(np.diff(quad.radial_nodes) > 0)
    assert quad.radial_nodes[0] > 0 and quad.radial_nodes[-1] < quad.r_cutoff
    assert quad.angular_count >= 4 * 8 + 8
    # cutoff rule e^(-R^a/a) R^40 < 1e-18
    R = quad.r_cutoff
    assert -R**a / a + 40 * math.log(R) < math.log(1e-18)


def test_moment_against_gamma_oracle(quads):
    for a, quad in quads.items():
        for s in range(11):
            # int r^(a-1) e^(-r^a/a) r^(a s) dr = a^s Gamma(s+1)
            got = math.fsum(quad.radial_weights * quad.radial_nodes ** (a * s) * np.exp(-quad.radial_nodes**a / a))
            ref = float(mpmath.mpf(a) ** s * mpmath.gamma(s + 1))
            assert got == pytest.approx(ref, rel=1e-10)


def test_gaussian_mass(quads):
    q = quads[2.0]
    assert math.fsum(q.radial_weights * np.exp(-q.radial_nodes**2 / 2)) == pytest.approx(1.0, abs=1e-14)


def test_build_quadrature_errors():
    with pytest.raises(DomainError):
        build_quadrature(DeformParams(2, 2), degree=8)
    with pytest.raises(DomainError):
        build_quadrature(DeformParams(2, 3))
    with pytest.raises(QuadratureError):
        build_quadrature(DeformParams(2, 2), tol=1e-18)


def test_orthogonality_example(quads):
    for a, quad in quads.items():
        g = gram_matrix(DeformParams(a, 2), [EigenIndex(0, 0), EigenIndex(1, 0)], quad)
        assert abs(g[0, 1]) < 1e-10


@pytest.mark.parametrize("a", A_VALUES)
def test_gram_matrix_diagonal(a, quads):
    idxs = [EigenIndex(j, k, h) for j in range(4) for k in range(4) for h in (("cos", "sin") if k else ("cos",))]
    g = gram_matrix(DeformParams(a, 2), idxs, quads[a])
    d = np.sqrt(np.diag(g))
    assert np.abs(g / np.outer(d, d) - np.eye(len(idxs))).max() < 1e-8


# -- applying the transform ------------------------------------------------------


def test_gaussian_is_fixed_at_a2(quads):
    p = DeformParams(2, 2)
    f = lambda r, th: eigenfunction(p, EigenIndex(0, 0), r, th)  # noqa: E731
    for rho, psi in [(0.0, 0.0), (0.8, 1.0), (2.5, 4.0)]:
        assert abs(apply_transform(p, f, quads[2.0], (rho, psi)) - math.exp(-rho * rho / 2)) < 1e-12


def test_phi10_flips_sign_at_a2(quads):
    p = DeformParams(2, 2)
    idx = EigenIndex(1, 0)
    f = lambda r, th: eigenfunction(p, idx, r, th)  # noqa: E731
    for y in [(0.5, 0.2), (2.0, 3.0)]:
        assert abs(apply_transform(p, f, quads[2.0], y) + eigenfunction(p, idx, *y)) < 1e-12


def test_shifted_gaussian_matches_classical_fourier(quads):
    # f(x) = exp(-|x - c|^2 / 2) has transform exp(-i <c, y>) exp(-|y|^2 / 2)
    p = DeformParams(2, 2)
    c = np.array([0.6, -0.3])

    def f(r, th):
        x0, x1 = r * np.cos(th), r * np.sin(th)
        return np.exp(-((x0 - c[0]) ** 2 + (x1 - c[1]) ** 2) / 2)

    for rho, psi in [(0.4, 0.1), (1.5, 2.2), (3.0, 5.0)]:
        y = np.array([rho * math.cos(psi), rho * math.sin(psi)])
        ref = cmath.exp(-1j * float(c @ y)) * math.exp(-rho * rho / 2)
        assert abs(apply_transform(p, f, quads[2.0], (rho, psi)) - ref) < 1e-10


def test_a23_first_harmonic_gets_phase_i(quads):
    p = DeformParams(2 / 3, 2)
    idx = EigenIndex(0, 1, "cos")
    f = lambda r, th: eigenfunction(p, idx, r, th)  # noqa: E731
    y = (1.2, 0.3)
    got = apply_transform(p, f, quads[2 / 3], y)
    assert abs(got - 1j * eigenfunction(p, idx, *y)) < 1e-8
    assert snap_phase(got / eigenfunction(p, idx, *y)) == 1j


def test_cutoff_warning(quads):
    p = DeformParams(2, 2)
    with pytest.warns(QuadratureWarning):
        apply_transform(p, lambda r, th: np.ones_like(r), quads[2.0], (1.0, 0.0))


SAMPLES = [(0.25 + 2.75 * i / 11, 0.37 + 0.91 * i) for i in range(12)]


@pytest.mark.parametrize("a,j,k,bound", [(2.0, 2, 2, 1e-6), (1.0, 0, 0, 1e-6), (2 / 3, 1, 1, 1e-5)])
def test_eigenrelation_examples(quads, a, j, k, bound):
    p = DeformParams(a, 2)
    for h in ("cos", "sin") if k else ("cos",):
        assert verify_eigenrelation(p, EigenIndex(j, k, h), quads[a], SAMPLES) < bound


@pytest.mark.parametrize("a", A_VALUES)
def test_unitarity_proxy(a, quads):
    p = DeformParams(a, 2)
    for j in range(3):
        for k in range(3):
            assert abs(transform_norm_ratio(p, EigenIndex(j, k), quads[a]) - 1) < 1e-6


def test_snap_phase():
    assert snap_phase(0.99 - 0.02j) == 1
    assert snap_phase(0.01 - 1.01j) == -1j


# -- structural identities -------------------------------------------------------------


def test_hankel_laguerre_examples():
    mpmath.mp.dps = 30
    lhs = mpmath.quad(lambda r: r * mpmath.besselj(0, r) * mpmath.exp(-r * r / 2), [0, 5, 10, mpmath.inf])
    assert abs(float(lhs) - math.exp(-0.5)) < 1e-15
    assert hankel_laguerre_check(0, 0.0, 1.0) < 1e-10
    assert hankel_laguerre_check(1, 0.0, 0.05) < 1e-8
    assert hankel_laguerre_check(0, 2.0, 2.0) < 1e-8


def test_hankel_laguerre_identity_in_extended_precision():
    mpmath.mp.dps = 30
    for j, alpha, s in [(2, 0.5, 1.3), (3, 1.0, 0.7), (1, 2.0, 2.0)]:
        lhs = mpmath.quad(
            lambda r: r ** (alpha + 1) * mpmath.besselj(alpha, r * s) * mpmath.laguerre(j, alpha, r * r) * mpmath.exp(-r * r / 2),
            [0, 3, 6, 10, mpmath.inf],
        )
        rhs = (-1) ** j * s**alpha * laguerre(j, alpha, s * s) * math.exp(-s * s / 2)
        assert abs(float(lhs) - rhs) < 1e-14


def test_hankel_laguerre_domain():
    with pytest.raises(DomainError):
        hankel_laguerre_check(0, 0.0, 0.0)
    with pytest.raises(DomainError):
        hankel_laguerre_check(0, -1.0, 1.0)


def test_reproducing_kernel_examples():
    assert reproducing_kernel_check(2, 3, 3) < 1e-12
    assert reproducing_kernel_check(1, 1, 3) < 1e-10
    assert reproducing_kernel_check(2, 2, 2) < 1e-12


def test_reproducing_kernel_sweep():
    for m in (2, 3):
        for k in range(5):
            for l in range(5):
                assert reproducing_kernel_check(k, l, m) < 1e-10


def test_reproducing_kernel_domain():
    with pytest.raises(DomainError):
        reproducing_kernel_check(1, 1, 4)
