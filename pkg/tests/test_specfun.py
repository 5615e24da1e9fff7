import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deformkernel import specfun
from deformkernel.checks import laguerre_explicit
from deformkernel.specfun import DomainError, PoleError

mpmath.mp.dps = 40


def mp_j(nu, x):
    return float(mpmath.besselj(nu, x))


def mp_gegenbauer(k, lam, w):
    """Explicit power sum in extended precision; returns (value, sum of |terms|)."""
    lam, w = mpmath.mpf(lam), mpmath.mpf(w)
    terms = [
        (-1) ** j * mpmath.gamma(k - j + lam) / (mpmath.gamma(lam) * mpmath.factorial(j) * mpmath.factorial(k - 2 * j))
        * (2 * w) ** (k - 2 * j)
        for j in range(k // 2 + 1)
    ]
    return float(mpmath.fsum(terms)), float(mpmath.fsum(abs(t) for t in terms))


# -- Bessel J ----------------------------------------------------------------


def test_bessel_j0_at_zero():
    assert specfun.bessel_j(0, 0.0) == 1.0


def test_bessel_subnormal_argument():
    tiny = 5e-324
    assert specfun.bessel_j(0, tiny) == 1.0
    assert specfun.bessel_j(3, tiny) == 0.0
    assert specfun.bessel_j(1, tiny) == pytest.approx(tiny / 2, abs=5e-324)


def test_bessel_half_order_at_pi_vanishes():
    assert abs(specfun.bessel_j(0.5, math.pi)) < 1e-15


def test_bessel_j1_at_one():
    # ascending series in 40-digit arithmetic
    ref = mpmath.nsum(lambda k: (-1) ** k / (mpmath.factorial(k) * mpmath.factorial(k + 1)) * mpmath.mpf(0.5) ** (2 * k + 1), [0, mpmath.inf])
    assert specfun.bessel_j(1, 1.0) == pytest.approx(float(ref), rel=1e-14)
    assert specfun.bessel_j(1, 1.0) == pytest.approx(0.44005058574493355, rel=1e-14)


@pytest.mark.parametrize(
    "nu,x",
    [
        (0.0, 0.3), (0.0, 7.5), (0.0, 99.0), (1.0, 12.0), (2.5, 30.0), (10.0, 10.0),
        (20.0, 19.5), (50.0, 49.0), (50.0, 80.0), (100.0, 100.0), (150.0, 60.0),
        (200.0, 100.0), (200.0, 199.0), (0.75, 45.0), (3.0, 60.0), (-0.5, 2.0),
        (33.3, 0.01), (7.0, 100.0), (120.0, 118.0), (1.5, 1e-7),
    ],
)
def test_bessel_matches_mpmath(nu, x):
    ref = mp_j(nu, x)
    assert abs(specfun.bessel_j(nu, x) - ref) <= 1e-12 * abs(ref) + 1e-300


@settings(max_examples=300, deadline=None)
@given(st.floats(-0.5, 200.0), st.floats(1e-6, 100.0))
def test_bessel_relative_accuracy_property(nu, x):
    ref = mp_j(nu, x)
    # relative accuracy except very close to a zero of J
    scale = max(abs(ref), 1e-12 * float(mpmath.sqrt(2 / (mpmath.pi * x))) if nu < x else abs(ref))
    assert abs(specfun.bessel_j(nu, x) - ref) <= 1e-12 * scale + 1e-300


@settings(max_examples=200, deadline=None)
@given(st.floats(0.5, 50.0), st.floats(1e-3, 50.0))
def test_bessel_three_term_recurrence(nu, x):
    jm, j0, jp = specfun.bessel_j(nu - 1, x), specfun.bessel_j(nu, x), specfun.bessel_j(nu + 1, x)
    assert abs(jm + jp - 2 * nu / x * j0) <= 1e-10 * max(1.0, abs(j0))


def test_bessel_tilde_values():
    assert specfun.bessel_j_tilde(0, 0.0) == 1.0
    assert specfun.bessel_j_tilde(2, 0.0) == pytest.approx(0.5, rel=1e-15)
    assert specfun.bessel_j_tilde(2, 0.5) == pytest.approx(float(mpmath.besselj(2, 0.5) / mpmath.mpf(0.25) ** 2), rel=1e-14)
    for x in (0.0, 0.1, 1.0, 3.7, 40.0):
        assert specfun.bessel_j_tilde(-0.5, x) == pytest.approx(math.cos(x) / math.sqrt(math.pi), abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.floats(-0.5, 60.0), st.floats(0.0, 30.0))
def test_bessel_tilde_matches_mpmath(nu, x):
    ref = mpmath.hyp0f1(nu + 1, -mpmath.mpf(x) ** 2 / 4) / mpmath.gamma(nu + 1)
    assert abs(specfun.bessel_j_tilde(nu, x) - float(ref)) <= 1e-12 * max(abs(float(ref)), 1.0 / math.gamma(min(nu + 1, 170)))


@pytest.mark.parametrize("nu,x", [(-0.7, 1.0), (0.0, -1.0), (-0.5, 0.0)])
def test_bessel_domain_errors(nu, x):
    with pytest.raises(DomainError):
        specfun.bessel_j(nu, x)


# -- gamma ---------------------------------------------------------------------


def test_gamma_examples():
    assert specfun.gamma_fn(1) == 1.0
    assert specfun.gamma_fn(5) == 24.0
    assert specfun.gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)


@settings(max_examples=300, deadline=None)
@given(st.floats(0.1, 50.0))
def test_gamma_matches_mpmath(x):
    assert specfun.gamma_fn(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-13)


@settings(max_examples=200, deadline=None)
@given(st.floats(-20.0, 0.0).filter(lambda v: abs(v - round(v)) > 1e-3))
def test_gamma_reflection_region(x):
    assert specfun.gamma_fn(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-3, 1e4))
def test_log_gamma_matches_mpmath(x):
    assert specfun.log_gamma(x) == pytest.approx(float(mpmath.loggamma(x)), rel=1e-13, abs=1e-14)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.1, 30.0))
def test_gamma_functional_equation(x):
    assert specfun.gamma_fn(x + 1) == pytest.approx(x * specfun.gamma_fn(x), rel=1e-12)


@pytest.mark.parametrize("x", [0, -1, -2, -7])
def test_gamma_poles(x):
    with pytest.raises(PoleError):
        specfun.gamma_fn(x)


# -- Gegenbauer ----------------------------------------------------------------


def test_gegenbauer_examples():
    assert specfun.gegenbauer(0, 0.7, 0.3) == 1.0
    assert specfun.gegenbauer(1, 1.5, 0.4) == pytest.approx(1.2, abs=1e-15)
    assert specfun.gegenbauer(2, 1.0, 0.5) == pytest.approx(0.0, abs=1e-15)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 60), st.floats(0.01, 20.0), st.floats(-1.0, 1.0))
def test_gegenbauer_matches_mpmath(k, lam, w):
    ref, scale = mp_gegenbauer(k, lam, w)
    assert abs(specfun.gegenbauer(k, lam, w) - ref) <= 1e-12 * max(1.0, scale)


def test_gegenbauer_array_input():
    w = np.linspace(-1, 1, 11)
    got = specfun.gegenbauer(5, 1.5, w)
    ref = [mp_gegenbauer(5, 1.5, v)[0] for v in w]
    np.testing.assert_allclose(got, ref, rtol=1e-13, atol=1e-13)


def test_gegenbauer_at_one_is_binomial():
    for k in range(30):
        for lam in (0.5, 1.0, 2.5):
            ref = float(mpmath.binomial(k + 2 * lam - 1, k))
            assert specfun.gegenbauer_at_one(k, lam) == pytest.approx(ref, rel=1e-13)
            assert specfun.gegenbauer(k, lam, 1.0) == pytest.approx(ref, rel=1e-12)


def test_gegenbauer_derivative_central_difference():
    h = 1e-6
    worst = 0.0
    for k in range(1, 21):
        for lam in (0.3, 1.0, 2.0, 5.0):
            for w in np.linspace(-0.9, 0.9, 7):
                fd = (specfun.gegenbauer(k, lam, w + h) - specfun.gegenbauer(k, lam, w - h)) / (2 * h)
                exact = 2 * lam * specfun.gegenbauer(k - 1, lam + 1, w)
                worst = max(worst, abs(fd - exact) / max(1.0, abs(exact)))
    assert worst < 1e-6


def test_gegenbauer_limit_examples():
    assert specfun.gegenbauer_limit(0, 1.3) == 1.0
    assert specfun.gegenbauer_limit(1, 0.0) == 2.0
    assert specfun.gegenbauer_limit(3, math.pi / 2) == pytest.approx(0.0, abs=1e-15)
    t = 0.7
    assert specfun.gegenbauer_limit(4, t) == pytest.approx(specfun.gegenbauer(4, 1e-8, math.cos(t)) / 1e-8, abs=1e-6)


def test_gegenbauer_small_index_error_is_linear():
    k, t = 5, 0.9
    errs = [abs(specfun.gegenbauer(k, lam, math.cos(t)) / lam - specfun.gegenbauer_limit(k, t)) for lam in (1e-3, 5e-4)]
    assert errs[1] / errs[0] == pytest.approx(0.5, rel=1e-2)


@pytest.mark.parametrize("lam,w", [(0.0, 0.5), (-1.0, 0.5), (1.0, 1.5)])
def test_gegenbauer_domain_errors(lam, w):
    with pytest.raises(DomainError):
        specfun.gegenbauer(3, lam, w)


# -- Laguerre ------------------------------------------------------------------


def test_laguerre_examples():
    assert specfun.laguerre(0, 3.3, 2.0) == 1.0
    assert specfun.laguerre(1, 2.0, 0.5) == pytest.approx(2.5, abs=1e-15)
    ref, _ = laguerre_explicit(3, 0.5, 1.0)
    assert specfun.laguerre(3, 0.5, 1.0) == pytest.approx(ref, rel=1e-13)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 30), st.floats(-0.99, 20.0), st.floats(0.0, 60.0))
def test_laguerre_matches_mpmath(j, alpha, u):
    ref = float(mpmath.laguerre(j, alpha, u))
    _, scale = laguerre_explicit(j, alpha, u)
    assert abs(specfun.laguerre(j, alpha, u) - ref) <= 1e-12 * max(1.0, scale)


def test_laguerre_vs_explicit_sum():
    for j in range(11):
        for alpha in (-0.5, 0.0, 1.5, 4.0):
            for u in (0.0, 0.5, 2.0, 7.0):
                ref, scale = laguerre_explicit(j, alpha, u)
                assert abs(specfun.laguerre(j, alpha, u) - ref) <= 1e-10 * max(1.0, scale)


def test_laguerre_domain_error():
    with pytest.raises(DomainError):
        specfun.laguerre(2, -1.0, 1.0)
