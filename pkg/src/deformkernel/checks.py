"""Invariant suites run by ``deformkernel verify``.

Each suite returns a list of :class:`Check` records (name, worst residual,
threshold).  Random samples use fixed seeds so reports are reproducible.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from . import closed, downsample, series, specfun, transform
from .params import DeformParams, KernelArgs, TruncationPolicy

__all__ = ["Check", "SUITES", "run_suite", "laguerre_explicit", "gegenbauer_explicit"]


@dataclass
class Check:
    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.threshold)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def laguerre_explicit(j: int, alpha: float, u: float) -> tuple[float, float]:
    """sum_i (-1)^i binom(j + alpha, j - i) u^i / i!, and the sum of |terms| (its conditioning scale)."""
    total = []
    for i in range(j + 1):
        binom = math.exp(
            specfun.log_gamma(j + alpha + 1) - specfun.log_gamma(j - i + 1) - specfun.log_gamma(alpha + i + 1)
        )
        total.append((-1) ** i * binom * u**i / math.factorial(i))
    return math.fsum(total), math.fsum(abs(v) for v in total)


def gegenbauer_explicit(k: int, lam: float, w: float, derivative: bool = False) -> tuple[float, float]:
    """Explicit power sum for C_k^lam(w) (or its w-derivative), and the sum of |terms|."""
    terms = []
    for j in range(k // 2 + 1):
        p = k - 2 * j
        c = (-1) ** j * math.exp(
            specfun.log_gamma(k - j + lam) - specfun.log_gamma(lam) - specfun.log_gamma(j + 1) - specfun.log_gamma(p + 1)
        )
        if derivative:
            terms.append(c * 2 * p * (2 * w) ** (p - 1) if p else 0.0)
        else:
            terms.append(c * (2 * w) ** p)
    return math.fsum(terms), math.fsum(abs(t) for t in terms)


def _grid(zmax: float, nz: int, nw: int, wmax: float = 1.0):
    zs = np.linspace(0.0, zmax, nz)
    ws = np.linspace(-wmax, wmax, nw)
    return [(float(z), float(w)) for z in zs for w in ws]


# -- specfun -----------------------------------------------------------------


def specfun_suite() -> List[Check]:
    rng = np.random.default_rng(20240101)
    out = []

    worst = 0.0
    for nu, x in zip(rng.uniform(0.5, 50.0, 400), rng.uniform(1e-3, 50.0, 400)):
        jm, j0, jp = specfun.bessel_j(nu - 1, x), specfun.bessel_j(nu, x), specfun.bessel_j(nu + 1, x)
        worst = max(worst, abs(jm + jp - 2 * nu / x * j0) / max(1.0, abs(j0)))
    out.append(Check("bessel_three_term_recurrence", worst, 1e-10))

    worst = 0.0
    for x in rng.uniform(0.01, 100.0, 200):
        ref = math.sqrt(2 / (math.pi * x)) * math.sin(x)
        worst = max(worst, abs(specfun.bessel_j(0.5, x) - ref))
        worst = max(worst, abs(specfun.bessel_j_tilde(-0.5, x) - math.cos(x) / math.sqrt(math.pi)))
    out.append(Check("bessel_half_integer_closed_forms", worst, 1e-13))

    worst_val = 0.0
    worst_der = 0.0
    for k in range(1, 21):
        for lam in (0.25, 0.5, 1.0, 2.5, 5.0):
            for w in np.linspace(-1.0, 1.0, 9):
                ref, scale = gegenbauer_explicit(k, lam, w)
                worst_val = max(worst_val, abs(specfun.gegenbauer(k, lam, w) - ref) / max(1.0, scale))
                ref, scale = gegenbauer_explicit(k, lam, w, derivative=True)
                got = 2 * lam * specfun.gegenbauer(k - 1, lam + 1, w)
                worst_der = max(worst_der, abs(got - ref) / max(1.0, scale))
    out.append(Check("gegenbauer_recurrence_vs_explicit_sum", worst_val, 1e-12))
    out.append(Check("gegenbauer_derivative_vs_explicit_sum", worst_der, 1e-12))

    worst = 0.0
    h = 1e-6
    for k in range(1, 21):
        for lam in (0.25, 0.5, 1.0, 2.5, 5.0):
            for w in np.linspace(-0.9, 0.9, 7):
                fd = (specfun.gegenbauer(k, lam, w + h) - specfun.gegenbauer(k, lam, w - h)) / (2 * h)
                exact = 2 * lam * specfun.gegenbauer(k - 1, lam + 1, w)
                worst = max(worst, abs(fd - exact) / max(1.0, abs(exact)))
    out.append(Check("gegenbauer_derivative_central_difference", worst, 1e-6))

    worst = 0.0
    eps = 1e-8
    for k in range(1, 16):
        for t in np.linspace(0.0, math.pi, 9):
            approx = specfun.gegenbauer(k, eps, math.cos(t)) / eps
            worst = max(worst, abs(approx - specfun.gegenbauer_limit(k, t)))
    out.append(Check("gegenbauer_small_index_limit", worst, 1e-6))

    worst = 0.0
    for j in range(11):
        for alpha in (-0.5, 0.0, 0.5, 2.0, 6.0):
            for u in (0.0, 0.3, 1.0, 4.5, 12.0):
                ref, scale = laguerre_explicit(j, alpha, u)
                worst = max(worst, abs(specfun.laguerre(j, alpha, u) - ref) / max(1.0, scale))
    out.append(Check("laguerre_vs_explicit_sum", worst, 1e-10))

    worst = 0.0
    for x in np.linspace(0.1, 30.0, 300):
        worst = max(worst, abs(specfun.gamma_fn(x + 1) / (x * specfun.gamma_fn(x)) - 1.0))
    out.append(Check("gamma_functional_equation", worst, 1e-12))

    worst = 0.0
    for x in np.linspace(0.1, 25.0, 250):
        # Legendre duplication: Gamma(x) Gamma(x + 1/2) = 2^(1-2x) sqrt(pi) Gamma(2x)
        lhs = specfun.gamma_fn(x) * specfun.gamma_fn(x + 0.5)
        rhs = 2 ** (1 - 2 * x) * math.sqrt(math.pi) * specfun.gamma_fn(2 * x)
        worst = max(worst, abs(lhs / rhs - 1.0))
    out.append(Check("gamma_duplication_formula", worst, 1e-13))
    return out


# -- kernel ------------------------------------------------------------------


def _max_diff(pairs) -> float:
    return max((abs(p - q) for p, q in pairs), default=0.0)


def kernel_suite(policy: Optional[TruncationPolicy] = None) -> List[Check]:
    policy = policy or TruncationPolicy()
    out = []
    grid = _grid(20.0, 21, 11)

    for m in (2, 3, 4, 5):
        p = DeformParams(2, m)
        d = _max_diff(
            (series.kernel_series(p, KernelArgs(z, w), policy).value, cmath.exp(-1j * z * w)) for z, w in grid
        )
        out.append(Check(f"a2_series_vs_exponential_m{m}", d, 1e-10))

    for m in (2, 3, 4):
        p = DeformParams(1, m)
        d = _max_diff(
            (series.kernel_series(p, KernelArgs(z, w), policy).value, closed.kernel_a1(m, KernelArgs(z, w)))
            for z, w in grid
        )
        out.append(Check(f"a1_series_vs_bessel_closed_form_m{m}", d, 1e-9))

    for n in range(1, 7):
        p = DeformParams.from_n(n, 2)
        d = _max_diff(
            (closed.kernel_dim2_closed(n, KernelArgs(z, w)), series.kernel_series(p, KernelArgs(z, w), policy).value)
            for z, w in grid
        )
        out.append(Check(f"dim2_closed_vs_series_n{n}", d, 1e-9))

    zs = np.linspace(0.0, 50.0, 200)
    ws = np.linspace(-1.0, 1.0, 81)
    zz, ww = np.meshgrid(zs, ws, indexing="ij")
    sup = max(float(np.abs(closed.dim2_closed_array(n, zz, ww)).max()) for n in range(1, 9))
    out.append(Check("dim2_bound_excess", max(sup - 1.0, 0.0), 1e-12))

    worst_im = 0.0
    worst_eq = 0.0
    for n in range(1, 7):
        for z, w in grid:
            args = KernelArgs(z, w)
            par = closed.kernel_dim2_parity(n, args)
            if n % 2 == 0:
                worst_im = max(worst_im, abs(par.imag))
            worst_eq = max(worst_eq, abs(par - closed.kernel_dim2_closed(n, args)))
    out.append(Check("parity_form_imaginary_part_even_n", worst_im, 1e-13))
    out.append(Check("parity_form_vs_closed", worst_eq, 1e-13))

    step_grid = _grid(10.0, 11, 9)
    worst = 0.0
    for a in (2.0, 1.0, 2.0 / 3.0):
        for m in (2, 3, 4):
            p, q = DeformParams(a, m), DeformParams(a, m + 2)
            for z, w in step_grid:
                args = KernelArgs(z, w)
                worst = max(worst, abs(closed.dim_step_series(p, args, policy) - series.kernel_series(q, args, policy).value))
    out.append(Check("dimension_step_vs_series", worst, 1e-8))

    worst = 0.0
    for a in (2.0, 1.0, 2.0 / 3.0):
        p, q = DeformParams(a, 3), DeformParams(a, 7)
        for z, w in step_grid:
            args = KernelArgs(z, w)
            got = closed.dim_step_series(p, args, policy, steps=2)
            worst = max(worst, abs(got - series.kernel_series(q, args, policy).value))
    out.append(Check("odd_dimension_two_steps_m3_to_m7", worst, 1e-7))

    worst = 0.0
    even_grid = _grid(10.0, 11, 9, wmax=0.99)
    for n in (1, 2, 3, 4):
        for k in (2, 3):
            q = DeformParams.from_n(n, 2 * k)
            for z, w in even_grid:
                args = KernelArgs(z, w)
                worst = max(worst, abs(closed.kernel_even_dim(n, k, args) - series.kernel_series(q, args, policy).value))
    out.append(Check("even_dimension_closed_vs_series", worst, 1e-7))

    worst = 0.0
    for a in (2.0, 1.0, 2.0 / 3.0, 0.5, 0.37):
        for m in (2, 3, 4, 6):
            for w in (-1.0, -0.2, 0.5, 1.0):
                worst = max(worst, abs(series.kernel_series(DeformParams(a, m), KernelArgs(0.0, w), policy).value - 1.0))
    out.append(Check("kernel_equals_one_at_z0", worst, policy.abs_tol))
    return out


# -- downsample --------------------------------------------------------------


def _random_series(rng, length: int) -> downsample.CosineSeries:
    k = np.arange(length)
    mag = rng.uniform(0.0, 1.0, length) * 2.0 ** (-k)
    ang = rng.uniform(0.0, 2 * math.pi, length)
    return downsample.CosineSeries(mag * np.exp(1j * ang))


def downsample_suite(samples: int = 200, angles: int = 32) -> List[Check]:
    rng = np.random.default_rng(31)
    ts = np.linspace(0.0, 2 * math.pi, angles)
    shift_err = 0.0
    comp = 0.0
    for _ in range(samples):
        s = _random_series(rng, int(rng.integers(1, 65)))
        for n in range(1, 9):
            sub = downsample.downsample_coeffs(s, n)
            for t in ts:
                shift_err = max(shift_err, abs(downsample.eval_series(sub, t) - downsample.downsample_by_shifts(s, n, t)))
        n1, n2 = (int(v) for v in rng.integers(1, 5, 2))
        both = downsample.downsample_coeffs(downsample.downsample_coeffs(s, n1), n2)
        direct = downsample.downsample_coeffs(s, n1 * n2)
        comp = max(comp, max((abs(x - y) for x, y in zip(both.coeffs, direct.coeffs)), default=0.0))
        if len(both) != len(direct):
            comp = math.inf
        for t in ts[::4]:
            inner = lambda u: downsample.downsample_by_shifts(s, n1, u)  # noqa: E731
            nested = downsample.downsample_by_shifts(inner, n2, t)
            comp = max(comp, abs(nested - downsample.downsample_by_shifts(s, n1 * n2, t)))
    out = [
        Check("shift_average_equals_coefficient_subsampling", shift_err, 1e-12),
        Check("downsampling_composition", comp, 1e-12),
    ]

    worst = 0.0
    for n in range(1, 7):
        for z in (0.0, 0.5, 3.0, 10.0, 20.0):
            big = n * z ** (1.0 / n)
            ja = downsample.jacobi_anger_coeffs(big, max(downsample.jacobi_anger_length(big), n) * n)
            sub = downsample.downsample_coeffs(ja, n)
            for w in (-1.0, -0.4, 0.0, 0.6, 1.0):
                args = KernelArgs(z, w)
                ref = closed.kernel_dim2_closed(n, args)
                worst = max(worst, abs(downsample.eval_series(sub, args.t) - ref))
                worst = max(worst, abs(downsample.downsample_by_shifts(ja, n, args.t) - ref))
    out.append(Check("jacobi_anger_downsampling_gives_dim2_kernel", worst, 1e-11))
    return out


# -- transform ---------------------------------------------------------------


def eigen_sample_points(count: int = 24):
    return [(0.25 + 2.75 * i / (count - 1), 0.37 + 0.91 * i) for i in range(count)]


def transform_suite() -> List[Check]:
    out = []
    pts = eigen_sample_points()
    for a in (2.0, 1.0, 2.0 / 3.0):
        p = DeformParams(a, 2)
        quad = transform.build_quadrature(p)
        out.append(Check(f"quadrature_moments_a{a:.4g}", float(transform.moment_errors(quad).max()), 1e-10))
        worst = 0.0
        phase_bad = 0.0
        for j in range(3):
            for k in range(3):
                for h in ("cos", "sin") if k else ("cos",):
                    idx = transform.EigenIndex(j, k, h)
                    worst = max(worst, transform.verify_eigenrelation(p, idx, quad, pts))
                    # the measured eigenvalue must snap to the predicted fourth root of unity
                    psi = 0.3 if h == "cos" else 0.3 + math.pi / (2 * k)
                    rho = max((0.5, 0.8, 1.1, 1.4), key=lambda r: abs(transform.eigenfunction(p, idx, r, psi)))
                    val = transform.apply_transform(p, lambda r, th: transform.eigenfunction(p, idx, r, th), quad, (rho, psi))
                    ratio = val / transform.eigenfunction(p, idx, rho, psi)
                    if transform.snap_phase(ratio) != transform.eigenvalue(p, idx):
                        phase_bad = 1.0
        out.append(Check(f"eigenrelation_a{a:.4g}", worst, 1e-5))
        out.append(Check(f"eigenvalue_phase_snap_a{a:.4g}", phase_bad, 0.0))
        idxs = [transform.EigenIndex(j, k) for j in range(4) for k in range(4)]
        g = transform.gram_matrix(p, idxs, quad)
        d = np.sqrt(np.diag(g))
        off = np.abs(g / np.outer(d, d) - np.eye(len(idxs))).max()
        out.append(Check(f"eigenbasis_orthogonality_a{a:.4g}", float(off), 1e-8))

    worst = 0.0
    for j in range(6):
        for alpha in (0.0, 0.5, 1.0, 2.0):
            for s in (0.5, 1.0, 2.0):
                worst = max(worst, transform.hankel_laguerre_check(j, alpha, s))
    out.append(Check("hankel_laguerre_identity", worst, 1e-8))

    worst = 0.0
    for m in (2, 3):
        for k in range(5):
            for l in range(5):
                worst = max(worst, transform.reproducing_kernel_check(k, l, m))
    out.append(Check("gegenbauer_reproducing_kernel", worst, 1e-10))
    return out


SUITES: Dict[str, Callable[[], List[Check]]] = {
    "specfun": specfun_suite,
    "kernel": kernel_suite,
    "downsample": downsample_suite,
    "transform": transform_suite,
}


def run_suite(name: str, tol: Optional[float] = None, thresholds: Optional[Dict[str, float]] = None) -> List[Check]:
    """Run one suite (or ``all``); ``tol`` replaces every threshold, ``thresholds`` per check."""
    names = list(SUITES) if name == "all" else [name]
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite {unknown[0]!r}; choose from {sorted(SUITES) + ['all']}")
    checks: List[Check] = []
    for n in names:
        for c in SUITES[n]():
            c.name = f"{n}.{c.name}"
            checks.append(c)
    for c in checks:
        if thresholds and c.name in thresholds:
            c.threshold = thresholds[c.name]
        elif tol is not None:
            c.threshold = tol
    return checks
