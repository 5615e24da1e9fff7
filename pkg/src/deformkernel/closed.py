"""Closed-form kernel evaluators and the dimension-raising recursion.

Available closed forms: a = 2 (plain exponential), a = 1 (normalized Bessel),
a = 2/n in dimension 2 (average of n exponentials, also in parity-reduced
real form) and a = 2/n in any even dimension via jet differentiation of the
dimension-2 form.  :func:`kernel_dispatch` picks among them and falls back
to the series.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .jet import Jet
from .params import DeformParams, KernelArgs, TruncationPolicy
from .series import derivative_series, kernel_series
from .specfun import DomainError, bessel_j_tilde, gamma_fn, log_gamma

__all__ = [
    "JET_DELTA",
    "JET_MIN_Z",
    "JetSingularityError",
    "Evaluation",
    "kernel_a2",
    "kernel_a1",
    "kernel_dim2_closed",
    "kernel_dim2_parity",
    "dim2_closed_array",
    "dim2_modulus_array",
    "step_prefactor",
    "recursion_prefactor",
    "dim_step_series",
    "kernel_even_dim",
    "even_dim_prefactor",
    "kernel_dispatch",
    "closed_form_available",
    "kernel_grid",
]

JET_DELTA = 1e-3
# below this z the jet route cancels (z^(1-k) times an O(z^(k-1)) difference); dispatch uses the series
JET_MIN_Z = 0.05


class JetSingularityError(DomainError):
    """w too close to +-1 for jet differentiation through arccos."""


class Evaluation(NamedTuple):
    value: complex
    method: str
    terms: int = 0


def kernel_a2(args: KernelArgs) -> complex:
    return cmath.exp(-1j * args.z * args.w)


def kernel_a1(m: int, args: KernelArgs) -> float:
    """Gamma((m-1)/2) tJ_{(m-3)/2}(sqrt(2 z (1 + w)))."""
    if m < 2:
        raise DomainError("dimension must be >= 2")
    y = math.sqrt(max(2.0 * args.z * (1.0 + args.w), 0.0))
    if m == 2:
        return math.cos(y)
    if y == 0.0:
        return 1.0
    return gamma_fn((m - 1) / 2) * bessel_j_tilde((m - 3) / 2, y)


def dim2_closed_array(n: int, z, w):
    """Vectorized dimension-2 closed form for a = 2/n (z and w broadcast)."""
    amp = n * np.asarray(z, dtype=float) ** (1.0 / n)
    t = np.arccos(np.clip(np.asarray(w, dtype=float), -1.0, 1.0))
    re = 0.0
    im = 0.0
    for ell in range(n):
        arg = amp * np.cos((t + 2.0 * math.pi * ell) / n)
        re = re + np.cos(arg)
        im = im - np.sin(arg)
    return (re + 1j * im) / n


def dim2_modulus_array(n: int, z, w):
    """|K_{2/n}^2| from the pairwise phase differences, so n = 1 gives exactly 1.

    |K|^2 = (1/n^2) (n + 2 sum_{l < l'} cos(amp (c_l - c_l'))).
    """
    amp = n * np.asarray(z, dtype=float) ** (1.0 / n)
    t = np.arccos(np.clip(np.asarray(w, dtype=float), -1.0, 1.0))
    cs = [np.cos((t + 2.0 * math.pi * ell) / n) for ell in range(n)]
    acc = np.full(np.broadcast(amp, t).shape, float(n))
    for i in range(n):
        for j in range(i + 1, n):
            acc = acc + 2.0 * np.cos(amp * (cs[i] - cs[j]))
    return np.sqrt(np.maximum(acc, 0.0)) / n


def kernel_dim2_closed(n: int, args: KernelArgs) -> complex:
    """(1/n) sum_l exp(-i n z^(1/n) cos((t + 2 pi l)/n)); modulus at most 1."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    amp = n * args.z ** (1.0 / n)
    acc = [cmath.exp(-1j * amp * math.cos((args.t + 2.0 * math.pi * ell) / n)) for ell in range(n)]
    return complex(math.fsum(c.real for c in acc), math.fsum(c.imag for c in acc)) / n


def kernel_dim2_parity(n: int, args: KernelArgs) -> complex:
    """Dimension-2 kernel from the parity-reduced trigonometric sums.

    For even n the result is real by construction.
    """
    if n < 1:
        raise DomainError("n must be a positive integer")
    r = n * args.z ** (1.0 / n)
    ca = r * math.cos(args.t / n)
    sb = r * math.sin(args.t / n)
    if n % 2 == 0:
        half = n // 2
        terms = [
            math.cos(ca * math.cos(math.pi * ell / half)) * math.cos(sb * math.sin(math.pi * ell / half))
            for ell in range(half)
        ]
        return complex(math.fsum(terms) / half, 0.0)
    half = (n - 1) // 2
    re = [math.cos(ca)]
    im = [math.sin(ca)]
    for ell in range(1, half + 1):
        c = math.cos(2.0 * math.pi * ell / n)
        s = math.sin(2.0 * math.pi * ell / n)
        cb = math.cos(sb * s)
        re.append(2.0 * math.cos(ca * c) * cb)
        im.append(2.0 * math.sin(ca * c) * cb)
    return complex(math.fsum(re) / n, -math.fsum(im) / n)


def step_prefactor(a: float, m: int) -> complex:
    """Factor taking z^-1 d/dw K_a^m to K_a^(m+2)."""
    lam = (m - 2) / 2
    log_mag = (2.0 / a) * math.log(a) + log_gamma((2 * lam + a + 2) / a) - log_gamma((2 * lam + a) / a)
    return cmath.exp(1j * math.pi / a) * math.exp(log_mag) / (2.0 * (lam + 1))


def recursion_prefactor(a: float, m: int, steps: int) -> complex:
    """Product of ``steps`` successive single-step factors starting at dimension m."""
    out = 1.0 + 0.0j
    for s in range(steps):
        out *= step_prefactor(a, m + 2 * s)
    return out


def dim_step_series(
    params: DeformParams, args: KernelArgs, policy: TruncationPolicy | None = None, steps: int = 1
) -> complex:
    """K_a^(m + 2 steps) from the term-wise w-derivatives of the K_a^m series."""
    if steps < 1:
        raise DomainError("steps must be >= 1")
    d = derivative_series(params, args, steps, policy)
    return recursion_prefactor(params.a, params.m, steps) * d.value


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def even_dim_prefactor(n: int, k: int) -> complex:
    """(2i/n)^(n(k-1)) (nk-n)! / (2k-2)!!, exact rational part."""
    p = n * (k - 1)
    mag = Fraction(2, n) ** p * math.factorial(n * k - n) / _double_factorial(2 * k - 2)
    return (1j) ** (p % 4) * float(mag)


def _dim2_jet(n: int, z: float, w: float, order: int) -> Jet:
    t = Jet.variable(w, order).arccos()
    amp = n * z ** (1.0 / n)
    acc = Jet.constant(0.0, order, w)
    for ell in range(n):
        acc = acc + (((t + 2.0 * math.pi * ell) * (1.0 / n)).cos() * (-1j * amp)).exp()
    return acc * (1.0 / n)


def kernel_even_dim(n: int, k: int, args: KernelArgs) -> complex:
    """K_{2/n}^{2k} by jet differentiation of the dimension-2 closed form."""
    if n < 1 or k < 1:
        raise DomainError("n and k must be positive integers")
    if k == 1:
        return kernel_dim2_closed(n, args)
    if abs(args.w) > 1.0 - JET_DELTA:
        raise JetSingularityError(f"|w|={abs(args.w)} is within {JET_DELTA} of 1")
    if args.z == 0.0:
        return 1.0 + 0.0j
    jet = _dim2_jet(n, args.z, args.w, k - 1)
    return even_dim_prefactor(n, k) * args.z ** (1 - k) * jet.derivative(k - 1)


def closed_form_available(params: DeformParams, w: float = 0.0, z: float = 1.0) -> str | None:
    """Name of the closed form :func:`kernel_dispatch` would use, or None."""
    n = params.rational_n
    if n == 1:
        return "closed_a2"
    if n == 2:
        return "closed_a1"
    if n is None or params.m % 2:
        return None
    if params.m == 2:
        return "closed_dim2"
    if abs(w) <= 1.0 - JET_DELTA and (z == 0.0 or z >= JET_MIN_Z):
        return "closed_even_dim"
    return None


def kernel_dispatch(params: DeformParams, args: KernelArgs, policy: TruncationPolicy | None = None) -> Evaluation:
    """Evaluate with the best available method and report which one ran."""
    method = closed_form_available(params, args.w, args.z)
    if method == "closed_a2":
        return Evaluation(kernel_a2(args), method)
    if method == "closed_a1":
        return Evaluation(complex(kernel_a1(params.m, args)), method)
    if method == "closed_dim2":
        return Evaluation(kernel_dim2_closed(params.rational_n, args), method)
    if method == "closed_even_dim":
        return Evaluation(kernel_even_dim(params.rational_n, params.m // 2, args), method)
    res = kernel_series(params, args, policy)
    return Evaluation(res.value, "series", res.terms)


def kernel_grid(params: DeformParams, z, w, policy: TruncationPolicy | None = None) -> np.ndarray:
    """Kernel on broadcast arrays of z and w; closed forms are vectorized."""
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    n = params.rational_n
    if n == 1:
        return np.exp(-1j * z * w)
    if n is not None and params.m == 2:
        return dim2_closed_array(n, z, w)
    z, w = np.broadcast_arrays(z, w)
    out = np.empty(z.shape, dtype=complex)
    for idx in np.ndindex(z.shape):
        out[idx] = kernel_dispatch(params, KernelArgs(z[idx], w[idx]), policy).value
    return out
