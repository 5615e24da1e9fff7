"""Kernel K_a^m(z, w) from its Bessel-Gegenbauer expansion.

The k-th term is

    Gamma(g0) a^(-2k/a) z^k tJ_nu(x) * e^(-i pi k / a) * (lam + k)/lam C_k^lam(w)

with g0 = 2 lam/a + 1, nu = 2(k + lam)/a, x = (2/a) z^(a/2) and tJ the
normalized Bessel function; the powers of z and a are combined before any
exponentiation so the z = 0 value comes out as exactly 1.  Dimension 2 uses
the resolved lam -> 0 form, where the angular factor is 1 for k = 0 and
2 cos(k t) otherwise.
"""

from __future__ import annotations

import cmath
import math
from typing import NamedTuple

from . import specfun
from .params import DeformParams, KernelArgs, TruncationPolicy
from .specfun import gegenbauer_at_one, iter_gegenbauer, log_gamma

__all__ = [
    "ConvergenceError",
    "SeriesResult",
    "series_term",
    "kernel_series",
    "derivative_series",
    "required_terms",
    "phase",
]

_PHASES = (1.0 + 0.0j, -1j, -1.0 + 0.0j, 1j)


class ConvergenceError(ArithmeticError):
    """The series stopping rule did not fire within ``max_terms``."""


class SeriesResult(NamedTuple):
    value: complex
    terms: int


def phase(params: DeformParams, k: int) -> complex:
    """e^(-i pi k / a); exact fourth roots of unity when a = 2/n."""
    n = params.rational_n
    if n is not None:
        return _PHASES[(k * n) % 4]
    return cmath.exp(-1j * math.pi * k / params.a)


def _bessel_arg(params: DeformParams, z: float) -> float:
    return 2.0 / params.a * z ** (params.a / 2.0)


def _log_scale(params: DeformParams, k: int, shift: int, z: float, nu: float) -> float:
    # log of Gamma(g0) a^(-2k/a) z^(k-shift) / Gamma(nu+1); z > 0 or k == shift
    a = params.a
    g0 = 2.0 * params.lam / a + 1.0
    out = log_gamma(g0) - (2.0 * k / a) * math.log(a) - log_gamma(nu + 1.0)
    if k != shift:
        out += (k - shift) * math.log(z)
    return out


def _radial(params: DeformParams, k: int, z: float, x: float, shift: int = 0) -> float:
    """Gamma(g0) a^(-2k/a) z^(k - shift) tJ_nu(x), stable down to z = 0."""
    a = params.a
    lam = params.lam
    nu = 2.0 * (k + lam) / a
    if z == 0.0:
        if k > shift:
            return 0.0
        return math.exp(_log_scale(params, k, shift, z, nu))
    if specfun._use_ascending(nu, x):
        return math.exp(_log_scale(params, k, shift, z, nu)) * specfun._ascending_normalized(nu, x)
    # oscillatory regime: Gamma(g0) a^(2 lam/a) z^(-lam - shift) J_nu(x)
    g0 = 2.0 * lam / a + 1.0
    j = specfun.bessel_j(nu, x)
    if j == 0.0:
        return 0.0
    log_mag = log_gamma(g0) + (2.0 * lam / a) * math.log(a) - (lam + shift) * math.log(z)
    return math.copysign(math.exp(log_mag + math.log(abs(j))), j)


def _angular_factors(params: DeformParams, args: KernelArgs, shift: int):
    """Yield (value, sup-norm bound) of the w-dependent factor of term k = shift, shift+1, ..."""
    lam = params.lam
    if shift == 0 and params.m == 2:
        yield 1.0, 1.0
        k = 1
        while True:
            yield 2.0 * math.cos(k * args.t), 2.0
            k += 1
    if shift == 0:
        k = 0
        for c in iter_gegenbauer(lam, args.w):
            scale = (lam + k) / lam
            yield scale * c, scale * gegenbauer_at_one(k, lam)
            k += 1
    # s-th derivative: d^s/dw^s (lam+k)/lam C_k^lam = (lam+k) 2^s prod_{i<s}(lam+i)/lam C_{k-s}^{lam+s}
    base = 2.0 ** shift
    for i in range(1, shift):
        base *= lam + i
    k = shift
    for c in iter_gegenbauer(lam + shift, args.w):
        scale = (lam + k) * base
        yield scale * c, scale * gegenbauer_at_one(k - shift, lam + shift)
        k += 1


def _envelope(params: DeformParams, k: int, shift: int, z: float, bound: float) -> float:
    # |tJ_nu(x)| <= 1/Gamma(nu+1) for nu >= -1/2 and real x
    if z == 0.0:
        if k > shift:
            return 0.0
    nu = 2.0 * (k + params.lam) / params.a
    return math.exp(_log_scale(params, k, shift, z, nu)) * bound


def _sum_series(params: DeformParams, args: KernelArgs, policy: TruncationPolicy, shift: int) -> SeriesResult:
    z = args.z
    x = _bessel_arg(params, z)
    re_parts = []
    im_parts = []
    small = 0
    count = 0
    for k, (ang, bound) in zip(range(shift, shift + policy.max_terms), _angular_factors(params, args, shift)):
        rad = _radial(params, k, z, x, shift)
        ph = phase(params, k)
        term = ph * (rad * ang)
        re_parts.append(term.real)
        im_parts.append(term.imag)
        count += 1
        nu = 2.0 * (k + params.lam) / params.a
        if nu > x and _envelope(params, k, shift, z, bound) < policy.abs_tol:
            small += 1
            if small >= policy.consecutive_small:
                return SeriesResult(complex(math.fsum(re_parts), math.fsum(im_parts)), count)
        else:
            small = 0
    raise ConvergenceError(
        f"kernel series did not settle within {policy.max_terms} terms "
        f"(a={params.a}, m={params.m}, z={z}); z is too large for this policy"
    )


def series_term(params: DeformParams, args: KernelArgs, k: int) -> complex:
    """The k-th summand of the kernel expansion, prefactor included."""
    if k < 0:
        raise specfun.DomainError("term index must be nonnegative")
    x = _bessel_arg(params, args.z)
    lam = params.lam
    if params.m == 2:
        ang = 1.0 if k == 0 else 2.0 * math.cos(k * args.t)
    else:
        ang = (lam + k) / lam * specfun.gegenbauer(k, lam, args.w)
    return phase(params, k) * (_radial(params, k, args.z, x) * ang)


def kernel_series(params: DeformParams, args: KernelArgs, policy: TruncationPolicy | None = None) -> SeriesResult:
    """Sum the expansion until the envelope-based stopping rule fires."""
    return _sum_series(params, args, policy or TruncationPolicy(), 0)


def derivative_series(
    params: DeformParams, args: KernelArgs, order: int, policy: TruncationPolicy | None = None
) -> SeriesResult:
    """z^(-order) d^order/dw^order K_a^m(z, w), differentiated term by term."""
    if order < 0:
        raise specfun.DomainError("derivative order must be nonnegative")
    return _sum_series(params, args, policy or TruncationPolicy(), order)


def required_terms(params: DeformParams, z_max: float, tol: float, consecutive_small: int = 3) -> int:
    """Term count that suffices for every z <= z_max.

    Past the returned index the envelope bound keeps each term below ``tol``;
    the count includes the ``consecutive_small`` confirmation terms.
    """
    if z_max < 0:
        raise specfun.DomainError("z_max must be nonnegative")
    x_max = _bessel_arg(params, z_max)
    lam = params.lam
    last_bad = -1
    k = 0
    streak = 0
    while True:
        if params.m == 2:
            bound = 1.0 if k == 0 else 2.0
        else:
            bound = (lam + k) / lam * gegenbauer_at_one(k, lam)
        nu = 2.0 * (k + lam) / params.a
        ok = nu > x_max and _envelope(params, k, 0, z_max, bound) < tol
        if ok:
            streak += 1
            # envelope decays super-geometrically once nu >> x; a long streak settles it
            if streak >= 25 and nu > 2.0 * x_max:
                break
        else:
            streak = 0
            last_bad = k
        k += 1
    return last_bad + 1 + consecutive_small
