"""Real-argument special functions used by the kernel formulas.

Everything here is written from scratch on top of :mod:`math`: Bessel J of
real order ``nu >= -1/2``, its normalized form ``(x/2)**-nu J_nu(x)``,
Gegenbauer and generalized Laguerre polynomials, and the gamma function.
"""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

_LN2 = math.log(2.0)

__all__ = [
    "DomainError",
    "PoleError",
    "bessel_j",
    "bessel_j_tilde",
    "gamma_fn",
    "log_gamma",
    "gegenbauer",
    "gegenbauer_at_one",
    "gegenbauer_limit",
    "iter_gegenbauer",
    "laguerre",
]


class DomainError(ValueError):
    """Argument outside the domain an evaluator supports."""


class PoleError(DomainError):
    """Gamma function evaluated at a nonpositive integer."""


# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_sum(x: float) -> float:
    # x is the shifted argument (Gamma(x + 1) convention)
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (x + i)
    return acc


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def gamma_fn(x: float) -> float:
    """Gamma function for real ``x`` off the poles.

    Positive integers up to 171 are returned as exact factorials.
    """
    x = float(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma has a pole at x={x}")
    if x == math.floor(x) and x <= 171:
        return float(math.factorial(int(x) - 1))
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    y = x - 1.0
    t = y + _LANCZOS_G + 0.5
    # split the power so that t**(y+0.5) does not overflow before exp(-t) kicks in
    half = t ** (0.5 * (y + 0.5))
    return math.sqrt(2.0 * math.pi) * half * (half * math.exp(-t)) * _lanczos_sum(y)


def log_gamma(x: float) -> float:
    """log Gamma(x) for ``x > 0``."""
    x = float(x)
    if x <= 0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    if x < 0.5:
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    y = x - 1.0
    t = y + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (y + 0.5) * math.log(t) - t + math.log(_lanczos_sum(y))


def _check_order(nu: float) -> None:
    if not nu >= -0.5:
        raise DomainError(f"Bessel order must be >= -1/2, got {nu}")


def _use_ascending(nu: float, x: float) -> bool:
    # the power series is cancellation-free while x^2/4 stays below nu + 1
    q = 0.25 * x * x
    return x <= 6.0 or q <= nu + 1.0


def _ascending_normalized(nu: float, x: float) -> float:
    """sum_p (-x^2/4)^p / (p! (nu+1)_p), i.e. Gamma(nu+1) * tilde J_nu(x)."""
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    comp = 0.0
    p = 0
    while True:
        p += 1
        term *= -q / (p * (nu + p))
        # Kahan step
        y = term - comp
        s = total + y
        comp = (s - total) - y
        total = s
        if abs(term) <= 1e-17 * abs(total) and p > q:
            return total
        if p > 10000:
            raise OverflowError("ascending Bessel series failed to converge")


def _use_hankel(nu: float, x: float) -> bool:
    return x >= 40.0 + nu * nu / 10.0


def _bessel_hankel(nu: float, x: float) -> float:
    mu = 4.0 * nu * nu
    p_sum = 1.0
    q_sum = 0.0
    term = 1.0
    prev = math.inf
    k = 0
    while True:
        k += 1
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = abs(term)
        if mag >= prev and k > 2:
            break
        if k % 2 == 1:
            q_sum += term * (1 if (k // 2) % 2 == 0 else -1)
        else:
            p_sum += term * (1 if (k // 2) % 2 == 0 else -1)
        if mag < 1e-17 or term == 0.0:
            break
        prev = mag
    chi = x - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p_sum * math.cos(chi) - q_sum * math.sin(chi))


_MILLER_MAX_START = 200_000


def _bessel_miller(nu: float, x: float) -> float:
    """Backward recurrence from a high order, normalized by the Neumann sum.

    Uses (x/2)^mu = sum_k (mu + 2k) Gamma(mu + k) / k! J_{mu+2k}(x), with
    mu = nu - floor(nu) in [0, 1).
    """
    n_target = math.floor(nu)
    mu = nu - n_target
    big = max(nu, x)
    start = int(big) + 40 + int(4.0 * math.sqrt(big))
    if start > _MILLER_MAX_START:
        raise OverflowError(f"Bessel recurrence start order {start} out of range")
    start += start % 2

    # g_k = Gamma(mu + k) / k! for the even-index normalization weights
    weights = [0.0] * (start // 2 + 1)
    weights[0] = gamma_fn(mu + 1.0)
    g = weights[0]
    for k in range(1, start // 2 + 1):
        if k > 1:
            g *= (mu + k - 1) / k
        weights[k] = (mu + 2 * k) * g

    f_next = 0.0
    f_cur = 1e-30
    norm = weights[start // 2] * f_cur
    target = 0.0
    for j in range(start, min(n_target, 0), -1):
        # f_cur holds order mu + j; step to mu + j - 1
        f_prev = 2.0 * (mu + j) / x * f_cur - f_next
        f_next, f_cur = f_cur, f_prev
        jj = j - 1
        if jj == n_target:
            target = f_cur
        if jj >= 0 and jj % 2 == 0:
            norm += weights[jj // 2] * f_cur
        if abs(f_cur) > 1e250:
            f_cur *= 1e-250
            f_next *= 1e-250
            norm *= 1e-250
            target *= 1e-250
    return target * (0.5 * x) ** mu / norm


def bessel_j(nu: float, x: float) -> float:
    """Bessel function of the first kind J_nu(x) for real nu >= -1/2, x >= 0."""
    nu = float(nu)
    x = float(x)
    _check_order(nu)
    if x < 0:
        raise DomainError(f"bessel_j needs x >= 0, got {x}")
    if nu == -0.5:
        if x == 0:
            raise DomainError("J_{-1/2} is singular at x = 0")
        return math.sqrt(2.0 / (math.pi * x)) * math.cos(x)
    if x == 0:
        return 1.0 if nu == 0 else 0.0
    if not math.isfinite(x):
        raise OverflowError("bessel_j argument is not finite")
    if _use_ascending(nu, x):
        if nu + 1.0 < 170.0:
            return math.exp(nu * (math.log(x) - _LN2)) / gamma_fn(nu + 1.0) * _ascending_normalized(nu, x)
        log_lead = nu * (math.log(x) - _LN2) - log_gamma(nu + 1.0)
        return math.exp(log_lead) * _ascending_normalized(nu, x)
    if _use_hankel(nu, x):
        return _bessel_hankel(nu, x)
    return _bessel_miller(nu, x)


def bessel_j_tilde(nu: float, x: float) -> float:
    """Normalized Bessel function (x/2)**-nu * J_nu(x); equals 1/Gamma(nu+1) at 0."""
    nu = float(nu)
    x = float(x)
    _check_order(nu)
    if x < 0:
        raise DomainError(f"bessel_j_tilde needs x >= 0, got {x}")
    if nu == -0.5:
        return math.cos(x) / math.sqrt(math.pi)
    if _use_ascending(nu, x):
        if nu + 1.0 < 170.0:
            return _ascending_normalized(nu, x) / gamma_fn(nu + 1.0)
        return math.exp(-log_gamma(nu + 1.0)) * _ascending_normalized(nu, x)
    j = bessel_j(nu, x)
    if j == 0.0:
        return 0.0
    return math.copysign(math.exp(math.log(abs(j)) - nu * (math.log(x) - _LN2)), j)


def _check_w(w) -> None:
    if np.any(np.abs(w) > 1.0):
        raise DomainError("Gegenbauer argument must satisfy |w| <= 1")


def iter_gegenbauer(lam: float, w: float) -> Iterator[float]:
    """Yield C_0^lam(w), C_1^lam(w), ... without end."""
    c_prev = 1.0
    yield c_prev
    c_cur = 2.0 * lam * w
    yield c_cur
    k = 1
    while True:
        k += 1
        c_next = math.fsum((2.0 * (k + lam - 1) * w * c_cur, -(k + 2.0 * lam - 2) * c_prev)) / k
        c_prev, c_cur = c_cur, c_next
        yield c_cur


def gegenbauer(k: int, lam: float, w):
    """Gegenbauer polynomial C_k^lam(w) by three-term recurrence.

    Accepts a scalar or a numpy array for ``w``.
    """
    if k < 0:
        raise DomainError("degree must be nonnegative")
    if not lam > 0:
        raise DomainError(f"Gegenbauer index must be positive, got {lam}")
    _check_w(w)
    scalar = np.ndim(w) == 0
    w = float(w) if scalar else np.asarray(w, dtype=float)
    c_prev = 1.0 + 0.0 * w
    if k == 0:
        return c_prev
    c_cur = 2.0 * lam * w
    for n in range(2, k + 1):
        c_prev, c_cur = c_cur, (2.0 * (n + lam - 1) * w * c_cur - (n + 2.0 * lam - 2) * c_prev) / n
    return c_cur


def gegenbauer_at_one(k: int, lam: float) -> float:
    """C_k^lam(1) = Gamma(k + 2 lam) / (k! Gamma(2 lam)), the sup norm on [-1, 1]."""
    if k == 0:
        return 1.0
    return math.exp(log_gamma(k + 2.0 * lam) - log_gamma(k + 1.0) - log_gamma(2.0 * lam))


def gegenbauer_limit(k: int, t: float) -> float:
    """lim_{lam -> 0} C_k^lam(cos t) / lam = (2/k) cos(k t); 1 at k = 0 by convention."""
    if k < 0:
        raise DomainError("degree must be nonnegative")
    if k == 0:
        return 1.0
    return 2.0 / k * math.cos(k * t)


def laguerre(j: int, alpha: float, u):
    """Generalized Laguerre polynomial L_j^alpha(u); ``u`` may be an array."""
    if j < 0:
        raise DomainError("degree must be nonnegative")
    if not alpha > -1:
        raise DomainError(f"Laguerre parameter must exceed -1, got {alpha}")
    scalar = np.ndim(u) == 0
    u = float(u) if scalar else np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise DomainError("Laguerre argument must be nonnegative")
    l_prev = 1.0 + 0.0 * u
    if j == 0:
        return l_prev
    l_cur = 1.0 + alpha - u
    for n in range(1, j):
        l_prev, l_cur = l_cur, ((2 * n + 1 + alpha - u) * l_cur - (n + alpha) * l_prev) / (n + 1)
    return l_cur
