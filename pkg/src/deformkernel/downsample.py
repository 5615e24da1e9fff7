"""Index-n downsampling of cosine series.

Keeping every n-th coefficient of f(t) = sum a_k cos(k t) gives the same
function as averaging f over the n shifted arguments (t + 2 pi j)/n.  Both
sides are implemented independently so the identity can be checked, and
the Jacobi-Anger expansion supplies the series whose downsampling is the
dimension-2 kernel for a = 2/n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .specfun import DomainError, bessel_j

__all__ = [
    "CosineSeries",
    "eval_series",
    "downsample_coeffs",
    "downsample_by_shifts",
    "jacobi_anger_coeffs",
    "jacobi_anger_length",
]


@dataclass(frozen=True)
class CosineSeries:
    """Finite cosine series; coefficients past the end are zero."""

    coeffs: tuple

    def __init__(self, coeffs: Sequence[complex]):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in coeffs))

    @property
    def abs_sum(self) -> float:
        return math.fsum(abs(c) for c in self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __call__(self, t: float) -> complex:
        return eval_series(self, t)


def eval_series(s: CosineSeries, t: float) -> complex:
    re = []
    im = []
    for k, c in enumerate(s.coeffs):
        ck = math.cos(k * t)
        re.append(c.real * ck)
        im.append(c.imag * ck)
    return complex(math.fsum(re), math.fsum(im))


def downsample_coeffs(s: CosineSeries, n: int) -> CosineSeries:
    if n < 1:
        raise DomainError("n must be a positive integer")
    return CosineSeries(s.coeffs[::n])


def downsample_by_shifts(f: Callable[[float], complex], n: int, t: float) -> complex:
    """(1/n) sum_j f((t + 2 pi j)/n)."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    vals = [complex(f((t + 2.0 * math.pi * j) / n)) for j in range(n)]
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals)) / n


_MINUS_I_POWERS = (1.0 + 0.0j, -1j, -1.0 + 0.0j, 1j)


def jacobi_anger_coeffs(z: float, K: int) -> CosineSeries:
    """Coefficients of exp(-i z cos t): J_0(z), then 2 (-i)^k J_k(z) for k = 1..K."""
    if K < 1:
        raise DomainError("K must be positive")
    coeffs = [complex(bessel_j(0, z))]
    for k in range(1, K + 1):
        coeffs.append(2.0 * _MINUS_I_POWERS[k % 4] * bessel_j(k, z))
    return CosineSeries(coeffs)


def jacobi_anger_length(z: float, tol: float = 1e-16) -> int:
    """Smallest K past which 2|J_k(z)| < tol for all k > K (checked on the decay side)."""
    k = max(1, int(z) + 1)
    while True:
        if 2.0 * abs(bessel_j(k, z)) < tol and k > z:
            return k
        k += 1
