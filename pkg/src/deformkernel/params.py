"""Parameter and argument records shared by the kernel evaluators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .specfun import DomainError

# |w| up to 1 + this is clamped onto [-1, 1]; beyond it is an error
W_CLAMP_SLACK = 1e-12
_RATIONAL_RTOL = 1e-12


def parse_real(text: Union[str, float, int, Fraction]) -> float:
    """Parse ``"2/3"``-style fractions as well as plain floats."""
    if isinstance(text, (float, int)):
        return float(text)
    if isinstance(text, Fraction):
        return float(text)
    return float(Fraction(text.strip()))


@dataclass(frozen=True)
class DeformParams:
    """Deformation parameter ``a`` and dimension ``m``."""

    a: float
    m: int
    lam: float = field(init=False)

    def __post_init__(self):
        a = float(self.a)
        if not (a > 0 and math.isfinite(a)):
            raise DomainError(f"deformation parameter must be positive, got {self.a}")
        if int(self.m) != self.m or self.m < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.m}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "lam", (self.m - 2) / 2)

    @classmethod
    def from_n(cls, n: int, m: int) -> "DeformParams":
        return cls(2.0 / n, m)

    @property
    def rational_n(self) -> Optional[int]:
        """The integer n with a = 2/n, or None if a is not of that form."""
        n = round(2.0 / self.a)
        if n >= 1 and abs(2.0 / n - self.a) <= _RATIONAL_RTOL * self.a:
            return n
        return None


@dataclass(frozen=True)
class KernelArgs:
    """Bi-radial coordinates: z = |x||y|, w = <x,y>/z and t = arccos w."""

    z: float
    w: float
    t: float = field(init=False)

    def __post_init__(self):
        z = float(self.z)
        w = float(self.w)
        if not (z >= 0 and math.isfinite(z)):
            raise DomainError(f"z must be finite and nonnegative, got {self.z}")
        if abs(w) > 1.0:
            if abs(w) > 1.0 + W_CLAMP_SLACK:
                raise DomainError(f"|w| must not exceed 1, got {self.w}")
            w = math.copysign(1.0, w)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "t", math.acos(w))

    @classmethod
    def from_points(cls, x, y) -> "KernelArgs":
        nx = math.sqrt(sum(v * v for v in x))
        ny = math.sqrt(sum(v * v for v in y))
        z = nx * ny
        if z == 0:
            return cls(0.0, 1.0)
        return cls(z, sum(p * q for p, q in zip(x, y)) / z)


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping controls for the kernel series."""

    abs_tol: float = 1e-14
    max_terms: int = 4000
    consecutive_small: int = 3

    def __post_init__(self):
        if not self.abs_tol >= 1e-15:
            raise DomainError("abs_tol must be >= 1e-15")
        if self.max_terms < 8:
            raise DomainError("max_terms must be >= 8")
        if self.consecutive_small < 3:
            raise DomainError("consecutive_small must be >= 3")
