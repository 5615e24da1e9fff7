"""Truncated Taylor arithmetic in one variable.

A :class:`Jet` of order d holds the d+1 Taylor coefficients of an analytic
function about a base point.  Products, quotients and the elementary
functions below are exact in truncated-series algebra, which gives exact
w-derivatives of composite closed forms.
"""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

Scalar = Union[int, float, complex]


class Jet:
    __slots__ = ("coeffs", "basepoint")

    def __init__(self, coeffs: Sequence[Scalar], basepoint: float = 0.0):
        c = np.array(coeffs, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("a jet needs at least one coefficient")
        c.setflags(write=False)
        self.coeffs = c
        self.basepoint = float(basepoint)

    @classmethod
    def variable(cls, w0: float, order: int) -> "Jet":
        """The identity function w about w0."""
        c = np.zeros(order + 1, dtype=complex)
        c[0] = w0
        if order >= 1:
            c[1] = 1.0
        return cls(c, w0)

    @classmethod
    def constant(cls, value: Scalar, order: int, basepoint: float = 0.0) -> "Jet":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c, basepoint)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __repr__(self):
        return f"Jet({self.coeffs.tolist()!r}, basepoint={self.basepoint!r})"

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.order != self.order:
                raise ValueError("jet orders differ")
            return other
        return Jet.constant(other, self.order, self.basepoint)

    def _new(self, c) -> "Jet":
        return Jet(c, self.basepoint)

    def __add__(self, other):
        return self._new(self.coeffs + self._coerce(other).coeffs)

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.coeffs)

    def __sub__(self, other):
        return self._new(self.coeffs - self._coerce(other).coeffs)

    def __rsub__(self, other):
        return self._new(self._coerce(other).coeffs - self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return self._new(self.coeffs * other)
        other = self._coerce(other)
        d = self.order
        return self._new(np.convolve(self.coeffs, other.coeffs)[: d + 1])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return self._new(self.coeffs / other)
        b = self._coerce(other).coeffs
        if b[0] == 0:
            raise ZeroDivisionError("jet division by a function vanishing at the base point")
        a = self.coeffs
        q = np.zeros_like(a)
        for k in range(a.size):
            q[k] = (a[k] - np.dot(b[1 : k + 1], q[k - 1 :: -1][:k])) / b[0]
        return self._new(q)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def derivative_coeffs(self) -> np.ndarray:
        """Coefficients of f' (one order lower)."""
        k = np.arange(1, self.order + 1)
        return self.coeffs[1:] * k

    def integrate(self, constant: Scalar) -> "Jet":
        """Antiderivative of a jet one order lower, lifted to this jet's order."""
        c = np.empty(self.order + 2, dtype=complex)
        c[0] = constant
        c[1:] = self.coeffs / np.arange(1, self.order + 2)
        return self._new(c)

    def derivative(self, n: int) -> complex:
        """n-th derivative at the base point."""
        if n > self.order:
            raise ValueError("derivative order exceeds jet order")
        return complex(self.coeffs[n] * math.factorial(n))

    def exp(self) -> "Jet":
        f = self.coeffs
        e = np.zeros_like(f)
        e[0] = np.exp(f[0])
        for k in range(1, f.size):
            j = np.arange(1, k + 1)
            e[k] = np.dot(j * f[1 : k + 1], e[k - 1 :: -1][:k]) / k
        return self._new(e)

    def _cos_sin(self):
        f = self.coeffs
        c = np.zeros_like(f)
        s = np.zeros_like(f)
        c[0] = np.cos(f[0])
        s[0] = np.sin(f[0])
        for k in range(1, f.size):
            jf = np.arange(1, k + 1) * f[1 : k + 1]
            s[k] = np.dot(jf, c[k - 1 :: -1][:k]) / k
            c[k] = -np.dot(jf, s[k - 1 :: -1][:k]) / k
        return self._new(c), self._new(s)

    def cos(self) -> "Jet":
        return self._cos_sin()[0]

    def sin(self) -> "Jet":
        return self._cos_sin()[1]

    def sqrt(self) -> "Jet":
        f = self.coeffs
        if f[0] == 0:
            raise ZeroDivisionError("sqrt jet at a zero of the argument")
        g = np.zeros_like(f)
        g[0] = np.sqrt(f[0])
        for k in range(1, f.size):
            g[k] = (f[k] - np.dot(g[1:k], g[k - 1 : 0 : -1])) / (2.0 * g[0])
        return self._new(g)

    def arccos(self) -> "Jet":
        """Principal arccos; needs |value| < 1 at the base point."""
        u0 = self.coeffs[0]
        if abs(u0.imag) > 0 or not abs(u0.real) < 1:
            raise ValueError("arccos jet needs a real base value inside (-1, 1)")
        if self.order == 0:
            return self._new([math.acos(u0.real)])
        low = Jet(self.coeffs[:-1], self.basepoint)
        du = Jet(self.derivative_coeffs(), self.basepoint)
        # (arccos u)' = -u' / sqrt(1 - u^2)
        deriv = -du / (1.0 - low * low).sqrt()
        return deriv.integrate(math.acos(u0.real))
