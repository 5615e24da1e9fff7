"""Numerical evaluation of the kernel of the radially deformed Fourier transform."""

from .closed import (
    Evaluation,
    JetSingularityError,
    closed_form_available,
    dim_step_series,
    kernel_a1,
    kernel_a2,
    kernel_dim2_closed,
    kernel_dim2_parity,
    kernel_dispatch,
    kernel_even_dim,
    kernel_grid,
)
from .downsample import CosineSeries, downsample_by_shifts, downsample_coeffs, jacobi_anger_coeffs
from .params import DeformParams, KernelArgs, TruncationPolicy
from .series import ConvergenceError, derivative_series, kernel_series, required_terms, series_term
from .specfun import DomainError, PoleError, bessel_j, bessel_j_tilde, gamma_fn, gegenbauer, laguerre
from .transform import EigenIndex, QuadSpec, apply_transform, build_quadrature, verify_eigenrelation

__version__ = "0.1.0"

__all__ = [
    "CosineSeries",
    "ConvergenceError",
    "DeformParams",
    "DomainError",
    "EigenIndex",
    "Evaluation",
    "JetSingularityError",
    "KernelArgs",
    "PoleError",
    "QuadSpec",
    "TruncationPolicy",
    "apply_transform",
    "bessel_j",
    "bessel_j_tilde",
    "build_quadrature",
    "closed_form_available",
    "derivative_series",
    "dim_step_series",
    "downsample_by_shifts",
    "downsample_coeffs",
    "gamma_fn",
    "gegenbauer",
    "jacobi_anger_coeffs",
    "kernel_a1",
    "kernel_a2",
    "kernel_dim2_closed",
    "kernel_dim2_parity",
    "kernel_dispatch",
    "kernel_even_dim",
    "kernel_grid",
    "kernel_series",
    "laguerre",
    "required_terms",
    "series_term",
    "verify_eigenrelation",
]
