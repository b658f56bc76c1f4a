"""Truncated spectral kernels on S^2 and B^3, the Gaussian kernel on R^d,
and truncation-error bounds for the sphere series.

The sphere kernel is

    K_h(xi, eta) = sum_{nu=0}^{N} (2 nu + 1)/(4 pi) k(h sqrt(nu (nu + 1))) P_nu(<xi, eta>)

and the ball kernel is

    K_h(x, y) = sum_{nu=0}^{N} (nu + 1)/(2 pi^2) k(h sqrt(nu (nu + 2))) [C_nu(u+) + C_nu(u-)]

with u+- = <x, y> +- sqrt(1 - |x|^2) sqrt(1 - |y|^2). Coefficients are
computed once per (symbol, h, N); evaluation is one recurrence sweep.
Truncated series can be negative; nothing here clips them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .geometry import as_ball_array, as_euclid_array
from .poly import gegenbauer1_series, legendre_series
from .symbols import Symbol

Domain = Literal["sphere", "ball", "euclid"]

# validity threshold of the tail bound: (1 + 2 nu)/(4 pi) <= 0.51 nu / pi needs nu >= 25
MIN_BOUND_ORDER = 24


@dataclass(frozen=True)
class TruncatedKernel:
    domain: Domain
    symbol: Symbol
    h: float
    N: int
    coeffs: np.ndarray = field(repr=False)
    dim: int | None = None

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError(f"bandwidth h must be positive, got {self.h!r}")
        if self.N < 0:
            raise ValueError(f"truncation order N must be >= 0, got {self.N!r}")
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("kernel coefficients must be finite")
        self.coeffs.setflags(write=False)


def sphere_coefficients(symbol: Symbol, h: float, N: int) -> np.ndarray:
    nu = np.arange(N + 1, dtype=float)
    return (1.0 + 2.0 * nu) / (4.0 * np.pi) * symbol(h * np.sqrt(nu * (nu + 1.0)))


def ball_coefficients(symbol: Symbol, h: float, N: int) -> np.ndarray:
    nu = np.arange(N + 1, dtype=float)
    return (1.0 + nu) / (2.0 * np.pi**2) * symbol(h * np.sqrt(nu * (nu + 2.0)))


def build_sphere_kernel(symbol: Symbol, h: float, N: int) -> TruncatedKernel:
    if N < 0:
        raise ValueError(f"truncation order N must be >= 0, got {N!r}")
    return TruncatedKernel("sphere", symbol, float(h), int(N), sphere_coefficients(symbol, h, N))


def build_ball_kernel(symbol: Symbol, h: float, N: int) -> TruncatedKernel:
    if N < 0:
        raise ValueError(f"truncation order N must be >= 0, got {N!r}")
    return TruncatedKernel("ball", symbol, float(h), int(N), ball_coefficients(symbol, h, N))


def build_euclid_kernel(symbol: Symbol, h: float, d: int) -> TruncatedKernel:
    """Gaussian heat kernel on R^d; ``symbol`` must be the Gaussian symbol."""
    if symbol.name != "gauss":
        raise ValueError("only the Gaussian symbol has a closed-form kernel on R^d")
    if d < 1:
        raise ValueError("dimension d must be >= 1")
    return TruncatedKernel("euclid", symbol, float(h), 0, np.ones(1), dim=int(d))


def _require(kernel: TruncatedKernel, domain: Domain):
    if kernel.domain != domain:
        raise ValueError(f"expected a {domain} kernel, got a {kernel.domain} kernel")


def _scalar_or_array(values: np.ndarray, like):
    return float(values) if np.ndim(like) == 0 else values


def eval_sphere_kernel(kernel: TruncatedKernel, t):
    """Kernel value at inner product(s) ``t`` in [-1, 1]."""
    _require(kernel, "sphere")
    t_arr = np.asarray(t, dtype=float)
    if not np.all(np.abs(t_arr) <= 1.0):
        raise ValueError("inner product t must lie in [-1, 1]")
    return _scalar_or_array(legendre_series(kernel.coeffs, t_arr), t)


def sphere_kernel_from_inner(kernel: TruncatedKernel, t: np.ndarray) -> np.ndarray:
    """Like :func:`eval_sphere_kernel` but clamps ``t`` instead of rejecting."""
    return legendre_series(kernel.coeffs, np.clip(t, -1.0, 1.0))


def ball_arguments(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """u+ and u- for broadcastable ``(..., 3)`` arrays, clamped to [-1, 1]."""
    dot = x[..., 0] * y[..., 0] + x[..., 1] * y[..., 1] + x[..., 2] * y[..., 2]
    lift_x = np.sqrt(1.0 - (x[..., 0] ** 2 + x[..., 1] ** 2 + x[..., 2] ** 2))
    lift_y = np.sqrt(1.0 - (y[..., 0] ** 2 + y[..., 1] ** 2 + y[..., 2] ** 2))
    lift = lift_x * lift_y
    return np.clip(dot + lift, -1.0, 1.0), np.clip(dot - lift, -1.0, 1.0)


def ball_kernel_from_arguments(kernel: TruncatedKernel, u_plus, u_minus) -> np.ndarray:
    return gegenbauer1_series(kernel.coeffs, u_plus) + gegenbauer1_series(kernel.coeffs, u_minus)


def eval_ball_kernel(kernel: TruncatedKernel, x, y):
    _require(kernel, "ball")
    scalar = not isinstance(x, np.ndarray) and not isinstance(y, np.ndarray)
    xa = as_ball_array(x)
    ya = as_ball_array(y)
    values = ball_kernel_from_arguments(kernel, *ball_arguments(xa, ya))
    return float(values[0]) if scalar else values


def eval_euclid_gauss_kernel(h: float, x, y):
    """(4 pi h^2)^(-d/2) exp(-|x - y|^2 / (4 h^2))."""
    if not h > 0:
        raise ValueError(f"bandwidth h must be positive, got {h!r}")
    scalar = not isinstance(x, np.ndarray) and not isinstance(y, np.ndarray)
    xa = np.atleast_2d(as_euclid_array([x] if not isinstance(x, np.ndarray) else x))
    ya = np.atleast_2d(as_euclid_array([y] if not isinstance(y, np.ndarray) else y))
    if xa.shape[-1] != ya.shape[-1]:
        raise ValueError(f"dimension mismatch: {xa.shape[-1]} vs {ya.shape[-1]}")
    values = gauss_kernel_from_sqdist(h, xa.shape[-1], np.sum((xa - ya) ** 2, axis=-1))
    return float(values[0]) if scalar else values


def gauss_kernel_from_sqdist(h: float, d: int, sqdist: np.ndarray) -> np.ndarray:
    return (4.0 * np.pi * h * h) ** (-d / 2.0) * np.exp(-sqdist / (4.0 * h * h))


def truncation_error_bound(h: float, r: float, N: int) -> float:
    """Upper bound on |K_h - K_h^(N)| for the sphere kernel with a g^r symbol.

    0.51 h^(-r) N^(2 - r) / (pi (r - 2)), valid for r > 2 and N >= 24.
    """
    if not r > 2:
        raise ValueError(f"the tail bound needs decay order r > 2 (sum of nu^(1-r) must converge), got r={r!r}")
    if N < MIN_BOUND_ORDER:
        raise ValueError(
            f"the tail bound needs N >= {MIN_BOUND_ORDER} "
            f"((1 + 2 nu)/(4 pi) <= 0.51 nu / pi only for nu >= 25), got N={N!r}"
        )
    if not h > 0:
        raise ValueError(f"bandwidth h must be positive, got {h!r}")
    return 0.51 * h ** (-r) * float(N) ** (2.0 - r) / (math.pi * (r - 2.0))


def truncation_error_bound_n(n: int, s: float, N: int) -> float:
    """The r = 6, h = n^(-1/(2s+2)) case: 0.51 n^(3/(s+1)) N^(-4) / (4 pi), s in (0, 1]."""
    if not 0 < s <= 1:
        raise ValueError(f"the n-form bound uses r = 6, which covers s in (0, 1] only; got s={s!r}")
    if n < 1:
        raise ValueError(f"sample size n must be >= 1, got {n!r}")
    if N < MIN_BOUND_ORDER:
        raise ValueError(f"the tail bound needs N >= {MIN_BOUND_ORDER}, got N={N!r}")
    return 0.51 * float(n) ** (3.0 / (s + 1.0)) * float(N) ** -4 / (4.0 * math.pi)


def min_order_for_bound(h: float, r: float, target: float) -> int:
    """Smallest N >= 24 with ``truncation_error_bound(h, r, N) <= target``."""
    if not target > 0:
        raise ValueError("target error must be positive")
    lead = 0.51 * h ** (-r) / (math.pi * (r - 2.0))
    guess = max(MIN_BOUND_ORDER, math.ceil((lead / target) ** (1.0 / (r - 2.0))))
    # the closed form can be off by one from rounding; settle it exactly
    while guess > MIN_BOUND_ORDER and truncation_error_bound(h, r, guess - 1) <= target:
        guess -= 1
    while truncation_error_bound(h, r, guess) > target:
        guess += 1
    return guess


def min_order_for_bound_n(n: int, s: float, target: float) -> int:
    """Smallest N >= 24 with ``truncation_error_bound_n(n, s, N) <= target``."""
    if not target > 0:
        raise ValueError("target error must be positive")
    lead = 0.51 * float(n) ** (3.0 / (s + 1.0)) / (4.0 * math.pi)
    guess = max(MIN_BOUND_ORDER, math.ceil((lead / target) ** 0.25))
    while guess > MIN_BOUND_ORDER and truncation_error_bound_n(n, s, guess - 1) <= target:
        guess -= 1
    while truncation_error_bound_n(n, s, guess) > target:
        guess += 1
    return guess
