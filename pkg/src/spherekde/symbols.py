"""Spectral symbols k: [0, inf) -> R with k(0) = 1."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Symbol:
    """A vectorized symbol with its decay and smoothness orders.

    ``decay_order`` is r in |k(lambda)| <~ (1 + lambda)^(-r) and
    ``smoothness_order`` is tau, the number of continuous derivatives.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    decay_order: float
    smoothness_order: float
    name: str

    def __post_init__(self):
        k0 = float(self.fn(np.zeros(1))[0])
        if abs(k0 - 1.0) > 1e-15:
            raise ValueError(f"symbol {self.name} must satisfy k(0) = 1, got {k0!r}")

    def __call__(self, lam):
        return self.fn(np.asarray(lam, dtype=float))

    def eval(self, lam: float) -> float:
        return float(self.fn(np.asarray([lam], dtype=float))[0])


def g_sigma(sigma: int) -> Symbol:
    """The rational symbol 1 / (1 + lambda^sigma), sigma an integer >= 2."""
    if int(sigma) != sigma or sigma < 2:
        raise ValueError(f"sigma must be an integer >= 2, got {sigma!r}")
    sigma = int(sigma)

    def fn(lam):
        return 1.0 / (1.0 + np.abs(lam) ** sigma)

    return Symbol(fn, decay_order=sigma, smoothness_order=sigma - 1, name=f"g{sigma}")


def _gauss(lam):
    return np.exp(-(lam * lam))


def gauss_symbol() -> Symbol:
    """exp(-lambda^2): the symbol whose multiplier is the heat semigroup at t = h^2."""
    return Symbol(_gauss, decay_order=math.inf, smoothness_order=math.inf, name="gauss")


def strict_ceil(s: float) -> int:
    """Smallest integer strictly greater than ``s``."""
    return math.floor(s) + 1


def sigma_for_smoothness(s: float) -> int:
    """5 + the smallest integer strictly greater than s."""
    if not s > 0:
        raise ValueError(f"smoothness s must be positive, got {s!r}")
    return 5 + strict_ceil(s)


def symbol_for_smoothness(s: float, rule: str = "g6") -> Symbol:
    """Symbol used by the selection and simulation drivers for smoothness ``s``.

    ``rule="g6"`` uses g6 for every s <= 1 and g_{5 + ceil(s)} above;
    ``rule="strict"`` always applies the strict-ceiling formula, so s = 1
    gives g7.
    """
    if rule == "g6":
        if not s > 0:
            raise ValueError(f"smoothness s must be positive, got {s!r}")
        return g_sigma(6 if s <= 1 else sigma_for_smoothness(s))
    if rule == "strict":
        return g_sigma(sigma_for_smoothness(s))
    raise ValueError(f"unknown symbol rule {rule!r}")


def symbol_by_name(name: str) -> Symbol:
    if name == "gauss":
        return gauss_symbol()
    if name.startswith("g") and name[1:].isdigit():
        return g_sigma(int(name[1:]))
    raise ValueError(f"unknown symbol {name!r} (expected 'gauss' or 'g<sigma>')")
