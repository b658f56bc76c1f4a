"""Three-term recurrences for Legendre P_n and Gegenbauer C_n^(1).

Both return the whole sequence 0..N at once; array inputs broadcast and
the degree axis is first.
"""

from __future__ import annotations

import numpy as np


def _check_unit_interval(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if not np.all(np.abs(u) <= 1.0):
        raise ValueError("argument must lie in [-1, 1]")
    return u


def legendre_all(u, N: int) -> np.ndarray:
    """P_0(u), ..., P_N(u) with shape ``(N + 1,) + u.shape``.

    (nu + 1) P_{nu+1} = (2 nu + 1) u P_nu - nu P_{nu-1}.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    u = _check_unit_interval(u)
    out = np.empty((N + 1,) + u.shape)
    out[0] = 1.0
    if N >= 1:
        out[1] = u
    for nu in range(1, N):
        out[nu + 1] = ((2 * nu + 1) * u * out[nu] - nu * out[nu - 1]) / (nu + 1)
    return out


def gegenbauer1_all(u, N: int) -> np.ndarray:
    """C^1_0(u), ..., C^1_N(u) (Chebyshev U_n) with shape ``(N + 1,) + u.shape``."""
    if N < 0:
        raise ValueError("N must be >= 0")
    u = _check_unit_interval(u)
    out = np.empty((N + 1,) + u.shape)
    out[0] = 1.0
    if N >= 1:
        out[1] = 2.0 * u
    for nu in range(2, N + 1):
        out[nu] = 2.0 * u * out[nu - 1] - out[nu - 2]
    return out


def _series(coeffs: np.ndarray, u: np.ndarray, alpha: np.ndarray, beta: np.ndarray, first: float) -> np.ndarray:
    """sum_nu coeffs[nu] Q_nu(u) for Q_{nu+1} = alpha[nu] u Q_nu - beta[nu] Q_{nu-1}.

    Q_0 = 1 and Q_1 = first * u. Works in place on preallocated buffers;
    Kahan-compensated over nu when more than 65 terms are summed.
    """
    N = len(coeffs) - 1
    total = np.full(u.shape, coeffs[0])
    if N == 0:
        return total
    q_prev = np.ones(u.shape)
    q = np.multiply(u, first, out=np.empty(u.shape))
    term = np.empty(u.shape)
    compensated = N > 64
    if compensated:
        comp = np.zeros(u.shape)
        scratch = np.empty(u.shape)
    for nu in range(1, N + 1):
        if nu > 1:
            # q_prev <- alpha u q - beta q_prev, then swap roles
            np.multiply(u, q, out=term)
            term *= alpha[nu - 1]
            q_prev *= beta[nu - 1]
            np.subtract(term, q_prev, out=q_prev)
            q, q_prev = q_prev, q
        np.multiply(q, coeffs[nu], out=term)
        if compensated:
            term -= comp
            np.add(total, term, out=scratch)
            np.subtract(scratch, total, out=comp)
            comp -= term
            total, scratch = scratch, total
        else:
            total += term
    return total


def _legendre_ratios(N: int) -> tuple[np.ndarray, np.ndarray]:
    nu = np.arange(max(N, 1), dtype=float)
    return (2.0 * nu + 1.0) / (nu + 1.0), nu / (nu + 1.0)


def legendre_series(coeffs, u) -> np.ndarray:
    """sum_nu coeffs[nu] P_nu(u) for ``u`` already inside [-1, 1]."""
    coeffs = np.asarray(coeffs, dtype=float)
    alpha, beta = _legendre_ratios(len(coeffs) - 1)
    return _series(coeffs, np.asarray(u, dtype=float), alpha, beta, 1.0)


def gegenbauer1_series(coeffs, u) -> np.ndarray:
    """sum_nu coeffs[nu] C^1_nu(u) for ``u`` already inside [-1, 1]."""
    coeffs = np.asarray(coeffs, dtype=float)
    n = max(len(coeffs) - 1, 1)
    return _series(coeffs, np.asarray(u, dtype=float), np.full(n, 2.0), np.ones(n), 2.0)
