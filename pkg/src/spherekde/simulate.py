"""Ground-truth densities on S^2, exact samplers, and Monte Carlo MSE studies.

All randomness comes from :class:`spherekde.rng.SplitMix64`. Replication
``r`` at sample-size index ``i`` uses the stream
``derive_seed(derive_seed(seed, i), r)``.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .estimator import BandwidthPolicy, bandwidth, evaluate_many, fit
from .geometry import UnitVector3, as_sphere_array
from .rng import SplitMix64, derive_seed
from .symbols import Symbol, symbol_for_smoothness


def sample_uniform_sphere(n: int, seed: int) -> np.ndarray:
    """z uniform on [-1, 1], longitude uniform on [0, 2 pi); returns ``(n, 3)``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    u = SplitMix64(seed).uniform_array(2 * n).reshape(n, 2)
    z = 2.0 * u[:, 0] - 1.0
    lon = 2.0 * np.pi * u[:, 1]
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    pts = np.stack([rho * np.cos(lon), rho * np.sin(lon), z], axis=1)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _tangent_basis(mu: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    helper = np.array([1.0, 0.0, 0.0]) if abs(mu[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = helper - np.dot(helper, mu) * mu
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(mu, e1)


def vmf_cosine(u: np.ndarray, kappa: float) -> np.ndarray:
    """Inverse CDF of <X, mu> under vMF(kappa) on S^2.

    w = 1 + log(u + (1 - u) e^(-2 kappa)) / kappa, written with log1p/expm1.
    """
    w = 1.0 + np.log1p((1.0 - u) * np.expm1(-2.0 * kappa)) / kappa
    return np.clip(w, -1.0, 1.0)


@dataclass(frozen=True)
class VmfComponent:
    mu: tuple[float, float, float]
    kappa: float
    weight: float


@dataclass(frozen=True)
class VmfMixture:
    """Mixture of von Mises-Fisher components; mean directions are normalized on construction."""

    components: tuple[VmfComponent, ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("a mixture needs at least one component")
        comps = []
        for c in self.components:
            if not c.kappa > 0:
                raise ValueError(f"kappa must be positive, got {c.kappa!r}")
            if not c.weight > 0:
                raise ValueError(f"weights must be positive, got {c.weight!r}")
            mu = UnitVector3.normalized(*(float(v) for v in c.mu))
            comps.append(VmfComponent((mu.x, mu.y, mu.z), float(c.kappa), float(c.weight)))
        total = math.fsum(c.weight for c in comps)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"mixture weights must sum to 1, got {total!r}")
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def from_lists(cls, mus, kappas, weights) -> "VmfMixture":
        return cls(tuple(VmfComponent(tuple(m), k, w) for m, k, w in zip(mus, kappas, weights)))

    def pdf(self, x) -> np.ndarray:
        return vmf_mixture_pdf(self, x)

    def sample(self, n: int, seed: int) -> np.ndarray:
        return sample_vmf_mixture(self, n, seed)


@dataclass(frozen=True)
class UniformSphere:
    """The uniform density 1/(4 pi)."""

    def pdf(self, x) -> np.ndarray:
        return np.full(len(as_sphere_array(x)), 1.0 / (4.0 * np.pi))

    def sample(self, n: int, seed: int) -> np.ndarray:
        return sample_uniform_sphere(n, seed)


def sample_vmf_mixture(m: VmfMixture, n: int, seed: int) -> np.ndarray:
    """Exact draws: component by weight, cosine by inverse CDF, uniform azimuth."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    u = SplitMix64(seed).uniform_array(3 * n).reshape(n, 3)
    cum = np.cumsum([c.weight for c in m.components])
    comp = np.minimum(np.searchsorted(cum, u[:, 0], side="right"), len(m.components) - 1)
    out = np.empty((n, 3))
    for j, c in enumerate(m.components):
        sel = comp == j
        if not np.any(sel):
            continue
        mu = np.asarray(c.mu)
        e1, e2 = _tangent_basis(mu)
        w = vmf_cosine(u[sel, 1], c.kappa)
        az = 2.0 * np.pi * u[sel, 2]
        rho = np.sqrt(np.maximum(0.0, 1.0 - w * w))
        out[sel] = (rho * np.cos(az))[:, None] * e1 + (rho * np.sin(az))[:, None] * e2 + w[:, None] * mu
    return out / np.linalg.norm(out, axis=1, keepdims=True)


def vmf_mixture_pdf(m: VmfMixture, x) -> np.ndarray:
    """sum_j w_j kappa_j exp(kappa_j <x, mu_j>) / (4 pi sinh kappa_j).

    Evaluated as kappa exp(kappa (t - 1)) / (2 pi (1 - e^(-2 kappa))) to
    avoid overflow at large kappa.
    """
    pts = as_sphere_array(x)
    total = np.zeros(len(pts))
    for c in m.components:
        t = pts @ np.asarray(c.mu)
        k = c.kappa
        total += c.weight * k * np.exp(k * (t - 1.0)) / (2.0 * np.pi * -np.expm1(-2.0 * k))
    return total


def mean_resultant_length(kappa: float) -> float:
    """E<X, mu> under vMF(kappa) on S^2: coth(kappa) - 1/kappa."""
    return 1.0 / math.tanh(kappa) - 1.0 / kappa


# smooth truth for rate studies and a concentrated one for selection checks
SMOOTH_VMF3 = VmfMixture.from_lists(
    mus=[(0.0, 0.0, 1.0), (1.0, 0.0, 0.0), (0.0, -0.6, -0.8)],
    kappas=[3.0, 4.0, 5.0],
    weights=[0.4, 0.35, 0.25],
)
TIGHT_VMF3 = VmfMixture.from_lists(
    mus=[(0.0, 0.0, 1.0), (0.6, 0.8, 0.0), (-0.8, 0.0, -0.6)],
    kappas=[200.0, 100.0, 50.0],
    weights=[0.5, 0.3, 0.2],
)


@dataclass(frozen=True)
class MseRow:
    n: int
    h: float
    bias_sq: float
    variance: float
    mse: float


@dataclass(frozen=True)
class MseReport:
    """Pointwise moments averaged over ``eval_points``.

    ``variance`` uses the unbiased (R - 1) divisor, so from the same draws

        mse = bias_sq + variance * (R - 1) / R

    holds up to rounding.
    """

    rows: tuple[MseRow, ...]
    replications: int
    eval_points: np.ndarray = field(repr=False)

    def decomposition_residual(self) -> float:
        R = self.replications
        return max(abs(r.mse - (r.bias_sq + r.variance * (R - 1) / R)) for r in self.rows)

    @property
    def n_values(self) -> list[int]:
        return [r.n for r in self.rows]

    @property
    def mse_values(self) -> list[float]:
        return [r.mse for r in self.rows]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            write_mse_csv(self, fh)


def write_mse_csv(report: MseReport, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["n", "bias_sq", "variance", "mse"])
    for r in report.rows:
        writer.writerow([r.n, format(r.bias_sq, ".17g"), format(r.variance, ".17g"), format(r.mse, ".17g")])


def empirical_mse(
    truth,
    s: float,
    N: int,
    n_list: Sequence[int],
    R: int,
    eval_points,
    seed: int,
    symbol_rule: Callable[[float], Symbol] | str = "g6",
    workers: int = 1,
) -> MseReport:
    """Monte Carlo bias, variance and MSE of the unrectified sphere estimator.

    For each n, R independent samples of size n are fitted with
    h = n^(-1/(2s + 2)) and evaluated at ``eval_points``.
    """
    if R < 2:
        raise ValueError("need at least 2 replications")
    pts = as_sphere_array(eval_points)
    if len(pts) == 0:
        raise ValueError("eval_points must be nonempty")
    symbol = symbol_for_smoothness(s, symbol_rule) if isinstance(symbol_rule, str) else symbol_rule(s)
    f_true = np.asarray(truth.pdf(pts), dtype=float)
    rows = []
    for i, n in enumerate(n_list):
        h = bandwidth(n, BandwidthPolicy(s, 2))
        size_seed = derive_seed(seed, i)
        draws = np.empty((R, len(pts)))

        def replicate(r: int):
            sample = truth.sample(n, derive_seed(size_seed, r))
            draws[r] = evaluate_many(fit(sample, symbol, h, N), pts)

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(replicate, range(R)))
        else:
            for r in range(R):
                replicate(r)
        mean = draws.mean(axis=0)
        bias = mean - f_true
        var = ((draws - mean) ** 2).sum(axis=0) / (R - 1)
        mse = ((draws - f_true) ** 2).mean(axis=0)
        rows.append(MseRow(int(n), h, float(np.mean(bias**2)), float(np.mean(var)), float(np.mean(mse))))
    return MseReport(tuple(rows), R, pts)


def rate_slope(report_or_pairs) -> float:
    """Least-squares slope of log(mse) against log(n)."""
    if isinstance(report_or_pairs, MseReport):
        n = np.asarray(report_or_pairs.n_values, dtype=float)
        mse = np.asarray(report_or_pairs.mse_values, dtype=float)
    else:
        n, mse = (np.asarray(v, dtype=float) for v in zip(*report_or_pairs))
    if len(n) < 3:
        raise ValueError("rate fit needs at least 3 sample sizes")
    x = np.log(n)
    y = np.log(mse)
    xc = x - x.mean()
    return float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))


def theoretical_slope(s: float, d: int = 2) -> float:
    return -2.0 * s / (2.0 * s + d)
