"""Kernel density estimates on S^2, B^3 and R^d.

    f_hat(x) = (1/n) sum_i K_h(X_i, x)

Training points are stored in lexicographic order and summed in that
order with compensated summation, so evaluations do not depend on how the
sample was ordered. Query points are processed in fixed-size chunks that
may run on a thread pool; each chunk writes its own slice, so results are
identical for any worker count.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .geometry import GeoCoord, as_ball_array, as_euclid_array, as_sphere_array, geo_to_unit_array
from .kernels import (
    TruncatedKernel,
    ball_arguments,
    ball_kernel_from_arguments,
    build_ball_kernel,
    build_euclid_kernel,
    build_sphere_kernel,
    gauss_kernel_from_sqdist,
    sphere_kernel_from_inner,
)
from .symbols import Symbol

DEFAULT_FLOOR = 1e-3
# kernel-matrix elements per chunk (cache-sized); boundaries never depend on worker count
CHUNK_ELEMENTS = 1 << 15
# training rows summed plainly before compensated accumulation across blocks
ROW_BLOCK = 16


@dataclass(frozen=True)
class BandwidthPolicy:
    s: float
    d: int

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"smoothness s must be positive, got {self.s!r}")
        if self.d < 1:
            raise ValueError(f"dimension d must be >= 1, got {self.d!r}")


def bandwidth(n: int, policy: BandwidthPolicy) -> float:
    """h = n^(-1/(2s + d))."""
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n!r}")
    return float(n) ** (-1.0 / (2.0 * policy.s + policy.d))


def rectify(value, floor: float = DEFAULT_FLOOR):
    """max(floor, value); no renormalization afterwards."""
    if not floor > 0:
        raise ValueError(f"rectification floor must be positive, got {floor!r}")
    if np.ndim(value) == 0:
        return max(floor, float(value))
    return np.maximum(floor, value)


@dataclass(frozen=True)
class DensityEstimate:
    kernel: TruncatedKernel
    points: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def domain(self) -> str:
        return self.kernel.domain


def _canonical_order(points: np.ndarray) -> np.ndarray:
    order = np.lexsort(points.T[::-1])
    out = np.ascontiguousarray(points[order])
    out.setflags(write=False)
    return out


def fit(points, symbol: Symbol, h: float, N: int = 0, domain: str = "sphere") -> DensityEstimate:
    """Build the kernel and store the sample; nothing is precomputed over pairs.

    For ``domain="euclid"`` the symbol must be Gaussian and ``N`` is ignored.
    """
    if len(points) == 0:
        raise ValueError("cannot fit a density estimate to an empty sample")
    if domain == "sphere":
        arr = as_sphere_array(points)
        kernel = build_sphere_kernel(symbol, h, N)
    elif domain == "ball":
        arr = as_ball_array(points)
        kernel = build_ball_kernel(symbol, h, N)
    elif domain == "euclid":
        arr = as_euclid_array(points)
        kernel = build_euclid_kernel(symbol, h, arr.shape[1])
    else:
        raise ValueError(f"unknown domain {domain!r}")
    return DensityEstimate(kernel=kernel, points=_canonical_order(arr))


def _kernel_matrix(est: DensityEstimate, queries: np.ndarray) -> np.ndarray:
    """Kernel values with shape ``(n_train, n_queries)``."""
    X = est.points
    if est.domain == "sphere":
        t = X[:, 0:1] * queries[None, :, 0] + X[:, 1:2] * queries[None, :, 1] + X[:, 2:3] * queries[None, :, 2]
        return sphere_kernel_from_inner(est.kernel, t)
    if est.domain == "ball":
        return ball_kernel_from_arguments(est.kernel, *ball_arguments(X[:, None, :], queries[None, :, :]))
    sq = np.zeros((len(X), len(queries)))
    for j in range(X.shape[1]):
        sq += (X[:, j : j + 1] - queries[None, :, j]) ** 2
    return gauss_kernel_from_sqdist(est.kernel.h, X.shape[1], sq)


def _compensated_row_mean(values: np.ndarray) -> np.ndarray:
    """Column-wise mean over rows in row order.

    Rows are added plainly within blocks of ``ROW_BLOCK`` and the block
    sums are Kahan-accumulated, keeping the error near ROW_BLOCK * eps
    regardless of sample size.
    """
    n = len(values)
    pad = (-n) % ROW_BLOCK
    if pad:
        values = np.concatenate([values, np.zeros((pad, values.shape[1]))])
    blocks = values.reshape(-1, ROW_BLOCK, values.shape[1]).sum(axis=1)
    total = blocks[0].copy()
    comp = np.zeros_like(total)
    for row in blocks[1:]:
        y = row - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total / n


def _evaluate_chunk(est: DensityEstimate, queries: np.ndarray) -> np.ndarray:
    return _compensated_row_mean(_kernel_matrix(est, queries))


def _validate_queries(est: DensityEstimate, x) -> np.ndarray:
    if est.domain == "sphere":
        return as_sphere_array(x)
    if est.domain == "ball":
        return as_ball_array(x)
    return as_euclid_array(x, d=est.points.shape[1])


def evaluate_many(est: DensityEstimate, queries, workers: int = 1) -> np.ndarray:
    """Unrectified estimate at each query point; may be negative."""
    q = _validate_queries(est, queries)
    out = np.empty(len(q))
    if len(q) == 0:
        return out
    rows = max(1, CHUNK_ELEMENTS // max(1, est.n))
    bounds = [(a, min(a + rows, len(q))) for a in range(0, len(q), rows)]

    def run(span):
        a, b = span
        out[a:b] = _evaluate_chunk(est, q[a:b])

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, bounds))
    else:
        for span in bounds:
            run(span)
    return out


def evaluate(est: DensityEstimate, x) -> float:
    """Unrectified estimate at one point of the estimate's domain."""
    values = evaluate_many(est, [x] if not isinstance(x, np.ndarray) else x)
    if len(values) != 1:
        raise ValueError("evaluate takes a single point; use evaluate_many for batches")
    return float(values[0])


@dataclass(frozen=True)
class DensityField:
    """Densities on a cell-centred lat/lon grid, latitude-major from the south.

    ``density`` and ``log_density`` have shape ``(n_lat, n_lon)``. Without
    rectification, non-positive densities get a NaN or -inf log.
    """

    lat: np.ndarray = field(repr=False)
    lon: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)
    log_density: np.ndarray = field(repr=False)
    rectified: bool = True
    floor: float = DEFAULT_FLOOR

    @property
    def shape(self) -> tuple[int, int]:
        return self.density.shape

    def cell(self, i: int, j: int) -> tuple[GeoCoord, float, float]:
        return GeoCoord(float(self.lat[i]), float(self.lon[j])), float(self.density[i, j]), float(self.log_density[i, j])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            write_field_csv(self, fh)


def write_field_csv(field_: DensityField, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["lat", "lon", "density", "log_density"])
    for i, la in enumerate(field_.lat):
        for j, lo in enumerate(field_.lon):
            writer.writerow([_fmt(la), _fmt(lo), _fmt(field_.density[i, j]), _fmt(field_.log_density[i, j])])


def _fmt(x) -> str:
    return format(float(x), ".17g")


def grid_centers(n_lat: int, n_lon: int) -> tuple[np.ndarray, np.ndarray]:
    lat = -90.0 + (np.arange(n_lat) + 0.5) * (180.0 / n_lat)
    lon = -180.0 + (np.arange(n_lon) + 0.5) * (360.0 / n_lon)
    return lat, lon


def evaluate_grid(
    est: DensityEstimate,
    n_lat: int,
    n_lon: int,
    rectified: bool = True,
    floor: float = DEFAULT_FLOOR,
    workers: int = 1,
) -> DensityField:
    if est.domain != "sphere":
        raise ValueError("grid evaluation is defined for sphere estimates only")
    if n_lat < 2 or n_lon < 2:
        raise ValueError("grid needs n_lat >= 2 and n_lon >= 2")
    lat, lon = grid_centers(n_lat, n_lon)
    lat2, lon2 = np.meshgrid(lat, lon, indexing="ij")
    xyz = geo_to_unit_array(lat2.ravel(), lon2.ravel())
    dens = evaluate_many(est, xyz, workers=workers).reshape(n_lat, n_lon)
    if rectified:
        dens = rectify(dens, floor)
    with np.errstate(invalid="ignore", divide="ignore"):
        logd = np.log(dens)
    return DensityField(lat=lat, lon=lon, density=dens, log_density=logd, rectified=rectified, floor=floor)


def log_density_range(field_: DensityField) -> tuple[float, float]:
    finite = field_.log_density[np.isfinite(field_.log_density)]
    if finite.size == 0:
        return math.nan, math.nan
    return float(finite.min()), float(finite.max())
