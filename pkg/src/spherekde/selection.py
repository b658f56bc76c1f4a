"""Hold-out selection of smoothness s and truncation order N by mean log-loss."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .estimator import DEFAULT_FLOOR, BandwidthPolicy, DensityEstimate, bandwidth, evaluate_many, fit, rectify
from .geometry import as_sphere_array
from .rng import SplitMix64
from .symbols import Symbol, symbol_for_smoothness

DEFAULT_S_GRID = (0.001, 0.01, 0.05, 0.5, 1.0)
DEFAULT_N_GRID = (5, 10, 20, 30, 40, 50, 75, 100)
TIE_TOL = 1e-9


@dataclass(frozen=True)
class SplitSpec:
    seed: int = 0
    test_fraction: float = 0.2

    def __post_init__(self):
        if not 0 < self.test_fraction < 1:
            raise ValueError(f"test_fraction must be in (0, 1), got {self.test_fraction!r}")


def holdout_size(n: int, fraction: float) -> int:
    """round(fraction * n), half up, kept within [1, n - 1]."""
    return min(n - 1, max(1, math.floor(fraction * n + 0.5)))


def shuffled_indices(n: int, seed: int) -> list[int]:
    """Fisher-Yates over range(n), swapping i with SplitMix64(seed).below(i + 1) for i = n-1..1."""
    rng = SplitMix64(seed)
    idx = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        idx[i], idx[j] = idx[j], idx[i]
    return idx


def split_indices(n: int, spec: SplitSpec) -> tuple[list[int], list[int]]:
    """Train and test indices; the test set is the first k shuffled indices.

    Both lists are returned in ascending order.
    """
    if n < 2:
        raise ValueError(f"need at least 2 points to split, got {n}")
    perm = shuffled_indices(n, spec.seed)
    k = holdout_size(n, spec.test_fraction)
    return sorted(perm[k:]), sorted(perm[:k])


def split(points, spec: SplitSpec):
    """Split a point list or ``(n, d)`` array into (train, test) of the same kind."""
    train_idx, test_idx = split_indices(len(points), spec)
    if isinstance(points, np.ndarray):
        return points[train_idx], points[test_idx]
    return [points[i] for i in train_idx], [points[i] for i in test_idx]


def log_loss(est: DensityEstimate, test, floor: float = DEFAULT_FLOOR, workers: int = 1) -> float:
    """Mean of -log(max(floor, f_hat(x))) over the test points."""
    if len(test) == 0:
        raise ValueError("log-loss needs a nonempty test set")
    values = rectify(evaluate_many(est, test, workers=workers), floor)
    return float(-np.mean(np.log(values)))


@dataclass(frozen=True)
class CvRow:
    s: float
    N: int
    mean_log_loss: float


@dataclass(frozen=True)
class CvResult:
    rows: tuple[CvRow, ...]
    selected: CvRow
    n_train: int
    n_test: int
    seed: int = 0
    floor: float = DEFAULT_FLOOR

    def loss(self, s: float, N: int) -> float:
        for row in self.rows:
            if row.s == s and row.N == N:
                return row.mean_log_loss
        raise KeyError((s, N))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            write_cv_csv(self, fh)

    def selected_record(self) -> str:
        sel = self.selected
        return (
            f"selected,s={_fmt_s(sel.s)},N={sel.N},mean_log_loss={sel.mean_log_loss:.17g},"
            f"n_train={self.n_train},n_test={self.n_test}"
        )


def _fmt_s(s: float) -> str:
    return repr(float(s))


def write_cv_csv(result: CvResult, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["s", "N", "mean_log_loss"])
    for row in result.rows:
        writer.writerow([_fmt_s(row.s), row.N, format(row.mean_log_loss, ".17g")])


def write_selected_csv(result: CvResult, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["s", "N", "mean_log_loss", "n_train", "n_test"])
    sel = result.selected
    writer.writerow([_fmt_s(sel.s), sel.N, format(sel.mean_log_loss, ".17g"), result.n_train, result.n_test])


def select_best(rows: Sequence[CvRow], tol: float = TIE_TOL) -> CvRow:
    """Lowest loss; losses within ``tol`` of the minimum tie, then smaller N, then larger s."""
    if not rows:
        raise ValueError("no grid cells to select from")
    best = min(r.mean_log_loss for r in rows)
    tied = [r for r in rows if r.mean_log_loss <= best + tol]
    return min(tied, key=lambda r: (r.N, -r.s))


def grid_search(
    points,
    s_grid: Sequence[float] = DEFAULT_S_GRID,
    N_grid: Sequence[int] = DEFAULT_N_GRID,
    spec: SplitSpec = SplitSpec(),
    symbol_rule: Callable[[float], Symbol] | str = "g6",
    floor: float = DEFAULT_FLOOR,
    workers: int = 1,
) -> CvResult:
    """Score every (s, N) on one shared train/test split.

    Each cell uses h = n_train^(-1/(2s + 2)) and the symbol ``symbol_rule(s)``.
    Cells run concurrently when ``workers > 1``; the table is always in
    s-major, N-minor grid order.
    """
    s_grid = [float(s) for s in s_grid]
    N_grid = [int(N) for N in N_grid]
    if not s_grid or not N_grid:
        raise ValueError("s_grid and N_grid must be nonempty")
    if isinstance(symbol_rule, str):
        rule_name = symbol_rule
        symbol_rule = lambda s: symbol_for_smoothness(s, rule_name)  # noqa: E731
    pts = as_sphere_array(points)
    train, test = split(pts, spec)
    cells = [(s, N) for s in s_grid for N in N_grid]

    def score(cell):
        s, N = cell
        h = bandwidth(len(train), BandwidthPolicy(s, 2))
        est = fit(train, symbol_rule(s), h, N)
        return CvRow(s, N, log_loss(est, test, floor))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(score, cells))
    else:
        rows = tuple(score(c) for c in cells)
    return CvResult(rows, select_best(rows), len(train), len(test), spec.seed, floor)


def read_cv_csv(path) -> list[CvRow]:
    with open(path, newline="") as fh:
        return [CvRow(float(r["s"]), int(r["N"]), float(r["mean_log_loss"])) for r in csv.DictReader(fh)]
