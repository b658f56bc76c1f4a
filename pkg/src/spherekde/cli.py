"""Command-line entry point.

    spherekde ingest --input usgs.csv --output catalog.csv
    spherekde cv     --input catalog.csv --output cv.csv
    spherekde grid   --input catalog.csv --s 0.01 --N 75 --output field.csv --ppm field.ppm
    spherekde bound  --mode n --n 1507 --target 0.01
    spherekde rate   --truth vmf3 --s 1 --N 40 --output mse.csv

Every run prints its resolved configuration as one JSON line first. All
outputs are written to temporary files and renamed into place only after
the whole command succeeds.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import estimator, ingest, kernels, raster, selection, simulate
from .symbols import symbol_for_smoothness

EXIT_OK = 0
EXIT_FAILURE = 1


class _Outputs:
    """Collects output files as temporaries; commits them all or none."""

    def __init__(self):
        self._pending: list[tuple[str, Path]] = []

    def open(self, path, mode="w"):
        path = Path(path)
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
        os.close(fd)
        self._pending.append((tmp, path))
        return open(tmp, mode, newline="") if "b" not in mode else open(tmp, mode)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            for tmp, final in self._pending:
                os.replace(tmp, final)
        else:
            for tmp, _ in self._pending:
                try:
                    os.remove(tmp)
                except FileNotFoundError:
                    pass
        return False


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _years(text: str) -> tuple[int, int]:
    for sep in ("..", "-", ":"):
        if sep in text:
            a, b = text.split(sep, 1)
            return int(a), int(b)
    year = int(text)
    return year, year


def _print_config(args: argparse.Namespace) -> None:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    print("config " + json.dumps(cfg, sort_keys=True, default=str))


def _load_points(path) -> np.ndarray:
    cat = ingest.parse_catalog(path)
    return ingest.catalog_points(cat)


def _validate(args: argparse.Namespace) -> None:
    if getattr(args, "floor", 1.0) <= 0:
        raise ValueError("--floor must be positive")
    if getattr(args, "workers", 1) < 1:
        raise ValueError("--workers must be >= 1")
    if args.command == "cv":
        if not args.s_grid or not args.N_grid:
            raise ValueError("--s-grid and --N-grid must be nonempty")
        if any(s <= 0 for s in args.s_grid) or any(N < 0 for N in args.N_grid):
            raise ValueError("grid values must satisfy s > 0 and N >= 0")
    if args.command == "grid":
        if args.s <= 0 or args.N < 0:
            raise ValueError("--s must be positive and --N non-negative")
        if args.nlat < 2 or args.nlon < 2:
            raise ValueError("--nlat and --nlon must be >= 2")
    if args.command == "ingest" and args.years[0] > args.years[1]:
        raise ValueError("--years start is after end")
    if args.command == "bound":
        if any(N < kernels.MIN_BOUND_ORDER for N in args.N_grid):
            raise ValueError(f"bound is only valid for N >= {kernels.MIN_BOUND_ORDER}")
        if args.mode == "general" and (args.r <= 2 or args.h <= 0):
            raise ValueError("general bound needs r > 2 (tail sum must converge) and h > 0")
        if args.mode == "n":
            s_values = args.s_grid if args.s is None else [args.s]
            if any(not 0 < s <= 1 for s in s_values) or args.n < 1:
                raise ValueError("n-form bound uses r = 6 and needs s in (0, 1] and n >= 1")
        if args.target is not None and args.target <= 0:
            raise ValueError("--target must be positive")
    if args.command == "rate":
        if args.replications < 30:
            raise ValueError("--replications must be >= 30 for stable moment estimates")
        if len(args.n_list) < 3:
            raise ValueError("--n-list needs at least 3 sample sizes")
        if args.s <= 0 or args.N < 0 or args.eval_points < 1:
            raise ValueError("--s must be positive, --N non-negative, --eval-points >= 1")


def cmd_ingest(args) -> int:
    cat = ingest.parse_catalog(args.input)
    kept = ingest.filter_catalog(cat, args.min_mag, *args.years)
    with _Outputs() as out:
        with out.open(args.output) as fh:
            ingest.write_catalog(kept, fh)
    print(f"events {len(kept)}")
    print(f"skipped_rows {cat.skipped}")
    print(f"skipped_timestamps {kept.skipped}")
    return EXIT_OK


def cmd_cv(args) -> int:
    pts = _load_points(args.input)
    if len(pts) < 2:
        raise ValueError("cv needs a catalog with at least 2 events")
    result = selection.grid_search(
        pts,
        args.s_grid,
        args.N_grid,
        selection.SplitSpec(seed=args.seed, test_fraction=args.test_fraction),
        symbol_rule=args.symbol_rule,
        floor=args.floor,
        workers=args.workers,
    )
    selected_path = Path(args.output).with_suffix(".selected.csv")
    with _Outputs() as out:
        with out.open(args.output) as fh:
            selection.write_cv_csv(result, fh)
        with out.open(selected_path) as fh:
            selection.write_selected_csv(result, fh)
    for row in result.rows:
        print(f"s={row.s!r} N={row.N} mean_log_loss={row.mean_log_loss:.10f}")
    print(result.selected_record())
    return EXIT_OK


def cmd_grid(args) -> int:
    pts = _load_points(args.input)
    if len(pts) == 0:
        raise ValueError("grid needs a nonempty catalog")
    h = estimator.bandwidth(len(pts), estimator.BandwidthPolicy(args.s, 2))
    est = estimator.fit(pts, symbol_for_smoothness(args.s, args.symbol_rule), h, args.N)
    field = estimator.evaluate_grid(
        est, args.nlat, args.nlon, rectified=not args.raw, floor=args.floor, workers=args.workers
    )
    with _Outputs() as out:
        with out.open(args.output) as fh:
            estimator.write_field_csv(field, fh)
        if args.ppm:
            with out.open(args.ppm, "wb") as fh:
                fh.write(raster.ppm_bytes(field))
    lo, hi = estimator.log_density_range(field)
    print(f"n={len(pts)} h={h!r} cells={args.nlat * args.nlon} log_density_min={lo:.6f} log_density_max={hi:.6f}")
    return EXIT_OK


def cmd_bound(args) -> int:
    lines = []
    if args.mode == "general":
        for N in args.N_grid:
            lines.append(f"h={args.h!r} r={args.r!r} N={N} bound={kernels.truncation_error_bound(args.h, args.r, N):.10g}")
        if args.target is not None:
            N_min = kernels.min_order_for_bound(args.h, args.r, args.target)
            lines.append(f"h={args.h!r} r={args.r!r} target={args.target!r} min_N={N_min}")
    else:
        s_values = args.s_grid if args.s is None else [args.s]
        for s in s_values:
            for N in args.N_grid:
                lines.append(f"n={args.n} s={s!r} N={N} bound={kernels.truncation_error_bound_n(args.n, s, N):.10g}")
            if args.target is not None:
                N_min = kernels.min_order_for_bound_n(args.n, s, args.target)
                lines.append(f"n={args.n} s={s!r} target={args.target!r} min_N={N_min}")
    print("\n".join(lines))
    return EXIT_OK


def _truth(spec: str):
    if spec == "uniform":
        return simulate.UniformSphere()
    if spec == "vmf3":
        return simulate.SMOOTH_VMF3
    if spec == "vmf3-tight":
        return simulate.TIGHT_VMF3
    with open(spec) as fh:
        raw = json.load(fh)
    return simulate.VmfMixture.from_lists(
        [c["mu"] for c in raw["components"]],
        [c["kappa"] for c in raw["components"]],
        [c["weight"] for c in raw["components"]],
    )


def cmd_rate(args) -> int:
    truth = _truth(args.truth)
    eval_pts = simulate.sample_uniform_sphere(args.eval_points, args.seed ^ 0x5EED)
    report = simulate.empirical_mse(
        truth, args.s, args.N, args.n_list, args.replications, eval_pts, args.seed,
        symbol_rule=args.symbol_rule, workers=args.workers,
    )
    with _Outputs() as out:
        with out.open(args.output) as fh:
            simulate.write_mse_csv(report, fh)
    for row in report.rows:
        print(f"n={row.n} h={row.h:.6f} bias_sq={row.bias_sq:.6e} variance={row.variance:.6e} mse={row.mse:.6e}")
    print(f"slope={simulate.rate_slope(report):.6f} target={simulate.theoretical_slope(args.s, 2):.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spherekde", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add_workers(sp):
        sp.add_argument("--workers", type=int, default=1, help="threads for grid/cell evaluation")

    sp = sub.add_parser("ingest", help="parse and filter a USGS catalog CSV")
    sp.add_argument("--input", required=True)
    sp.add_argument("--output", required=True)
    sp.add_argument("--min-mag", type=float, default=6.5)
    sp.add_argument("--years", type=_years, default=(1990, 2021), help="e.g. 1990-2021 (inclusive)")
    sp.set_defaults(func=cmd_ingest)

    sp = sub.add_parser("cv", help="hold-out log-loss over an (s, N) grid")
    sp.add_argument("--input", required=True)
    sp.add_argument("--output", required=True)
    sp.add_argument("--s-grid", type=_float_list, default=list(selection.DEFAULT_S_GRID))
    sp.add_argument("--N-grid", type=_int_list, default=list(selection.DEFAULT_N_GRID))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--test-fraction", type=float, default=0.2)
    sp.add_argument("--floor", type=float, default=estimator.DEFAULT_FLOOR)
    sp.add_argument("--symbol-rule", choices=("g6", "strict"), default="g6")
    add_workers(sp)
    sp.set_defaults(func=cmd_cv)

    sp = sub.add_parser("grid", help="evaluate a fitted density on a lat/lon grid")
    sp.add_argument("--input", required=True)
    sp.add_argument("--output", required=True)
    sp.add_argument("--ppm", default=None, help="optional P6 raster output")
    sp.add_argument("--s", type=float, default=0.01)
    sp.add_argument("--N", type=int, default=75)
    sp.add_argument("--nlat", type=int, default=180)
    sp.add_argument("--nlon", type=int, default=360)
    sp.add_argument("--floor", type=float, default=estimator.DEFAULT_FLOOR)
    sp.add_argument("--raw", action="store_true", help="skip rectification")
    sp.add_argument("--symbol-rule", choices=("g6", "strict"), default="g6")
    add_workers(sp)
    sp.set_defaults(func=cmd_grid)

    sp = sub.add_parser("bound", help="truncation-error bounds for the sphere kernel")
    sp.add_argument("--mode", choices=("general", "n"), default="n")
    sp.add_argument("--h", type=float, default=None)
    sp.add_argument("--r", type=float, default=6.0)
    sp.add_argument("--n", type=int, default=1507)
    sp.add_argument("--s", type=float, default=None)
    sp.add_argument("--s-grid", type=_float_list, default=list(selection.DEFAULT_S_GRID))
    sp.add_argument("--N-grid", type=_int_list, default=[24, 25, 50, 75, 100, 150, 200])
    sp.add_argument("--target", type=float, default=None)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("rate", help="Monte Carlo MSE and log-log convergence slope")
    sp.add_argument("--truth", default="vmf3", help="uniform, vmf3, vmf3-tight, or a JSON mixture file")
    sp.add_argument("--output", required=True)
    sp.add_argument("--s", type=float, default=1.0)
    sp.add_argument("--N", type=int, default=40)
    sp.add_argument("--n-list", type=_int_list, default=[250, 500, 1000, 2000])
    sp.add_argument("--replications", type=int, default=50)
    sp.add_argument("--eval-points", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--symbol-rule", choices=("g6", "strict"), default="g6")
    add_workers(sp)
    sp.set_defaults(func=cmd_rate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "bound" and args.mode == "general" and args.h is None:
        parser.error("bound --mode general requires --h")
    try:
        _validate(args)
        _print_config(args)
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
