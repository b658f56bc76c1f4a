"""USGS-style earthquake catalog CSV reading, filtering and writing."""

from __future__ import annotations

import csv
import logging
import math
import re
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .geometry import GeoCoord, geo_to_unit_array

log = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("time", "latitude", "longitude", "mag")
_YEAR = re.compile(r"^(\d{4})")


class CatalogFormatError(ValueError):
    """Header-level problem: the file cannot be read as a catalog."""


@dataclass(frozen=True)
class Event:
    time: str
    geo: GeoCoord
    mag: float
    depth_km: float | None = None


@dataclass(frozen=True)
class Catalog:
    events: tuple[Event, ...]
    source_path: str = ""
    skipped: int = 0

    def __len__(self) -> int:
        return len(self.events)


def _float_or_none(text: str | None) -> float | None:
    if text is None:
        return None
    text = text.strip()
    if not text:
        return None
    try:
        value = float(text)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def parse_catalog(path) -> Catalog:
    """Read a comma-separated catalog with a header row.

    Column names are matched case-insensitively; ``time``, ``latitude``,
    ``longitude`` and ``mag`` are required and ``depth`` is optional.
    Data rows with a missing, non-numeric or out-of-range latitude,
    longitude or magnitude are skipped and counted.
    """
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8-sig")
    except OSError as exc:
        raise CatalogFormatError(f"cannot read catalog {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CatalogFormatError(f"{path}: empty file (no header row)")
        cols = {name.strip().lower(): i for i, name in enumerate(header)}
        for name in REQUIRED_COLUMNS:
            if name not in cols:
                raise CatalogFormatError(f"{path}: missing required column '{name}'")
        depth_col = cols.get("depth")
        events = []
        skipped = 0
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue

            def cell(name_or_idx):
                idx = cols[name_or_idx] if isinstance(name_or_idx, str) else name_or_idx
                return row[idx] if idx < len(row) else None

            lat = _float_or_none(cell("latitude"))
            lon = _float_or_none(cell("longitude"))
            mag = _float_or_none(cell("mag"))
            if lat is None or lon is None or mag is None:
                skipped += 1
                continue
            try:
                geo = GeoCoord(lat, lon)
            except ValueError:
                skipped += 1
                continue
            depth = _float_or_none(cell(depth_col)) if depth_col is not None else None
            events.append(Event((cell("time") or "").strip(), geo, mag, depth))
    if skipped:
        log.info("%s: skipped %d malformed rows", path, skipped)
    return Catalog(tuple(events), str(path), skipped)


def event_year(event: Event) -> int | None:
    m = _YEAR.match(event.time)
    return int(m.group(1)) if m else None


def filter_catalog(c: Catalog, min_mag: float = 6.5, start_year: int = 1990, end_year: int = 2021) -> Catalog:
    """Keep events with mag >= min_mag and start_year <= year <= end_year.

    Events whose timestamp has no leading 4-digit year are dropped and
    counted in ``skipped``.
    """
    if start_year > end_year:
        raise ValueError(f"start_year {start_year} is after end_year {end_year}")
    kept = []
    bad_time = 0
    for ev in c.events:
        year = event_year(ev)
        if year is None:
            bad_time += 1
            continue
        if ev.mag >= min_mag and start_year <= year <= end_year:
            kept.append(ev)
    return replace(c, events=tuple(kept), skipped=bad_time)


def catalog_points(c: Catalog) -> np.ndarray:
    """Unit vectors of the event epicentres, in catalog order; shape ``(n, 3)``."""
    if not c.events:
        return np.empty((0, 3))
    lat = [ev.geo.lat for ev in c.events]
    lon = [ev.geo.lon for ev in c.events]
    return geo_to_unit_array(lat, lon)


def write_catalog(c: Catalog, fh) -> None:
    """Normalized form: ``time,latitude,longitude,mag`` with round-trip float text."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["time", "latitude", "longitude", "mag"])
    for ev in c.events:
        writer.writerow([ev.time, repr(ev.geo.lat), repr(ev.geo.lon), repr(ev.mag)])


def save_catalog(c: Catalog, path) -> None:
    with open(path, "w", newline="") as fh:
        write_catalog(c, fh)
