"""Binary PPM (P6) export of a density field on a natural-log gray scale."""

from __future__ import annotations

import numpy as np

from .estimator import DensityField


def gray_levels(field: DensityField) -> np.ndarray:
    """uint8 image of shape ``(n_lat, n_lon)`` with row 0 the northernmost band.

    Levels are round(255 (L - min L) / (max L - min L)) over the finite
    log-densities, rounding half up. A constant field is mid-gray 128 and
    non-finite logs (unrectified, non-positive cells) are black.
    """
    logd = field.log_density[::-1, :]
    finite = np.isfinite(logd)
    out = np.zeros(logd.shape, dtype=np.uint8)
    if not finite.any():
        return out
    lo = logd[finite].min()
    hi = logd[finite].max()
    if hi == lo:
        out[finite] = 128
        return out
    scaled = np.floor(255.0 * (logd[finite] - lo) / (hi - lo) + 0.5)
    out[finite] = np.clip(scaled, 0, 255).astype(np.uint8)
    return out


def ppm_bytes(field: DensityField) -> bytes:
    gray = gray_levels(field)
    height, width = gray.shape
    rgb = np.repeat(gray[:, :, None], 3, axis=2)
    return f"P6\n{width} {height}\n255\n".encode("ascii") + rgb.tobytes()


def write_ppm(field: DensityField, path) -> None:
    with open(path, "wb") as fh:
        fh.write(ppm_bytes(field))


def read_ppm(path) -> np.ndarray:
    """Read a P6 file written by :func:`write_ppm`; returns ``(height, width, 3)`` uint8."""
    data = open(path, "rb").read()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P6":
        raise ValueError("not a binary PPM (P6) file")
    width, height = (int(v) for v in parts[1].split())
    if int(parts[2]) != 255:
        raise ValueError("only 8-bit PPM files are supported")
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(height, width, 3)
