"""Points on the sphere, the unit ball and R^d, distances, and quadrature.

Scalar point types are small frozen dataclasses that validate on
construction. Bulk work (fitting, grids, sampling) uses ``(n, 3)`` float
arrays; :func:`as_sphere_array` and :func:`as_ball_array` convert and
validate either representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

UNIT_TOL = 1e-12
BALL_EDGE_TOL = 1e-12


@dataclass(frozen=True)
class GeoCoord:
    """Latitude/longitude in degrees, treated as spherical (no ellipsoid)."""

    lat: float
    lon: float

    def __post_init__(self):
        for name, value, bound in (("lat", self.lat, 90.0), ("lon", self.lon, 180.0)):
            if not math.isfinite(value) or abs(value) > bound:
                raise ValueError(f"{name}={value!r} outside [-{bound:g}, {bound:g}]")


@dataclass(frozen=True)
class UnitVector3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if not abs(norm - 1.0) <= UNIT_TOL:
            raise ValueError(f"not a unit vector: |v| = {norm!r}")

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "UnitVector3":
        norm = math.sqrt(x * x + y * y + z * z)
        if norm == 0.0 or not math.isfinite(norm):
            raise ValueError("cannot normalize a zero or non-finite vector")
        return cls(x / norm, y / norm, z / norm)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __neg__(self) -> "UnitVector3":
        return UnitVector3(-self.x, -self.y, -self.z)


@dataclass(frozen=True)
class BallPoint:
    """A point strictly inside the unit ball of R^3.

    Points with norm >= 1 - 1e-12 are rejected: the ball measure
    (1 - |x|^2)^(-1/2) dx diverges at the boundary.
    """

    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if not norm < 1.0 - BALL_EDGE_TOL:
            raise ValueError(f"ball point must satisfy |x| < 1, got |x| = {norm!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class EuclidPoint:
    coords: tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if len(coords) < 1:
            raise ValueError("EuclidPoint needs at least one coordinate")
        if not all(math.isfinite(c) for c in coords):
            raise ValueError("EuclidPoint coordinates must be finite")
        object.__setattr__(self, "coords", coords)

    @property
    def d(self) -> int:
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        return np.array(self.coords)


def geo_to_unit(g: GeoCoord) -> UnitVector3:
    phi = math.radians(g.lat)
    lam = math.radians(g.lon)
    return UnitVector3.normalized(
        math.cos(phi) * math.cos(lam), math.cos(phi) * math.sin(lam), math.sin(phi)
    )


def geo_to_unit_array(lat, lon) -> np.ndarray:
    """Vectorized :func:`geo_to_unit` for degree arrays; returns ``(n, 3)``."""
    phi = np.radians(np.asarray(lat, dtype=float))
    lam = np.radians(np.asarray(lon, dtype=float))
    if np.any(np.abs(phi) > np.pi / 2) or np.any(np.abs(lam) > np.pi):
        raise ValueError("lat/lon outside [-90, 90] x [-180, 180]")
    xyz = np.stack(
        [np.cos(phi) * np.cos(lam), np.cos(phi) * np.sin(lam), np.sin(phi)], axis=-1
    )
    return xyz / np.linalg.norm(xyz, axis=-1, keepdims=True)


def unit_to_geo(v) -> GeoCoord:
    x, y, z = _xyz(v)
    lat = math.degrees(math.asin(max(-1.0, min(1.0, z))))
    lon = math.degrees(math.atan2(y, x))
    return GeoCoord(lat, lon)


def _xyz(v) -> tuple[float, float, float]:
    if isinstance(v, (UnitVector3, BallPoint)):
        return v.x, v.y, v.z
    x, y, z = (float(c) for c in v)
    return x, y, z


def _clamped_acos(c: float) -> float:
    return math.acos(max(-1.0, min(1.0, c)))


def angular_distance(a, b) -> float:
    ax, ay, az = _xyz(a)
    bx, by, bz = _xyz(b)
    return _clamped_acos(ax * bx + ay * by + az * bz)


def ball_distance(a, b) -> float:
    """Distance on B^3: arccos(<a,b> + sqrt(1-|a|^2) sqrt(1-|b|^2))."""
    ax, ay, az = _xyz(a)
    bx, by, bz = _xyz(b)
    lift = math.sqrt(1.0 - (ax * ax + ay * ay + az * az)) * math.sqrt(
        1.0 - (bx * bx + by * by + bz * bz)
    )
    return _clamped_acos(ax * bx + ay * by + az * bz + lift)


def as_sphere_array(points) -> np.ndarray:
    """Return ``points`` as a validated ``(n, 3)`` array of unit vectors.

    Accepts an array, a single point, or a sequence of ``UnitVector3``,
    ``GeoCoord`` or xyz triples.
    """
    if isinstance(points, (UnitVector3, GeoCoord)):
        points = [points]
    if isinstance(points, np.ndarray):
        arr = np.array(points, dtype=float, copy=True)
    else:
        arr = np.array([_xyz(geo_to_unit(p) if isinstance(p, GeoCoord) else p) for p in points], dtype=float)
        arr = arr.reshape(-1, 3)
    arr = np.atleast_2d(arr)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"expected an (n, 3) array of sphere points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sphere points must be finite")
    err = np.abs(np.sqrt(np.einsum("ij,ij->i", arr, arr)) - 1.0)
    if err.size and err.max() > UNIT_TOL:
        raise ValueError(f"sphere points must be unit vectors (max |norm - 1| = {err.max():.3g})")
    return arr


def as_ball_array(points) -> np.ndarray:
    if isinstance(points, BallPoint):
        points = [points]
    if isinstance(points, np.ndarray):
        arr = np.array(points, dtype=float, copy=True)
    else:
        arr = np.array([_xyz(p) for p in points], dtype=float).reshape(-1, 3)
    arr = np.atleast_2d(arr)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"expected an (n, 3) array of ball points, got shape {arr.shape}")
    norms = np.sqrt(np.einsum("ij,ij->i", arr, arr))
    if not np.all(np.isfinite(norms)) or (norms.size and norms.max() >= 1.0 - BALL_EDGE_TOL):
        raise ValueError("ball points must lie strictly inside the unit ball")
    return arr


def as_euclid_array(points, d: int | None = None) -> np.ndarray:
    if isinstance(points, EuclidPoint):
        points = [points]
    if isinstance(points, np.ndarray):
        arr = np.array(points, dtype=float, copy=True)
        if arr.ndim == 1:
            arr = arr[:, None] if d == 1 else arr[None, :]
    else:
        rows = [p.coords if isinstance(p, EuclidPoint) else tuple(np.atleast_1d(p)) for p in points]
        arr = np.array(rows, dtype=float)
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise ValueError(f"expected an (n, d) array of points, got shape {arr.shape}")
    if d is not None and arr.shape[1] != d:
        raise ValueError(f"dimension mismatch: expected d={d}, got d={arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("Euclidean points must be finite")
    return arr


def _legendre_and_derivative(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    if n == 1:
        p_prev = np.ones_like(x)
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def gauss_legendre(n: int, tol: float = 1e-15, max_iter: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes (ascending) and weights on [-1, 1].

    Roots of P_n by Newton iteration from cos(pi (i - 1/4) / (n + 1/2)).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(max_iter):
        p, dp = _legendre_and_derivative(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= tol:
            break
    _, dp = _legendre_and_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    return x[order], w[order]


@dataclass(frozen=True)
class SphereQuadrature:
    """Product quadrature on S^2: ``nodes`` is ``(M, 3)``, ``weights`` in steradians."""

    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    order: int

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        values = np.asarray(f(self.nodes), dtype=float)
        return float(np.dot(self.weights, values))

    def mean(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return self.integrate(f) / (4.0 * np.pi)


def sphere_quadrature(n_theta: int, n_phi: int) -> SphereQuadrature:
    """Gauss-Legendre in cos(theta) times uniform longitudes.

    Exact for polynomials of degree <= 2*n_theta - 1 in cos(theta) with
    longitudinal harmonic order < n_phi.
    """
    if n_theta < 1 or n_phi < 1:
        raise ValueError("n_theta and n_phi must be >= 1")
    z, wz = gauss_legendre(n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    rho = np.sqrt(1.0 - z * z)
    x = rho[:, None] * np.cos(phi)[None, :]
    y = rho[:, None] * np.sin(phi)[None, :]
    zz = np.broadcast_to(z[:, None], x.shape)
    nodes = np.stack([x.ravel(), y.ravel(), zz.ravel()], axis=1)
    weights = np.repeat(wz, n_phi) * (2.0 * np.pi / n_phi)
    return SphereQuadrature(nodes=nodes, weights=weights, order=2 * n_theta - 1)


@dataclass(frozen=True)
class BallQuadrature:
    """Quadrature on B^3 for the measure (1 - |x|^2)^(-1/2) dx.

    Weights already include the measure density; ``integrate`` sums
    ``w_i f(x_i)`` directly.
    """

    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.dot(self.weights, np.asarray(f(self.nodes), dtype=float)))


def ball_quadrature(n_radial: int, n_theta: int, n_phi: int) -> BallQuadrature:
    """Spherical-radial rule with radius r = sin(a), a in (0, pi/2).

    Under that substitution r^2 (1 - r^2)^(-1/2) dr = sin(a)^2 da, which
    is smooth, so Gauss-Legendre in ``a`` converges quickly.
    """
    t, wt = gauss_legendre(n_radial)
    a = (t + 1.0) * (np.pi / 4.0)
    wa = wt * (np.pi / 4.0)
    radii = np.sin(a)
    radial_w = wa * np.sin(a) ** 2
    sq = sphere_quadrature(n_theta, n_phi)
    nodes = (radii[:, None, None] * sq.nodes[None, :, :]).reshape(-1, 3)
    weights = (radial_w[:, None] * sq.weights[None, :]).ravel()
    return BallQuadrature(nodes=nodes, weights=weights)


def random_unit_vectors(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform unit vectors from a numpy Generator (test helper)."""
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def rotation_matrix(axis: Sequence[float], angle: float) -> np.ndarray:
    """Rodrigues rotation about ``axis`` by ``angle`` radians."""
    k = np.asarray(axis, dtype=float)
    k = k / np.linalg.norm(k)
    kx = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.eye(3) + math.sin(angle) * kx + (1.0 - math.cos(angle)) * (kx @ kx)
