import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import sphere_kde_direct
from spherekde.estimator import (
    BandwidthPolicy,
    bandwidth,
    evaluate,
    evaluate_grid,
    evaluate_many,
    fit,
    grid_centers,
    log_density_range,
    rectify,
    write_field_csv,
)
from spherekde.geometry import GeoCoord, geo_to_unit_array, random_unit_vectors, rotation_matrix
from spherekde.simulate import TIGHT_VMF3
from spherekde.symbols import g_sigma, gauss_symbol

G6 = g_sigma(6)


def _g6(lam):
    return 1.0 / (1.0 + lam**6)


class TestBandwidth:
    def test_reference(self):
        # 1024^(-1/4)
        assert bandwidth(1024, BandwidthPolicy(1.0, 2)) == pytest.approx(0.17677669529663688, rel=1e-15)

    def test_n1(self):
        assert bandwidth(1, BandwidthPolicy(0.3, 2)) == 1.0

    @settings(max_examples=50)
    @given(st.floats(0.001, 5.0), st.integers(1, 10**6), st.integers(1, 10**6))
    def test_monotone_in_n(self, s, a, b):
        lo, hi = sorted((a, b))
        p = BandwidthPolicy(s, 2)
        assert bandwidth(hi, p) <= bandwidth(lo, p)

    @pytest.mark.parametrize("s, d", [(0.0, 2), (-1.0, 2), (1.0, 0)])
    def test_rejects_policy(self, s, d):
        with pytest.raises(ValueError):
            BandwidthPolicy(s, d)

    def test_rejects_n(self):
        with pytest.raises(ValueError):
            bandwidth(0, BandwidthPolicy(1.0, 2))


class TestRectify:
    def test_examples(self):
        assert rectify(-0.2) == 1e-3
        assert rectify(0.0) == 1e-3
        assert rectify(0.5) == 0.5
        np.testing.assert_array_equal(rectify(np.array([-1.0, 2e-3]), 1e-2), [1e-2, 1e-2])

    def test_rejects_floor(self):
        with pytest.raises(ValueError):
            rectify(1.0, 0.0)


class TestFit:
    def test_single_point_n0_is_uniform(self):
        est = fit([GeoCoord(10, 20)], G6, 0.5, 0)
        x = geo_to_unit_array(np.array([-70.0, 0.0, 45.0]), np.array([100.0, 0.0, -30.0]))
        np.testing.assert_allclose(evaluate_many(est, x), 1 / (4 * math.pi), rtol=1e-15)

    def test_empty_sample(self):
        with pytest.raises(ValueError, match="empty"):
            fit([], G6, 0.5, 3)

    def test_accepts_geo_and_vectors(self):
        pts = [GeoCoord(0, 0), GeoCoord(45, 90)]
        a = fit(pts, G6, 0.3, 10)
        b = fit(geo_to_unit_array(np.array([0.0, 45.0]), np.array([0.0, 90.0])), G6, 0.3, 10)
        np.testing.assert_array_equal(a.points, b.points)

    def test_points_immutable(self, rng):
        est = fit(random_unit_vectors(5, rng), G6, 0.3, 4)
        with pytest.raises(ValueError):
            est.points[0, 0] = 0.0

    def test_unknown_domain(self):
        with pytest.raises(ValueError):
            fit([[0.0, 0.0, 1.0]], G6, 0.3, 4, domain="torus")


class TestSphereEstimate:
    def test_matches_double_loop(self, rng):
        sample = random_unit_vectors(5, rng)
        queries = random_unit_vectors(20, rng)
        est = fit(sample, G6, 0.4, 8)
        got = evaluate_many(est, queries)
        for q, v in zip(queries, got):
            assert v == pytest.approx(sphere_kde_direct(_g6, 0.4, 8, sample, q), abs=1e-12)

    def test_single_point_evaluate(self, rng):
        sample = random_unit_vectors(5, rng)
        est = fit(sample, G6, 0.4, 8)
        q = random_unit_vectors(1, rng)[0]
        assert evaluate(est, q) == evaluate_many(est, q[None])[0]
        assert evaluate(est, GeoCoord(12.0, 34.0)) == pytest.approx(
            evaluate_many(est, geo_to_unit_array(np.array([12.0]), np.array([34.0])))[0], abs=1e-15
        )

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_permutation_invariance_bitwise(self, seed):
        r = np.random.default_rng(seed)
        sample = random_unit_vectors(int(r.integers(1, 60)), r)
        queries = random_unit_vectors(15, r)
        a = evaluate_many(fit(sample, G6, 0.2, 40), queries)
        b = evaluate_many(fit(sample[r.permutation(len(sample))], G6, 0.2, 40), queries)
        np.testing.assert_array_equal(a, b)

    def test_duplicates_equal_weighting(self, rng):
        a, b = random_unit_vectors(2, rng)
        q = random_unit_vectors(10, rng)
        lhs = evaluate_many(fit(np.array([a, a, b]), G6, 0.3, 20), q)
        ka = evaluate_many(fit(a[None], G6, 0.3, 20), q)
        kb = evaluate_many(fit(b[None], G6, 0.3, 20), q)
        np.testing.assert_allclose(lhs, (2 * ka + kb) / 3, atol=1e-12)

    @pytest.mark.parametrize("N", [0, 10, 60])
    def test_integrates_to_one(self, quad, rng, N):
        est = fit(random_unit_vectors(40, rng), G6, 0.2, N)
        assert quad.mean(lambda y: evaluate_many(est, y)) == pytest.approx(1 / (4 * math.pi), abs=1e-10)

    def test_rotation_equivariance(self, rng):
        sample = random_unit_vectors(30, rng)
        q = random_unit_vectors(25, rng)
        R = rotation_matrix(np.array([0.3, -1.0, 0.4]), 0.77)
        a = evaluate_many(fit(sample, G6, 0.2, 30), q)
        b = evaluate_many(fit(sample @ R.T, G6, 0.2, 30), q @ R.T)
        np.testing.assert_allclose(a, b, atol=1e-11)

    def test_workers_bitwise(self, rng):
        est = fit(TIGHT_VMF3.sample(300, 5), G6, 0.1, 50)
        q = random_unit_vectors(2000, rng)
        ref = evaluate_many(est, q, workers=1)
        for w in (2, 4, 8):
            np.testing.assert_array_equal(evaluate_many(est, q, workers=w), ref)

    def test_empty_queries(self, rng):
        est = fit(random_unit_vectors(3, rng), G6, 0.3, 5)
        assert evaluate_many(est, np.empty((0, 3))).shape == (0,)


class TestGrid:
    def test_centers(self):
        lat, lon = grid_centers(180, 360)
        assert (lat[0], lat[-1], lon[0], lon[-1]) == (-89.5, 89.5, -179.5, 179.5)

    def test_n0_grid_is_uniform(self, rng):
        est = fit(random_unit_vectors(7, rng), G6, 0.3, 0)
        field = evaluate_grid(est, 4, 8)
        np.testing.assert_allclose(field.density, 1 / (4 * math.pi), rtol=1e-14)
        assert log_density_range(field)[0] == pytest.approx(-math.log(4 * math.pi), rel=1e-14)

    def test_longitude_rotation(self):
        # shifting every sample by one cell width in longitude shifts the grid by one column
        n_lon = 24
        r = np.random.default_rng(3)
        lat = r.uniform(-80, 80, 20)
        lon = r.uniform(-180, 180, 20)
        a = evaluate_grid(fit(geo_to_unit_array(lat, lon), G6, 0.3, 20), 12, n_lon, rectified=False)
        b = evaluate_grid(fit(geo_to_unit_array(lat, (lon + 360 / n_lon + 180) % 360 - 180), G6, 0.3, 20), 12, n_lon, rectified=False)
        np.testing.assert_allclose(np.roll(a.density, 1, axis=1), b.density, atol=1e-12)

    def test_rectified_minimum(self):
        est = fit(TIGHT_VMF3.sample(200, 2), G6, 0.05, 75)
        raw = evaluate_grid(est, 30, 60, rectified=False)
        assert raw.density.min() < 0  # truncated series do go negative here
        field = evaluate_grid(est, 30, 60)
        assert field.density.min() >= 1e-3
        assert np.all(np.isfinite(field.log_density))

    def test_raw_log_of_negative_is_nan(self):
        est = fit(TIGHT_VMF3.sample(200, 2), G6, 0.05, 75)
        raw = evaluate_grid(est, 30, 60, rectified=False)
        neg = raw.density <= 0
        assert np.all(~np.isfinite(raw.log_density[neg]))

    def test_too_small(self, rng):
        est = fit(random_unit_vectors(3, rng), G6, 0.3, 5)
        with pytest.raises(ValueError):
            evaluate_grid(est, 1, 10)

    def test_csv(self, rng):
        est = fit(random_unit_vectors(3, rng), G6, 0.3, 5)
        field = evaluate_grid(est, 2, 3)
        buf = io.StringIO()
        write_field_csv(field, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "lat,lon,density,log_density"
        assert len(lines) == 7
        lat, lon, d, ld = (float(v) for v in lines[1].split(","))
        assert (lat, lon) == (-45.0, -120.0)
        assert d == field.density[0, 0] and ld == field.log_density[0, 0]


class TestOtherDomains:
    def test_ball_n0(self, rng):
        pts = rng.uniform(-0.5, 0.5, size=(10, 3))
        est = fit(pts, G6, 0.3, 0, domain="ball")
        np.testing.assert_allclose(evaluate_many(est, pts[:3]), 1 / math.pi**2, rtol=1e-14)

    def test_ball_rejects_outside(self):
        with pytest.raises(ValueError):
            fit([[1.0, 0.0, 0.0]], G6, 0.3, 2, domain="ball")

    def test_euclid_matches_kernel(self):
        est = fit([[0.0, 0.0], [2.0, 0.0]], gauss_symbol(), 1.0, domain="euclid")
        v = evaluate(est, np.array([[0.0, 0.0]]))
        assert v == pytest.approx((1 + math.exp(-1)) / (2 * 4 * math.pi), rel=1e-14)

    def test_euclid_dimension_check(self):
        est = fit([[0.0, 0.0]], gauss_symbol(), 1.0, domain="euclid")
        with pytest.raises(ValueError):
            evaluate_many(est, np.zeros((2, 3)))
