import math

import numpy as np
import pytest

from spherekde.geometry import gauss_legendre
from spherekde.poly import gegenbauer1_all, gegenbauer1_series, legendre_all, legendre_series

from oracles import P_TABLE

def test_legendre_examples():
    np.testing.assert_array_equal(legendre_all(1.0, 7), np.ones(8))
    np.testing.assert_allclose(legendre_all(0.5, 2), [1, 0.5, -0.125], atol=1e-16)
    np.testing.assert_array_equal(legendre_all(-1.0, 5), [1, -1, 1, -1, 1, -1])
    assert legendre_all(0.3, 0).tolist() == [1.0]


def test_legendre_matches_explicit_table():
    u = np.linspace(-1, 1, 1000)
    vals = legendre_all(u, 10)
    for nu, p in enumerate(P_TABLE):
        np.testing.assert_allclose(vals[nu], p(u), atol=1e-12, rtol=0)


def test_legendre_bounded_by_one():
    u = np.linspace(-1, 1, 2001)
    assert np.max(np.abs(legendre_all(u, 500))) <= 1.0 + 1e-12


def test_legendre_orthogonality_by_quadrature():
    x, w = gauss_legendre(64)
    P = legendre_all(x, 50)
    gram = (P * w) @ P.T
    expected = np.diag(2.0 / (2 * np.arange(51) + 1))
    np.testing.assert_allclose(gram, expected, atol=1e-10)


@pytest.mark.parametrize("bad", [1.0000001, -1.5, [0.2, 2.0]])
def test_rejects_outside_interval(bad):
    with pytest.raises(ValueError):
        legendre_all(bad, 3)
    with pytest.raises(ValueError):
        gegenbauer1_all(bad, 3)


def test_gegenbauer_examples():
    np.testing.assert_array_equal(gegenbauer1_all(1.0, 4), [1, 2, 3, 4, 5])
    np.testing.assert_array_equal(gegenbauer1_all(0.0, 4), [1, 0, -1, 0, 1])


def test_gegenbauer_chebyshev_u_identity_theta_07():
    theta = 0.7
    nu = np.arange(51)
    np.testing.assert_allclose(
        gegenbauer1_all(math.cos(theta), 50), np.sin((nu + 1) * theta) / math.sin(theta), atol=1e-10, rtol=0
    )


def test_gegenbauer_chebyshev_u_identity_grid():
    theta = np.linspace(0.01, math.pi - 0.01, 400)
    vals = gegenbauer1_all(np.cos(theta), 200)
    nu = np.arange(201)[:, None]
    np.testing.assert_allclose(vals, np.sin((nu + 1) * theta) / np.sin(theta), atol=1e-10, rtol=0)


@pytest.mark.parametrize("N", [0, 1, 5, 64, 65, 150])
def test_series_match_explicit_sum(N, rng):
    coeffs = rng.standard_normal(N + 1) / (1 + np.arange(N + 1))
    u = rng.uniform(-1, 1, size=(7, 11))
    np.testing.assert_allclose(legendre_series(coeffs, u), np.tensordot(coeffs, legendre_all(u, N), 1), atol=1e-12)
    np.testing.assert_allclose(gegenbauer1_series(coeffs, u), np.tensordot(coeffs, gegenbauer1_all(u, N), 1), atol=1e-11)
