import math

import numpy as np
import pytest

from spherekde.symbols import (
    g_sigma,
    gauss_symbol,
    sigma_for_smoothness,
    strict_ceil,
    symbol_by_name,
    symbol_for_smoothness,
)


def test_g_sigma_values():
    assert g_sigma(6).eval(0) == 1.0
    assert g_sigma(6).eval(1) == 0.5
    assert g_sigma(2).eval(3) == pytest.approx(0.1, abs=1e-16)
    g = g_sigma(6)
    assert (g.decay_order, g.smoothness_order, g.name) == (6, 5, "g6")


@pytest.mark.parametrize("sigma", [1, 0, -3, 2.5])
def test_g_sigma_rejects_invalid(sigma):
    with pytest.raises(ValueError):
        g_sigma(sigma)


@pytest.mark.parametrize("sym", [g_sigma(2), g_sigma(6), g_sigma(9), gauss_symbol()])
def test_symbols_are_one_at_zero_and_bounded(sym):
    assert sym.eval(0.0) == 1.0
    lam = np.logspace(-4, 4, 500)
    vals = sym(lam)
    assert np.all(np.abs(vals) <= 1.0)


@pytest.mark.parametrize("sigma", [2, 3, 6, 7, 10])
def test_g_sigma_below_power_decay_and_monotone(sigma):
    # beyond lambda^sigma ~ 1e16, 1 + lambda^sigma rounds to lambda^sigma
    lam = np.logspace(-3, 12.0 / sigma, 2000)
    vals = g_sigma(sigma)(lam)
    assert np.all(vals > 0) and np.all(vals <= 1)
    assert np.all(vals < lam ** (-float(sigma)))
    assert np.all(np.diff(vals) <= 0)
    resolvable = lam[1:] ** sigma > 1e-12
    assert np.all(np.diff(vals)[resolvable] < 0)


def test_gauss_symbol():
    assert gauss_symbol().eval(math.sqrt(2)) == pytest.approx(math.exp(-2), rel=1e-15)


@pytest.mark.parametrize("s, sigma", [(0.01, 6), (0.5, 6), (1, 7), (2.5, 8), (3, 9)])
def test_sigma_for_smoothness(s, sigma):
    assert sigma_for_smoothness(s) == sigma


def test_strict_ceil():
    assert [strict_ceil(v) for v in (0.0, 0.2, 1.0, 1.5, 2.0)] == [1, 1, 2, 2, 3]


def test_sigma_for_smoothness_rejects_nonpositive():
    with pytest.raises(ValueError):
        sigma_for_smoothness(0)


def test_symbol_rules():
    assert symbol_for_smoothness(1.0).name == "g6"
    assert symbol_for_smoothness(0.001).name == "g6"
    assert symbol_for_smoothness(1.0, "strict").name == "g7"
    assert symbol_for_smoothness(1.5).name == "g7"
    with pytest.raises(ValueError):
        symbol_for_smoothness(1.0, "nope")


def test_symbol_by_name():
    assert symbol_by_name("gauss").name == "gauss"
    assert symbol_by_name("g8").decay_order == 8
    with pytest.raises(ValueError):
        symbol_by_name("cauchy")
