import numpy as np
import pytest

from resideq.limiter import LimiterConfig, indicator_scalar, indicator_system, phi


CFG = LimiterConfig(alpha=2.0)


def test_phi_branch_values():
    assert phi(1.0, CFG) == 1.0
    assert phi(0.0, CFG) == 0.0
    assert phi(-3.0, CFG) == 0.0


def test_phi_alpha2_values():
    assert phi(0.5, CFG) == pytest.approx(0.25, abs=0)
    assert phi(2.0, CFG) == pytest.approx(0.25, abs=0)


def test_phi_bound_sweep():
    rng = np.random.default_rng(0)
    r = rng.uniform(1e-12, 100.0, size=10_000)
    vals = phi(r, CFG)
    assert np.all(vals >= 0.0)
    assert np.all(vals <= np.minimum(1.0, r))


def test_phi_tvd_bound_all_finite_r():
    rng = np.random.default_rng(1)
    r = np.concatenate([rng.uniform(-50, 50, 5000),
                        rng.uniform(0, 1e-6, 100), [0.0, 1.0]])
    vals = phi(r, CFG)
    assert np.all((vals >= 0.0) & (vals <= 1.0))
    pos = r > 0
    assert np.all(vals[pos] / r[pos] <= 1.0 + 1e-15)


def test_phi_monotone_approach():
    up = np.linspace(1e-6, 1.0, 500)
    vals = phi(up, CFG)
    assert np.all(np.diff(vals) >= 0)
    down = np.linspace(1.0, 50.0, 500)
    vals = phi(down, CFG)
    assert np.all(np.diff(vals) <= 0)


def test_phi_far_from_equilibrium_decay():
    assert phi(1e6, CFG) <= 1e-12


def test_limiter_config_validation():
    with pytest.raises(ValueError):
        LimiterConfig(alpha=1.0)
    with pytest.raises(ValueError):
        LimiterConfig(epsilon=0.0)


def test_indicator_scalar_degenerate_rules():
    assert indicator_scalar(0.0, 0.0, CFG) == 1.0
    assert phi(indicator_scalar(0.0, 0.0, CFG), CFG) == 1.0
    assert indicator_scalar(0.7, 0.7, CFG) == 1.0
    r = indicator_scalar(1.0, 1e-20, CFG, scale=1.0)
    assert r >= 1e13
    assert phi(r, CFG) < 1e-12


def test_indicator_scalar_plain_ratio():
    assert indicator_scalar(3.0, 1.5, CFG) == 2.0
    assert indicator_scalar(-3.0, 1.5, CFG) == -2.0


def test_indicator_system_cases():
    z = np.zeros(2)
    assert indicator_system(z, z, CFG) == 1.0
    d = np.array([0.4, -0.3])
    assert indicator_system(d, d, CFG) == 1.0
    assert indicator_system(2.0 * d, d, CFG) == pytest.approx(2.0, rel=1e-15)
    r = indicator_system(np.array([1.0, 0.0]), z, CFG, scale=1.0)
    assert r >= 1e13
