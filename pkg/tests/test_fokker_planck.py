import numpy as np
import pytest

from resideq.fokker_planck import (FPParams, bgk_operator, fp_central,
                                   fp_chang_cooper, fp_upwind, maxwellian,
                                   moments, _cc_delta)
from resideq.mesh import Field, make_grid_1d


@pytest.fixture(scope="module")
def params100():
    return FPParams(0.0, 1.0, make_grid_1d(100, -5, 5))


def dense_matrix(params, scheme):
    """Independent dense assembly of the flux stencils, scalar loops only."""
    g = params.grid
    n, dx, T, u_mean = g.n_cells, g.dx, params.T, params.u_mean
    A = np.zeros((n, n))
    for e in range(1, n):                       # interior edges
        v_e = g.x_min + e * dx
        c = u_mean - v_e
        row = np.zeros(n)
        if scheme == "upwind":
            row[e - 1 if c > 0 else e] += c
        elif scheme == "central":
            row[e - 1] += 0.5 * c
            row[e] += 0.5 * c
        elif scheme == "chang_cooper":
            w = dx * (v_e - u_mean) / T
            delta = 1.0 / w - 1.0 / np.expm1(w) if abs(w) >= 1e-8 else 0.5 - w / 12
            row[e] += c * (1 - delta)
            row[e - 1] += c * delta
        row[e] -= T / dx
        row[e - 1] += T / dx
        A[e - 1] -= row / dx
        A[e] += row / dx
    return A


@pytest.mark.parametrize("build,scheme", [(fp_upwind, "upwind"),
                                          (fp_central, "central"),
                                          (fp_chang_cooper, "chang_cooper")])
def test_dense_matrix_oracle(params100, build, scheme):
    op = build(params100)
    A = dense_matrix(params100, scheme)
    rng = np.random.default_rng(3)
    f = Field(params100.grid, rng.standard_normal(100))
    expected = A @ f.data
    got = op(f).data
    scale = np.max(np.abs(expected)) + 1.0
    assert np.max(np.abs(got - expected)) <= 1e-13 * scale


def test_upwind_three_cell_hand_case():
    # grid(3, -1.5, 1.5), u=0, T=1, f=[0,1,0]: interior edges at +-0.5, both
    # drift donors are zero cells, so only diffusion acts: G = [1, -2, 1]
    p = FPParams(0.0, 1.0, make_grid_1d(3, -1.5, 1.5))
    f = Field(p.grid, np.array([0.0, 1.0, 0.0]))
    np.testing.assert_allclose(fp_upwind(p)(f).data, [1.0, -2.0, 1.0],
                               atol=1e-14)


def test_maxwellian_values():
    p = FPParams(0.0, 1.0, make_grid_1d(101, -5.05, 5.05))
    M = maxwellian(p, 1.0)
    i0 = np.argmin(np.abs(p.grid.centers))
    assert p.grid.centers[i0] == pytest.approx(0.0, abs=1e-14)
    assert M.data[i0] == pytest.approx(1.0 / np.sqrt(2 * np.pi), rel=1e-12)


def test_maxwellian_symmetry():
    p = FPParams(0.7, 1.3, make_grid_1d(100, 0.7 - 5, 0.7 + 5))
    M = maxwellian(p, 2.0).data
    np.testing.assert_allclose(M, M[::-1], rtol=1e-13)


def test_maxwellian_mass(params100):
    M = maxwellian(params100, 1.0)
    assert np.sum(M.data) * params100.grid.dx == pytest.approx(1.0, abs=1e-6)


def test_maxwellian_rejects_bad_args(params100):
    with pytest.raises(ValueError):
        maxwellian(params100, 0.0)
    with pytest.raises(ValueError):
        FPParams(0.0, -1.0, params100.grid)


@pytest.mark.parametrize("build", [fp_upwind, fp_central, fp_chang_cooper])
def test_operators_zero_on_zero(params100, build):
    f = Field(params100.grid, np.zeros(100))
    assert np.all(build(params100)(f).data == 0.0)


@pytest.mark.parametrize("build", [fp_upwind, fp_central, fp_chang_cooper])
def test_operators_conserve_mass(params100, build):
    rng = np.random.default_rng(11)
    op = build(params100)
    g = params100.grid
    for _ in range(5):
        f = Field(g, rng.random(100))
        total = abs(np.sum(op(f).data) * g.dx)
        assert total <= 1e-14 * np.sum(np.abs(f.data)) * g.dx


def test_central_equilibrium_residual_second_order():
    norms = []
    for n in (50, 100, 200):
        p = FPParams(0.0, 1.0, make_grid_1d(n, -5, 5))
        M = maxwellian(p, 1.0)
        norms.append(np.max(np.abs(fp_central(p)(M).data)))
    assert norms[0] / norms[1] == pytest.approx(4.0, abs=0.7)
    assert norms[1] / norms[2] == pytest.approx(4.0, abs=0.7)


def test_chang_cooper_delta_limit():
    assert _cc_delta(0.0) == pytest.approx(0.5, abs=0)
    assert _cc_delta(1e-10) == pytest.approx(0.5 - 1e-10 / 12, rel=1e-12)
    # continuity across the series switch at |w| = 1e-8
    assert _cc_delta(1.0000001e-8) == pytest.approx(_cc_delta(0.9999999e-8),
                                                    abs=1e-12)
    # asymptotics: full upwinding for strong drift
    assert _cc_delta(50.0) == pytest.approx(1.0 / 50.0, rel=1e-10)
    assert _cc_delta(-50.0) == pytest.approx(1.0 - 1.0 / 50.0, rel=1e-10)


def test_chang_cooper_exact_on_maxwellian(params100):
    M = maxwellian(params100, 1.0)
    res = fp_chang_cooper(params100)(M)
    assert np.max(np.abs(res.data)) <= 1e-13 * np.max(M.data)


def test_bgk_operator(params100):
    op = bgk_operator(params100, mu=2.5, rho_target=1.0)
    M = maxwellian(params100, 1.0)
    assert np.all(op(M).data == 0.0)
    zero = Field(params100.grid, np.zeros(100))
    np.testing.assert_array_equal(op(zero).data, 2.5 * M.data)


def test_bgk_euler_step_closed_form(params100):
    mu, dt = 2.5, 1e-3
    op = bgk_operator(params100, mu=mu, rho_target=1.0)
    M = maxwellian(params100, 1.0)
    rng = np.random.default_rng(4)
    f0 = Field(params100.grid, rng.random(100))
    f1 = f0.data + dt * op(f0).data
    closed = (1 - dt * mu) * f0.data + dt * mu * M.data
    np.testing.assert_allclose(f1, closed, rtol=1e-13)


def test_moments_maxwellian(params100):
    g = params100.grid
    M = maxwellian(params100, 1.0)
    m = moments(M, g)
    assert m.rho == pytest.approx(1.0, abs=1e-5)
    assert m.momentum == pytest.approx(0.0, abs=1e-5)
    # the |v|^2 tail of the temperature integrand outside [-5, 5] is ~1.5e-5
    assert m.temperature == pytest.approx(1.0, abs=2e-5)


def test_moments_shifted_maxwellian():
    # wider grid so the truncated tails are negligible
    p = FPParams(1.0, 1.0, make_grid_1d(130, -5.5, 7.5))
    m = moments(maxwellian(p, 1.0), p.grid)
    assert m.momentum == pytest.approx(1.0, abs=1e-5)
    assert m.temperature == pytest.approx(1.0, abs=1e-5)


def test_moments_rejects_vacuum(params100):
    with pytest.raises(ValueError):
        moments(Field(params100.grid, np.zeros(100)), params100.grid)
