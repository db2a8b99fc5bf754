import numpy as np
import pytest

from resideq.mesh import (Field, make_grid_1d, make_grid_2d, project_function,
                          save_snapshot, load_snapshot)


def test_grid_1d_examples():
    g = make_grid_1d(100, -5, 5)
    assert g.dx == pytest.approx(0.1, abs=0)
    assert g.centers[0] == pytest.approx(-4.95)

    g2 = make_grid_1d(2, 0, 1)
    np.testing.assert_allclose(g2.centers, [0.25, 0.75])

    g3 = make_grid_1d(200, 0, 25)
    assert g3.dx == pytest.approx(0.125, abs=0)


def test_grid_1d_invariants():
    g = make_grid_1d(37, -1.5, 2.25)
    assert g.dx > 0
    assert np.all(np.diff(g.centers) > 0)
    assert g.centers[0] - g.x_min == pytest.approx(g.dx / 2, rel=1e-14)


def test_grid_1d_rejects_bad_input():
    with pytest.raises(ValueError):
        make_grid_1d(1, 0, 1)
    with pytest.raises(ValueError):
        make_grid_1d(10, 1, 1)
    with pytest.raises(ValueError):
        make_grid_1d(10, 2, -3)


def test_grid_2d():
    g = make_grid_2d(64, 32, -10, 10, 0, 5)
    assert g.nx == 64 and g.ny == 32
    assert g.dx == pytest.approx(20 / 64)
    assert g.dy == pytest.approx(5 / 32)
    assert g.n_cells == 64 * 32
    X, Y = g.meshgrid()
    assert X.shape == (32, 64)
    assert X[0, 0] == pytest.approx(-10 + g.dx / 2)
    assert Y[0, 0] == pytest.approx(g.dy / 2)


def test_project_constant_and_identity():
    g = make_grid_1d(17, -2, 3)
    ones = project_function(g, lambda x: np.ones_like(x))
    assert np.all(ones.data == 1.0)

    g2 = make_grid_1d(2, 0, 1)
    ident = project_function(g2, lambda x: x)
    np.testing.assert_array_equal(ident.data, g2.centers)


def test_project_maxwellian_value_near_origin():
    g = make_grid_1d(100, -5, 5)
    f = project_function(g, lambda x: np.exp(-x ** 2 / 2) / np.sqrt(2 * np.pi))
    i = np.argmin(np.abs(g.centers))
    expected = np.exp(-0.05 ** 2 / 2) / np.sqrt(2 * np.pi)
    assert f.data[i] == pytest.approx(expected, rel=1e-14)


def test_project_rejects_non_finite():
    g = make_grid_1d(4, 0, 1)
    with pytest.raises(ValueError):
        project_function(g, lambda x: np.where(x > 0.5, np.inf, 1.0))


def test_roundtrip_reproduces_function_exactly():
    g = make_grid_1d(50, 0, 2)
    f = project_function(g, np.sin)
    np.testing.assert_array_equal(f.data, np.sin(g.centers))


def test_field_arithmetic_exact():
    g = make_grid_1d(64, 0, 1)
    rng = np.random.default_rng(7)
    a = Field(g, rng.standard_normal(64))
    b = Field(g, rng.standard_normal(64))
    s = a + b
    for i in range(64):
        assert s.data[i] == a.data[i] + b.data[i]
    d = a - b
    for i in range(64):
        assert d.data[i] == a.data[i] - b.data[i]
    ax = a.axpy(0.37, b)
    for i in range(64):
        assert ax.data[i] == a.data[i] + 0.37 * b.data[i]


def test_field_shape_validation():
    g = make_grid_1d(8, 0, 1)
    with pytest.raises(ValueError):
        Field(g, np.zeros(7))
    with pytest.raises(ValueError):
        Field(g, np.zeros(8), components=2)


def test_snapshot_roundtrip_scalar(tmp_path):
    g = make_grid_1d(30, -1, 1)
    f = project_function(g, lambda x: np.exp(x) * np.sin(5 * x))
    path = tmp_path / "snap.dat"
    save_snapshot(f, path)
    back = load_snapshot(g, path)
    np.testing.assert_array_equal(back.data, f.data)


def test_snapshot_roundtrip_system(tmp_path):
    g = make_grid_1d(12, 0, 25)
    rng = np.random.default_rng(1)
    f = Field(g, rng.standard_normal((12, 2)), components=2)
    path = tmp_path / "sys.dat"
    save_snapshot(f, path)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 12
    assert len(lines[0].split()) == 3  # x h hv
    back = load_snapshot(g, path, components=2)
    np.testing.assert_array_equal(back.data, f.data)


def test_snapshot_roundtrip_2d(tmp_path):
    g = make_grid_2d(6, 4, -1, 1, -2, 2)
    rng = np.random.default_rng(2)
    f = Field(g, rng.standard_normal((4, 6)))
    path = tmp_path / "2d.dat"
    save_snapshot(f, path)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 4 and len(lines[0].split()) == 6
    back = load_snapshot(g, path)
    np.testing.assert_array_equal(back.data, f.data)
