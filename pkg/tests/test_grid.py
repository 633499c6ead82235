import math

import numpy as np
import pytest

from convsplit.grid import (
    Grid1D,
    Grid2D,
    GridError,
    GridFunction,
    TimeGrid,
    inner_product,
    norms,
    read_binary,
    weighted_sum,
)


def test_periodic_nodes_and_spacing():
    g = Grid1D(2.0, 8)
    assert g.h == 0.25
    assert g.size == 8
    np.testing.assert_allclose(g.x, 0.25 * np.arange(1, 9))


def test_dirichlet_grid_stores_boundaries():
    g = Grid1D(3.0, 6, boundary="dirichlet")
    assert g.size == 7
    assert g.x[0] == 0.0 and g.x[-1] == 3.0


def test_too_few_cells_rejected():
    with pytest.raises(GridError):
        Grid1D(1.0, 3)


def test_periodic_value_wraps():
    g = Grid1D(1.0, 5)
    v = GridFunction(g, np.arange(5.0))
    assert v.value(0) == v.value(5) == 4.0
    assert v.value(6) == v.value(1) == 0.0


def test_shape_mismatch_raises():
    with pytest.raises(GridError):
        GridFunction(Grid1D(1.0, 5), np.zeros(6))


def test_inner_product_different_grids_raises():
    a = GridFunction(Grid1D(1.0, 5), np.ones(5))
    b = GridFunction(Grid1D(1.0, 6), np.ones(6))
    with pytest.raises(GridError):
        inner_product(a, b)


def test_norms_of_constant():
    g = Grid1D(2.0 * math.pi, 16)
    n = norms(GridFunction(g, np.full(16, 3.0)))
    assert n["mass"] == pytest.approx(6.0 * math.pi, rel=1e-15)
    assert n["linf"] == n["min"] == n["max"] == 3.0


def test_norms_exclude_dirichlet_boundary():
    g = Grid1D(1.0, 4, boundary="dirichlet")
    n = norms(GridFunction(g, np.array([100.0, 1.0, 1.0, 1.0, -100.0])))
    assert n["linf"] == 1.0
    assert n["mass"] == pytest.approx(0.75)


def test_inner_product_is_reproducible(rng):
    g = Grid1D(1.0, 1000)
    v = GridFunction(g, rng.standard_normal(1000))
    w = GridFunction(g, rng.standard_normal(1000))
    assert inner_product(v, w) == inner_product(v, w)
    assert inner_product(v, w) == pytest.approx(g.h * np.dot(v.values, w.values), rel=1e-12)


def test_weighted_sum_empty():
    assert weighted_sum(np.array([]), 0.1) == 0.0


def test_grid2d_cell_volume_and_mesh():
    g = Grid2D(Grid1D(1.0, 4), Grid1D(2.0, 8))
    assert g.h == 0.25 * 0.25
    X, Y = g.mesh()
    assert X.shape == (4, 8)
    assert X[1, 0] == 0.5 and Y[0, 1] == 0.5


def test_time_grid():
    tg = TimeGrid(4.0, 3, t0=1.0)
    assert tg.tau == 1.0
    assert tg.t(3) == 4.0
    assert tg.half(0) == 1.5
    with pytest.raises(GridError):
        TimeGrid(1.0, 0)


def test_binary_round_trip(tmp_path, rng):
    g = Grid2D(Grid1D(1.0, 5), Grid1D(1.0, 6))
    v = GridFunction(g, rng.standard_normal(g.shape))
    v.to_binary(tmp_path / "v.bin")
    raw = np.fromfile(tmp_path / "v.bin", dtype="<f8")
    assert raw.size == 30
    w = read_binary(tmp_path / "v.bin", g)
    assert np.array_equal(w.values, v.values)


def test_csv_dump(tmp_path):
    g = Grid1D(1.0, 4)
    GridFunction(g, np.arange(4.0)).to_csv(tmp_path / "v.csv")
    lines = (tmp_path / "v.csv").read_text().splitlines()
    assert lines[0] == "i,x,value"
    assert len(lines) == 5


def test_inner_product_constant_measure():
    g = Grid1D(3.0, 6)
    one = GridFunction(g, np.ones(6))
    assert inner_product(one, one) == 3.0


@pytest.mark.parametrize("N", [4, 9, 64])
def test_mean_orthogonal_to_first_mode(N):
    g = Grid1D(2.5, N)
    s = GridFunction(g, np.sin(2 * np.pi * g.x / 2.5))
    assert abs(inner_product(GridFunction(g, np.ones(N)), s)) <= 1e-14 * N


def test_inner_product_matches_direct_loop(rng):
    g = Grid1D(1.3, 7)
    v, w = rng.standard_normal(7), rng.standard_normal(7)
    acc = 0.0
    for i in range(7):
        acc += v[i] * w[i]
    assert inner_product(GridFunction(g, v), GridFunction(g, w)) == g.h * acc


def test_mass_is_plain_weighted_sum(rng):
    g = Grid2D(Grid1D(1.0, 5), Grid1D(2.0, 4))
    v = rng.standard_normal((5, 4))
    acc = 0.0
    for val in v.ravel():
        acc += val
    assert norms(GridFunction(g, v))["mass"] == g.h * acc


def test_zero_function_norms():
    n = norms(GridFunction(Grid1D(1.0, 5), np.zeros(5)))
    assert all(val == 0.0 for val in n.values())


def test_gaussian_hump_mass():
    from convsplit.problems import get_problem

    p = get_problem("vortex_hump")
    g = p.grid(500)
    m = norms(GridFunction(g, p.initial_values(g)))["mass"]
    assert m == pytest.approx(2 * np.pi * 1.6e-3, abs=1e-6)
