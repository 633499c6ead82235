import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convsplit.compact_ops import CompactAxis, CompactOperatorSet, cn_stencils, stencil
from convsplit.grid import Grid1D, Grid2D, GridError, GridFunction

L = 2.0 * math.pi


def _u(x):
    return np.exp(np.sin(x))


def _du(x):
    return np.cos(x) * _u(x)


def _d2u(x):
    return (np.cos(x) ** 2 - np.sin(x)) * _u(x)


def _errors(N):
    ax = CompactAxis(Grid1D(L, N))
    x = ax.grid.x
    u = _u(x)
    d1 = ax.solve("B", ax.apply("Dhat", u))
    d2 = ax.solve("A", ax.apply("Delta2", u))
    return np.max(np.abs(d1 - _du(x))), np.max(np.abs(d2 - _d2u(x)))


def test_observed_orders_at_least_3_9():
    errs = np.array([_errors(N) for N in (32, 64, 128)])
    orders = np.log2(errs[:-1] / errs[1:])
    assert np.all(orders >= 3.9), orders


def test_stencil_constants():
    assert stencil("A", 0.1) == (1 / 12, 10 / 12, 1 / 12)
    assert stencil("B", 0.1) == (1 / 6, 4 / 6, 1 / 6)
    assert stencil("Dhat", 0.5) == (-1.0, 0.0, 1.0)
    assert stencil("Delta2", 0.5) == (4.0, -8.0, 4.0)
    with pytest.raises(ValueError):
        stencil("C", 0.1)


def test_cn_stencils_sum():
    lhs, rhs = cn_stencils(0.1, 0.3, 0.02)
    r = 0.3 * 0.02 / (4 * 0.01)
    assert lhs[0] == pytest.approx(1 / 12 - r)
    assert sum(lhs) == pytest.approx(1.0) and sum(rhs) == pytest.approx(1.0)


@pytest.mark.parametrize("k", [1, 3, 7])
def test_fourier_symbols(k):
    N = 32
    ax = CompactAxis(Grid1D(L, N))
    h = ax.h
    x = ax.grid.x
    mode = np.exp(1j * k * x)
    th = k * h
    sym_d1 = 1j * math.sin(th) / h / ((2 + math.cos(th)) / 3)
    sym_d2 = -4 * math.sin(th / 2) ** 2 / h**2 / ((5 + math.cos(th)) / 6)
    d1 = ax.solve("B", ax.apply("Dhat", mode.real)) + 1j * ax.solve("B", ax.apply("Dhat", mode.imag))
    d2 = ax.solve("A", ax.apply("Delta2", mode.real)) + 1j * ax.solve("A", ax.apply("Delta2", mode.imag))
    np.testing.assert_allclose(d1, sym_d1 * mode, atol=1e-12)
    np.testing.assert_allclose(d2, sym_d2 * mode, atol=1e-11)


def test_operator_set_2d_axes_agree_under_transpose(rng):
    g = Grid2D(Grid1D(1.0, 12), Grid1D(1.0, 12))
    ops = CompactOperatorSet(g)
    v = rng.standard_normal((12, 12))
    a = ops.apply("A", "x", GridFunction(g, v)).values
    b = ops.apply("A", "y", GridFunction(g, v.T)).values.T
    np.testing.assert_array_equal(a, b)


def test_dirichlet_inverse_round_trip(rng):
    g = Grid1D(1.0, 10, boundary="dirichlet")
    ops = CompactOperatorSet(g)
    v = GridFunction(g, rng.standard_normal(11))
    back = ops.invert("A", "x", ops.apply("A", "x", v))
    np.testing.assert_allclose(back.values, v.values, atol=1e-14)


def test_missing_axis_raises():
    ops = CompactOperatorSet(Grid1D(1.0, 8))
    with pytest.raises(GridError):
        ops.apply("A", "y", GridFunction(Grid1D(1.0, 8), np.zeros(8)))


def test_cn_systems_validation():
    ops = CompactOperatorSet(Grid1D(1.0, 8))
    with pytest.raises(ValueError):
        ops.build_cn_systems("x", 0.0, 0.1)
    d = ops.build_cn_systems("x", 0.1, 0.1)
    assert set(d) == {"lhs", "lhs_stencil", "rhs_stencil"}


@settings(max_examples=40, deadline=None)
@given(N=st.integers(6, 40), seed=st.integers(0, 2**31))
def test_B_solve_inverts_apply(N, seed):
    ax = CompactAxis(Grid1D(1.0, N))
    v = np.random.default_rng(seed).standard_normal(N)
    np.testing.assert_allclose(ax.solve("B", ax.apply("B", v)), v, atol=1e-13)


def test_periodic_apply_conserves_sum(rng):
    ax = CompactAxis(Grid1D(1.0, 20))
    v = rng.standard_normal(20)
    assert abs(ax.apply("Dhat", v).sum()) < 1e-12
    assert ax.apply("A", v).sum() == pytest.approx(v.sum(), abs=1e-12)
