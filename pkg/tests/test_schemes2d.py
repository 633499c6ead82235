import numpy as np
import pytest

from convsplit.grid import Grid1D, Grid2D, GridFunction
from convsplit.problems import ProblemSpec, get_problem
from convsplit.schemes1d import SchemeConfig
from convsplit.schemes2d import (
    ADISplitting2D,
    AdiWorkspace,
    BDF2IMEX2D,
    BPADI2D,
    BPMCADI2D,
    adi_diffusion_half_step,
    make_stepper_2d,
)


def _band(n, st, periodic):
    if periodic:
        M = np.zeros((n, n))
        for i in range(n):
            M[i, (i - 1) % n] += st[0]
            M[i, i] += st[1]
            M[i, (i + 1) % n] += st[2]
        return M
    # rows for the n - 1 interior nodes acting on all n + 1 stored nodes
    M = np.zeros((n - 1, n + 1))
    for i in range(n - 1):
        M[i, i : i + 3] = st
    return M


def _ops(h, gamma, tau, periodic, n):
    r = gamma * tau / (4 * h * h)
    A = (1 / 12, 10 / 12, 1 / 12)
    d2 = (1.0, -2.0, 1.0)
    lhs = tuple(a - r * d for a, d in zip(A, d2))
    rhs = tuple(a + r * d for a, d in zip(A, d2))
    return _band(n, lhs, periodic), _band(n, rhs, periodic), _band(n, A, periodic)


def _problem(flux_x, flux_y, gamma=(0.01, 0.02), source=None, bounds=None, boundary="periodic", Lx=1.0, Ly=1.0):
    return ProblemSpec(
        name="test2d",
        dim=2,
        domain=((0.0, Lx), (0.0, Ly)),
        t0=0.0,
        T=1.0,
        gamma=gamma,
        flux=flux_x[0],
        dflux=flux_x[1],
        flux_y=flux_y[0],
        dflux_y=flux_y[1],
        initial=lambda x, y: 0.5 + 0.2 * np.sin(2 * np.pi * x) * np.cos(2 * np.pi * y),
        source=source,
        boundary=boundary,
        boundary_values=(lambda x, y, t: 0.1 + 0.0 * x * y + 0.05 * t) if boundary == "dirichlet" else None,
        bounds=bounds,
    )


BURG = (lambda x, y, u: 0.5 * u * u, lambda x, y, u: u * np.ones_like(x))
CUBIC = (lambda x, y, u: u**3 / 3.0, lambda x, y, u: u * u * np.ones_like(x))
ZERO = (lambda x, y, u: np.zeros_like(u), lambda x, y, u: np.zeros_like(u))


def _src(x, y, t):
    return 0.1 * np.cos(2 * np.pi * (x + t)) * np.sin(2 * np.pi * y) + 0.02


# ------------------------------------------------------------------ ADI


def test_adi_periodic_matches_dense_perturbed_system(rng):
    Nx, Ny, tau, gam = 12, 10, 0.05, (0.03, 0.05)
    g = Grid2D(Grid1D(1.0, Nx), Grid1D(1.3, Ny))
    ws = AdiWorkspace(g, tau, gam)
    u = rng.standard_normal((Nx, Ny))
    extra = rng.standard_normal((Nx, Ny))
    Lx, Rx, Ax = _ops(g.gx.h, gam[0], tau, True, Nx)
    Ly, Ry, Ay = _ops(g.gy.h, gam[1], tau, True, Ny)
    lhs = np.kron(Lx, Ly)
    rhs = np.kron(Rx, Ry) @ u.ravel() + 0.5 * tau * np.kron(Ax, Ay) @ extra.ravel()
    ref = np.linalg.solve(lhs, rhs).reshape(Nx, Ny)
    out = adi_diffusion_half_step(GridFunction(g, u), ws, GridFunction(g, extra)).values
    assert np.max(np.abs(out - ref)) <= 1e-11


def test_adi_dirichlet_matches_dense_perturbed_system(rng):
    N, tau, gam = 12, 0.04, (0.02, 0.03)
    g = Grid2D(Grid1D(1.0, N, boundary="dirichlet"), Grid1D(1.0, N, boundary="dirichlet"))
    ws = AdiWorkspace(g, tau, gam)
    u = rng.standard_normal((N + 1, N + 1))
    bc = rng.standard_normal((N + 1, N + 1))
    Lx, Rx, _ = _ops(g.gx.h, gam[0], tau, False, N)
    Ly, Ry, _ = _ops(g.gy.h, gam[1], tau, False, N)
    rows = np.kron(Lx, Ly)
    rhs = np.kron(Rx, Ry) @ u.ravel()
    inner = np.zeros((N + 1, N + 1), dtype=bool)
    inner[1:-1, 1:-1] = True
    known = np.where(inner, 0.0, bc).ravel()
    sol = np.linalg.solve(rows[:, inner.ravel()], rhs - rows @ known)
    ref = bc.copy()
    ref[1:-1, 1:-1] = sol.reshape(N - 1, N - 1)
    out = adi_diffusion_half_step(GridFunction(g, u), ws, boundary=bc).values
    assert np.max(np.abs(out - ref)) <= 1e-11


def test_adi_constant_and_mass(rng):
    g = Grid2D(Grid1D(1.0, 16), Grid1D(1.0, 16))
    ws = AdiWorkspace(g, 0.01, (0.1, 0.1))
    c = adi_diffusion_half_step(GridFunction(g, np.full((16, 16), 0.3)), ws).values
    np.testing.assert_allclose(c, 0.3, atol=1e-15)
    u = rng.standard_normal((16, 16))
    out = adi_diffusion_half_step(GridFunction(g, u), ws).values
    assert abs(out.sum() - u.sum()) <= 1e-13 * np.abs(u).sum()


def test_batched_sweep_equals_row_solves(rng):
    p = get_problem("burgers2d")
    g = p.grid(60)
    tau = g.gx.h ** 2
    ws = AdiWorkspace(g, tau, p.gamma)
    (fx, _, _), _ = ws.cn
    rhs = rng.standard_normal(g.shape)
    batch = fx.solve(rhs, axis=0)
    cols = np.stack([fx.solve(rhs[:, j]) for j in range(g.shape[1])], axis=1)
    assert np.array_equal(batch, cols)


# ----------------------------------------------------------- convection


def test_convection_dense_replay(rng):
    N, tau, t = 10, 0.02, 0.1
    p = _problem(BURG, CUBIC, source=_src)
    g = p.grid(N)
    h = g.gx.h
    B = _band(N, (1 / 6, 4 / 6, 1 / 6), True)
    D = _band(N, (-0.5 / h, 0.0, 0.5 / h), True)
    BB = np.kron(B, B)
    Dx, Dy = np.kron(D, B), np.kron(B, D)
    X, Y = g.mesh()
    u = (0.5 + 0.1 * rng.standard_normal((N, N))).ravel()
    S0, S1 = _src(X, Y, t).ravel(), _src(X, Y, t + tau).ravel()

    def F(v):
        return Dx @ (0.5 * v * v) + Dy @ (v**3 / 3.0)

    H1 = BB @ u - tau * F(u) + tau * BB @ S0
    u2 = np.linalg.solve(BB, H1)
    H2 = BB @ u - 0.5 * tau * (F(u) + F(u2)) + 0.5 * tau * BB @ (S0 + S1)
    ref = np.linalg.solve(BB, H2).reshape(N, N)
    out = ADISplitting2D(p, g, tau).convection(u.reshape(N, N), t, tau)
    assert np.max(np.abs(out - ref)) <= 1e-12


def test_convection_zero_flux_identity(rng):
    p = _problem(ZERO, ZERO)
    g = p.grid(12)
    u = rng.standard_normal((12, 12))
    np.testing.assert_allclose(ADISplitting2D(p, g, 0.1).convection(u, 0.0, 0.1), u, atol=1e-14)


@pytest.mark.parametrize("limiter", [False, True])
def test_convection_mass_identity(limiter):
    from convsplit.schemes1d import LimiterConfig

    p = _problem(BURG, CUBIC, source=_src)
    g = p.grid(24)
    st = ADISplitting2D(p, g, 0.01, SchemeConfig(limiter=LimiterConfig(enabled=limiter)))
    u = p.initial_values(g)
    out = st.convection(u, 0.2, 0.01)
    expect = st.mass(u) + 0.005 * (st.source_mass(0.2) + st.source_mass(0.21))
    assert abs(st.mass(out) - expect) <= 1e-13 * abs(expect)


# ---------------------------------------------------------- full steps


@pytest.mark.parametrize("name", ["hoc_adi_splitting", "bp_adi", "bpmc_adi", "bdf2_imex_hoc"])
def test_constant_state(name):
    from convsplit.multipliers import BoundsSpec

    p = _problem(BURG, CUBIC, bounds=BoundsSpec(0.0, 1.0))
    g = p.grid(16)
    st = make_stepper_2d(name, p, g, 0.01)
    u = np.full(g.shape, 0.25)
    for n in range(3):
        u, _ = st.advance(u, 0.01 * n)
    np.testing.assert_allclose(u, 0.25, atol=1e-14)


@pytest.mark.parametrize("cls", [ADISplitting2D, BPMCADI2D])
def test_step_mass_identity(cls):
    p = get_problem("burgers2d")
    g = p.grid(40)
    tau = 5e-3
    st = cls(p, g, tau)
    u = p.initial_values(g)
    t = 0.0
    for _ in range(4):
        target = st.mass_target(u, t)
        u, _ = st.advance(u, t)
        t += tau
        assert abs(st.mass(u) - target) <= 1e-12 * abs(target)


def test_bdf2_mass_recurrence():
    p = get_problem("burgers2d")
    g = p.grid(30)
    tau = 5e-3
    st = BDF2IMEX2D(p, g, tau)
    m = [st.mass(p.initial_values(g))]
    u = p.initial_values(g)
    u, _ = st.advance(u, 0.0)
    m.append(st.mass(u))
    assert abs(m[1] - m[0] - tau * st.source_mass(tau)) <= 1e-10 * abs(m[0])
    u, _ = st.advance(u, tau)
    expect = (4 * m[1] - m[0]) / 3 + 2 * tau / 3 * st.source_mass(2 * tau)
    assert abs(st.mass(u) - expect) <= 1e-10 * abs(m[0])


def test_bdf2_rejects_dirichlet():
    p = get_problem("buckley_leverett")
    with pytest.raises(ValueError):
        BDF2IMEX2D(p, p.grid(20), 0.01)


def test_axis_symmetry_under_transpose():
    pa = _problem(BURG, CUBIC, gamma=(0.01, 0.03), source=_src, Lx=1.0, Ly=1.5)
    pb = ProblemSpec(
        name="swapped",
        dim=2,
        domain=((0.0, 1.5), (0.0, 1.0)),
        t0=0.0,
        T=1.0,
        gamma=(0.03, 0.01),
        flux=CUBIC[0],
        dflux=CUBIC[1],
        flux_y=BURG[0],
        dflux_y=BURG[1],
        initial=lambda x, y: pa.initial(y, x),
        source=lambda x, y, t: _src(y, x, t),
    )
    ga = Grid2D(Grid1D(1.0, 14), Grid1D(1.5, 18))
    gb = Grid2D(Grid1D(1.5, 18), Grid1D(1.0, 14))
    sa, sb = ADISplitting2D(pa, ga, 0.01), ADISplitting2D(pb, gb, 0.01)
    ua, ub = pa.initial_values(ga), pb.initial_values(gb)
    np.testing.assert_array_equal(ua, ub.T)
    for n in range(3):
        ua, _ = sa.advance(ua, 0.01 * n)
        ub, _ = sb.advance(ub, 0.01 * n)
    assert np.max(np.abs(ua - ub.T)) <= 1e-12


@pytest.mark.parametrize("cls", [BPADI2D, BPMCADI2D])
def test_corrections_kkt_on_rough_data(cls, rng):
    p = get_problem("burgers2d")
    g = p.grid(30)
    st = cls(p, g, 0.02)
    u = np.clip(p.initial_values(g) + 0.05 * rng.standard_normal(g.shape), 0.0, 1.0)
    for n in range(3):
        u, d = st.advance(u, 0.02 * n)
        lam = st.state.lam
        assert u.min() >= 0.0 and u.max() <= 1.0
        assert np.all(lam >= 0.0) and np.all(lam * p.bounds.H(u) == 0.0)


def test_dirichlet_step_keeps_boundary():
    p = _problem(BURG, BURG, boundary="dirichlet")
    g = p.grid(16)
    st = ADISplitting2D(p, g, 0.01)
    u, _ = st.advance(p.initial_values(g), 0.0)
    bc = st.boundary(0.01)
    assert np.array_equal(u[0], bc[0]) and np.array_equal(u[:, -1], bc[:, -1])


def test_unknown_scheme():
    with pytest.raises(KeyError):
        make_stepper_2d("nope", get_problem("burgers2d"), get_problem("burgers2d").grid(8), 0.1)
