"""Two-dimensional ADI splitting steppers and the BDF2-IMEX baseline.

The diffusion half step is the factored (D'Yakonov) form

    (A_x - r_x dx2) u_hat = (A_x + r_x dx2)(A_y + r_y dy2) u [+ (tau/2) A_x A_y s]
    (A_y - r_y dy2) u1    = u_hat

with ``r = gamma tau / 4``; it equals the unfactored Crank-Nicolson system
perturbed by ``r_x r_y dx2 dy2 (u1 - u)``.  Convection uses SSP-RK2 with the
factored operator ``B = B_x B_y`` (``B_x u_hat = H``, ``B_y u = u_hat``).
"""

from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, cg

from .compact_ops import CompactAxis, apply_dirichlet, stencil
from .grid import Grid2D, weighted_sum
from .multipliers import MultiplierState, bp_correct, bpmc_correct, feedback
from .problems import ProblemSpec
from .schemes1d import SchemeConfig, StepDiagnostics, flux_divergence, tvb_interface_fluxes


class IterativeSolverError(RuntimeError):
    """The BDF2 baseline's conjugate-gradient solve did not converge."""


class AdiWorkspace:
    """Per-axis operators and factored systems for one ``(grid, tau, gamma)``."""

    def __init__(self, grid: Grid2D, tau: float, gamma: tuple[float, float]):
        self.grid = grid
        self.tau = float(tau)
        self.gamma = tuple(float(g) for g in gamma)
        self.axes = (CompactAxis(grid.gx), CompactAxis(grid.gy))
        self.cn = tuple(ax.cn_systems(g, self.tau) for ax, g in zip(self.axes, self.gamma))
        self.A = tuple(stencil("A", ax.h) for ax in self.axes)
        self.B = tuple(stencil("B", ax.h) for ax in self.axes)
        self.D = tuple(stencil("Dhat", ax.h) for ax in self.axes)
        self.B_fact = tuple(ax.factored(st) for ax, st in zip(self.axes, self.B))
        self.order = ("x", "y")

    def apply(self, axis: int, st, v: np.ndarray) -> np.ndarray:
        return self.axes[axis].apply_stencil(st, v, axis)

    def apply2(self, st_x, st_y, v: np.ndarray) -> np.ndarray:
        return self.apply(1, st_y, self.apply(0, st_x, v))

    def sweep(self, rhs: np.ndarray, st_x, fact_x, st_y, fact_y, bc: np.ndarray | None) -> np.ndarray:
        """Solve ``st_x st_y u = rhs`` as an x-sweep followed by a y-sweep.

        On Dirichlet grids ``rhs`` covers the interior nodes and ``bc`` is a
        full array whose edges hold the boundary values of ``u``; the
        intermediate field on the x-edges is ``st_y`` applied to that data.
        """
        if bc is None:
            return fact_y.solve(fact_x.solve(rhs, axis=0), axis=1)
        ax, ay = self.axes
        lo = apply_dirichlet(st_y, bc[0])
        hi = apply_dirichlet(st_y, bc[-1])
        u_hat = ax.solve_stencil(st_x, rhs, 0, lo, hi)
        inner = ay.solve_stencil(st_y, u_hat[1:-1], 1, bc[1:-1, 0], bc[1:-1, -1])
        out = bc.copy()
        out[1:-1] = inner
        return out


def _interior_only(v: np.ndarray, periodic: bool) -> np.ndarray:
    if not periodic:
        v = v.copy()
        v[0] = v[-1] = 0.0
        v[:, 0] = v[:, -1] = 0.0
    return v


class ADISplitting2D:
    """HOC-ADI-Splitting stepper."""

    name = "hoc_adi_splitting"

    def __init__(self, problem: ProblemSpec, grid: Grid2D, tau: float, cfg: SchemeConfig = SchemeConfig()):
        if problem.dim != 2:
            raise ValueError(f"{problem.name} is not a 2D problem")
        if grid.boundary != problem.boundary:
            raise ValueError("grid boundary mode does not match the problem")
        if not tau > 0:
            raise ValueError("time step must be positive")
        self.problem = problem
        self.grid = grid
        self.tau = float(tau)
        self.cfg = cfg
        self.ws = AdiWorkspace(grid, tau, problem.gamma)
        self.periodic = grid.periodic
        self.X, self.Y = grid.mesh()
        self.inner = grid.interior
        self.h = grid.h
        self.bounds = cfg.bounds if cfg.bounds is not None else problem.bounds
        self.last_substeps = cfg.substeps.K
        self._sources: dict[float, np.ndarray] = {}

    # -- data providers
    def boundary(self, t: float) -> np.ndarray | None:
        if self.periodic:
            return None
        return np.asarray(self.problem.boundary_values(self.X, self.Y, t), dtype=float) * np.ones(self.grid.shape)

    def source(self, t: float) -> np.ndarray | None:
        if self.problem.source is None:
            return None
        hit = self._sources.get(t)
        if hit is None:
            if len(self._sources) > 4:
                self._sources.clear()
            hit = np.asarray(self.problem.source(self.X, self.Y, t), dtype=float) * np.ones(self.grid.shape)
            self._sources[t] = hit
        return hit

    def source_mass(self, t: float) -> float:
        s = self.source(t)
        return 0.0 if s is None else weighted_sum(s[self.inner], self.h)

    def mass(self, u: np.ndarray) -> float:
        return weighted_sum(u[self.inner], self.h)

    def mass_target(self, u: np.ndarray, t: float) -> float:
        return self.mass(u) + 0.5 * self.tau * (self.source_mass(t) + self.source_mass(t + self.tau))

    # -- diffusion
    def diffusion_half(self, u: np.ndarray, t_new: float, extra: np.ndarray | None = None) -> np.ndarray:
        ws = self.ws
        (fx, lhs_x, rhs_x), (fy, lhs_y, rhs_y) = ws.cn
        rhs = ws.apply2(rhs_x, rhs_y, u)
        if extra is not None:
            rhs += 0.5 * self.tau * ws.apply2(ws.A[0], ws.A[1], extra)
        return ws.sweep(rhs, lhs_x, fx, lhs_y, fy, self.boundary(t_new))

    # -- convection
    def _fluxes(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        p = self.problem
        fu = p.flux(self.X, self.Y, u)
        gu = p.flux_y(self.X, self.Y, u)
        for name, v in (("f", fu), ("g", gu)):
            if not np.all(np.isfinite(v)):
                bad = np.unravel_index(int(np.flatnonzero(~np.isfinite(v))[0]), v.shape)
                raise FloatingPointError(f"non-finite flux {name} at node {tuple(map(int, bad))}")
        return fu, gu

    def _limited_dx(self, u, fu, axis: int) -> np.ndarray:
        ws, lim = self.ws, self.cfg.limiter
        flux = self.problem.flux if axis == 0 else self.problem.flux_y
        dflux = self.problem.dflux if axis == 0 else self.problem.dflux_y
        ubar = ws.apply(axis, ws.B[axis], u)
        if not self.periodic:
            full = u.copy()
            sl = [slice(None), slice(None)]
            sl[axis] = slice(1, -1)
            full[tuple(sl)] = ubar
            ubar = full
        alpha = float(np.max(np.abs(dflux(self.X, self.Y, u))))
        fbar = flux(self.X, self.Y, ubar)
        h = ws.axes[axis].h
        if axis == 0:
            F = tvb_interface_fluxes(fu, u, fbar, ubar, alpha, lim.M_tvb, h, self.periodic)
            return flux_divergence(F, h, self.periodic)
        F = tvb_interface_fluxes(fu.T, u.T, fbar.T, ubar.T, alpha, lim.M_tvb, h, self.periodic)
        return flux_divergence(F, h, self.periodic).T

    def _div(self, u: np.ndarray, fu: np.ndarray, gu: np.ndarray) -> np.ndarray:
        """``B_y Dhat_x f + B_x Dhat_y g`` on the equation nodes."""
        ws = self.ws
        if self.cfg.limiter.enabled:
            dfx = self._limited_dx(u, fu, 0)
            dgy = self._limited_dx(u, gu, 1)
        else:
            dfx = ws.apply(0, ws.D[0], fu)
            dgy = ws.apply(1, ws.D[1], gu)
        return ws.apply(1, ws.B[1], dfx) + ws.apply(0, ws.B[0], dgy)

    def convection(self, u: np.ndarray, t: float, dt: float) -> np.ndarray:
        ws = self.ws
        Bx, By = ws.B
        S0, S1 = self.source(t), self.source(t + dt)
        bc = self.boundary(t + dt)
        Bu = ws.apply2(Bx, By, u)
        div0 = self._div(u, *self._fluxes(u))
        rhs = Bu - dt * div0
        if S0 is not None:
            rhs += dt * ws.apply2(Bx, By, S0)
        u2 = ws.sweep(rhs, Bx, ws.B_fact[0], By, ws.B_fact[1], bc)
        div1 = self._div(u2, *self._fluxes(u2))
        rhs = Bu - (0.5 * dt) * (div0 + div1)
        if S0 is not None:
            rhs += (0.5 * dt) * ws.apply2(Bx, By, S0 + S1)
        return ws.sweep(rhs, Bx, ws.B_fact[0], By, ws.B_fact[1], bc)

    def substep_count(self, u: np.ndarray) -> int:
        K = self.cfg.substeps.K
        if self.cfg.cfl.auto_substeps:
            p = self.problem
            c = max(
                float(np.max(np.abs(p.dflux(self.X, self.Y, u)))) / self.grid.gx.h,
                float(np.max(np.abs(p.dflux_y(self.X, self.Y, u)))) / self.grid.gy.h,
            )
            K = max(K, math.ceil(self.tau * c / self.cfg.cfl.C0 - 1e-12))
        return K

    def substep_convection(self, u: np.ndarray, t: float) -> np.ndarray:
        K = self.substep_count(u)
        self.last_substeps = K
        if K == 1:
            return self.convection(u, t, self.tau)
        dt = self.tau / K
        for k in range(K):
            u = self.convection(u, t + k * dt, dt)
        return u

    def predict(self, u: np.ndarray, t: float, extra: np.ndarray | None = None) -> np.ndarray:
        u1 = self.diffusion_half(u, t + 0.5 * self.tau, extra)
        u3 = self.substep_convection(u1, t)
        return self.diffusion_half(u3, t + self.tau, extra)

    def reset(self) -> None:
        """Forget any history."""

    def advance(self, u: np.ndarray, t: float) -> tuple[np.ndarray, StepDiagnostics]:
        return self.predict(u, t), StepDiagnostics(substeps=self.last_substeps)


class BPADI2D(ADISplitting2D):
    """BP-HOC-ADI-Splitting."""

    name = "bp_adi"
    zero_feedback_default = True

    def __init__(self, problem, grid, tau, cfg: SchemeConfig = SchemeConfig()):
        super().__init__(problem, grid, tau, cfg)
        if self.bounds is None:
            raise ValueError(f"{self.name} needs bounds; {problem.name} defines none")
        zf = cfg.zero_multiplier_in_predictor
        self.zero_feedback = self.zero_feedback_default if zf is None else bool(zf)
        self.reset()

    def reset(self) -> None:
        self.state = MultiplierState.zeros(self.grid.shape)

    def _feedback(self, u):
        if self.zero_feedback or not np.any(self.state.lam):
            return None
        return _interior_only(feedback(self.state, u, self.bounds), self.periodic)

    def _diag(self) -> StepDiagnostics:
        lam = self.state.lam
        return StepDiagnostics(
            clipped=int(np.count_nonzero(lam)),
            max_lambda=float(lam.max(initial=0.0)),
            xi=self.state.xi,
            secant_iterations=self.state.secant_iterations,
            substeps=self.last_substeps,
        )

    def advance(self, u, t):
        fb = self._feedback(u)
        pred = self.predict(u, t, fb)
        u_new, self.state = bp_correct(pred, self.state, self.bounds, self.tau, fb)
        return u_new, self._diag()


class BPMCADI2D(BPADI2D):
    """BP-MC-HOC-ADI-Splitting."""

    name = "bpmc_adi"
    zero_feedback_default = False

    def advance(self, u, t):
        fb = self._feedback(u)
        xi = self.state.xi
        extra = fb
        if xi != 0.0:
            extra = (0.0 if fb is None else fb) + _interior_only(np.full(self.grid.shape, xi), self.periodic)
        pred = self.predict(u, t, extra)
        if self.periodic:
            target = self.mass_target(u, t)
        else:
            target = self.mass(pred) - self.tau * (0.0 if extra is None else self.mass(extra))
        self.last_target = target
        u_new, self.state = bpmc_correct(
            pred, self.state, self.bounds, self.tau, target, self.h, fb, self.cfg.secant, self.inner
        )
        return u_new, self._diag()


def _circulant(n: int, st, periodic: bool = True) -> sp.csr_matrix:
    lo, mid, hi = st
    M = sp.diags([lo, mid, hi], [-1, 0, 1], shape=(n, n), format="lil")
    if periodic:
        M[0, n - 1] = lo
        M[n - 1, 0] = hi
    return M.tocsr()


class BDF2IMEX2D(ADISplitting2D):
    """BDF2 implicit-explicit compact baseline with a non-split implicit solve.

    The implicit operator multiplied through by ``A_x A_y`` is
    ``c/tau A_x A_y - gamma (A_y dx2 + A_x dy2)`` (``c = 3/2``, or ``1`` for
    the first-order start-up step).  It is symmetric positive definite on
    periodic grids and is solved by Jacobi-preconditioned conjugate gradients.
    """

    name = "bdf2_imex_hoc"

    def __init__(self, problem, grid, tau, cfg: SchemeConfig = SchemeConfig(), rtol: float = 1e-12, maxiter: int = 1000):
        super().__init__(problem, grid, tau, cfg)
        if not self.periodic:
            raise ValueError("the BDF2-IMEX baseline supports periodic grids only")
        self.rtol = rtol
        self.maxiter = maxiter
        gx, gy = grid.gx, grid.gy
        Ax = _circulant(gx.N, stencil("A", gx.h))
        Ay = _circulant(gy.N, stencil("A", gy.h))
        Dx = _circulant(gx.N, stencil("Delta2", gx.h))
        Dy = _circulant(gy.N, stencil("Delta2", gy.h))
        AA = sp.kron(Ax, Ay, format="csr")
        K = problem.gamma[0] * sp.kron(Dx, Ay) + problem.gamma[1] * sp.kron(Ax, Dy)
        self._ops = {c: (c / self.tau * AA - K).tocsr() for c in (1.0, 1.5)}
        self.reset()

    def reset(self) -> None:
        self.u_prev: np.ndarray | None = None

    def flux_derivatives(self, v: np.ndarray) -> np.ndarray:
        """``B_x^{-1} Dhat_x f(v) + B_y^{-1} Dhat_y g(v)``."""
        ws = self.ws
        fv, gv = self._fluxes(v)
        return ws.B_fact[0].solve(ws.apply(0, ws.D[0], fv), axis=0) + ws.B_fact[1].solve(ws.apply(1, ws.D[1], gv), axis=1)

    def advance(self, u, t):
        ws = self.ws
        t1 = t + self.tau
        if self.u_prev is None:
            c = 1.0
            bracket = u / self.tau - self.flux_derivatives(u)
            guess = u
        else:
            c = 1.5
            bracket = (4.0 * u - self.u_prev) / (2.0 * self.tau) - self.flux_derivatives(2.0 * u - self.u_prev)
            guess = 2.0 * u - self.u_prev
        S1 = self.source(t1)
        if S1 is not None:
            bracket += S1
        rhs = ws.apply2(ws.A[0], ws.A[1], bracket).ravel()
        M = self._ops[c]
        dinv = 1.0 / M.diagonal()
        prec = LinearOperator(M.shape, matvec=lambda r: dinv * r, dtype=float)
        sol, info = cg(M, rhs, x0=guess.ravel(), rtol=self.rtol, atol=0.0, maxiter=self.maxiter, M=prec)
        if info != 0:
            res = np.linalg.norm(M @ sol - rhs) / max(np.linalg.norm(rhs), 1e-300)
            raise IterativeSolverError(f"CG did not converge (info={info}, relative residual {res:.3e})")
        self.u_prev = u
        return sol.reshape(self.grid.shape), StepDiagnostics()


SCHEMES_2D = {
    "hoc_adi_splitting": ADISplitting2D,
    "bp_adi": BPADI2D,
    "bpmc_adi": BPMCADI2D,
    "bdf2_imex_hoc": BDF2IMEX2D,
}


def make_stepper_2d(name: str, problem: ProblemSpec, grid: Grid2D, tau: float, cfg: SchemeConfig = SchemeConfig()):
    try:
        cls = SCHEMES_2D[name]
    except KeyError:
        raise KeyError(f"unknown 2D scheme {name!r}") from None
    return cls(problem, grid, tau, cfg)


# ------------------------------------------------------- grid-function API


def adi_diffusion_half_step(u, ws: AdiWorkspace, extra_source=None, boundary=None):
    """Factored diffusion half step on a :class:`GridFunction` (``boundary``: full array of edge values)."""
    from .grid import GridFunction

    (fx, lhs_x, rhs_x), (fy, lhs_y, rhs_y) = ws.cn
    rhs = ws.apply2(rhs_x, rhs_y, u.values)
    if extra_source is not None:
        rhs += 0.5 * ws.tau * ws.apply2(ws.A[0], ws.A[1], _interior_only(extra_source.values, ws.grid.periodic))
    if boundary is None and not ws.grid.periodic:
        boundary = u.values
    return GridFunction(u.grid, ws.sweep(rhs, lhs_x, fx, lhs_y, fy, boundary), u.boundary_values)
