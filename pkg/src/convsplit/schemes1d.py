"""One-dimensional HOC-Splitting time steppers.

A step is the Strang composition ``L(tau/2) N(tau) L(tau/2)``: a compact
Crank-Nicolson half step for diffusion, an SSP-RK2 compact step (optionally in
``K`` substeps and with a TVB limiter) for convection plus source, and a second
diffusion half step.  The bound-preserving (BP) and bound-preserving
mass-conservative (BP-MC) variants inject the previous multipliers as a source
into both diffusion half steps and finish with a nodewise correction.  A
BDF2 implicit-explicit compact scheme with the same BP correction serves as the
baseline.

Steppers work on raw numpy arrays (``grid.size`` values, boundary nodes
included on Dirichlet grids); the functions taking :class:`GridFunction`
arguments are thin wrappers for single operations.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable

import numba
import numpy as np

from .compact_ops import CompactAxis, stencil
from .grid import Grid1D, GridFunction, weighted_sum
from .multipliers import (
    BoundsSpec,
    MultiplierState,
    SecantConfig,
    bp_correct,
    bpmc_correct,
    feedback,
)
from .problems import ProblemSpec


# --------------------------------------------------------------- configuration


@dataclass(frozen=True)
class FluxModel:
    """Flux ``f(x, u)`` with derivative ``dfdu``; ``g``/``dgdu`` for 2D reuse."""

    f: Callable
    dfdu: Callable
    g: Callable | None = None
    dgdu: Callable | None = None


@dataclass(frozen=True)
class SourceModel:
    S: Callable | None = None


@dataclass(frozen=True)
class DiffusionSpec:
    gamma: tuple[float, ...]

    def __post_init__(self):
        if any(not g > 0 for g in self.gamma):
            raise ValueError("diffusion coefficients must be positive")


@dataclass(frozen=True)
class SubstepConfig:
    K: int = 1

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 1:
            raise ValueError(f"substep count must be a positive integer, got {self.K}")


@dataclass(frozen=True)
class LimiterConfig:
    enabled: bool = False
    M_tvb: float = 10.0

    def __post_init__(self):
        if self.M_tvb < 0:
            raise ValueError("M_tvb must be non-negative")


@dataclass(frozen=True)
class CflConfig:
    C0: float = 1.0 / 3.0
    auto_substeps: bool = False

    def __post_init__(self):
        if not self.C0 > 0:
            raise ValueError("C0 must be positive")


@dataclass(frozen=True)
class SchemeConfig:
    """Options shared by all steppers.

    ``zero_multiplier_in_predictor=None`` picks the per-scheme default
    (on for BP, off for BP-MC).
    """

    substeps: SubstepConfig = SubstepConfig()
    limiter: LimiterConfig = LimiterConfig()
    cfl: CflConfig = CflConfig()
    secant: SecantConfig = SecantConfig()
    zero_multiplier_in_predictor: bool | None = None
    bounds: BoundsSpec | None = None  # overrides the problem's bounds


@dataclass
class StepDiagnostics:
    """Per-step observables; fields a scheme cannot know stay ``nan``."""

    step: int = 0
    time: float = math.nan
    mass: float = math.nan
    mass_defect: float = math.nan
    umin: float = math.nan
    umax: float = math.nan
    clipped: int = 0
    max_lambda: float = 0.0
    xi: float = math.nan
    secant_iterations: int = 0
    entropy: float = math.nan
    substeps: int = 1
    wall: float = 0.0


def flux_model(problem: ProblemSpec) -> FluxModel:
    return FluxModel(problem.flux, problem.dflux, problem.flux_y, problem.dflux_y)


# ------------------------------------------------------------------ limiter


def _minmod3(a, b, c):
    s = np.sign(a)
    same = (np.sign(b) == s) & (np.sign(c) == s)
    return np.where(same, s * np.minimum(np.abs(a), np.minimum(np.abs(b), np.abs(c))), 0.0)


def mtilde(a1, a2, a3, threshold: float):
    """TVB-corrected minmod: ``a1`` if ``|a1| <= threshold`` else ``minmod(a1, a2, a3)``."""
    return np.where(np.abs(a1) <= threshold, a1, _minmod3(a1, a2, a3))


@numba.njit(cache=True, inline="always")
def _mt(a1, a2, a3, thr):
    if abs(a1) <= thr:
        return a1
    if a1 > 0.0 and a2 > 0.0 and a3 > 0.0:
        return min(a1, a2, a3)
    if a1 < 0.0 and a2 < 0.0 and a3 < 0.0:
        return max(a1, a2, a3)
    return 0.0


@numba.njit(cache=True)
def _tvb_kernel(fu, u, fbar, ubar, alpha, thr, periodic):
    n, m = fu.shape
    nf = n if periodic else n - 1
    out = np.empty((nf, m))
    for i in range(nf):
        r = i + 1 if i + 1 < n else 0
        rr = r + 1 if r + 1 < n else 0
        im = i - 1 if i > 0 else n - 1
        # Dirichlet: differences past the ends are zero
        has_ip = periodic or i + 1 < n
        has_im = periodic or i > 0
        has_rr = periodic or r + 1 < n
        for j in range(m):
            fp_i = 0.5 * (fu[i, j] + alpha * u[i, j])
            fp_r = 0.5 * (fu[r, j] + alpha * u[r, j])
            fm_i = 0.5 * (fu[i, j] - alpha * u[i, j])
            fm_r = 0.5 * (fu[r, j] - alpha * u[r, j])
            pb_i = 0.5 * (fbar[i, j] + alpha * ubar[i, j])
            mb_r = 0.5 * (fbar[r, j] - alpha * ubar[r, j])
            dpp = 0.5 * (fbar[r, j] + alpha * ubar[r, j]) - pb_i if has_ip else 0.0
            dpm = pb_i - 0.5 * (fbar[im, j] + alpha * ubar[im, j]) if has_im else 0.0
            dmp = 0.5 * (fbar[rr, j] - alpha * ubar[rr, j]) - mb_r if has_rr else 0.0
            dmm = mb_r - 0.5 * (fbar[i, j] - alpha * ubar[i, j])
            plus = fp_i + _mt(0.5 * (fp_r - fp_i), dpp, dpm, thr)
            minus = fm_r - _mt(0.5 * (fm_r - fm_i), dmp, dmm, thr)
            out[i, j] = plus + minus
    return out


def tvb_interface_fluxes(
    fu: np.ndarray,
    u: np.ndarray,
    fbar: np.ndarray,
    ubar: np.ndarray,
    alpha: float,
    M_tvb: float,
    h: float,
    periodic: bool = True,
) -> np.ndarray:
    """Limited interface fluxes ``f_hat[i] ~ f_{i+1/2}`` along axis 0.

    The central flux ``(f_i + f_{i+1})/2`` is split as ``f+ + f-`` with the
    Lax-Friedrichs pieces ``f+- = (f +- alpha u)/2``.  Each piece is written
    as its upwind value plus a correction ``d``, and ``d`` is limited with
    :func:`mtilde` against the differences of the same piece evaluated at the
    conservative variable ``ubar``.  Smooth data are untouched and the
    unlimited result is exactly the central flux.
    """
    shape = fu.shape
    args = [np.asarray(a, dtype=float).reshape(shape[0], -1) for a in (fu, u, fbar, ubar)]
    out = _tvb_kernel(*args, float(alpha), float(M_tvb * h * h), bool(periodic))
    return out.reshape((out.shape[0],) + shape[1:])


def tvb_modified_flux(u: GridFunction, ubar: GridFunction, flux: FluxModel, M_tvb: float, h: float) -> np.ndarray:
    """Interface fluxes of :func:`tvb_interface_fluxes` for 1D grid functions."""
    x = u.grid.x
    fu = flux.f(x, u.values)
    alpha = float(np.max(np.abs(flux.dfdu(x, u.values))))
    return tvb_interface_fluxes(fu, u.values, flux.f(x, ubar.values), ubar.values, alpha, M_tvb, h, u.grid.periodic)


def flux_divergence(F: np.ndarray, h: float, periodic: bool) -> np.ndarray:
    """``(F_{i+1/2} - F_{i-1/2}) / h`` at the equation rows."""
    if periodic:
        return (F - np.roll(F, 1, axis=0)) / h
    return (F[1:] - F[:-1]) / h


def one_sided_derivative(v: np.ndarray, h: float) -> tuple:
    """Fourth-order one-sided first derivatives at both ends of axis 0."""
    c = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12.0 * h)
    lo = np.tensordot(c, v[:5], axes=(0, 0))
    hi = -np.tensordot(c, v[::-1][:5], axes=(0, 0))
    return lo, hi


# --------------------------------------------------------------- core stepper


class Splitting1D:
    """HOC-Splitting stepper for a 1D problem on a fixed grid and step size."""

    name = "hoc_splitting"

    def __init__(self, problem: ProblemSpec, grid: Grid1D, tau: float, cfg: SchemeConfig = SchemeConfig()):
        if problem.dim != 1:
            raise ValueError(f"{problem.name} is not a 1D problem")
        if grid.boundary != problem.boundary:
            raise ValueError("grid boundary mode does not match the problem")
        if not tau > 0:
            raise ValueError("time step must be positive")
        self.problem = problem
        self.grid = grid
        self.tau = float(tau)
        self.cfg = cfg
        self.gamma = problem.gamma[0]
        self.ax = CompactAxis(grid)
        self.h = grid.h
        self.x = grid.x
        self.periodic = grid.periodic
        self.inner = grid.interior
        self._xb = self.x[[0, -1]]
        self.cn_fact, self.cn_lhs, self.cn_rhs = self.ax.cn_systems(self.gamma, self.tau)
        self.st_A = stencil("A", self.h)
        self.st_B = stencil("B", self.h)
        self.st_D = stencil("Dhat", self.h)
        self.B_fact = self.ax.factored(self.st_B)
        self.bounds = cfg.bounds if cfg.bounds is not None else problem.bounds
        self.last_substeps = cfg.substeps.K
        self._sources: dict[float, np.ndarray] = {}

    # -- data providers
    def boundary(self, t: float):
        if self.periodic:
            return None, None
        lo, hi = self.problem.boundary_values(self._xb, t)
        return float(lo), float(hi)

    def source(self, t: float) -> np.ndarray | None:
        if self.problem.source is None:
            return None
        hit = self._sources.get(t)
        if hit is None:
            if len(self._sources) > 4:
                self._sources.clear()
            hit = np.asarray(self.problem.source(self.x, t), dtype=float) * np.ones(self.grid.size)
            self._sources[t] = hit
        return hit

    def source_mass(self, t: float) -> float:
        s = self.source(t)
        return 0.0 if s is None else weighted_sum(s[self.inner], self.h)

    def mass(self, u: np.ndarray) -> float:
        return weighted_sum(u[self.inner], self.h)

    def _solve(self, st, fact, rhs, bc) -> np.ndarray:
        if self.periodic:
            return fact.solve(rhs)
        lo, hi = bc
        rhs[0] -= st[0] * lo
        rhs[-1] -= st[2] * hi
        out = np.empty(self.grid.size)
        out[0] = lo
        out[-1] = hi
        out[1:-1] = fact.solve(rhs)
        return out

    def _apply(self, st, v):
        return self.ax.apply_stencil(st, v)

    # -- diffusion
    def diffusion_half(self, u: np.ndarray, t_new: float, extra: np.ndarray | None = None) -> np.ndarray:
        """``(A - r Delta2) u1 = (A + r Delta2) u + (tau/2) A extra``, ``r = gamma tau / 4``."""
        rhs = self._apply(self.cn_rhs, u)
        if extra is not None:
            rhs += 0.5 * self.tau * self._apply(self.st_A, extra)
        return self._solve(self.cn_lhs, self.cn_fact, rhs, self.boundary(t_new))

    # -- convection
    def _flux(self, u: np.ndarray) -> np.ndarray:
        fu = self.problem.flux(self.x, u)
        if not np.all(np.isfinite(fu)):
            bad = int(np.flatnonzero(~np.isfinite(fu))[0])
            raise FloatingPointError(f"non-finite flux at node {bad} (u={u[bad]!r})")
        return fu

    def _div(self, u: np.ndarray, fu: np.ndarray) -> np.ndarray:
        lim = self.cfg.limiter
        if not lim.enabled:
            return self._apply(self.st_D, fu)
        ubar = self._apply(self.st_B, u)
        if not self.periodic:
            ubar = np.concatenate([u[:1], ubar, u[-1:]])
        alpha = float(np.max(np.abs(self.problem.dflux(self.x, u))))
        F = tvb_interface_fluxes(fu, u, self.problem.flux(self.x, ubar), ubar, alpha, lim.M_tvb, self.h, self.periodic)
        return flux_divergence(F, self.h, self.periodic)

    def convection(self, u: np.ndarray, t: float, dt: float) -> np.ndarray:
        """One SSP-RK2 compact step over ``[t, t + dt]``."""
        S0, S1 = self.source(t), self.source(t + dt)
        bc = self.boundary(t + dt)
        Bu = self._apply(self.st_B, u)
        fu = self._flux(u)
        div0 = self._div(u, fu)
        rhs = Bu - dt * div0
        if S0 is not None:
            rhs += dt * self._apply(self.st_B, S0)
        u2 = self._solve(self.st_B, self.B_fact, rhs, bc)
        div1 = self._div(u2, self._flux(u2))
        rhs = Bu - (0.5 * dt) * (div0 + div1)
        if S0 is not None:
            rhs += (0.5 * dt) * self._apply(self.st_B, S0 + S1)
        return self._solve(self.st_B, self.B_fact, rhs, bc)

    def substep_count(self, u: np.ndarray) -> int:
        K = self.cfg.substeps.K
        if self.cfg.cfl.auto_substeps:
            speed = float(np.max(np.abs(self.problem.dflux(self.x, u))))
            K = max(K, math.ceil(self.tau * speed / self.h / self.cfg.cfl.C0 - 1e-12))
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

    # -- composition
    def predict(self, u: np.ndarray, t: float, extra: np.ndarray | None = None) -> np.ndarray:
        u1 = self.diffusion_half(u, t + 0.5 * self.tau, extra)
        u3 = self.substep_convection(u1, t)
        return self.diffusion_half(u3, t + self.tau, extra)

    def reset(self) -> None:
        """Forget any history (multipliers, previous levels)."""

    def advance(self, u: np.ndarray, t: float) -> tuple[np.ndarray, StepDiagnostics]:
        return self.predict(u, t), StepDiagnostics(substeps=self.last_substeps)

    def mass_target(self, u: np.ndarray, t: float) -> float:
        return self.mass(u) + 0.5 * self.tau * (self.source_mass(t) + self.source_mass(t + self.tau))


def _interior_only(v: np.ndarray, periodic: bool) -> np.ndarray:
    if not periodic:
        v = v.copy()
        v[0] = v[-1] = 0.0
    return v


class BPSplitting1D(Splitting1D):
    """BP-HOC-Splitting: HOC-Splitting predictor plus the cut-off correction."""

    name = "bp_hoc_splitting"
    zero_feedback_default = True

    def __init__(self, problem, grid, tau, cfg: SchemeConfig = SchemeConfig()):
        super().__init__(problem, grid, tau, cfg)
        if self.bounds is None:
            raise ValueError(f"{self.name} needs bounds; {problem.name} defines none")
        zf = cfg.zero_multiplier_in_predictor
        self.zero_feedback = self.zero_feedback_default if zf is None else bool(zf)
        self.reset()

    def reset(self) -> None:
        self.state = MultiplierState.zeros(self.grid.size)

    def _feedback(self, u: np.ndarray) -> np.ndarray | None:
        if self.zero_feedback or not np.any(self.state.lam):
            return None
        return _interior_only(feedback(self.state, u, self.bounds), self.periodic)

    def _diag(self, u: np.ndarray) -> StepDiagnostics:
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
        return u_new, self._diag(u_new)


class BPMCSplitting1D(BPSplitting1D):
    """BP-MC-HOC-Splitting: adds the scalar multiplier that restores the mass identity."""

    name = "bpmc_hoc_splitting"
    zero_feedback_default = False

    def advance(self, u, t):
        fb = self._feedback(u)
        xi = self.state.xi
        extra = fb
        if xi != 0.0:
            extra = (0.0 if fb is None else fb) + _interior_only(np.full(self.grid.size, xi), self.periodic)
        pred = self.predict(u, t, extra)
        if self.periodic:
            target = self.mass_target(u, t)
        else:
            # Dirichlet: the boundary flux is not controlled, so target the
            # predictor's mass with the injected multiplier source removed
            target = self.mass(pred) - self.tau * (0.0 if extra is None else self.mass(extra))
        self.last_target = target
        u_new, self.state = bpmc_correct(
            pred, self.state, self.bounds, self.tau, target, self.h, fb, self.cfg.secant, self.inner
        )
        return u_new, self._diag(u_new)


class BPBDF2HOC1D(Splitting1D):
    """BDF2 implicit-diffusion / extrapolated-convection compact scheme with BP correction.

    The first step is the first-order IMEX variant (backward Euler diffusion,
    forward Euler convection).  ``correct=False`` gives the plain baseline.
    """

    name = "bp_bdf2_hoc"

    def __init__(self, problem, grid, tau, cfg: SchemeConfig = SchemeConfig(), correct: bool = True):
        super().__init__(problem, grid, tau, cfg)
        self.correct = correct and self.bounds is not None
        zf = cfg.zero_multiplier_in_predictor
        self.zero_feedback = True if zf is None else bool(zf)
        g, h = self.gamma, self.h
        self._systems = {}
        for c in (1.0, 1.5):
            a = c / self.tau
            st = (a / 12.0 - g / h**2, 10.0 * a / 12.0 + 2.0 * g / h**2, a / 12.0 - g / h**2)
            self._systems[c] = (st, self.ax.factored(st))
        self.reset()

    def reset(self) -> None:
        self.state = MultiplierState.zeros(self.grid.size)
        self.u_prev: np.ndarray | None = None

    def flux_derivative(self, v: np.ndarray) -> np.ndarray:
        """``B^{-1} Dhat f(v)`` at every stored node."""
        fv = self._flux(v)
        rhs = self._apply(self.st_D, fv)
        if self.periodic:
            return self.B_fact.solve(rhs)
        return self._solve(self.st_B, self.B_fact, rhs, one_sided_derivative(fv, self.h))

    def advance(self, u, t):
        t1 = t + self.tau
        fb = None
        if self.correct and not self.zero_feedback and np.any(self.state.lam):
            fb = _interior_only(feedback(self.state, u, self.bounds), self.periodic)
        if self.u_prev is None:
            c, factor = 1.0, self.tau
            bracket = u / self.tau - self.flux_derivative(u)
        else:
            c, factor = 1.5, 2.0 * self.tau / 3.0
            bracket = (4.0 * u - self.u_prev) / (2.0 * self.tau) - self.flux_derivative(2.0 * u - self.u_prev)
        S1 = self.source(t1)
        if S1 is not None:
            bracket += S1
        if fb is not None:
            bracket += fb
        st, fact = self._systems[c]
        pred = self._solve(st, fact, self._apply(self.st_A, bracket), self.boundary(t1))
        self.u_prev = u
        if not self.correct:
            return pred, StepDiagnostics()
        u_new, self.state = bp_correct(pred, self.state, self.bounds, factor, fb)
        lam = self.state.lam
        return u_new, StepDiagnostics(clipped=int(np.count_nonzero(lam)), max_lambda=float(lam.max(initial=0.0)))


SCHEMES_1D = {
    "hoc_splitting": Splitting1D,
    "bp_hoc_splitting": BPSplitting1D,
    "bpmc_hoc_splitting": BPMCSplitting1D,
    "bp_bdf2_hoc": BPBDF2HOC1D,
}


def make_stepper_1d(name: str, problem: ProblemSpec, grid: Grid1D, tau: float, cfg: SchemeConfig = SchemeConfig()):
    try:
        cls = SCHEMES_1D[name]
    except KeyError:
        raise KeyError(f"unknown 1D scheme {name!r}") from None
    return cls(problem, grid, tau, cfg)


# ------------------------------------------------------- grid-function API


def _adhoc_problem(grid: Grid1D, gamma: float, flux: FluxModel | None = None, source: SourceModel | None = None, bc=None):
    flux = flux or FluxModel(lambda x, u: np.zeros_like(u), lambda x, u: np.zeros_like(u))
    return ProblemSpec(
        name="adhoc",
        dim=1,
        domain=((grid.a, grid.a + grid.L),),
        t0=0.0,
        T=1.0,
        gamma=(gamma,),
        flux=flux.f,
        dflux=flux.dfdu,
        initial=lambda x: np.zeros_like(x),
        source=None if source is None else source.S,
        boundary=grid.boundary,
        boundary_values=bc,
    )


def _bc_provider(u: GridFunction):
    if u.grid.periodic:
        return None
    if u.boundary_values is not None:
        return u.boundary_values
    lo, hi = float(u.values[0]), float(u.values[-1])
    return lambda x, t: np.array([lo, hi])


def cn_diffusion_half_step(
    u: GridFunction, gamma: float, tau: float, extra_source: GridFunction | None = None, t_new: float = 0.0
) -> GridFunction:
    """Compact Crank-Nicolson step of length ``tau/2`` for ``u_t = gamma u_xx + extra``.

    Dirichlet values at ``t_new`` come from ``u.boundary_values`` (or are
    frozen at the current boundary values when no provider is attached).
    """
    if extra_source is not None and extra_source.grid != u.grid:
        raise ValueError("extra source lives on a different grid")
    st = Splitting1D(_adhoc_problem(u.grid, gamma, bc=_bc_provider(u)), u.grid, tau)
    extra = None if extra_source is None else _interior_only(extra_source.values, u.grid.periodic)
    return GridFunction(u.grid, st.diffusion_half(u.values, t_new, extra), u.boundary_values)


def ssp_rk2_convection_step(
    u: GridFunction,
    flux: FluxModel,
    source: SourceModel | None,
    t_n: float,
    tau: float,
    limiter: LimiterConfig = LimiterConfig(),
) -> GridFunction:
    prob = _adhoc_problem(u.grid, 1.0, flux, source, _bc_provider(u))
    st = Splitting1D(prob, u.grid, tau, SchemeConfig(limiter=limiter))
    return GridFunction(u.grid, st.convection(u.values, t_n, tau), u.boundary_values)


def substep_convection(
    u: GridFunction,
    flux: FluxModel,
    source: SourceModel | None,
    t_n: float,
    tau: float,
    cfg: SubstepConfig = SubstepConfig(),
    limiter: LimiterConfig = LimiterConfig(),
) -> GridFunction:
    prob = _adhoc_problem(u.grid, 1.0, flux, source, _bc_provider(u))
    st = Splitting1D(prob, u.grid, tau, SchemeConfig(substeps=cfg, limiter=limiter))
    return GridFunction(u.grid, st.substep_convection(u.values, t_n), u.boundary_values)


def hoc_splitting_step(u: GridFunction, problem: ProblemSpec, tau: float, cfg: SchemeConfig = SchemeConfig(), t_n: float | None = None) -> GridFunction:
    st = Splitting1D(problem, u.grid, tau, cfg)
    t = problem.t0 if t_n is None else t_n
    return GridFunction(u.grid, st.predict(u.values, t), u.boundary_values)


def _bp_step(cls, u, state, problem, tau, cfg, t_n):
    st = cls(problem, u.grid, tau, cfg)
    st.state = state
    t = problem.t0 if t_n is None else t_n
    t0 = time.perf_counter()
    vals, diag = st.advance(u.values, t)
    diag.wall = time.perf_counter() - t0
    diag.time = t + tau
    return GridFunction(u.grid, vals, u.boundary_values), st.state, diag


def bp_hoc_splitting_step(u, state, problem, tau, cfg: SchemeConfig = SchemeConfig(), t_n=None):
    return _bp_step(BPSplitting1D, u, state, problem, tau, cfg, t_n)


def bpmc_hoc_splitting_step(u, state, problem, tau, cfg: SchemeConfig = SchemeConfig(), t_n=None):
    return _bp_step(BPMCSplitting1D, u, state, problem, tau, cfg, t_n)


def bp_bdf2_hoc_step(u_n: GridFunction, u_nm1: GridFunction | None, state, problem, tau, cfg: SchemeConfig = SchemeConfig(), t_n=None):
    """One BDF2 step; ``u_nm1=None`` takes the first-order start-up step."""
    st = BPBDF2HOC1D(problem, u_n.grid, tau, cfg)
    st.state = state
    st.u_prev = None if u_nm1 is None else u_nm1.values
    vals, _ = st.advance(u_n.values, problem.t0 if t_n is None else t_n)
    return GridFunction(u_n.grid, vals, u_n.boundary_values), st.state
