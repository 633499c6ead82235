"""Benchmark problems: Burgers (1D and 2D), Fokker-Planck, Buckley-Leverett, vortex shear.

Each problem is a :class:`ProblemSpec` value object.  Callables take
coordinate arrays first (``x`` in 1D, ``x, y`` in 2D) followed by ``u`` or
``t``; all are vectorised over numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np
from scipy.special import expit

from .grid import Grid1D, Grid2D
from .multipliers import BoundsSpec


@dataclass(frozen=True)
class ProblemSpec:
    """Definition of ``u_t + f(u)_x [+ g(u)_y] = gamma * Laplace(u) + S``."""

    name: str
    dim: int
    domain: tuple[tuple[float, float], ...]
    t0: float
    T: float
    gamma: tuple[float, ...]
    flux: Callable
    dflux: Callable
    initial: Callable
    flux_y: Callable | None = None
    dflux_y: Callable | None = None
    source: Callable | None = None
    boundary: Literal["periodic", "dirichlet"] = "periodic"
    boundary_values: Callable | None = None
    exact: Callable | None = None
    bounds: BoundsSpec | None = None
    entropy: Callable | None = None
    limiter_default: bool = False
    description: str = ""
    extras: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("only 1D and 2D problems are supported")
        if len(self.domain) != self.dim or len(self.gamma) != self.dim:
            raise ValueError("domain and gamma must have one entry per dimension")
        if any(g <= 0 for g in self.gamma):
            raise ValueError("diffusion coefficients must be positive")
        if self.dim == 2 and self.flux_y is None:
            raise ValueError("2D problems need a y-flux")
        if self.boundary == "dirichlet" and self.boundary_values is None:
            raise ValueError("Dirichlet problems need a boundary-value provider")

    @property
    def duration(self) -> float:
        return self.T - self.t0

    def grid(self, N: int) -> Grid1D | Grid2D:
        axes = [Grid1D(b - a, N, a, self.boundary) for a, b in self.domain]
        return axes[0] if self.dim == 1 else Grid2D(*axes)

    def sample(self, func: Callable, grid, *args) -> np.ndarray:
        if self.dim == 1:
            return np.asarray(func(grid.x, *args), dtype=float) * np.ones(grid.size)
        X, Y = grid.mesh()
        return np.asarray(func(X, Y, *args), dtype=float) * np.ones(grid.shape)

    def initial_values(self, grid) -> np.ndarray:
        return self.sample(self.initial, grid)

    def exact_values(self, grid, t: float) -> np.ndarray:
        if self.exact is None:
            raise ValueError(f"problem {self.name!r} has no exact solution")
        return self.sample(self.exact, grid, t)

    def max_wave_speed(self, grid, u: np.ndarray) -> tuple[float, ...]:
        """``max |f'|`` (and ``max |g'|``) over the nodes of ``u``."""
        if self.dim == 1:
            return (float(np.max(np.abs(self.dflux(grid.x, u)))),)
        X, Y = grid.mesh()
        return (
            float(np.max(np.abs(self.dflux(X, Y, u)))),
            float(np.max(np.abs(self.dflux_y(X, Y, u)))),
        )


# ---------------------------------------------------------------- 1D Burgers


def _burgers_flux(x, u):
    return 0.5 * u * u


def _burgers_dflux(x, u):
    return np.asarray(u, dtype=float) * np.ones_like(np.asarray(x, dtype=float))


def burgers_case1_exact(x, t, gamma=5e-3):
    """``(x/t) / (1 + sqrt(t) exp((x^2 - t/4) / (4 gamma t)))``, overflow-safe."""
    x = np.asarray(x, dtype=float)
    z = 0.5 * np.log(t) + (x * x - 0.25 * t) / (4.0 * gamma * t)
    return (x / t) * expit(-z)


def burgers1d_case1(gamma: float = 5e-3) -> ProblemSpec:
    exact = lambda x, t: burgers_case1_exact(x, t, gamma)  # noqa: E731
    return ProblemSpec(
        name="burgers1d_case1",
        dim=1,
        domain=((0.0, 3.0),),
        t0=1.0,
        T=4.0,
        gamma=(gamma,),
        flux=_burgers_flux,
        dflux=_burgers_dflux,
        initial=lambda x: exact(x, 1.0),
        boundary="dirichlet",
        boundary_values=exact,
        exact=exact,
        bounds=BoundsSpec.positivity(),
        description="viscous Burgers, travelling front, Dirichlet data from the exact solution",
    )


def burgers_case2_exact(x, t, gamma=1e-3):
    return 1.5 - 0.5 * np.tanh(0.5 * (np.asarray(x, dtype=float) - 1.5 * t) / (2.0 * gamma))


def burgers1d_case2(gamma: float = 1e-3) -> ProblemSpec:
    exact = lambda x, t: burgers_case2_exact(x, t, gamma)  # noqa: E731
    return ProblemSpec(
        name="burgers1d_case2",
        dim=1,
        domain=((-1.0, 3.0),),
        t0=0.0,
        T=1.0,
        gamma=(gamma,),
        flux=_burgers_flux,
        dflux=_burgers_dflux,
        initial=lambda x: exact(x, 0.0),
        boundary="dirichlet",
        boundary_values=exact,
        exact=exact,
        bounds=BoundsSpec(1.0, 2.0),
        description="viscous Burgers, tanh front between the states 2 and 1",
    )


# ------------------------------------------------------------ Fokker-Planck

FP_EPS = 1e-14


def fp_entropy(x, u, h):
    """Discrete entropy ``h * sum(x^2/2 u + u log u + (1-u) log(1-u))``."""
    uc = np.clip(u, FP_EPS, 1.0 - FP_EPS)
    dens = 0.5 * x * x * u + uc * np.log(uc) + (1.0 - uc) * np.log(1.0 - uc)
    return h * float(np.cumsum(dens)[-1])


def fokker_planck() -> ProblemSpec:
    return ProblemSpec(
        name="fokker_planck",
        dim=1,
        domain=((-2.0 * math.pi, 2.0 * math.pi),),
        t0=0.0,
        T=2.0,
        gamma=(1.0,),
        flux=lambda x, u: -x * u * (1.0 - u),
        dflux=lambda x, u: -x * (1.0 - 2.0 * u),
        initial=lambda x: np.exp(-x * x / 0.4),
        bounds=BoundsSpec(0.0, 1.0),
        entropy=fp_entropy,
        description="u_t = (x u (1-u) + u_x)_x, periodic, entropy dissipating",
    )


# ----------------------------------------------------------------- 2D Burgers


def burgers2d_exact(x, y, t, gamma=5e-3, sigma=0.07, x0=0.5, y0=0.5):
    s2 = sigma * sigma
    b = 2.0 * s2 + 4.0 * gamma * t
    X = x - t - x0
    Y = y - t - y0
    return s2 / (s2 + 2.0 * gamma * t) * np.exp(-(X * X + Y * Y) / b)


def burgers2d_source(x, y, t, gamma=5e-3, sigma=0.07, x0=0.5, y0=0.5):
    # the exact field solves u_t + u_x + u_y = gamma * Laplace(u), so the
    # residual of the Burgers operator is (u - 1)(u_x + u_y)
    b = 2.0 * sigma * sigma + 4.0 * gamma * t
    u = burgers2d_exact(x, y, t, gamma, sigma, x0, y0)
    ux_plus_uy = -2.0 * ((x - t - x0) + (y - t - y0)) / b * u
    return (u - 1.0) * ux_plus_uy


def burgers2d(gamma: float = 5e-3, sigma: float = 0.07, x0: float = 0.5, y0: float = 0.5) -> ProblemSpec:
    exact = lambda x, y, t: burgers2d_exact(x, y, t, gamma, sigma, x0, y0)  # noqa: E731
    flux = lambda x, y, u: 0.5 * u * u  # noqa: E731
    dflux = lambda x, y, u: u * np.ones_like(x)  # noqa: E731
    return ProblemSpec(
        name="burgers2d",
        dim=2,
        domain=((-1.0, 2.0), (-1.0, 2.0)),
        t0=0.0,
        T=0.6,
        gamma=(gamma, gamma),
        flux=flux,
        dflux=dflux,
        flux_y=flux,
        dflux_y=dflux,
        source=lambda x, y, t: burgers2d_source(x, y, t, gamma, sigma, x0, y0),
        initial=lambda x, y: exact(x, y, 0.0),
        exact=exact,
        bounds=BoundsSpec(0.0, 1.0),
        description="2D Burgers with a manufactured source; spreading Gaussian moving along (1, 1)",
    )


# ------------------------------------------------------------ Buckley-Leverett


def _bl_flux(x, y, u):
    d = u - 0.25
    return u + d * d * d


def _bl_dflux(x, y, u):
    d = u - 0.25
    return 1.0 + 3.0 * d * d


def buckley_leverett(gamma: float = 5e-3) -> ProblemSpec:
    def initial(x, y):
        return np.where((x - 0.25) ** 2 + (y - 2.25) ** 2 < 0.5, 1.0, 0.0)

    return ProblemSpec(
        name="buckley_leverett",
        dim=2,
        domain=((-2.0, 5.0), (-2.0, 5.0)),
        t0=0.0,
        T=1.0,
        gamma=(gamma, gamma),
        flux=_bl_flux,
        dflux=_bl_dflux,
        flux_y=lambda x, y, u: -(u + u * u),
        dflux_y=lambda x, y, u: -(1.0 + 2.0 * u),
        initial=initial,
        boundary="dirichlet",
        boundary_values=lambda x, y, t: np.zeros(np.broadcast(x, y).shape),
        bounds=BoundsSpec(0.0, 1.0),
        limiter_default=True,
        description="Buckley-Leverett type flux with a discontinuous disc of unit data",
    )


# --------------------------------------------------------------- vortex shear

_SQ2 = math.sqrt(2.0)


def vortex_velocity(x, y):
    """``(psi_y, -psi_x)`` for ``psi = sin(pi x) sin(pi y) / sqrt(2)``."""
    c1 = math.pi / _SQ2 * np.sin(math.pi * x) * np.cos(math.pi * y)
    c2 = -math.pi / _SQ2 * np.cos(math.pi * x) * np.sin(math.pi * y)
    return c1, c2


def _node_cached(func: Callable) -> Callable:
    """Memoise a coefficient field on the coordinate arrays it was last called with."""
    last: list = []

    def wrapped(x, y):
        if last and last[0] is x and last[1] is y:
            return last[2]
        val = func(x, y)
        if isinstance(x, np.ndarray) and isinstance(y, np.ndarray):
            last[:] = [x, y, val]
        return val

    return wrapped


def vortex_hump(gamma: float = 5e-5, sigma2: float = 1.6e-3, x0: float = 0.25, y0: float = 0.5) -> ProblemSpec:
    @_node_cached
    def c1(x, y):
        return math.pi / _SQ2 * np.sin(math.pi * x) * np.cos(math.pi * y)

    @_node_cached
    def c2(x, y):
        return -math.pi / _SQ2 * np.cos(math.pi * x) * np.sin(math.pi * y)

    return ProblemSpec(
        name="vortex_hump",
        dim=2,
        domain=((0.0, 1.0), (0.0, 1.0)),
        t0=0.0,
        T=2.0,
        gamma=(gamma, gamma),
        flux=lambda x, y, u: c1(x, y) * u,
        dflux=lambda x, y, u: c1(x, y) * np.ones_like(u),
        flux_y=lambda x, y, u: c2(x, y) * u,
        dflux_y=lambda x, y, u: c2(x, y) * np.ones_like(u),
        initial=lambda x, y: np.exp(-((x - x0) ** 2 + (y - y0) ** 2) / (2.0 * sigma2)),
        bounds=BoundsSpec(0.0, 1.0),
        description="Gaussian hump stretched by a divergence-free vortex field",
        extras={"sigma2": sigma2},
    )


REGISTRY: dict[str, Callable[..., ProblemSpec]] = {
    "burgers1d_case1": burgers1d_case1,
    "burgers1d_case2": burgers1d_case2,
    "fokker_planck": fokker_planck,
    "burgers2d": burgers2d,
    "buckley_leverett": buckley_leverett,
    "vortex_hump": vortex_hump,
}


def get_problem(name: str, **params) -> ProblemSpec:
    try:
        factory = REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; known: {', '.join(sorted(REGISTRY))}") from None
    return factory(**params)


def register(name: str, factory: Callable[..., ProblemSpec]) -> None:
    """Add a problem defined in code (e.g. a manufactured solution) to the registry."""
    if name in REGISTRY:
        raise KeyError(f"problem {name!r} already registered")
    REGISTRY[name] = factory
