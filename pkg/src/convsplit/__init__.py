"""Strang-splitting high-order compact schemes for nonlinear convection-diffusion equations."""

__version__ = "0.1.0"

from .grid import Grid1D, Grid2D, GridFunction, TimeGrid, inner_product, norms  # noqa: E402
from .multipliers import BoundsSpec, MultiplierState, SecantConfig  # noqa: E402
from .problems import ProblemSpec, get_problem  # noqa: E402

__all__ = [
    "Grid1D",
    "Grid2D",
    "GridFunction",
    "TimeGrid",
    "inner_product",
    "norms",
    "BoundsSpec",
    "MultiplierState",
    "SecantConfig",
    "ProblemSpec",
    "get_problem",
]
