"""Uniform grids, grid functions and the discrete inner products.

Periodic grids store one value per node ``x_i = a + i*h`` for ``i = 1..N``
(node ``N`` is identified with node ``0``).  Dirichlet grids store all
``N + 1`` nodes ``i = 0..N``; the two end values are prescribed data and are
excluded from reductions.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Literal

import numpy as np

BoundaryMode = Literal["periodic", "dirichlet"]


class GridError(ValueError):
    """Raised for structurally incompatible grid functions."""


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on ``[a, a + L]`` with ``N`` cells."""

    L: float
    N: int
    a: float = 0.0
    boundary: BoundaryMode = "periodic"

    def __post_init__(self):
        if self.N < 4:
            raise GridError(f"need at least 4 cells, got N={self.N}")
        if not self.L > 0:
            raise GridError(f"domain length must be positive, got {self.L}")
        if self.boundary not in ("periodic", "dirichlet"):
            raise GridError(f"unknown boundary mode {self.boundary!r}")

    @property
    def h(self) -> float:
        return self.L / self.N

    @property
    def periodic(self) -> bool:
        return self.boundary == "periodic"

    @property
    def size(self) -> int:
        """Number of stored values."""
        return self.N if self.periodic else self.N + 1

    @property
    def x(self) -> np.ndarray:
        if self.periodic:
            idx = np.arange(1, self.N + 1)
        else:
            idx = np.arange(0, self.N + 1)
        return self.a + idx * self.h

    @property
    def interior(self) -> slice:
        """Slice of the stored values that carry unknowns."""
        return slice(None) if self.periodic else slice(1, -1)

    def refined(self, factor: int = 2) -> "Grid1D":
        return Grid1D(self.L, self.N * factor, self.a, self.boundary)


@dataclass(frozen=True)
class Grid2D:
    """Tensor product of two :class:`Grid1D` axes; arrays are indexed ``[i, j]``."""

    gx: Grid1D
    gy: Grid1D

    def __post_init__(self):
        if self.gx.boundary != self.gy.boundary:
            raise GridError("mixed boundary modes across axes are not supported")

    @property
    def boundary(self) -> BoundaryMode:
        return self.gx.boundary

    @property
    def periodic(self) -> bool:
        return self.gx.periodic

    @property
    def h(self) -> float:
        return self.gx.h * self.gy.h

    @property
    def shape(self) -> tuple[int, int]:
        return (self.gx.size, self.gy.size)

    @property
    def interior(self) -> tuple[slice, slice]:
        return (self.gx.interior, self.gy.interior)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.gx.x, self.gy.x, indexing="ij")

    def refined(self, factor: int = 2) -> "Grid2D":
        return Grid2D(self.gx.refined(factor), self.gy.refined(factor))


@dataclass(frozen=True)
class TimeGrid:
    """Uniform partition of ``[t0, T]`` into ``Nt`` steps."""

    T: float
    Nt: int
    t0: float = 0.0

    def __post_init__(self):
        if self.Nt < 1:
            raise GridError(f"need at least one time step, got Nt={self.Nt}")
        if not self.T > self.t0:
            raise GridError(f"final time {self.T} must exceed start time {self.t0}")

    @property
    def tau(self) -> float:
        return (self.T - self.t0) / self.Nt

    def t(self, n: float) -> float:
        return self.t0 + n * self.tau

    def half(self, n: int) -> float:
        return self.t(n + 0.5)


@dataclass(frozen=True)
class GridFunction:
    """Nodal values on a 1D or 2D grid.

    ``boundary_values`` is only used by Dirichlet grids; it maps
    ``(coordinates..., t)`` to prescribed values.
    """

    grid: Grid1D | Grid2D
    values: np.ndarray
    boundary_values: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        expected = (self.grid.size,) if isinstance(self.grid, Grid1D) else self.grid.shape
        if values.shape != expected:
            raise GridError(f"values have shape {values.shape}, grid expects {expected}")
        object.__setattr__(self, "values", values)

    @property
    def boundary(self) -> BoundaryMode:
        return self.grid.boundary

    def value(self, *index: int) -> float:
        """Value at a node; indices wrap on periodic grids (1-based node labels)."""
        if self.grid.periodic:
            shape = self.values.shape
            # node label k is stored at position k - 1
            idx = tuple((k - 1) % n for k, n in zip(index, shape))
            return float(self.values[idx])
        return float(self.values[index])

    @classmethod
    def from_function(cls, grid, func, *args, **kwargs) -> "GridFunction":
        if isinstance(grid, Grid1D):
            vals = func(grid.x, *args, **kwargs)
        else:
            X, Y = grid.mesh()
            vals = func(X, Y, *args, **kwargs)
        return cls(grid, np.broadcast_to(vals, grid.size if isinstance(grid, Grid1D) else grid.shape).copy())

    def to_csv(self, path: str | Path) -> None:
        write_csv(self, path)

    def to_binary(self, path: str | Path) -> None:
        write_binary(self, path)


def _cell_volume(grid: Grid1D | Grid2D) -> float:
    return grid.h


def _interior(v: GridFunction) -> np.ndarray:
    return v.values[v.grid.interior]


def _check_same_grid(v: GridFunction, w: GridFunction) -> None:
    if v.grid != w.grid:
        raise GridError("grid functions live on different grids")


def inner_product(v: GridFunction, w: GridFunction) -> float:
    """Discrete L2 inner product ``h * sum(v * w)`` over the unknown nodes.

    The sum runs in ascending (row-major) index order so repeated calls are
    bit-reproducible.
    """
    _check_same_grid(v, w)
    return weighted_sum(_interior(v) * _interior(w), _cell_volume(v.grid))


def weighted_sum(values: np.ndarray, h: float) -> float:
    """``h * sum(values)`` accumulated strictly in ascending index order."""
    flat = np.ascontiguousarray(values, dtype=float).ravel()
    if flat.size == 0:
        return 0.0
    return h * float(np.cumsum(flat)[-1])


def norms(v: GridFunction) -> dict[str, float]:
    """l2, max-norm, mass, min and max of a grid function."""
    vals = _interior(v)
    if vals.size == 0:
        raise GridError("empty grid function")
    h = _cell_volume(v.grid)
    return {
        "l2": math.sqrt(weighted_sum(vals * vals, h)),
        "linf": float(np.max(np.abs(vals))),
        "mass": weighted_sum(vals, h),
        "min": float(np.min(vals)),
        "max": float(np.max(vals)),
    }


def write_csv(v: GridFunction, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        if isinstance(v.grid, Grid1D):
            writer.writerow(["i", "x", "value"])
            for i, (x, val) in enumerate(zip(v.grid.x, v.values)):
                writer.writerow([i, repr(float(x)), repr(float(val))])
        else:
            writer.writerow(["i", "j", "x", "y", "value"])
            xs, ys = v.grid.gx.x, v.grid.gy.x
            for i, x in enumerate(xs):
                for j, y in enumerate(ys):
                    writer.writerow([i, j, repr(float(x)), repr(float(y)), repr(float(v.values[i, j]))])


def write_binary(v: GridFunction, path: str | Path) -> None:
    """Flat little-endian float64 dump in row-major order."""
    np.ascontiguousarray(v.values, dtype="<f8").tofile(str(path))


def read_binary(path: str | Path, grid: Grid1D | Grid2D) -> GridFunction:
    data = np.fromfile(str(path), dtype="<f8")
    shape = (grid.size,) if isinstance(grid, Grid1D) else grid.shape
    return GridFunction(grid, data.reshape(shape))
