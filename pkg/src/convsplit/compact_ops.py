"""Fourth-order compact difference operators.

Per axis with spacing ``h``::

    Dhat   v_i = (v_{i+1} - v_{i-1}) / (2h)
    Delta2 v_i = (v_{i+1} - 2 v_i + v_{i-1}) / h^2
    A      v_i = (v_{i-1} + 10 v_i + v_{i+1}) / 12     (I + h^2/12 Delta2)
    B      v_i = (v_{i-1} + 4 v_i + v_{i+1}) / 6       (I + h^2/6 Delta2)

so that ``A^{-1} Delta2`` and ``B^{-1} Dhat`` approximate the second and first
derivative to fourth order.  Two-dimensional products are never formed; they
are applied one axis at a time.

Array conventions used by the schemes: on a periodic axis ``apply`` and
``solve`` keep the array shape.  On a Dirichlet axis ``apply`` returns only the
interior rows (the rows where equations live) and ``solve`` takes interior
rows plus the two boundary slabs and returns the full array.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numba
import numpy as np

from .grid import Grid1D, Grid2D, GridError, GridFunction
from .linalg import CyclicTridiagonalSystem, FactoredSystem, factor

Op = Literal["Dhat", "Delta2", "A", "B"]
Stencil = tuple[float, float, float]


def stencil(op: Op, h: float) -> Stencil:
    if op == "Dhat":
        return (-0.5 / h, 0.0, 0.5 / h)
    if op == "Delta2":
        return (1.0 / h**2, -2.0 / h**2, 1.0 / h**2)
    if op == "A":
        return (1.0 / 12.0, 10.0 / 12.0, 1.0 / 12.0)
    if op == "B":
        return (1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0)
    raise ValueError(f"unknown operator {op!r}")


def cn_stencils(h: float, gamma: float, tau: float) -> tuple[Stencil, Stencil]:
    """Stencils of ``A - (gamma tau / 4) Delta2`` and ``A + (gamma tau / 4) Delta2``."""
    r = gamma * tau / (4.0 * h * h)
    lhs = (1.0 / 12.0 - r, 10.0 / 12.0 + 2.0 * r, 1.0 / 12.0 - r)
    rhs = (1.0 / 12.0 + r, 10.0 / 12.0 - 2.0 * r, 1.0 / 12.0 + r)
    return lhs, rhs


@lru_cache(maxsize=256)
def factored(n: int, mode: str, sub: float, diag: float, sup: float) -> FactoredSystem:
    """Factorization cache keyed by size, mode and stencil."""
    return factor(CyclicTridiagonalSystem(n, sub, diag, sup, mode=mode))


def _sl(ndim: int, axis: int, s: slice) -> tuple:
    idx = [slice(None)] * ndim
    idx[axis] = s
    return tuple(idx)


@numba.njit(cache=True)
def _apply_axis0(lo, mid, hi, v, periodic):
    n, m = v.shape
    if periodic:
        out = np.empty((n, m))
        for i in range(n):
            im = i - 1 if i > 0 else n - 1
            ip = i + 1 if i < n - 1 else 0
            for j in range(m):
                out[i, j] = lo * v[im, j] + mid * v[i, j] + hi * v[ip, j]
        return out
    out = np.empty((n - 2, m))
    for i in range(1, n - 1):
        for j in range(m):
            out[i - 1, j] = lo * v[i - 1, j] + mid * v[i, j] + hi * v[i + 1, j]
    return out


@numba.njit(cache=True)
def _apply_axis1(lo, mid, hi, v, periodic):
    n, m = v.shape
    if periodic:
        out = np.empty((n, m))
        for i in range(n):
            out[i, 0] = lo * v[i, m - 1] + mid * v[i, 0] + hi * v[i, 1]
            for j in range(1, m - 1):
                out[i, j] = lo * v[i, j - 1] + mid * v[i, j] + hi * v[i, j + 1]
            out[i, m - 1] = lo * v[i, m - 2] + mid * v[i, m - 1] + hi * v[i, 0]
        return out
    out = np.empty((n, m - 2))
    for i in range(n):
        for j in range(1, m - 1):
            out[i, j - 1] = lo * v[i, j - 1] + mid * v[i, j] + hi * v[i, j + 1]
    return out


def _apply(st: Stencil, v: np.ndarray, axis: int, periodic: bool) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    lo, mid, hi = (float(c) for c in st)
    if v.ndim == 1:
        return _apply_axis0(lo, mid, hi, np.ascontiguousarray(v).reshape(-1, 1), periodic)[:, 0]
    if v.ndim != 2:
        raise ValueError("only 1D and 2D arrays are supported")
    kernel = _apply_axis0 if axis == 0 else _apply_axis1
    return kernel(lo, mid, hi, np.ascontiguousarray(v), periodic)


def apply_periodic(st: Stencil, v: np.ndarray, axis: int = 0) -> np.ndarray:
    """Apply a three-point stencil with wrap-around along ``axis``."""
    return _apply(st, v, axis, True)


def apply_dirichlet(st: Stencil, v: np.ndarray, axis: int = 0) -> np.ndarray:
    """Apply a three-point stencil at the interior rows of ``axis``."""
    return _apply(st, v, axis, False)


@dataclass(frozen=True)
class CompactAxis:
    """Compact operators and cached solvers along one grid axis."""

    grid: Grid1D
    _cn_cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def h(self) -> float:
        return self.grid.h

    @property
    def periodic(self) -> bool:
        return self.grid.periodic

    @property
    def n_unknowns(self) -> int:
        return self.grid.N if self.periodic else self.grid.N - 1

    def apply_stencil(self, st: Stencil, v: np.ndarray, axis: int = 0) -> np.ndarray:
        if self.periodic:
            return apply_periodic(st, v, axis)
        return apply_dirichlet(st, v, axis)

    def apply(self, op: Op, v: np.ndarray, axis: int = 0) -> np.ndarray:
        return self.apply_stencil(stencil(op, self.h), v, axis)

    def factored(self, st: Stencil) -> FactoredSystem:
        mode = "cyclic" if self.periodic else "dirichlet"
        return factored(self.n_unknowns, mode, *map(float, st))

    def solve_stencil(self, st: Stencil, rhs: np.ndarray, axis: int = 0, lo=None, hi=None) -> np.ndarray:
        """Solve ``st * u = rhs`` along ``axis``.

        On a Dirichlet axis ``rhs`` holds the interior rows and ``lo``/``hi``
        the known boundary slabs of ``u``; their couplings are moved to the
        right-hand side and the full array (boundaries included) is returned.
        """
        fact = self.factored(st)
        if self.periodic:
            return fact.solve(rhs, axis=axis)
        nd = rhs.ndim
        rhs = np.array(rhs, dtype=float)
        lo = np.asarray(0.0 if lo is None else lo, dtype=float)
        hi = np.asarray(0.0 if hi is None else hi, dtype=float)
        rhs[_sl(nd, axis, slice(0, 1))] -= st[0] * np.expand_dims(lo, axis) if nd > 1 else st[0] * lo
        rhs[_sl(nd, axis, slice(-1, None))] -= st[2] * np.expand_dims(hi, axis) if nd > 1 else st[2] * hi
        inner = fact.solve(rhs, axis=axis)
        if nd == 1:
            return np.concatenate([np.atleast_1d(lo), inner, np.atleast_1d(hi)])
        shape_lo = list(inner.shape)
        shape_lo[axis] = 1
        return np.concatenate(
            [np.broadcast_to(np.expand_dims(lo, axis), shape_lo), inner, np.broadcast_to(np.expand_dims(hi, axis), shape_lo)],
            axis=axis,
        )

    def solve(self, op: Op, rhs: np.ndarray, axis: int = 0, lo=None, hi=None) -> np.ndarray:
        if op not in ("A", "B"):
            raise ValueError(f"only A and B can be inverted, got {op!r}")
        return self.solve_stencil(stencil(op, self.h), rhs, axis, lo, hi)

    def cn_systems(self, gamma: float, tau: float) -> tuple[FactoredSystem, Stencil, Stencil]:
        """Factored ``A - (gamma tau/4) Delta2`` plus both CN stencils, cached per ``(gamma, tau)``."""
        key = (float(gamma), float(tau))
        hit = self._cn_cache.get(key)
        if hit is None:
            lhs, rhs = cn_stencils(self.h, gamma, tau)
            hit = (self.factored(lhs), lhs, rhs)
            self._cn_cache[key] = hit
        return hit


class CompactOperatorSet:
    """Grid-function level interface to the compact operators of a 1D/2D grid."""

    def __init__(self, grid: Grid1D | Grid2D):
        self.grid = grid
        if isinstance(grid, Grid1D):
            self.axes = {"x": CompactAxis(grid)}
        else:
            self.axes = {"x": CompactAxis(grid.gx), "y": CompactAxis(grid.gy)}

    def _axis(self, axis: str) -> tuple[CompactAxis, int]:
        if axis not in self.axes:
            raise GridError(f"axis {axis!r} not present on a {len(self.axes)}D grid")
        return self.axes[axis], ("x", "y").index(axis)

    def _embed(self, v: GridFunction, inner: np.ndarray, index: int) -> np.ndarray:
        out = v.values.copy()
        sl = [slice(None)] * out.ndim
        sl[index] = slice(1, -1)
        out[tuple(sl)] = inner
        return out

    def apply(self, op: Op, axis: str, v: GridFunction) -> GridFunction:
        ax, index = self._axis(axis)
        res = ax.apply(op, v.values, axis=index)
        if not ax.periodic:
            res = self._embed(v, res, index)
        return GridFunction(v.grid, res, v.boundary_values)

    def invert(self, op: Op, axis: str, rhs: GridFunction) -> GridFunction:
        ax, index = self._axis(axis)
        if ax.periodic:
            return GridFunction(rhs.grid, ax.solve(op, rhs.values, axis=index), rhs.boundary_values)
        vals = rhs.values
        lo = np.take(vals, 0, axis=index)
        hi = np.take(vals, -1, axis=index)
        inner = vals[_sl(vals.ndim, index, slice(1, -1))]
        return GridFunction(rhs.grid, ax.solve(op, inner, axis=index, lo=lo, hi=hi), rhs.boundary_values)

    def build_cn_systems(self, axis: str, gamma: float, tau: float) -> dict:
        if not gamma > 0 or not tau > 0:
            raise ValueError("gamma and tau must be positive")
        ax, _ = self._axis(axis)
        lhs_fact, lhs, rhs = ax.cn_systems(gamma, tau)
        return {"lhs": lhs_fact, "lhs_stencil": lhs, "rhs_stencil": rhs}
