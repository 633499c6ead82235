"""Direct solvers for constant-coefficient (cyclic) tridiagonal systems.

Every implicit stage of the schemes reduces to a matrix with rows
``a*x[i-1] + b*x[i] + c*x[i+1]``.  In cyclic mode the first row couples to
``x[n-1]`` and the last row to ``x[0]``; the corners are removed with a
Sherman-Morrison rank-one correction on top of a plain Thomas factorization,
so both factor and solve stay O(n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numba
import numpy as np


class SingularSystemError(np.linalg.LinAlgError):
    """A zero pivot (or a degenerate rank-one correction) was met."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


_PIVOT_TOL = 1e-14
_SM_TOL = 1e-12


@dataclass(frozen=True)
class CyclicTridiagonalSystem:
    """Constant-coefficient tridiagonal matrix ``(sub, diag, sup)`` of size ``n``.

    ``lower_corner``/``upper_corner`` default to ``sub``/``sup`` in cyclic
    mode (row 0 couples to ``x[n-1]`` through ``lower_corner``; row ``n-1``
    couples to ``x[0]`` through ``upper_corner``).
    """

    n: int
    sub: float
    diag: float
    sup: float
    mode: Literal["cyclic", "dirichlet"] = "cyclic"
    lower_corner: float | None = None
    upper_corner: float | None = None

    def __post_init__(self):
        if self.mode not in ("cyclic", "dirichlet"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.n < 3:
            raise ValueError(f"system size must be at least 3, got {self.n}")
        if self.mode == "cyclic":
            if self.lower_corner is None:
                object.__setattr__(self, "lower_corner", self.sub)
            if self.upper_corner is None:
                object.__setattr__(self, "upper_corner", self.sup)
        else:
            object.__setattr__(self, "lower_corner", 0.0)
            object.__setattr__(self, "upper_corner", 0.0)

    @property
    def dominant(self) -> bool:
        return abs(self.diag) > abs(self.sub) + abs(self.sup)

    @property
    def cyclic(self) -> bool:
        return self.mode == "cyclic" and (self.lower_corner != 0.0 or self.upper_corner != 0.0)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Apply the matrix along the first axis of ``x``."""
        x = np.asarray(x, dtype=float)
        y = self.diag * x
        y[1:] += self.sub * x[:-1]
        y[:-1] += self.sup * x[1:]
        y[0] += self.lower_corner * x[-1]
        y[-1] += self.upper_corner * x[0]
        return y

    def dense(self) -> np.ndarray:
        M = np.zeros((self.n, self.n))
        idx = np.arange(self.n)
        M[idx, idx] = self.diag
        M[idx[1:], idx[:-1]] = self.sub
        M[idx[:-1], idx[1:]] = self.sup
        M[0, -1] += self.lower_corner
        M[-1, 0] += self.upper_corner
        return M


@numba.njit(cache=True)
def _thomas_factor(n, a, b, c, b_first, b_last):
    cp = np.empty(n)
    w = np.empty(n)
    bad = -1
    piv = b_first
    if abs(piv) <= 1e-14 * (abs(b) + abs(a) + abs(c)):
        return cp, w, 0
    w[0] = 1.0 / piv
    cp[0] = c * w[0]
    for i in range(1, n):
        bi = b_last if i == n - 1 else b
        piv = bi - a * cp[i - 1]
        if abs(piv) <= 1e-14 * (abs(b) + abs(a) + abs(c)):
            bad = i
            break
        w[i] = 1.0 / piv
        cp[i] = c * w[i]
    return cp, w, bad


@numba.njit(cache=True)
def _thomas_vec(a, cp, w, d, out):
    n = d.shape[0]
    out[0] = d[0] * w[0]
    for i in range(1, n):
        out[i] = (d[i] - a * out[i - 1]) * w[i]
    for i in range(n - 2, -1, -1):
        out[i] -= cp[i] * out[i + 1]


@numba.njit(cache=True)
def _solve_vec(a, cp, w, cyclic, z, q, fac, d):
    out = np.empty(d.shape[0])
    _thomas_vec(a, cp, w, d, out)
    if cyclic:
        n = d.shape[0]
        s = (out[0] + q * out[n - 1]) * fac
        for i in range(n):
            out[i] -= s * z[i]
    return out


@numba.njit(cache=True)
def _solve_axis0(a, cp, w, cyclic, z, q, fac, d):
    # systems run down the rows; vectorised over the columns
    n, m = d.shape
    out = np.empty((n, m))
    for j in range(m):
        out[0, j] = d[0, j] * w[0]
    for i in range(1, n):
        wi = w[i]
        for j in range(m):
            out[i, j] = (d[i, j] - a * out[i - 1, j]) * wi
    for i in range(n - 2, -1, -1):
        ci = cp[i]
        for j in range(m):
            out[i, j] -= ci * out[i + 1, j]
    if cyclic:
        for j in range(m):
            s = (out[0, j] + q * out[n - 1, j]) * fac
            for i in range(n):
                out[i, j] -= s * z[i]
    return out


@numba.njit(cache=True)
def _solve_axis1(a, cp, w, cyclic, z, q, fac, d):
    m, n = d.shape
    out = np.empty((m, n))
    for r in range(m):
        row = out[r]
        _thomas_vec(a, cp, w, d[r], row)
        if cyclic:
            s = (row[0] + q * row[n - 1]) * fac
            for i in range(n):
                row[i] -= s * z[i]
    return out


@dataclass(frozen=True, eq=False)
class FactoredSystem:
    """Reusable factorization produced by :func:`factor`; immutable."""

    system: CyclicTridiagonalSystem
    cp: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)
    z: np.ndarray = field(repr=False)
    q: float = 0.0
    fac: float = 0.0

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def cyclic(self) -> bool:
        return self.system.cyclic

    def _args(self):
        return (self.system.sub, self.cp, self.w, self.cyclic, self.z, self.q, self.fac)

    def solve(self, rhs: np.ndarray, axis: int = 0) -> np.ndarray:
        """Solve along ``axis`` of a 1D or 2D right-hand side."""
        rhs = np.asarray(rhs, dtype=float)
        if rhs.shape[axis] != self.n:
            raise ValueError(f"rhs has length {rhs.shape[axis]} along axis {axis}, system has n={self.n}")
        if rhs.ndim == 1:
            return _solve_vec(*self._args(), rhs)
        if rhs.ndim != 2:
            raise ValueError("only 1D and 2D right-hand sides are supported")
        if axis == 0:
            return _solve_axis0(*self._args(), np.ascontiguousarray(rhs))
        return _solve_axis1(*self._args(), np.ascontiguousarray(rhs))


def factor(system: CyclicTridiagonalSystem) -> FactoredSystem:
    """Factor ``system`` once for repeated solves.

    Raises
    ------
    SingularSystemError
        If a pivot vanishes or the rank-one corner correction is degenerate.
    """
    n, a, b, c = system.n, float(system.sub), float(system.diag), float(system.sup)
    if not system.cyclic:
        cp, w, bad = _thomas_factor(n, a, b, c, b, b)
        if bad >= 0:
            raise SingularSystemError(f"zero pivot at row {bad}", bad)
        return FactoredSystem(system, cp, w, np.zeros(n))

    alpha = float(system.lower_corner)  # A[0, n-1]
    beta = float(system.upper_corner)  # A[n-1, 0]
    gamma = -b if b != 0.0 else -1.0
    cp, w, bad = _thomas_factor(n, a, b, c, b - gamma, b - alpha * beta / gamma)
    if bad >= 0:
        raise SingularSystemError(f"zero pivot at row {bad}", bad)
    u = np.zeros(n)
    u[0] = gamma
    u[-1] = beta
    z = np.empty(n)
    _thomas_vec(a, cp, w, u, z)
    q = alpha / gamma
    denom = 1.0 + z[0] + q * z[-1]
    if abs(denom) <= _SM_TOL * (1.0 + abs(z[0]) + abs(q * z[-1])):
        raise SingularSystemError("cyclic system is singular (degenerate corner correction)", n - 1)
    return FactoredSystem(system, cp, w, z, q, 1.0 / denom)


def solve(fact: FactoredSystem, rhs: np.ndarray) -> np.ndarray:
    rhs = np.asarray(rhs, dtype=float)
    if rhs.ndim != 1:
        raise ValueError("solve expects a single right-hand side; use solve_batch for many")
    return fact.solve(rhs)


def solve_batch(fact: FactoredSystem, rhs_rows: Sequence[np.ndarray] | np.ndarray) -> np.ndarray:
    """Solve one system per row of ``rhs_rows``; ordering is preserved.

    Every row runs through the same scalar recurrence as :func:`solve`, so the
    result is bit-identical to the sequential map.
    """
    rows = np.asarray(rhs_rows, dtype=float)
    if rows.size == 0:
        return np.empty((0, fact.n))
    if rows.ndim != 2 or rows.shape[1] != fact.n:
        raise ValueError(f"expected rows of length {fact.n}, got shape {rows.shape}")
    return fact.solve(rows, axis=1)
