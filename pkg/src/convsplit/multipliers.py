"""Lagrange-multiplier corrections that enforce bounds and mass.

Both corrections act nodewise on a predicted field (any shape) and return the
corrected field with the new multiplier field ``lam``.  The mass-conservative
variant additionally finds the scalar multiplier ``xi`` that makes the
clipped field hit a prescribed mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

from .grid import weighted_sum


class SecantFailure(RuntimeError):
    """The mass multiplier could not be bracketed."""


@dataclass(frozen=True)
class BoundsSpec:
    """Admissible range ``[m, M]`` and the constraint function ``H``.

    ``kind="quadratic"`` uses ``H(u) = (M - u)(u - m)``; ``kind="linear"`` uses
    ``H(u) = u - m`` (positivity when ``m = 0``) and has no upper bound.
    """

    m: float
    M: float = math.inf
    kind: Literal["quadratic", "linear"] = "quadratic"

    def __post_init__(self):
        if self.kind not in ("quadratic", "linear"):
            raise ValueError(f"unknown H kind {self.kind!r}")
        if self.kind == "quadratic":
            if not math.isfinite(self.M):
                raise ValueError("quadratic H needs a finite upper bound")
            if not self.m < self.M:
                raise ValueError(f"degenerate bounds m={self.m}, M={self.M}")
        elif self.M != math.inf:
            raise ValueError("linear H only enforces the lower bound; leave M infinite")

    @classmethod
    def positivity(cls) -> "BoundsSpec":
        return cls(0.0, math.inf, "linear")

    def H(self, u):
        if self.kind == "quadratic":
            return (self.M - u) * (u - self.m)
        return u - self.m

    def dH(self, u):
        if self.kind == "quadratic":
            return self.M + self.m - 2.0 * u
        return np.ones_like(np.asarray(u, dtype=float))

    @property
    def dH_lower(self) -> float:
        return float(self.dH(self.m))

    @property
    def dH_upper(self) -> float:
        return float(self.dH(self.M)) if self.kind == "quadratic" else math.nan


@dataclass
class MultiplierState:
    """Multiplier field ``lam >= 0`` and scalar ``xi``; both start at zero."""

    lam: np.ndarray
    xi: float = 0.0
    secant_iterations: int = 0

    @classmethod
    def zeros(cls, shape) -> "MultiplierState":
        return cls(np.zeros(shape))


@dataclass(frozen=True)
class SecantConfig:
    xi1_seed: float | None = None  # None -> tau
    tol: float | None = None  # None -> 1e-13 * max(1, |target mass|)
    max_iter: int = 50


def _assign(v: np.ndarray, bounds: BoundsSpec, tau: float) -> tuple[np.ndarray, np.ndarray]:
    """Three-branch cut-off: interior nodes keep ``v``, others snap to a bound."""
    u = v.copy()
    lam = np.zeros_like(v)
    low = v <= bounds.m
    u[low] = bounds.m
    lam[low] = (bounds.m - v[low]) / (tau * bounds.dH_lower)
    if bounds.kind == "quadratic":
        high = v >= bounds.M
        u[high] = bounds.M
        lam[high] = (bounds.M - v[high]) / (tau * bounds.dH_upper)
    return u, lam


def feedback(state: MultiplierState, u_prev: np.ndarray, bounds: BoundsSpec) -> np.ndarray:
    """``lam^n * H'(u^n)``, the multiplier term carried into the next step."""
    if not np.any(state.lam):
        return np.zeros_like(u_prev)
    return state.lam * bounds.dH(u_prev)


def bp_correct(
    u_pred: np.ndarray,
    state: MultiplierState,
    bounds: BoundsSpec,
    tau: float,
    lam_feedback: np.ndarray | None = None,
) -> tuple[np.ndarray, MultiplierState]:
    """Bound-preserving cut-off correction.

    ``lam_feedback`` is ``lam^n H'(u^n)``; pass ``None`` to drop it (the
    zero-multiplier simplification).  ``tau`` is the step factor multiplying
    the multiplier in the update, i.e. ``u = u_pred + tau*(lam H' - feedback)``.
    """
    v = np.asarray(u_pred, dtype=float)
    if not np.all(np.isfinite(v)):
        raise FloatingPointError("non-finite predicted values in bound-preserving correction")
    if lam_feedback is not None:
        v = v - tau * lam_feedback
    u, lam = _assign(v, bounds, tau)
    return u, replace(state, lam=lam, secant_iterations=0)


def clipped_mass(v: np.ndarray, bounds: BoundsSpec, h: float) -> float:
    return weighted_sum(np.clip(v, bounds.m, bounds.M), h)


def bpmc_correct(
    u_pred: np.ndarray,
    state: MultiplierState,
    bounds: BoundsSpec,
    tau: float,
    target_mass: float,
    h: float,
    lam_feedback: np.ndarray | None = None,
    secant: SecantConfig = SecantConfig(),
    mask: np.ndarray | tuple | slice | None = None,
) -> tuple[np.ndarray, MultiplierState]:
    """Bound-preserving and mass-conservative correction.

    Finds ``xi`` with ``h * sum(clip(u_pred + theta)) == target_mass`` where
    ``theta = tau * (xi - xi_prev - lam_feedback)``, then applies the cut-off
    with ``theta`` added.  ``mask`` selects the unknown nodes (Dirichlet
    boundaries are left untouched).
    """
    u_pred = np.asarray(u_pred, dtype=float)
    if not np.all(np.isfinite(u_pred)):
        raise FloatingPointError("non-finite predicted values in mass-conservative correction")
    sel = slice(None) if mask is None else mask
    base = u_pred[sel]
    fb = 0.0 if lam_feedback is None else lam_feedback[sel]
    xi_prev = state.xi
    # v(xi) = base + tau*(xi - xi_prev) - tau*fb; precompute the xi-independent part
    shifted = base - tau * fb - tau * xi_prev if lam_feedback is not None else base - tau * xi_prev
    tol = secant.tol if secant.tol is not None else 1e-13 * max(1.0, abs(target_mass))

    def F(xi: float) -> float:
        return clipped_mass(shifted + tau * xi, bounds, h) - target_mass

    xi, iters = _find_root(F, tol, secant.xi1_seed if secant.xi1_seed is not None else tau, secant.max_iter, base.size * h, tau)
    v = shifted + tau * xi
    u_sel, lam_sel = _assign(v, bounds, tau)
    u = u_pred.copy()
    lam = np.zeros_like(u_pred)
    u[sel] = u_sel
    lam[sel] = lam_sel
    return u, MultiplierState(lam=lam, xi=xi, secant_iterations=iters)


def _find_root(F, tol: float, xi1: float, max_iter: int, measure: float, tau: float) -> tuple[float, int]:
    x0, x1 = 0.0, xi1
    f0 = F(x0)
    if abs(f0) <= tol:
        return x0, 0
    f1 = F(x1)
    it = 1
    while abs(f1) > tol and it < max_iter:
        df = f1 - f0
        if df == 0.0 or abs(df) <= 1e-15 * max(abs(f0), abs(f1), tol):
            break
        x2 = x1 - f1 * (x1 - x0) / df
        x0, f0 = x1, f1
        x1, f1 = x2, F(x2)
        it += 1
    if abs(f1) <= tol:
        return _polish(F, x0, f0, x1, f1, it)
    return _bisect(F, tol, x1, f1, measure, tau, it)


def _polish(F, x0, f0, x1, f1, it, extra: int = 2):
    # F is piecewise affine, so a couple more secant steps usually land on the
    # exact root; keep them only while they reduce |F|
    for _ in range(extra):
        df = f1 - f0
        if f1 == 0.0 or df == 0.0:
            break
        x2 = x1 - f1 * (x1 - x0) / df
        f2 = F(x2)
        it += 1
        if abs(f2) >= abs(f1):
            break
        x0, f0, x1, f1 = x1, f1, x2, f2
    return x1, it


def _bisect(F, tol, x, fx, measure, tau, it):
    # F is nondecreasing in xi; grow a bracket geometrically from the current point
    step = max(tau, abs(fx) / max(measure * tau, 1e-300))
    lo = hi = x
    flo = fhi = fx
    for _ in range(60):
        if flo <= 0.0 <= fhi:
            break
        if fx > 0.0:
            hi, fhi = lo, flo
            lo = lo - step
            flo = F(lo)
        else:
            lo, flo = hi, fhi
            hi = hi + step
            fhi = F(hi)
        step *= 2.0
        it += 1
    else:
        raise SecantFailure(f"could not bracket the mass multiplier (F={fx:.3e}, tol={tol:.3e})")
    for _ in range(200):
        # regula falsi is exact on the affine pieces of F; bisection guarantees progress
        mid = 0.5 * (lo + hi)
        if fhi != flo:
            cand = lo - flo * (hi - lo) / (fhi - flo)
            if lo < cand < hi:
                fc = F(cand)
                it += 1
                if abs(fc) <= tol:
                    return cand, it
                if fc < 0.0:
                    lo, flo = cand, fc
                else:
                    hi, fhi = cand, fc
                mid = 0.5 * (lo + hi)
        fm = F(mid)
        it += 1
        if abs(fm) <= tol:
            return mid, it
        if fm < 0.0:
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
        if hi - lo <= 1e-300:
            break
    raise SecantFailure(f"mass multiplier did not converge (bracket [{lo}, {hi}], F={fm:.3e}, tol={tol:.3e})")
