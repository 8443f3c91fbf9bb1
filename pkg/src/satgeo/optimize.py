"""Scalar root finding, golden-section extrema, and a damped Newton solver."""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import BracketError, SolverFailure

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def bisect_root(f: Callable[[float], float], lo: float, hi: float,
                rtol: float = 1e-14, atol: float = 0.0,
                maxiter: int = 200) -> float:
    """Root of f in [lo, hi] by bisection; requires a sign change."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= atol + rtol * abs(mid):
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_min(f: Callable[[float], float], lo: float, hi: float,
               xtol: float = 1e-10) -> tuple[float, float]:
    """(argmin, min) of a unimodal f on [lo, hi] by golden-section search."""
    a, b = (lo, hi) if lo <= hi else (hi, lo)
    h = b - a
    if h <= xtol:
        x = 0.5 * (a + b)
        return x, f(x)
    steps = int(math.ceil(math.log(xtol / h) / math.log(_INVPHI)))
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    yc, yd = f(c), f(d)
    for _ in range(steps):
        if yc < yd:
            b, d, yd = d, c, yc
            h *= _INVPHI
            c = a + _INVPHI2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= _INVPHI
            d = a + _INVPHI * h
            yd = f(d)
    return (c, yc) if yc < yd else (d, yd)


def golden_max(f: Callable[[float], float], lo: float, hi: float,
               xtol: float = 1e-10) -> tuple[float, float]:
    x, fneg = golden_min(lambda t: -f(t), lo, hi, xtol)
    return x, -fneg


def prescan_bracket(f_vec: Callable[[np.ndarray], np.ndarray], grid: np.ndarray,
                    mode: str = "max") -> tuple[float, float, float]:
    """Locate the grid cell around the best grid point; returns (lo, best, hi)."""
    vals = f_vec(grid)
    i = int(np.argmax(vals) if mode == "max" else np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    return float(lo), float(grid[i]), float(hi)


def numeric_jacobian(F: Callable[[np.ndarray], np.ndarray], x: np.ndarray,
                     scale: float = 1e-7) -> np.ndarray:
    """Central-difference Jacobian with per-coordinate steps."""
    x = np.asarray(x, dtype=float)
    f0 = np.asarray(F(x), dtype=float)
    J = np.empty((len(f0), len(x)))
    for j in range(len(x)):
        h = scale * max(1.0, abs(x[j]))
        xp, xm = x.copy(), x.copy()
        xp[j] += h
        xm[j] -= h
        J[:, j] = (np.asarray(F(xp)) - np.asarray(F(xm))) / (2.0 * h)
    return J


def damped_newton(F: Callable[[np.ndarray], np.ndarray], x0: Sequence[float],
                  tol: float = 1e-12, maxiter: int = 200,
                  clamp: Callable[[np.ndarray], np.ndarray] | None = None,
                  max_halvings: int = 40) -> tuple[np.ndarray, np.ndarray, int]:
    """Newton iteration with step halving on the residual max-norm.

    Returns (x, residuals, iterations); raises SolverFailure with the
    iteration trace when the residual cannot be brought below tol.
    """
    x = np.asarray(x0, dtype=float).copy()
    if clamp is not None:
        x = clamp(x)
    r = np.asarray(F(x), dtype=float)
    trace = [(x.copy(), float(np.abs(r).max()))]
    for it in range(1, maxiter + 1):
        if np.abs(r).max() < tol:
            return x, r, it - 1
        J = numeric_jacobian(F, x)
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            raise SolverFailure("singular Jacobian", trace) from None
        lam = 1.0
        best = float(np.abs(r).max())
        for _ in range(max_halvings):
            xn = x + lam * step
            if clamp is not None:
                xn = clamp(xn)
            rn = np.asarray(F(xn), dtype=float)
            if np.isfinite(rn).all() and np.abs(rn).max() < best:
                x, r = xn, rn
                break
            lam *= 0.5
        else:
            raise SolverFailure("line search stalled", trace)
        trace.append((x.copy(), float(np.abs(r).max())))
    if np.abs(r).max() < tol:
        return x, r, maxiter
    raise SolverFailure(
        f"no convergence after {maxiter} iterations "
        f"(residual {np.abs(r).max():.3e})", trace)
