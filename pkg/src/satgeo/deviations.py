"""Large-deviations rate for the stripping event and the constrained
optimization that yields the freezing densities.

The event "the simplified process keeps a blue bin for the first alpha*m
steps" requires b >= i, which after conditioning on the three fluctuation
variables (delta for the clause count, zeta for the red-free bins, epsilon
for the blue mass) becomes B >= 0 at exponential cost Omega.  Frozen
variables are certified at density r when the maximum of B subject to
Omega = s is negative, where s is the annealed entropy budget.

The stationary system of the Lagrange function G = B - mu (Omega - s) is
reduced to two unknowns (delta, epsilon) via the closed-form eliminations of
zeta and mu, and solved by damped Newton iteration inside the analytic
search box [delta_0, 0] x [0, epsilon_0].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (BracketError, DegenerateError, DomainError,
                     InvalidParameters, InvalidStationaryPoint, SolverFailure)
from .optimize import damped_newton, golden_min
from .rates import LN2, g_c

SIGN_TOL = 1e-9


def omega_fn(x: float) -> float:
    """(1+x) ln(1+x) - x, the one-variable large-deviations rate."""
    if x < -1.0:
        raise DomainError("omega is defined on x >= -1")
    if x == -1.0:
        return 1.0
    return (1.0 + x) * math.log1p(x) - x


def omega_prime(x: float) -> float:
    return math.log1p(x)


def chernoff_F(x: float, y: float) -> float:
    """exp(-x omega(y)): tail bound for a mean-x count deviating by factor 1+y."""
    if x <= 0:
        raise InvalidParameters("first argument must be positive")
    return math.exp(-x * omega_fn(y))


def s_of(k: int, r: float) -> float:
    """Annealed entropy budget ln 2 + r ln(1 - 2^-k)."""
    return LN2 + r * math.log1p(-(2.0 ** (-k)))


@dataclass(frozen=True)
class DeviationPoint:
    """State of the three-variable deviation problem at fixed (k, r, alpha)."""

    k: int
    r: float
    alpha: float
    delta: float
    zeta: float
    epsilon: float
    mu: float | None = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise InvalidParameters("alpha must lie in (0, 1)")
        if min(self.delta, self.zeta, self.epsilon) < -1.0:
            raise InvalidParameters("delta, zeta, epsilon must be >= -1")
        if self.r <= 0:
            raise InvalidParameters("r must be positive")

    @property
    def lam(self) -> float:
        return self.r * self.k / (2.0 ** self.k - 1.0)

    @property
    def rho(self) -> float:
        return self.lam * (1.0 + self.delta) * (1.0 - self.alpha)


def big_omega(p: DeviationPoint) -> float:
    """Total exponential cost of the (delta, zeta, epsilon) fluctuation."""
    lam, k = p.lam, p.k
    erho = math.exp(-p.rho)
    return (lam * omega_fn(p.delta)
            + erho * omega_fn(p.zeta)
            + lam * (k - 1) * (1.0 + p.delta) * (1.0 + p.zeta) * erho * omega_fn(p.epsilon))


def big_B(p: DeviationPoint) -> float:
    """Margin of the blue-mass condition b >= i; frozen variables need B < 0."""
    return ((1.0 + p.epsilon) * (1.0 + p.zeta) * (p.k - 1) * math.exp(-p.rho)
            - p.alpha)


def grad_omega(p: DeviationPoint) -> tuple[float, float, float]:
    """Analytic partials of big_omega in (delta, zeta, epsilon)."""
    lam, k, a = p.lam, p.k, p.alpha
    erho = math.exp(-p.rho)
    third = lam * (k - 1) * (1.0 + p.delta) * (1.0 + p.zeta) * erho * omega_fn(p.epsilon)
    d_delta = lam * (omega_prime(p.delta)
                     - (1.0 - a) * erho * omega_fn(p.zeta)
                     + (k - 1) * (1.0 + p.zeta) * omega_fn(p.epsilon) * erho
                     * (1.0 - (1.0 + p.delta) * lam * (1.0 - a)))
    d_zeta = erho * omega_prime(p.zeta) + lam * (k - 1) * (1.0 + p.delta) * erho * omega_fn(p.epsilon)
    d_eps = lam * (k - 1) * (1.0 + p.delta) * (1.0 + p.zeta) * erho * omega_prime(p.epsilon)
    return d_delta, d_zeta, d_eps


def grad_B(p: DeviationPoint) -> tuple[float, float, float]:
    """Analytic partials of big_B in (delta, zeta, epsilon)."""
    lam, k, a = p.lam, p.k, p.alpha
    erho = math.exp(-p.rho)
    core = (1.0 + p.epsilon) * (1.0 + p.zeta) * (k - 1) * erho
    d_delta = -lam * (1.0 - a) * core
    d_zeta = (1.0 + p.epsilon) * (k - 1) * erho
    d_eps = (1.0 + p.zeta) * (k - 1) * erho
    return d_delta, d_zeta, d_eps


def stationary_closures(p: DeviationPoint) -> tuple[float, float]:
    """Closed-form eliminations at stationarity: zeta from (delta, epsilon),
    and the multiplier mu.  Degenerate at epsilon = 0; at delta = -1 the
    multiplier diverges and is reported as inf."""
    lam = p.lam
    zeta = math.expm1((p.k - 1) * lam * (1.0 + p.delta) * p.epsilon)
    if p.epsilon == 0.0:
        raise DegenerateError("mu is undefined at epsilon = 0")
    denom = lam * (1.0 + p.delta) * math.log1p(p.epsilon)
    mu = math.inf if denom == 0.0 else 1.0 / denom
    return zeta, mu


def region_bounds(k: int, r: float, alpha: float) -> tuple[float, float]:
    """The analytic search box: delta in [delta_0, 0], epsilon in [0, epsilon_0]."""
    s = s_of(k, r)
    if s <= 0:
        raise DomainError(f"s(k={k}, r={r}) = {s:.4g} <= 0: density beyond the "
                          "annealed satisfiability bound")
    lam = r * k / (2.0 ** k - 1.0)
    delta0 = -math.sqrt(2.0 * s / lam)
    if delta0 <= -1.0:
        raise DomainError("density too small for the deviation box (delta_0 <= -1)")
    eps0 = (1.0 - alpha) / (k - 1) + math.log(3.0) / (lam * (1.0 + delta0) * (k - 1))
    return delta0, eps0


def simplified_region_bounds(k: int, c: float, alpha: float) -> tuple[float, float]:
    """The coarser box bounds in terms of the rescaled density c = lam/(k ln 2),
    valid for c >= 4/5: |delta_0| <= 1/sqrt(k) and epsilon_0 <= 2/(k-1)."""
    d0 = -math.sqrt(2.0 * (1.0 - c * (1.0 - 2.0 ** (-k))) / (c * k))
    e0 = (1.0 - alpha + math.log(3.0) / (c * k * (1.0 + d0) * LN2)) / (k - 1)
    return d0, e0


@dataclass(frozen=True)
class StationarySolution:
    point: DeviationPoint
    residuals: dict
    B_value: float
    Omega_value: float
    s_value: float
    iterations: int

    def to_jsonable(self) -> dict:
        p = self.point
        return {
            "k": p.k, "alpha": p.alpha, "r": p.r,
            "delta": p.delta, "zeta": p.zeta, "epsilon": p.epsilon, "mu": p.mu,
            "Omega": self.Omega_value, "s": self.s_value, "B": self.B_value,
            "residuals": {key: float(v) for key, v in self.residuals.items()},
        }


def _reduced_residuals(k: int, r: float, alpha: float):
    lam = r * k / (2.0 ** k - 1.0)
    s = s_of(k, r)

    def F(x: np.ndarray) -> np.ndarray:
        delta, eps = float(x[0]), float(x[1])
        rho = lam * (1.0 + delta) * (1.0 - alpha)
        zeta = math.expm1((k - 1) * lam * (1.0 + delta) * eps)
        erho = math.exp(-rho)
        # stationarity residual normalized by e^-rho so it stays O(1) at
        # large k (raw terms grow like e^rho)
        r1 = (math.log1p(delta)
              + erho * ((1.0 - alpha) * zeta
                        + (k - 1) * (1.0 + zeta) * omega_fn(eps)))
        r2 = (lam * omega_fn(delta) + erho * omega_fn(zeta)
              + lam * (k - 1) * (1.0 + delta) * (1.0 + zeta) * erho * omega_fn(eps)
              - s)
        return np.array([r1, r2])

    return F, lam, s


def _full_residuals(sol_point: DeviationPoint) -> dict:
    """Residuals of the four stationarity equations at a point with mu set."""
    go = grad_omega(sol_point)
    gb = grad_B(sol_point)
    mu = sol_point.mu
    return {
        "stationarity_delta": gb[0] - mu * go[0],
        "stationarity_zeta": gb[1] - mu * go[1],
        "stationarity_epsilon": gb[2] - mu * go[2],
        "constraint": big_omega(sol_point) - s_of(sol_point.k, sol_point.r),
    }


def solve_stationary(k: int, r: float, alpha: float,
                     init: tuple[float, float] | None = None,
                     tol: float = 1e-12,
                     multi_start: bool = True) -> StationarySolution:
    """Solve the reduced stationary system in (delta, epsilon).

    zeta and mu come from their closed-form eliminations.  The default start
    is the box center scaled inward; with multi_start the four inset corners
    are solved as well and must agree (the stationary point is unique in the
    box, but that is only asserted numerically).
    """
    delta0, eps0 = region_bounds(k, r, alpha)
    F, lam, s = _reduced_residuals(k, r, alpha)
    starts = [init if init is not None else (delta0 / 4.0, eps0 / 4.0)]
    if multi_start:
        for fd, fe in ((0.9, 0.9), (0.9, 0.1), (0.1, 0.9), (0.1, 0.1)):
            starts.append((fd * delta0, fe * eps0))

    def clamp(x: np.ndarray) -> np.ndarray:
        x = x.copy()
        x[0] = min(0.0, max(x[0], 1.5 * delta0, -0.999999))
        x[1] = min(max(x[1], 0.0), 1.5 * eps0)
        return x

    solutions = []
    failures = []
    for x0 in starts:
        try:
            x, res, iters = damped_newton(F, np.asarray(x0, dtype=float),
                                          tol=tol, clamp=clamp)
            solutions.append((x, res, iters))
        except SolverFailure as exc:
            failures.append(exc)
    if not solutions:
        raise SolverFailure(
            f"stationary solve failed from all starts at (k={k}, r={r}, "
            f"alpha={alpha})", failures[0].trace if failures else [])
    ref = solutions[0][0]
    for x, _, _ in solutions[1:]:
        if np.abs(x - ref).max() > 1e-7:
            raise SolverFailure(
                f"multi-start disagreement at (k={k}, r={r}, alpha={alpha}): "
                f"{ref} vs {x}")
    x, res, iters = min(solutions, key=lambda t: float(np.abs(t[1]).max()))
    delta, eps = float(x[0]), float(x[1])
    probe = DeviationPoint(k=k, r=r, alpha=alpha, delta=delta, zeta=0.0, epsilon=eps)
    zeta, mu = stationary_closures(probe)
    point = replace(probe, zeta=zeta, mu=mu)
    if not (delta <= SIGN_TOL and eps >= -SIGN_TOL and zeta >= -SIGN_TOL):
        raise InvalidStationaryPoint(
            f"sign structure violated: delta={delta}, zeta={zeta}, eps={eps}")
    residuals = _full_residuals(point)
    residuals["reduced_1"] = float(res[0])
    residuals["reduced_2"] = float(res[1])
    return StationarySolution(point=point, residuals=residuals,
                              B_value=big_B(point), Omega_value=big_omega(point),
                              s_value=s, iterations=iters)


def critical_density(k: int, alpha: float, r_lo: float, r_hi: float,
                     tol: float = 1e-3, tol_newton: float = 1e-12) -> float:
    """Density where the stationary margin B changes sign (positive below,
    negative above), located by bisection with warm-started solves."""
    guard = 1e-9
    warm: dict = {}

    def b_at(r: float) -> float:
        if s_of(k, r) <= 0:
            # beyond the annealed satisfiability budget the event is already
            # first-moment dead: definitely the negative side
            return -math.inf
        init = warm.get("x")
        sol = solve_stationary(k, r, alpha, init=init, tol=tol_newton,
                               multi_start=init is None)
        warm["x"] = (sol.point.delta, sol.point.epsilon)
        return sol.B_value

    b_lo, b_hi = b_at(r_lo), b_at(r_hi)
    if b_lo < -guard or b_hi > guard:
        raise BracketError(
            f"bracket does not straddle the sign change: B({r_lo})={b_lo:.3g}, "
            f"B({r_hi})={b_hi:.3g}")
    lo, hi = r_lo, r_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        b = b_at(mid)
        if abs(b) <= guard:
            return mid
        if b > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def auto_bracket(k: int, alpha: float, lo_ratio: float = 0.5,
                 hi_ratio: float = 0.999, points: int = 14) -> tuple[float, float]:
    """Scan rescaled densities for the sign change of B at the stationary point."""
    scale = (2.0 ** k - 1.0) * LN2
    last = None
    for ratio in np.linspace(lo_ratio, hi_ratio, points):
        r = ratio * scale
        try:
            b = solve_stationary(k, r, alpha, multi_start=False).B_value
        except (SolverFailure, DomainError):
            last = None
            continue
        if last is not None and last[1] > 0 > b:
            return last[0], r
        last = (r, b)
    raise BracketError(f"no sign change of B found for k={k}, alpha={alpha}")


def minimize_over_alpha(k: int, tol: float = 1e-3,
                        alpha_lo: float = 0.15, alpha_hi: float = 0.45
                        ) -> tuple[float, float, StationarySolution]:
    """Smallest certifiable freezing density over the star-fraction alpha.

    Golden-section over alpha of the critical density, then a Newton polish
    of the full system (reduced stationarity, constraint, B = 0, and
    d/d_alpha of the Lagrange function = 0) in (delta, epsilon, r, alpha).
    Returns (c_k, alpha_m, solution at the minimizer).
    """
    if k < 9:
        raise InvalidParameters("supported for k >= 9")
    cache: dict[float, float] = {}

    def c_of_alpha(alpha: float) -> float:
        alpha = round(alpha, 12)
        if alpha not in cache:
            r_lo, r_hi = auto_bracket(k, alpha)
            cache[alpha] = critical_density(k, alpha, r_lo, r_hi, tol=tol / 4.0)
        return cache[alpha]

    alpha_m, c_k = golden_min(c_of_alpha, alpha_lo, alpha_hi, xtol=2e-5)

    def full(x: np.ndarray) -> np.ndarray:
        delta, eps, r, alpha = (float(v) for v in x)
        F, lam, s = _reduced_residuals(k, r, alpha)
        r12 = F(np.array([delta, eps]))
        zeta = math.expm1((k - 1) * lam * (1.0 + delta) * eps)
        mu = 1.0 / (lam * (1.0 + delta) * math.log1p(eps)) if eps > 0 else math.inf
        p = DeviationPoint(k=k, r=r, alpha=alpha, delta=delta, zeta=zeta,
                           epsilon=eps, mu=mu)
        erho = math.exp(-p.rho)
        # alpha enters B directly and Omega through rho only
        dB_da = lam * (1.0 + delta) * (1.0 + eps) * (1.0 + zeta) * (k - 1) * erho - 1.0
        dO_da = lam * (1.0 + delta) * (erho * omega_fn(zeta)
                                       + lam * (k - 1) * (1.0 + delta) * (1.0 + zeta)
                                       * erho * omega_fn(eps))
        return np.array([r12[0], r12[1], big_B(p), dB_da - mu * dO_da])

    sol0 = solve_stationary(k, c_k, alpha_m)
    x0 = np.array([sol0.point.delta, sol0.point.epsilon, c_k, alpha_m])
    try:
        x, _, _ = damped_newton(full, x0, tol=1e-11)
        if abs(x[2] - c_k) < max(10 * tol, 0.01 * c_k) and abs(x[3] - alpha_m) < 0.02:
            c_k, alpha_m = float(x[2]), float(x[3])
    except SolverFailure:
        pass  # golden-section result stands
    return c_k, alpha_m, solve_stationary(k, c_k, alpha_m)


def analytic_certificate(k: int, alpha: float, c: float) -> bool:
    """True when the closed-form condition certifies frozen variables at
    rescaled density c, i.e. c >= g_c(k, alpha).  Valid for k >= 14 and
    c in (4/5, 1]."""
    if k < 14:
        raise InvalidParameters("analytic certificate applies for k >= 14")
    if not 0.8 < c <= 1.0:
        raise InvalidParameters("c must lie in (4/5, 1]")
    if not 0.0 < alpha < 1.0:
        raise InvalidParameters("alpha must lie in (0, 1)")
    return c >= g_c(k, alpha)
