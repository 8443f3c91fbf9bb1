"""Closed-form rate functions for the pair-correlation and counting analysis.

Everything is computed in the natural-log domain: at the densities of
interest the clause-probability factor is raised to powers of order 2^k, far
beyond float range.  The endpoint convention alpha^alpha (1-alpha)^(1-alpha)
-> 1 at alpha in {0, 1} keeps the scans on closed intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidParameters, NoForbiddenRegion
from .optimize import bisect_root, golden_max, golden_min

LN2 = math.log(2.0)


@dataclass(frozen=True)
class RateQuery:
    """Parameter bundle (k, density).  Exactly one of r or gamma is given;
    they are related by r = gamma * 2^k * ln 2."""

    k: int
    r: float | None = None
    gamma: float | None = None
    alpha: float | None = None

    def __post_init__(self):
        if (self.r is None) == (self.gamma is None):
            raise InvalidParameters("give exactly one of r or gamma")
        if self.k < 2:
            raise InvalidParameters("k must be at least 2")
        if self.alpha is not None and not 0.0 <= self.alpha <= 1.0:
            raise InvalidParameters("alpha must lie in [0, 1]")

    @property
    def density(self) -> float:
        return self.r if self.r is not None else self.gamma * (2.0 ** self.k) * LN2

    @property
    def gamma_value(self) -> float:
        return self.gamma if self.gamma is not None \
            else self.r / ((2.0 ** self.k) * LN2)


@dataclass(frozen=True)
class IntervalReport:
    """Where the pair rate drops below 1.  Delta is the infimum of such alpha
    (None when the rate never drops below 1)."""

    sub_unit_intervals: tuple[tuple[float, float], ...]
    Delta: float | None


def entropy_nat(alpha) -> np.ndarray | float:
    """-a ln a - (1-a) ln(1-a) with the 0 ln 0 = 0 convention."""
    a = np.asarray(alpha, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -np.where(a > 0, a * np.log(np.where(a > 0, a, 1.0)), 0.0) \
            - np.where(a < 1, (1 - a) * np.log(np.where(a < 1, 1 - a, 1.0)), 0.0)
    return h if h.ndim else float(h)


def log_lambda_pair(alpha, k: int, r: float) -> np.ndarray | float:
    """ln of the expected-pair rate at distance fraction alpha."""
    a = np.asarray(alpha, dtype=float)
    if ((a < 0) | (a > 1)).any():
        raise InvalidParameters("alpha must lie in [0, 1]")
    with np.errstate(divide="ignore"):
        pow1ma = np.exp(k * np.log1p(-np.minimum(a, 1.0)))  # (1-a)^k, 0 at a=1
    inner = np.log1p(2.0 ** (-k) * (pow1ma - 2.0))
    out = LN2 + entropy_nat(a) + r * inner
    return out if out.ndim else float(out)


def lambda_pair(alpha, k: int, r: float, log: bool = False):
    """Expected-pair rate Lambda(alpha, k, r) (or its natural log)."""
    ll = log_lambda_pair(alpha, k, r)
    return ll if log else np.exp(ll) if isinstance(ll, np.ndarray) else math.exp(ll)


def _scan_grid(k: int, grid: int) -> np.ndarray:
    """Linear grid on [0,1] plus a log-spaced head that resolves crossings at
    scale 2^(-gamma k) for large k."""
    lin = np.linspace(0.0, 1.0, grid)
    lo = min(1e-30, 2.0 ** (-(2 * k + 4)))
    logh = np.geomspace(lo, 1.0, grid)
    return np.unique(np.concatenate(([0.0], logh, lin)))


def forbidden_intervals(k: int, r: float, grid: int = 4000,
                        refine_tol: float = 1e-12) -> IntervalReport:
    """Maximal sub-unit intervals of the pair rate on [0, 1].

    Sign changes of ln Lambda are located on a composite linear+log grid and
    refined by bisection to refine_tol in alpha.
    """
    if grid < 1000:
        raise InvalidParameters("grid must be at least 1000 points")
    xs = _scan_grid(k, grid)
    vals = log_lambda_pair(xs, k, r)
    neg = vals < 0
    intervals: list[tuple[float, float]] = []
    i = 0
    f = lambda a: float(log_lambda_pair(a, k, r))
    while i < len(xs):
        if not neg[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(xs) and neg[j + 1]:
            j += 1
        lo = xs[i] if i == 0 else bisect_root(f, xs[i - 1], xs[i], atol=refine_tol, rtol=0.0)
        hi = xs[j] if j == len(xs) - 1 else bisect_root(f, xs[j], xs[j + 1], atol=refine_tol, rtol=0.0)
        intervals.append((float(lo), float(hi)))
        i = j + 1
    delta = intervals[0][0] if intervals else None
    return IntervalReport(sub_unit_intervals=tuple(intervals), Delta=delta)


def w_bound(alpha: float, k: int, gamma: float) -> float:
    """Upper-bound surrogate for ln Lambda at density gamma * 2^k ln 2."""
    if not 0.0 <= alpha <= 1.0:
        raise InvalidParameters("alpha must lie in [0, 1]")
    return (2.0 * LN2 - 2.0 * (0.5 - alpha) ** 2
            - gamma * LN2 * (2.0 - (1.0 - alpha) ** k))


def epsilon_root(k: int) -> float:
    """The root of eps (2 - eps)^(k-1) = 1 nearest zero.

    Exactly 1 for k = 2; for k >= 3 it is the unique root below 2/k, found by
    bisection to 1e-14 relative in the log domain.
    """
    if k < 2:
        raise InvalidParameters("k must be at least 2")
    if k == 2:
        return 1.0

    def g(eps: float) -> float:
        return math.log(eps) + (k - 1) * (LN2 + math.log1p(-eps / 2.0))

    lo = 2.0 ** (-k - 1)
    hi = 2.0 / k
    return bisect_root(g, lo, hi, rtol=1e-14)


def epsilon_bracket(k: int) -> tuple[float, float]:
    """Published enclosure for epsilon_root, valid for k >= 8."""
    return (2.0 ** (1 - k) + k * 4.0 ** (-k), 2.0 ** (1 - k) + 3 * k * 4.0 ** (-k))


def epsilon_root_in_bracket_exact(k: int) -> bool:
    """Rigorous check that the root lies inside the published bracket.

    Beyond k ~ 55 the bracket is narrower than one float64 ulp, so the check
    is done in exact rational arithmetic: f(x) = x (2-x)^(k-1) is increasing
    below 2/k, hence the root is inside iff f(lo) < 1 < f(hi).
    """
    from fractions import Fraction
    lo = Fraction(2, 2 ** k) + Fraction(k, 4 ** k)
    hi = Fraction(2, 2 ** k) + Fraction(3 * k, 4 ** k)
    f = lambda x: x * (2 - x) ** (k - 1)
    return f(lo) < 1 < f(hi)


def lambda_b_half(k: int, r: float) -> float:
    """ln of the balanced-assignment pair rate at overlap 1/2.

    Uses expm1/log1p decompositions so the value stays accurate for k up to
    several hundred, where the correction terms are ~2^(-k).
    """
    if k < 3:
        raise InvalidParameters("k must be at least 3")
    eps = epsilon_root(k)
    a = k * math.log1p(-eps / 2.0)          # ln (1-eps/2)^k
    num = math.log1p(math.expm1(a) - 2.0 ** (-k))   # ln((1-eps/2)^k - 2^-k)
    den = k * math.log1p(-eps)
    return 2.0 * LN2 + r * (2.0 * num - den)


def m_poly(k: int) -> float:
    """Eight-term correction polynomial in the balanced-rate lower bound."""
    if k < 3:
        raise InvalidParameters("k must be at least 3")
    t = 2.0 ** (-k)
    return (1.0
            + (2 * k + 3) / 2.0 * t
            + (3 * k ** 2 + 6 * k - 4) / 2.0 * t ** 2
            + (13 * k ** 2 - 12 * k + 1) / 2.0 * t ** 3
            + (6 * k ** 3 - 13 * k ** 2 + 2 * k) * t ** 4
            + (9 * k ** 4 - 24 * k ** 3 + 10 * k ** 2) / 2.0 * t ** 5
            + (9 * k ** 4 - 6 * k ** 3) * t ** 6
            + 4.5 * k ** 4 * t ** 7)


def lambda_b_lower_bound(k: int, gamma: float) -> float:
    """Published lower bound on lambda_b_half at density gamma 2^k ln 2."""
    return 2.0 * LN2 * (1.0 - gamma * m_poly(k))


def g_upper_bound(k: int) -> float:
    """k-dependent part of the published upper bound on ln g."""
    return (1.0 + 9.0 * LN2 / 16.0) / k ** 2


def g_max(k: int, r: float, grid: int = 10000,
          delta: float | None = None, log: bool = False) -> float:
    """max of the pair rate over [0, Delta].

    A composite pre-scan avoids the local-structure traps (the rate has a
    bounded number of turning points), then golden-section refines to 1e-10
    in alpha.  Raises NoForbiddenRegion when Delta does not exist.
    """
    if delta is None:
        delta = forbidden_intervals(k, r).Delta
        if delta is None:
            raise NoForbiddenRegion(f"Lambda(alpha,{k},{r}) never drops below 1")
    xs = _scan_grid(k, grid)
    xs = xs[xs <= delta]
    if len(xs) < 2 or xs[-1] < delta:
        xs = np.append(xs, delta)
    vals = log_lambda_pair(xs, k, r)
    i = int(np.argmax(vals))
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, len(xs) - 1)]
    x, lmax = golden_max(lambda a: float(log_lambda_pair(a, k, r)),
                         float(lo), float(hi), xtol=1e-10)
    lmax = max(lmax, float(vals[0]), float(vals[-1]))
    return lmax if log else math.exp(lmax)


def alpha_M_root(k: int, gamma: float) -> float:
    """Smallest fixed point of q(a) = 2^(-gamma k) 2^(gamma k^2 a).

    Equivalently the zero of u_hat(a) = -ln a - 2^(-k) r k (1 - k a) at
    r = gamma 2^k ln 2.  Requires the contraction condition
    gamma k^2 2^(-gamma k) <= 1/(4 ln 2) under which the published bound
    alpha_M <= 2^(-gamma k) (1 + 4 gamma k^2 2^(-gamma k) ln 2) holds.
    """
    if k < 8:
        raise DomainError("k must be at least 8")
    z = gamma * k * k * 2.0 ** (-gamma * k)
    if z > 1.0 / (4.0 * LN2):
        raise DomainError(
            f"contraction condition fails: gamma k^2 2^(-gamma k) = {z:.4f} > 1/(4 ln 2)")

    def u_hat(a: float) -> float:
        return -math.log(a) - gamma * k * LN2 * (1.0 - k * a)

    turn = 1.0 / (gamma * k * k * LN2)  # u_hat decreasing before this point
    lo = 2.0 ** (-gamma * k) / 8.0
    if u_hat(turn) > 0:
        raise DomainError("no fixed point below the turning point")
    return bisect_root(u_hat, lo, turn, rtol=1e-14)


def alpha_M_bound(k: int, gamma: float) -> float:
    """Published upper bound for alpha_M."""
    t = 2.0 ** (-gamma * k)
    return t * (1.0 + 4.0 * gamma * k * k * t * LN2)


def u_k_density(k: int, alpha: float) -> float:
    """Density below which the simplified process keeps a blue bin for the
    first alpha m steps, in the concentrated regime."""
    if not 0.0 < alpha < 1.0:
        raise InvalidParameters("alpha must lie in (0, 1)")
    return (2.0 ** k - 1) / k * math.log((k - 1) / alpha) / (1.0 - alpha)


def u_k_min(k: int) -> tuple[float, float]:
    """(min over alpha of u_k_density, argmin)."""
    xs = np.linspace(1e-6, 1 - 1e-6, 4000)
    vals = (2.0 ** k - 1) / k * np.log((k - 1) / xs) / (1.0 - xs)
    i = int(np.argmin(vals))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
    a, v = golden_min(lambda x: u_k_density(k, x), float(lo), float(hi), xtol=1e-12)
    return v, a


def tau_k(k: int) -> float:
    """Rescaled satisfiability lower bound (density / ((2^k - 1) ln 2))."""
    if k < 2:
        raise InvalidParameters("k must be at least 2")
    return ((2.0 ** k) * LN2 - ((k + 1) * LN2 + 3.0) / 2.0) / ((2.0 ** k - 1) * LN2)


def g_c(k: int, alpha: float) -> float:
    """Analytic certificate density: frozen variables exist at rescaled
    density c whenever c >= g_c(k, alpha)."""
    if not 0.0 < alpha < 1.0:
        raise InvalidParameters("alpha must lie in (0, 1)")
    if k < 2:
        raise InvalidParameters("k must be at least 2")
    x = alpha / (k + 1)
    num = 1.0 + x * (1.0 - math.log(x)) / LN2
    den = 1.0 + alpha * (1.0 - alpha) * (1.0 - 1.0 / math.sqrt(k)) / (1.0 + 1.0 / k)
    return num / den


def g_c_min(k: int, xtol: float = 1e-10) -> tuple[float, float]:
    """(min over alpha of g_c, argmin)."""
    xs = np.linspace(1e-4, 1 - 1e-4, 2000)
    vals = np.array([g_c(k, float(a)) for a in xs])
    i = int(np.argmin(vals))
    a, v = golden_min(lambda x: g_c(k, x), float(xs[max(i - 1, 0)]),
                      float(xs[min(i + 1, len(xs) - 1)]), xtol=xtol)
    return v, a


def cluster_count_exponent(k: int, r: float) -> float:
    """(1/2) log2 of the balanced rate over the in-gap pair mass.

    Positive values witness exponentially many cluster regions."""
    lb = lambda_b_half(k, r)
    lg = g_max(k, r, log=True)
    return (lb - lg) / (2.0 * LN2)


def entropy_bracket(k: int, gamma: float) -> float:
    """The closed-form lower estimate for the cluster-count exponent built
    from the two published bounds; increasing in k at fixed gamma."""
    inner = LN2 * (1.0 + gamma - 2.0 * gamma * m_poly(k)) \
        - (1.0 + 9.0 * LN2 / 16.0) / k ** 2
    return inner / (2.0 * LN2)
