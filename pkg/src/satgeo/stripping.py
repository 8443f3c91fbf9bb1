"""Monte-Carlo simulation of the clause-stripping process as balls in bins.

Each retained clause contributes one red ball (its unique satisfied literal)
and k-1 blue balls (the unsatisfied ones); bins are variables.  A blue bin
(blue balls, no red) marks an unfrozen variable; the full process removes one
clause per step until no blue bin remains, and the empty bins at termination
are exactly the starred variables of the coarsening fixed point.  The
simplified process removes only one blue and one red ball per step and is
used for the dominance comparison and threshold heuristics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._core import impl
from ._rng import WordStream, spawn_seeds
from .errors import BracketError, InvalidParameters
from .formula import MODEL_SINGLE_SAT_LITERAL, Formula
from .words import STAR, TriAssignment, bits_from_word

POLICY_UNIFORM = "uniform"
POLICY_LOWEST = "lowest"
_POLICY_CODE = {POLICY_UNIFORM: 0, POLICY_LOWEST: 1}


@dataclass(frozen=True)
class BinState:
    """Initial balls-in-bins placement: one bin per variable, one red ball
    per retained clause (its satisfied literal) and k-1 blue balls (the
    unsatisfied ones)."""

    n_bins: int
    red_bins: np.ndarray
    blue_bins: np.ndarray

    @property
    def red_count(self) -> np.ndarray:
        return np.bincount(self.red_bins, minlength=self.n_bins)

    @property
    def blue_count(self) -> np.ndarray:
        return np.bincount(self.blue_bins, minlength=self.n_bins)

    @property
    def total_red(self) -> int:
        return len(self.red_bins)

    @property
    def total_blue(self) -> int:
        return len(self.blue_bins)


def sample_bins(n: int, k: int, r: float, rng: np.random.Generator) -> BinState:
    """Realize the retained-clause count and the ball placement."""
    m = int(rng.binomial(int(round(r * n)), _clause_probability(k)))
    red = rng.integers(0, n, size=m, dtype=np.int64)
    blue = rng.integers(0, n, size=m * (k - 1), dtype=np.int64)
    return BinState(n_bins=n, red_bins=red, blue_bins=blue)


@dataclass(frozen=True)
class StripRunResult:
    """Outcome of one full-process run."""

    n: int
    k: int
    r: float
    seed: int
    m_realized: int
    steps_executed: int
    empty_bins_at_exit: int

    @property
    def exited_early(self) -> bool:
        return self.steps_executed < self.m_realized

    @property
    def frozen_fraction(self) -> float:
        return 1.0 - self.empty_bins_at_exit / self.n


@dataclass(frozen=True)
class ModifiedRunResult:
    """Outcome of one simplified-process run over i_steps steps."""

    n: int
    k: int
    r: float
    seed: int
    m_realized: int
    steps_executed: int
    persistence_held: bool
    q_red_free_bins: int
    initial_blue_in_red_free: int
    empty_bins: int


@dataclass(frozen=True)
class DominanceResult:
    trials: int
    i_steps: int
    p_original: float
    p_modified: float
    se_original: float
    se_modified: float

    @property
    def se_combined(self) -> float:
        return math.hypot(self.se_original, self.se_modified)


def _clause_probability(k: int) -> float:
    return k / (2.0 ** k - 1.0)


def _sample_balls(rng: np.random.Generator, n: int, k: int, r: float):
    st = sample_bins(n, k, r, rng)
    return st.total_red, st.red_bins, st.blue_bins


def _check_params(n: int, k: int, r: float):
    if n < 1:
        raise InvalidParameters("n must be positive")
    if k < 2:
        raise InvalidParameters("k must be at least 2")
    if r < 0:
        raise InvalidParameters("r must be non-negative")


def run_original(n: int, k: int, r: float, seed: int,
                 policy: str = POLICY_UNIFORM) -> StripRunResult:
    """One full-process run to its fixed point.

    frozen_fraction is 1 - empty_bins/n at termination; it is 0 exactly when
    all clauses were consumed (the all-star outcome)."""
    _check_params(n, k, r)
    rng = np.random.default_rng(seed)
    m, red, blue = _sample_balls(rng, n, k, r)
    steps, empty = impl.strip_original(n, k, red, blue, WordStream(rng),
                                       _POLICY_CODE[policy])
    return StripRunResult(n=n, k=k, r=r, seed=seed, m_realized=m,
                          steps_executed=steps, empty_bins_at_exit=empty)


def run_modified(n: int, k: int, r: float, i_steps: int, seed: int,
                 policy: str = POLICY_UNIFORM) -> ModifiedRunResult:
    """One simplified-process run over exactly i_steps steps.

    persistence_held records that a blue bin existed at the start of every step;
    with no clauses at all it is False for any i_steps >= 1.  Steps beyond
    the red-ball supply degenerate to the blue-removal half only."""
    _check_params(n, k, r)
    if i_steps < 0:
        raise InvalidParameters("i_steps must be non-negative")
    rng = np.random.default_rng(seed)
    m, red, blue = _sample_balls(rng, n, k, r)
    event, q, b0, empty = impl.strip_modified(n, k, red, blue, WordStream(rng),
                                              _POLICY_CODE[policy], i_steps)
    return ModifiedRunResult(n=n, k=k, r=r, seed=seed, m_realized=m,
                             steps_executed=i_steps, persistence_held=bool(event),
                             q_red_free_bins=q, initial_blue_in_red_free=b0,
                             empty_bins=empty)


def dominance_check(n: int, k: int, r: float, i_steps: int, trials: int,
                    seed: int, policy: str = POLICY_UNIFORM) -> DominanceResult:
    """Monte-Carlo estimates of the blue-bin persistence event under both
    processes.  In the full process the event is equivalent to surviving
    i_steps steps."""
    if trials < 1:
        raise InvalidParameters("trials must be at least 1")
    _check_params(n, k, r)
    code = _POLICY_CODE[policy]
    hits_o = hits_m = 0
    for ss in spawn_seeds(seed, trials):
        rng = np.random.default_rng(ss)
        m, red, blue = _sample_balls(rng, n, k, r)
        steps, _ = impl.strip_original(n, k, red, blue, WordStream(rng), code)
        hits_o += steps >= i_steps
        rng = np.random.default_rng(ss.spawn(1)[0])
        m, red, blue = _sample_balls(rng, n, k, r)
        event, _, _, _ = impl.strip_modified(n, k, red, blue, WordStream(rng),
                                             code, i_steps)
        hits_m += bool(event)
    p_o, p_m = hits_o / trials, hits_m / trials
    se = lambda p: math.sqrt(p * (1.0 - p) / trials)
    return DominanceResult(trials=trials, i_steps=i_steps,
                           p_original=p_o, p_modified=p_m,
                           se_original=se(p_o), se_modified=se(p_m))


def _frozen_chunk(args) -> list[float]:
    n, k, r, policy, seed_states = args
    out = []
    for ss in seed_states:
        rng = np.random.default_rng(ss)
        m, red, blue = _sample_balls(rng, n, k, r)
        _, empty = impl.strip_original(n, k, red, blue, WordStream(rng),
                                       _POLICY_CODE[policy])
        out.append(1.0 - empty / n)
    return out


def frozen_fractions(n: int, k: int, r: float, trials: int, seed: int,
                     policy: str = POLICY_UNIFORM, workers: int = 1) -> np.ndarray:
    """frozen_fraction over independent trials (derived per-trial seeds).

    The per-trial seeds do not depend on the worker count, so results are
    identical for any workers value."""
    seeds = spawn_seeds(seed, trials)
    if workers <= 1 or trials < 4:
        return np.asarray(_frozen_chunk((n, k, r, policy, seeds)))
    from concurrent.futures import ProcessPoolExecutor
    chunks = [seeds[i::workers] for i in range(workers)]
    order = [i for w in range(workers) for i in range(w, trials, workers)]
    out = np.empty(trials)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = pool.map(_frozen_chunk,
                           [(n, k, r, policy, ch) for ch in chunks])
        flat = [x for chunk in results for x in chunk]
    out[order] = flat
    return out


def estimate_threshold(k: int, alpha: float, n: int, trials: int,
                       r_lo: float, r_hi: float, tol: float,
                       seed: int = 0, policy: str = POLICY_UNIFORM,
                       workers: int = 1) -> float:
    """Bisection estimate of the freezing threshold for the planted cluster.

    A density counts as supercritical when the median frozen fraction over
    the trials exceeds max(0.005, 1 - alpha); the 0.005 floor guards
    finite-size noise in the alpha = 1 (all-star) regime."""
    if not 0.0 < alpha <= 1.0:
        raise InvalidParameters("alpha must lie in (0, 1]")
    if r_lo >= r_hi:
        raise InvalidParameters("need r_lo < r_hi")
    cut = max(0.005, 1.0 - alpha)

    def supercritical(r: float, point: int) -> bool:
        fr = frozen_fractions(n, k, r, trials, seed + 7919 * point, policy,
                              workers=workers)
        return float(np.median(fr)) > cut

    lo_super = supercritical(r_lo, 0)
    hi_super = supercritical(r_hi, 1)
    if lo_super or not hi_super:
        raise BracketError(
            f"[{r_lo}, {r_hi}] does not straddle the transition "
            f"(supercritical: {lo_super}, {hi_super})")
    lo, hi = r_lo, r_hi
    point = 2
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if supercritical(mid, point):
            hi = mid
        else:
            lo = mid
        point += 1
    return 0.5 * (lo + hi)


def fluid_constants(k: int, r: float, alpha: float) -> tuple[float, float, float]:
    """Concentration targets for (m/n, q/n, b/n) at step fraction alpha:
    lam = r k / (2^k - 1), gamma = exp(-lam (1-alpha)), beta = (k-1) gamma lam."""
    if k < 3:
        raise InvalidParameters("k must be at least 3")
    if r <= 0:
        raise InvalidParameters("r must be positive")
    if not 0.0 <= alpha <= 1.0:
        raise InvalidParameters("alpha must lie in [0, 1]")
    lam = r * k / (2.0 ** k - 1.0)
    gamma = math.exp(-lam * (1.0 - alpha))
    beta = (k - 1) * gamma * lam
    return lam, gamma, beta


def run_original_on_formula(formula: Formula, sigma=None,
                            policy: str = POLICY_LOWEST) -> TriAssignment:
    """The full process driven by an actual formula's clause structure.

    Removing a clause removes its own balls rather than resampled ones, so
    the result is deterministic given the formula and must equal the
    clause-stripping fixed point.  sigma defaults to all-zero (the planted
    assignment of the single-sat-literal model)."""
    n = formula.n
    if sigma is None:
        if formula.model_tag != MODEL_SINGLE_SAT_LITERAL:
            raise InvalidParameters("default sigma=0 requires the planted model")
        bits = np.zeros(n, dtype=np.int8)
    else:
        bits = bits_from_word(int(sigma), n).astype(np.int8) \
            if isinstance(sigma, (int, np.integer)) else np.asarray(sigma, dtype=np.int8)
    cv, cs = formula.clause_vars, formula.clause_signs
    sat_occ = (bits[cv] == 1) == cs
    in_u = [int(c) for c in np.flatnonzero(sat_occ.sum(axis=1) == 1)]
    red_cnt = np.zeros(n, dtype=np.int64)
    blue_cnt = np.zeros(n, dtype=np.int64)
    sat_var = {}
    blue_occ: list[list[int]] = [[] for _ in range(n)]
    for c in in_u:
        sat_var[c] = int(cv[c][sat_occ[c]][0])
        red_cnt[sat_var[c]] += 1
        for v in cv[c][~sat_occ[c]]:
            blue_cnt[v] += 1
            blue_occ[int(v)].append(c)
    alive = set(in_u)
    import heapq
    heap = [v for v in range(n) if blue_cnt[v] > 0 and red_cnt[v] == 0]
    heapq.heapify(heap)

    def remove_clause(c: int):
        alive.discard(c)
        for v in cv[c][~sat_occ[c]]:
            blue_cnt[v] -= 1
        w = sat_var[c]
        red_cnt[w] -= 1
        if red_cnt[w] == 0 and blue_cnt[w] > 0:
            heapq.heappush(heap, w)

    while heap:
        v = heapq.heappop(heap)
        if red_cnt[v] > 0 or blue_cnt[v] == 0:
            continue  # stale entry
        c = next(c for c in blue_occ[v] if c in alive)
        remove_clause(c)
        if blue_cnt[v] > 0 and red_cnt[v] == 0:
            heapq.heappush(heap, v)
    out = np.full(n, STAR, dtype=np.int8)
    for c in alive:
        for v in cv[c]:
            out[v] = bits[v]
    return TriAssignment(out)
