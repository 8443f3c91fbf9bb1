"""The whitening engine: free variables, coarsening fixed points, cores, covers,
and the clause-stripping formulation.

A variable is free in a three-valued string when every clause containing it
has, among the literals on *other* variables, one that evaluates true or *.
Coarsening repeatedly stars free variables; the fixed point is independent of
order, and identical for all members of a cluster.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConsistencyError, InvalidInput, InvalidParameters
from .formula import Formula, evaluate
from .words import STAR, TriAssignment, bits_from_word

ORDER_LOWEST = "lowest"
ORDER_RANDOM = "random"


@dataclass(frozen=True)
class CoarseningTrace:
    """Record of one coarsening run: start, starring order, fixed point."""

    initial: TriAssignment
    coarsened_order: tuple[int, ...]
    fixed_point: TriAssignment

    @property
    def star_count(self) -> int:
        return self.fixed_point.star_count

    def to_json(self) -> str:
        return json.dumps({
            "initial": str(self.initial),
            "coarsened_order": list(self.coarsened_order),
            "fixed_point": str(self.fixed_point),
            "star_count": self.star_count,
        })


def _as_tri(formula: Formula, start) -> TriAssignment:
    if isinstance(start, TriAssignment):
        tri = start
    elif isinstance(start, (int, np.integer)):
        tri = TriAssignment.from_word(int(start), formula.n)
    else:
        tri = TriAssignment(np.asarray(list(start), dtype=np.int8))
    if len(tri) != formula.n:
        raise InvalidInput(f"start has length {len(tri)}, formula has n={formula.n}")
    return tri


class _ClauseCounts:
    """Per-clause counts of true and star literal occurrences, plus the
    per-variable tally of clauses that currently pin it (no other literal
    true or star).  Plain-Python containers: at desk scale the constant
    factor of per-element numpy calls dominates otherwise."""

    def __init__(self, formula: Formula, tri: TriAssignment):
        self.vals: list[int] = [int(s) for s in tri.symbols]
        vals = self.vals
        cv, cs = formula.clause_vars.tolist(), formula.clause_signs.tolist()
        m, n = formula.m, formula.n
        # per-clause table of (var, positive occurrences, negative occurrences)
        self.table: list[list[tuple[int, int, int]]] = []
        self.occ: list[list[int]] = [[] for _ in range(n)]
        self.n_true = [0] * m
        self.n_star = [0] * m
        for c in range(m):
            counts: dict[int, list[int]] = {}
            for v, s in zip(cv[c], cs[c]):
                e = counts.setdefault(v, [0, 0])
                e[0 if s else 1] += 1
            entries = [(v, pn[0], pn[1]) for v, pn in counts.items()]
            self.table.append(entries)
            nt = ns = 0
            for v, pos, neg in entries:
                self.occ[v].append(c)
                val = vals[v]
                if val < 0:
                    ns += pos + neg
                else:
                    nt += pos if val == 1 else neg
            self.n_true[c] = nt
            self.n_star[c] = ns
        self.pinned = [0] * n
        self.blockers: list[set[int]] = []
        for c in range(m):
            blocked = self._blocked_vars(c)
            self.blockers.append(blocked)
            for v in blocked:
                self.pinned[v] += 1

    def _blocked_vars(self, c: int) -> set[int]:
        """Non-star variables of clause c with no other literal true or star."""
        vals = self.vals
        nt, ns = self.n_true[c], self.n_star[c]
        out = set()
        if ns > 0:
            return out  # a star on any variable unblocks all non-star ones
        for v, pos, neg in self.table[c]:
            val = vals[v]
            if val < 0:
                continue
            own_t = pos if val == 1 else neg
            if nt - own_t == 0:
                out.add(v)
        return out

    def is_free(self, v: int) -> bool:
        return self.pinned[v] == 0

    def star(self, v: int) -> list[int]:
        """Assign * to v; returns variables that became free as a result."""
        # update clause tallies using v's old value, then flip to star, then
        # rebuild the blocked sets of the affected clauses
        val = self.vals[v]
        for c in self.occ[v]:
            for u, pos, neg in self.table[c]:
                if u == v:
                    self.n_true[c] -= pos if val == 1 else neg
                    self.n_star[c] += pos + neg
                    break
        self.vals[v] = STAR
        released = []
        for c in self.occ[v]:
            new_blocked = self._blocked_vars(c)
            old_blocked = self.blockers[c]
            for u in old_blocked - new_blocked:
                self.pinned[u] -= 1
                if self.pinned[u] == 0:
                    released.append(u)
            for u in new_blocked - old_blocked:
                self.pinned[u] += 1
            self.blockers[c] = new_blocked
        return released


def is_free(formula: Formula, tri: TriAssignment | Sequence[int], i: int) -> bool:
    """True iff every clause containing variable i has another literal
    (on a different variable) evaluating true or *."""
    tri = _as_tri(formula, tri)
    if not 0 <= i < formula.n:
        raise InvalidInput(f"variable {i} out of range")
    vals = tri.symbols
    for c in range(formula.m):
        cv, cs = formula.clause_vars[c], formula.clause_signs[c]
        if not (cv == i).any():
            continue
        others = cv != i
        ok = False
        for v, s in zip(cv[others], cs[others]):
            val = vals[v]
            if val < 0 or (val == 1) == s:
                ok = True
                break
        if not ok:
            return False
    return True


def coarsen_fixed_point(formula: Formula, start,
                        order_policy: str | Callable = ORDER_LOWEST,
                        seed: int | None = None) -> CoarseningTrace:
    """Star free variables until none remain.

    The fixed point is independent of order_policy (freeness is monotone
    under starring); the policy only fixes the recorded order.  Policies:
    'lowest' (default), 'random' (requires seed), or a callable receiving the
    sorted list of currently free variables and returning the chosen one.
    """
    tri0 = _as_tri(formula, start)
    counts = _ClauseCounts(formula, tri0)
    candidates = [v for v in range(formula.n)
                  if tri0.symbols[v] != STAR and counts.is_free(v)]
    order: list[int] = []
    if order_policy == ORDER_LOWEST:
        heap = list(candidates)
        heapq.heapify(heap)

        def pop():
            return heapq.heappop(heap)

        def push(v):
            heapq.heappush(heap, v)

        def pending():
            return len(heap) > 0
    else:
        pool = list(candidates)
        if order_policy == ORDER_RANDOM:
            if seed is None:
                raise InvalidParameters("random order policy requires a seed")
            rng = np.random.default_rng(seed)

            def choose(c):
                return c[rng.integers(0, len(c))]
        elif callable(order_policy):
            choose = order_policy
        else:
            raise InvalidParameters(f"unknown order policy {order_policy!r}")

        def pop():
            pool.sort()
            v = choose(pool)
            pool.remove(v)
            return v

        def push(v):
            pool.append(v)

        def pending():
            return len(pool) > 0

    while pending():
        v = pop()
        order.append(v)
        for released in counts.star(v):
            push(released)
    fixed = TriAssignment(counts.vals)
    return CoarseningTrace(initial=tri0, coarsened_order=tuple(order),
                           fixed_point=fixed)


def replay_coarsening(formula: Formula, initial: TriAssignment,
                      order: Sequence[int]) -> TriAssignment:
    """Re-apply a recorded starring order, checking each step stars a free
    variable; used to validate traces."""
    tri = initial
    for v in order:
        if tri.is_star(v):
            raise ConsistencyError(f"variable {v} already starred")
        if not is_free(formula, tri, v):
            raise ConsistencyError(f"variable {v} was not free at its turn")
        tri = tri.with_star(v)
    return tri


def core_of_cluster(formula: Formula, cluster: np.ndarray,
                    verify: bool = True) -> TriAssignment:
    """The common coarsening fixed point of a cluster's assignments.

    With verify=True every member is coarsened and equality is checked; a
    disagreement raises ConsistencyError.  The guarantee requires each clause
    to hold a variable at most once per polarity pair: a clause containing
    both x and not-x satisfies itself, and adjacent solutions flipping that
    variable need not share a fixed point.
    """
    cluster = np.asarray(cluster, dtype=np.uint64)
    if len(cluster) == 0:
        raise InvalidInput("core of an empty cluster is undefined")
    core = coarsen_fixed_point(formula, int(cluster[0])).fixed_point
    if verify:
        for w in cluster[1:]:
            other = coarsen_fixed_point(formula, int(w)).fixed_point
            if other != core:
                raise ConsistencyError(
                    f"coarsening fixed points differ inside one cluster: "
                    f"{core} vs {other} (from {int(w):#x})")
    return core


def is_cover(formula: Formula, tri: TriAssignment | Sequence[int]) -> bool:
    """Clause-local and variable-local cover check.

    (i) every clause has a satisfied literal or at least two * literals;
    (ii) every 0/1 variable is essential somewhere: it satisfies some clause
    whose other variables' literals are all false (equivalently, no free
    variable is left unstarred).
    """
    tri = _as_tri(formula, tri)
    vals = tri.symbols
    cv, cs = formula.clause_vars, formula.clause_signs
    if formula.m:
        lit_val = vals[cv]
        n_true = ((lit_val >= 0) & ((lit_val == 1) == cs)).sum(axis=1)
        n_star = (lit_val < 0).sum(axis=1)
        if not ((n_true >= 1) | (n_star >= 2)).all():
            return False
    essential = np.zeros(formula.n, dtype=bool)
    for c in range(formula.m):
        if (vals[cv[c]] < 0).any():
            continue
        sat = (vals[cv[c]] == 1) == cs[c]
        sat_vars = set(int(v) for v in cv[c][sat])
        if len(sat_vars) == 1:
            essential[sat_vars.pop()] = True
    assigned = vals >= 0
    return bool(essential[assigned].all()) if assigned.any() else True


def strip_clauses(formula: Formula, sigma) -> TriAssignment:
    """Clause-stripping formulation of coarsening.

    Keeps only the clauses with exactly one satisfied literal occurrence and
    repeatedly removes any clause containing a variable that is the unique
    satisfier of no remaining clause.  Variables in surviving clauses keep
    sigma's value; all others become *.  Always equals the coarsening fixed
    point of sigma.
    """
    bits = bits_from_word(int(sigma), formula.n).astype(np.int8) \
        if isinstance(sigma, (int, np.integer)) else np.asarray(sigma, dtype=np.int8)
    if bits.shape != (formula.n,):
        raise InvalidInput("sigma must have length n")
    if not evaluate(formula, bits):
        raise InvalidInput("sigma does not satisfy the formula")
    cv, cs = formula.clause_vars, formula.clause_signs
    sat_occ = (bits[cv] == 1) == cs
    in_u = np.flatnonzero(sat_occ.sum(axis=1) == 1)
    sat_var = np.full(formula.m, -1, dtype=np.int64)
    for c in in_u:
        sat_var[c] = cv[c][sat_occ[c]][0]
    red_count = np.zeros(formula.n, dtype=np.int64)
    for c in in_u:
        red_count[sat_var[c]] += 1
    occ_unsat: list[list[int]] = [[] for _ in range(formula.n)]
    for c in in_u:
        for v in set(int(x) for x in cv[c][~sat_occ[c]]):
            occ_unsat[v].append(int(c))
    alive = {int(c) for c in in_u}
    queue = [c for c in alive
             if any(red_count[v] == 0 for v in set(int(x) for x in cv[c][~sat_occ[c]]))]
    while queue:
        c = queue.pop()
        if c not in alive:
            continue
        alive.discard(c)
        v = int(sat_var[c])
        red_count[v] -= 1
        if red_count[v] == 0:
            queue.extend(c2 for c2 in occ_unsat[v] if c2 in alive)
    out = np.full(formula.n, STAR, dtype=np.int8)
    for c in alive:
        for v in cv[c]:
            out[v] = bits[v]
    return TriAssignment(out)
