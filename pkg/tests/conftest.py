"""Shared fixtures and independent reference oracles.

The oracles here recompute everything the library claims by the most direct
method available (full truth tables, dict-based BFS, exhaustive recursion
over coarsening orders) and are kept independent of the library's own code
paths.
"""

import pytest

from satgeo.coarsening import is_free
from satgeo.formula import Formula
from satgeo.words import TriAssignment


@pytest.fixture
def x0_forcing():
    """Four clauses over three variables whose solutions are exactly x0=1."""
    return Formula.from_clauses(3, 3, [[1, 2, 3], [1, -2, 3], [1, 2, -3], [1, -2, -3]])


@pytest.fixture
def cyclic_core():
    """(~x0|x1|x2)(~x1|x2|x0)(~x2|x0|x1): the all-zero solution is an isolated
    cluster whose coarsening fixed point keeps every variable."""
    return Formula.from_clauses(3, 3, [[-1, 2, 3], [-2, 3, 1], [-3, 1, 2]])


@pytest.fixture
def single_clause():
    return Formula.from_clauses(3, 3, [[1, 2, 3]])


def ref_solutions(formula):
    """Oracle: all satisfying words by direct truth-table evaluation."""
    out = []
    for word in range(1 << formula.n):
        bits = [(word >> i) & 1 for i in range(formula.n)]
        ok = True
        for c in range(formula.m):
            if not any(bits[v] == s for v, s in
                       zip(formula.clause_vars[c], formula.clause_signs[c])):
                ok = False
                break
        if ok:
            out.append(word)
    return out


def ref_components(words, radius):
    """Oracle: connected components by plain BFS over a set of ints."""
    remaining = set(int(w) for w in words)
    comps = []
    while remaining:
        start = min(remaining)
        comp = {start}
        remaining.discard(start)
        frontier = [start]
        while frontier:
            x = frontier.pop()
            for y in list(remaining):
                if bin(x ^ y).count("1") <= radius:
                    remaining.discard(y)
                    comp.add(y)
                    frontier.append(y)
        comps.append(comp)
    return comps


def all_order_fixed_points(formula, start):
    """Oracle: every fixed point reachable by any coarsening order (tiny
    instances only; exponential)."""
    results = set()

    def rec(tri):
        free = [v for v in range(formula.n)
                if not tri.is_star(v) and is_free(formula, tri, v)]
        if not free:
            results.add(str(tri))
            return
        for v in free:
            rec(tri.with_star(v))

    rec(start if isinstance(start, TriAssignment) else TriAssignment(start))
    return results


def random_formula(rng, n, k, m, distinct=True):
    """Plain random formula without going through the library generators."""
    clauses = []
    for _ in range(m):
        if distinct:
            vs = rng.choice(n, size=k, replace=False)
        else:
            vs = rng.integers(0, n, size=k)
        signs = rng.integers(0, 2, size=k)
        clauses.append([int(v + 1) if s else -int(v + 1) for v, s in zip(vs, signs)])
    return Formula.from_clauses(n, k, clauses, with_replacement=not distinct)
