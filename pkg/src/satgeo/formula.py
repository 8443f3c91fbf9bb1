"""k-CNF formulas: representation, random generation, evaluation, DIMACS I/O.

Three random models are provided:

* uniform          -- m clauses drawn independently; signs uniform.
* planted_negative -- clauses conditioned on holding at least one negative
                      literal, so the all-zero assignment always satisfies.
* single_sat_literal -- one negative and k-1 positive literals per clause,
                      variables i.i.d. with replacement; the all-zero
                      assignment satisfies every clause in exactly one literal.

Variables are 0-indexed internally and 1-indexed in DIMACS.  All generators
use numpy's seeded PCG64 generator, so outputs are reproducible across
platforms for a fixed numpy major version.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import DimacsParseError, InvalidInput, InvalidParameters

MODEL_UNIFORM = "uniform"
MODEL_PLANTED_NEGATIVE = "planted_negative"
MODEL_SINGLE_SAT_LITERAL = "single_sat_literal"


class Literal(NamedTuple):
    var: int
    positive: bool

    def __str__(self) -> str:
        return ("x" if self.positive else "~x") + str(self.var)


@dataclass(frozen=True, eq=False)
class Formula:
    """A k-CNF formula over n variables.

    clause_vars[c, j] is the variable index of the j-th literal of clause c,
    clause_signs[c, j] is True for a positive literal.  model_tag records the
    generating distribution; with_replacement records whether clauses may
    repeat a variable.
    """

    n: int
    k: int
    clause_vars: np.ndarray
    clause_signs: np.ndarray
    model_tag: str = MODEL_UNIFORM
    with_replacement: bool = False

    def __post_init__(self):
        cv = np.ascontiguousarray(np.asarray(self.clause_vars, dtype=np.int32).reshape(-1, self.k))
        cs = np.ascontiguousarray(np.asarray(self.clause_signs, dtype=bool).reshape(-1, self.k))
        if cv.shape != cs.shape:
            raise InvalidInput("clause_vars and clause_signs shapes differ")
        cv.setflags(write=False)
        cs.setflags(write=False)
        object.__setattr__(self, "clause_vars", cv)
        object.__setattr__(self, "clause_signs", cs)

    @property
    def m(self) -> int:
        return self.clause_vars.shape[0]

    @property
    def density(self) -> float:
        return self.m / self.n

    def clause(self, c: int) -> tuple[Literal, ...]:
        return tuple(Literal(int(v), bool(s))
                     for v, s in zip(self.clause_vars[c], self.clause_signs[c]))

    @property
    def clauses(self) -> Iterator[tuple[Literal, ...]]:
        return (self.clause(c) for c in range(self.m))

    def __eq__(self, other) -> bool:
        """Structural equality: n and the exact clause/literal order.

        Two empty formulas over the same variables are equal regardless of
        declared width (DIMACS carries no width for zero clauses)."""
        if not isinstance(other, Formula):
            return NotImplemented
        if self.n != other.n:
            return False
        if self.m == 0 and other.m == 0:
            return True
        return (self.k == other.k
                and np.array_equal(self.clause_vars, other.clause_vars)
                and np.array_equal(self.clause_signs, other.clause_signs))

    def __repr__(self) -> str:
        return (f"Formula(n={self.n}, k={self.k}, m={self.m}, "
                f"model_tag={self.model_tag!r})")

    @classmethod
    def from_clauses(cls, n: int, k: int,
                     clauses: Sequence[Sequence[int]], **kw) -> "Formula":
        """Build from DIMACS-style signed 1-indexed literals."""
        if any(len(c) != k for c in clauses):
            raise InvalidInput("all clauses must have width k")
        arr = np.asarray(clauses, dtype=np.int64).reshape(-1, k)
        if (arr == 0).any():
            raise InvalidInput("literal 0 is not allowed")
        cv = (np.abs(arr) - 1).astype(np.int32)
        if cv.size and cv.max() >= n:
            raise InvalidInput("literal references a variable beyond n")
        return cls(n=n, k=k, clause_vars=cv, clause_signs=arr > 0, **kw)

    def validate(self) -> None:
        """Check the structural invariants for this formula's model tag."""
        cv, cs = self.clause_vars, self.clause_signs
        if self.n < 1 or self.k < 1:
            raise InvalidInput("n and k must be positive")
        if cv.size and (cv.min() < 0 or cv.max() >= self.n):
            raise InvalidInput("variable index out of range")
        if not self.with_replacement and self.m:
            sorted_vars = np.sort(cv, axis=1)
            if (sorted_vars[:, 1:] == sorted_vars[:, :-1]).any():
                raise InvalidInput("repeated variable in distinct-variable mode")
        if self.model_tag == MODEL_PLANTED_NEGATIVE and self.m:
            if cs.all(axis=1).any():
                raise InvalidInput("planted_negative clause with no negative literal")
        if self.model_tag == MODEL_SINGLE_SAT_LITERAL and self.m:
            if ((~cs).sum(axis=1) != 1).any():
                raise InvalidInput("single_sat_literal clause without exactly one negative literal")


def _check_gen_params(n: int, k: int, m: int, distinct: bool) -> None:
    if k < 2:
        raise InvalidParameters("k must be at least 2")
    if m < 0:
        raise InvalidParameters("m must be non-negative")
    if n < 1:
        raise InvalidParameters("n must be positive")
    if distinct and n < k:
        raise InvalidParameters("distinct-variable mode requires n >= k")


def _draw_vars(rng: np.random.Generator, n: int, k: int, m: int,
               distinct: bool) -> np.ndarray:
    if not distinct:
        return rng.integers(0, n, size=(m, k), dtype=np.int64).astype(np.int32)
    out = np.empty((m, k), dtype=np.int32)
    for c in range(m):
        out[c] = rng.choice(n, size=k, replace=False)
    return out


def gen_uniform(n: int, k: int, m: int, seed: int,
                replacement_mode: bool = False) -> Formula:
    """Random k-CNF with m clauses; signs uniform, variables distinct by default."""
    _check_gen_params(n, k, m, not replacement_mode)
    rng = np.random.default_rng(seed)
    cv = _draw_vars(rng, n, k, m, not replacement_mode)
    cs = rng.integers(0, 2, size=(m, k)) == 1
    return Formula(n=n, k=k, clause_vars=cv, clause_signs=cs,
                   model_tag=MODEL_UNIFORM, with_replacement=replacement_mode)


def gen_planted_negative(n: int, k: int, m: int, seed: int,
                         replacement_mode: bool = False) -> Formula:
    """Random k-CNF conditioned on every clause having >= 1 negative literal.

    Equivalent to planting the all-zero assignment: sign patterns are uniform
    over the 2^k - 1 admissible patterns (rejection sampling).
    """
    _check_gen_params(n, k, m, not replacement_mode)
    rng = np.random.default_rng(seed)
    cv = _draw_vars(rng, n, k, m, not replacement_mode)
    cs = rng.integers(0, 2, size=(m, k)) == 1
    bad = np.flatnonzero(cs.all(axis=1))
    while bad.size:
        cs[bad] = rng.integers(0, 2, size=(bad.size, k)) == 1
        bad = bad[cs[bad].all(axis=1)]
    return Formula(n=n, k=k, clause_vars=cv, clause_signs=cs,
                   model_tag=MODEL_PLANTED_NEGATIVE, with_replacement=replacement_mode)


def gen_single_sat_literal(n: int, k: int, m: int, seed: int) -> Formula:
    """One negative + (k-1) positive literals per clause, i.i.d. with replacement.

    The negative literal is placed first in each clause.  Under the all-zero
    assignment every clause is satisfied by exactly that literal.
    """
    if k < 2:
        raise InvalidParameters("k must be at least 2")
    if n < 1 or m < 0:
        raise InvalidParameters("need n >= 1 and m >= 0")
    rng = np.random.default_rng(seed)
    cv = rng.integers(0, n, size=(m, k), dtype=np.int64).astype(np.int32)
    cs = np.ones((m, k), dtype=bool)
    cs[:, 0] = False
    return Formula(n=n, k=k, clause_vars=cv, clause_signs=cs,
                   model_tag=MODEL_SINGLE_SAT_LITERAL, with_replacement=True)


def evaluate(formula: Formula, assignment: Sequence[int]) -> bool:
    """True iff every clause contains at least one satisfied literal."""
    values = np.asarray(assignment, dtype=bool)
    if values.shape != (formula.n,):
        raise InvalidInput(f"assignment length {values.shape} != n={formula.n}")
    if formula.m == 0:
        return True
    sat = values[formula.clause_vars] == formula.clause_signs
    return bool(sat.any(axis=1).all())


def evaluate_word(formula: Formula, word: int) -> bool:
    """evaluate() for an assignment packed into an integer word."""
    from .words import bits_from_word
    return evaluate(formula, bits_from_word(word, formula.n))


# ---------------------------------------------------------------------------
# DIMACS CNF
# ---------------------------------------------------------------------------

def emit_dimacs(formula: Formula) -> str:
    """Serialize to DIMACS CNF (1-indexed literals, LF newlines)."""
    lines = [f"p cnf {formula.n} {formula.m}"]
    signed = np.where(formula.clause_signs, formula.clause_vars + 1,
                      -(formula.clause_vars + 1))
    for row in signed:
        lines.append(" ".join(str(x) for x in row) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Formula:
    """Parse DIMACS CNF text.  Errors carry the offending line number."""
    n = m_declared = None
    clauses: list[list[int]] = []
    current: list[int] = []
    current_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if n is not None:
                raise DimacsParseError("duplicate problem line", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsParseError(f"malformed header {line!r}", lineno)
            try:
                n, m_declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsParseError(f"malformed header {line!r}", lineno) from None
            if n < 1 or m_declared < 0:
                raise DimacsParseError("header counts out of range", lineno)
            continue
        if n is None:
            raise DimacsParseError("clause before problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsParseError(f"bad token {tok!r}", lineno) from None
            if lit == 0:
                clauses.append(current)
                current = []
                current_line = None
            else:
                if abs(lit) > n:
                    raise DimacsParseError(f"literal {lit} out of range (n={n})", lineno)
                if current_line is None:
                    current_line = lineno
                current.append(lit)
    if current:
        raise DimacsParseError("unterminated clause at end of input", current_line)
    if n is None:
        raise DimacsParseError("missing problem line", 1)
    if m_declared != len(clauses):
        raise DimacsParseError(
            f"header declares {m_declared} clauses but {len(clauses)} found", 1)
    widths = {len(c) for c in clauses}
    if len(widths) > 1:
        raise DimacsParseError(f"clause widths vary: {sorted(widths)}", 1)
    k = widths.pop() if widths else 0
    if k == 0 and clauses:
        raise DimacsParseError("empty clause not allowed", 1)
    if not clauses:
        k = max(k, 2)
    return Formula.from_clauses(n, k, clauses, with_replacement=True)


def read_dimacs(path) -> Formula:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_dimacs(fh.read())


def write_dimacs(formula: Formula, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(emit_dimacs(formula))
