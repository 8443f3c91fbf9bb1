"""Exception types shared across the package."""


class SatgeoError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameters(SatgeoError, ValueError):
    """Operation called with parameters outside its documented domain."""


class InvalidInput(SatgeoError, ValueError):
    """Well-typed input that violates a structural precondition."""


class ResourceLimit(SatgeoError):
    """Requested computation exceeds a configured size cap."""


class DimacsParseError(SatgeoError, ValueError):
    """Malformed DIMACS CNF text.  Carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BracketError(SatgeoError):
    """A bisection bracket does not straddle the sought transition or root."""


class DomainError(SatgeoError, ValueError):
    """Parameters lie outside the region where a formula or bound applies."""


class DegenerateError(SatgeoError):
    """A closed-form elimination is undefined at this point (division by zero)."""


class NoForbiddenRegion(SatgeoError):
    """The pair-rate never drops below 1, so Delta and g are undefined."""


class SolverFailure(SatgeoError):
    """Iterative solver failed to converge; carries the iteration trace."""

    def __init__(self, message, trace=None):
        self.trace = trace or []
        super().__init__(message)


class InvalidStationaryPoint(SolverFailure):
    """Converged point violates the required sign structure."""


class ForbiddenGapViolation(SatgeoError):
    """A solution pair occupies the distance gap a region partition requires.

    Attributes carry the offending pair and its distance so callers can report
    the violation instead of silently mis-grouping.
    """

    def __init__(self, word_a, word_b, distance, a, b):
        self.word_a = int(word_a)
        self.word_b = int(word_b)
        self.distance = int(distance)
        super().__init__(
            f"solution pair at Hamming distance {distance} inside the open gap "
            f"({a}, {b}): {word_a:#x} vs {word_b:#x}"
        )


class ConsistencyError(SatgeoError):
    """An internal cross-check failed (would falsify a structural guarantee)."""
