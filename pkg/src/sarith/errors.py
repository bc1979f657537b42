"""Shared exception types.

The CLI maps these onto its exit-code contract: parse errors exit 1,
budget overruns exit 2, violated mathematical invariants exit 3.
"""


class SpecParseError(ValueError):
    """A curve / place / polynomial spec string failed to parse.

    Carries the character position of the offending token so the CLI can
    print a position-annotated message.
    """

    def __init__(self, message, text=None, pos=None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"col {pos}: {message}"
        super().__init__(message)


class BudgetError(RuntimeError):
    """An enumeration or size budget was exceeded (resource limit, not a bug)."""


class DegreeCapError(BudgetError):
    """Polynomial degree exceeded the hard cap."""


class InvariantViolationError(AssertionError):
    """An always-true mathematical invariant failed; indicates a bug."""


class PrecisionExhaustedError(ArithmeticError):
    """A local power-series expansion was identically zero to working
    precision; the caller should retry with higher precision."""

    def __init__(self, prec):
        self.prec = prec
        super().__init__(f"series expansion vanished to precision {prec}")


class NotUpperTriangularError(ValueError):
    """Input matrix lies outside the upper-triangular (Borel) subgroup."""


class PoleReductionError(ValueError):
    """A matrix entry has a pole at a divisor of the reduction modulus."""


class NonEuclideanError(ValueError):
    """Operation requires the Euclidean configuration (projective line,
    S = {infinity})."""
