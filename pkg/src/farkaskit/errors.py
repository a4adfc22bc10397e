"""Package-wide exception types."""


class InvariantViolation(RuntimeError):
    """A mathematically guaranteed implication failed at runtime.

    Raised when a computed object contradicts something the theory proves
    unconditionally: a certificate that fails direct substitution, a
    one-directional implication observed to fail, a sandwich inclusion that
    does not hold. Always a bug, never a property of a well-posed instance.
    """


class InputFormatError(ValueError):
    """Malformed input data (bad JSON shape, float where a rational is required)."""
