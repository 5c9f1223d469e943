"""Error types shared across the library."""


class ResourceLimitError(RuntimeError):
    """Raised when a request exceeds a declared build/size budget.

    Exact counters raise this instead of silently degrading; the message
    says which knob (sieve limit, brute-force bound) to turn.
    """


class PrecisionError(ValueError):
    """Raised when a requested tolerance is below what the method certifies."""
