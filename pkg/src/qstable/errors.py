"""Exception types shared across the estimation modules."""

__all__ = ["EstimationError", "DegenerateSchemeError"]


class EstimationError(RuntimeError):
    """A likelihood solve failed.

    ``direction`` records which way the root ran off when the score had
    no sign change inside the search bracket: "low" means the likelihood
    pushes the scale toward zero, "high" toward infinity.
    """

    def __init__(self, message: str, direction: str | None = None):
        super().__init__(message)
        self.direction = direction


class DegenerateSchemeError(ValueError):
    """Thresholds so extreme that a bin probability underflowed to zero."""
