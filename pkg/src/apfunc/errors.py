"""Exception types shared across modules."""


class SpectrumFormatError(ValueError):
    """Malformed spectrum or zero-table file (message carries the line number)."""


class AliasingError(ValueError):
    """Grid step too coarse for the truncated spectrum (step * lambda_max > 1/2)."""


class BudgetExceededError(RuntimeError):
    """A sieve, lattice scan or orbit enumeration would exceed its work budget."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""
