"""
Exception Hierarchy
===================
Every failure raised by gausscap derives from GausscapError so the CLI can
map it to an exit code in one place:

  - DomainError            scalar argument outside the formula's domain
  - InvalidCovarianceMatrix asymmetric or uncertainty-violating CM
  - NotCompletelyPositive  (X, Y) pair that is not a physical channel
  - DimensionMismatch      blocks and states of incompatible sizes
  - FockTruncationError    cutoff too small for the requested accuracy
  - RecursionBreakdown     vanishing pivot in the Gamma recursion
  - InadmissiblePair       (n, m) pair not usable for a convex combination
  - WitnessNotFound        scan exhausted without a certified witness
"""

from typing import Any, Dict, Optional


class GausscapError(Exception):
    """Base class for all gausscap errors."""


class DomainError(GausscapError, ValueError):
    """A scalar parameter lies outside the domain of the requested quantity."""


class InvalidCovarianceMatrix(GausscapError, ValueError):
    """Matrix is not symmetric or violates V + (i/2)Sigma >= 0."""


class NotCompletelyPositive(GausscapError, ValueError):
    """Channel (X, Y) violates Y + (i/2)Sigma >= (i/2) X Sigma X^T."""


class DimensionMismatch(GausscapError, ValueError):
    pass


class FockTruncationError(GausscapError):
    """Truncated Fock computation lost more weight than allowed."""

    def __init__(self, message: str, leaked: float, cutoff: int):
        super().__init__(f"{message} (leaked mass {leaked:.3e}, cutoff D={cutoff})")
        self.leaked = leaked
        self.cutoff = cutoff


class RecursionBreakdown(GausscapError):
    def __init__(self, n: int, pivot: float):
        super().__init__(f"Gamma recursion pivot p_0({n}) = {pivot:.3e} vanishes")
        self.n = n
        self.pivot = pivot


class InadmissiblePair(GausscapError, ValueError):
    """k_n and k_m have the same sign or cancel exactly."""


class WitnessNotFound(GausscapError):
    """No certified violation on the supplied grid."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
