"""Exception hierarchy shared by all engine layers."""

from __future__ import annotations


class EngineError(Exception):
    """Base class for every error raised by the engine."""


class AmbientMismatch(EngineError, ValueError):
    """Two objects live in spaces of different dimension."""


class ContainmentError(EngineError, ValueError):
    """A subspace was expected to contain another one and does not."""


class NotFoundWithinBound(EngineError):
    """A bounded search finished without a witness.

    This signals that the height bound was too small, never that no
    witness exists.
    """

    def __init__(self, what: str, bound: int):
        super().__init__(f"no {what} found with coordinates bounded by {bound}")
        self.what = what
        self.bound = bound


class SignatureMismatch(EngineError, ValueError):
    """A quadratic space has the wrong dimension or signature."""


class IsotropyViolation(EngineError, ValueError):
    """A vector required to be isotropic is not."""


class DegenerateRestriction(EngineError, ValueError):
    """The form restricted to a subspace is degenerate."""


class NotNilpotent(EngineError, ValueError):
    """An endomorphism required to be nilpotent is not."""


class IndexMismatch(EngineError, ValueError):
    """A nilpotent operator has an unsupported nilpotency index."""


class NotAnOrbit(EngineError, ValueError):
    """The pair (N, x) does not define a nilpotent orbit."""


class CapExceeded(EngineError):
    """A construction would exceed a hard size cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what} of size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class PurityFailure(EngineError):
    """A pair of filtrations does not define a mixed Hodge structure."""


class PreconditionError(EngineError, ValueError):
    """Generic violated precondition."""
