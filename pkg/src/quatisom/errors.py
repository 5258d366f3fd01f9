"""Exception types raised by the library."""

from __future__ import annotations


class QuatisomError(Exception):
    """Base class for library errors."""


class NotInSp11Error(QuatisomError):
    """Input matrix does not satisfy the Sp(1,1) membership conditions."""


class UnrealizableInvariantsError(QuatisomError):
    """A (tau, rho) pair that no Sp(1,1) element attains."""


class RootConvergenceError(QuatisomError):
    """Quartic root iteration failed to meet its residual target."""

    def __init__(self, message: str, best_residual: float):
        super().__init__(message)
        self.best_residual = best_residual


class ConjugatePairingError(QuatisomError):
    """Quartic roots could not be partitioned into conjugate pairs."""


class EigenvectorExtractionError(QuatisomError):
    """Null-space extraction for a right eigenvalue failed."""


class TrichotomyViolationError(QuatisomError):
    """Fixed-point count (or residual) outside the elliptic/parabolic/loxodromic trichotomy."""


class InconsistencyError(QuatisomError):
    """Cross-checks of a classification disagree.

    Carries the offending report (as a JSON-ready dict) in ``evidence``.
    """

    def __init__(self, message: str, evidence: dict | None = None):
        super().__init__(message)
        self.evidence = evidence or {}
