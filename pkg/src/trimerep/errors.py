"""Exception types shared across the simulation modules."""

from __future__ import annotations


class TrimerError(Exception):
    """Base class for domain errors raised by this package."""


class NoSteadyStateError(TrimerError):
    """Drive at or above the critical strength: second moments diverge."""


class SingularBeyondDarkSectorError(TrimerError):
    """Moment-system nullspace is larger than the catalogued dark modes."""


class NearEPSingularityError(TrimerError):
    """Closed form requested within the guard band of a removable
    exceptional-point singularity; use the numeric path instead."""


class InsufficientDecayError(TrimerError):
    """Correlation trace has not decayed below the truncation threshold."""


class NotDoubletError(TrimerError):
    """Coupling estimation requires a spectrum with exactly two peaks."""


class CutoffSaturationError(TrimerError):
    """Truncated Fock evolution leaked weight into the top occupation level."""
