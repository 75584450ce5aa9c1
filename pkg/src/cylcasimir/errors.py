"""Exception and warning types raised across the package."""

from __future__ import annotations


class CasimirError(Exception):
    """Base class for all package errors."""


class InvalidGeometry(CasimirError, ValueError):
    pass


class TiltNotSupported(InvalidGeometry):
    pass


class ContactError(InvalidGeometry):
    """The tilted cylinder touches the plane (|alpha| >= 1)."""


class DomainError(CasimirError, ValueError):
    pass


class InvalidMaterial(CasimirError, ValueError):
    pass


class OutOfRange(CasimirError, ValueError):
    pass


class InsufficientData(CasimirError, ValueError):
    pass


class NumericalError(CasimirError, ArithmeticError):
    """Base class for failures of a numerical procedure (not of the inputs)."""


class ConvergenceError(NumericalError):
    pass


class QuadratureError(NumericalError):
    pass


class TailBoundExceeded(NumericalError):
    pass


class FitError(NumericalError):
    pass


class DegenerateFit(FitError):
    pass


class NonConvergence(FitError):
    pass


class PoleInsideData(FitError):
    pass


class PeakOutsideWindow(FitError):
    pass


class PfaValidityWarning(UserWarning):
    """d/a is outside the regime where the proximity approximation is trusted."""


class CutoffWarning(UserWarning):
    """The Matsubara sum was truncated while its last term was still significant."""
