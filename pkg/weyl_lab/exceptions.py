"""Custom exceptions for weyl-lab package."""


class WCLError(Exception):
    """Base exception for all weyl-lab errors."""

    pass


class ConfigError(WCLError):
    """Raised when an experiment configuration is invalid or has unknown fields."""

    pass


class DomainError(WCLError, ValueError):
    """Raised when an operation is called outside its domain of definition."""

    pass


class UnsupportedAnalyticityError(DomainError):
    """Raised when complex scaling is requested for a non-analytic potential.

    Uniform complex scaling evaluates ``V(x e^{iθ})`` and therefore needs an
    analytic potential. Piecewise-constant potentials must go through the
    complex absorbing potential path instead.
    """

    pass


class CapacityError(WCLError):
    """Raised when an enumeration would exceed the configured cell/word cap."""

    pass


class NumericalError(WCLError):
    """Base exception for numerical failures."""

    pass


class ConvergenceError(NumericalError):
    """Raised when an iterative method (QR sweeps, Newton) fails to converge."""

    pass


class FitDegenerateError(NumericalError):
    """Raised when a log-log fit has fewer than 3 usable points."""

    pass


class ResonanceSearchError(NumericalError):
    """Raised when the refined roots disagree with the winding number of the search box.

    The transfer-matrix oracle certifies its output by comparing the number of
    refined roots against the argument-principle count over the box boundary.
    A mismatch means a root was missed or duplicated; the result is never
    returned silently.
    """

    pass
