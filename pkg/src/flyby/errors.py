"""Exception hierarchy for the flyby package."""


class FlybyError(Exception):
    """Base class for all errors raised by this package."""


class InvalidModelError(FlybyError):
    """A quantum-defect model produced a non-positive effective quantum number."""


class SelectionRuleError(FlybyError):
    """A radial integral was requested for a dipole-forbidden pair (|l1 - l2| != 1)."""


class ResolutionError(FlybyError):
    """A radial grid was too coarse for the wavefunction norm to converge."""


class DegenerateGapError(FlybyError):
    """The s-p energy gap vanished, so the dimensionless coupling is undefined."""


class ConfigError(FlybyError):
    """A scan configuration file failed validation.

    Carries the offending line number when one is known; the CLI maps this
    class to exit code 2.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericsError(FlybyError):
    """Base class for runtime numerical failures (CLI exit code 3)."""


class StiffFailureError(NumericsError):
    """The adaptive integrator underflowed its step size at some time tau."""

    def __init__(self, message, tau=None):
        super().__init__(message)
        self.tau = tau


class IntegratorRejectionError(NumericsError):
    """Norm drift of a propagated state exceeded 100x the configured tolerance."""


class UnreachableTargetError(NumericsError):
    """A depletion target above the achievable maximum was requested."""

    def __init__(self, message, max_depletion=None):
        super().__init__(message)
        self.max_depletion = max_depletion
