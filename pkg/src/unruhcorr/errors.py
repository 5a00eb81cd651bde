"""Exception hierarchy shared by the numerical modules."""


class UnruhCorrError(Exception):
    """Base class for all errors raised by :mod:`unruhcorr`."""


class DomainError(UnruhCorrError, ValueError):
    """An argument lies outside the domain of the function."""


class NonPhysical(UnruhCorrError, ValueError):
    """A covariance matrix violates symmetry, positivity or the uncertainty relation."""


class BranchInconsistency(UnruhCorrError, ArithmeticError):
    """The two branches of the conditional-entropy expression disagree at their boundary."""


class SpectralMismatch(UnruhCorrError, ArithmeticError):
    """Closed-form symplectic eigenvalues disagree with the Williamson eigen-solver."""


class BracketError(UnruhCorrError, ValueError):
    """A root-finding bracket does not enclose a sign change."""


class ConvergenceFailure(UnruhCorrError, RuntimeError):
    """A quadrature or root search did not reach its tolerance.

    Attributes
    ----------
    quantity : str
        Name of the integral or search that failed.
    achieved_error : float
        Best error estimate reached before giving up.
    """

    def __init__(self, message, quantity="", achieved_error=float("nan")):
        super().__init__(message)
        self.quantity = quantity
        self.achieved_error = achieved_error


class ConfigError(UnruhCorrError, ValueError):
    """Invalid sweep configuration; ``key`` names the offending setting."""

    def __init__(self, key, message=""):
        super().__init__(f"{key}: {message}" if message else key)
        self.key = key
