"""Exception hierarchy shared by all solver modules."""


class BilliardError(Exception):
    """Base class for every error raised by this package."""


class InvalidLaw(BilliardError):
    """A wall law violates positivity on the requested horizon."""


class OutOfRange(BilliardError):
    """A query time lies outside the range a tabulated law covers."""


class SuperluminalWall(BilliardError):
    """A wall law reaches |dL/dt| >= 1 (natural units, c = 1)."""


class DomainError(BilliardError):
    """An argument lies outside the mathematical domain of an operation."""


class NumericalFailure(BilliardError):
    """An iterative kernel (series, quadrature, time stepper) did not converge."""


class BracketError(BilliardError):
    """A root bracket does not enclose a sign change."""


class SingularPoint(BilliardError):
    """Evaluation requested exactly at a singular point of an ODE."""


class StabilityError(BilliardError):
    """An explicit time step violates the CFL stability bound."""


class InconsistentFormula(BilliardError):
    """A closed-form expression disagrees with its numerical cross-check."""


class IncompleteSpectrum(BilliardError):
    """An eigenvalue scan exhausted its window before finding all roots.

    Carries whatever was found so callers can report partial results.
    """

    def __init__(self, message, found=(), residuals=()):
        super().__init__(message)
        self.found = list(found)
        self.residuals = list(residuals)
