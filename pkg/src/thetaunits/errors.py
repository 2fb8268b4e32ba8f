"""Exception hierarchy shared by all modules.

Each class maps onto one CLI exit code (see ``thetaunits.cli``).
"""


class ThetaUnitsError(Exception):
    """Base class."""

    exit_code = 1


class DomainError(ThetaUnitsError, ValueError):
    """Argument outside the domain of the operation."""

    exit_code = 2


class PrecisionExhaustedError(ThetaUnitsError, ArithmeticError):
    """Independent representations disagree beyond the error budget."""

    exit_code = 3


class HypothesisError(ThetaUnitsError, ValueError):
    """(m, n) does not satisfy the hypotheses of the unit-product theorems."""

    exit_code = 4


class ConsistencyError(ThetaUnitsError, ArithmeticError):
    """A derived closed form failed its numeric audit."""

    exit_code = 1


class NotFoundError(ThetaUnitsError, LookupError):
    """Search terminated without a verified result."""

    exit_code = 1
