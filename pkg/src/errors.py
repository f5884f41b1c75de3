class NilalgError(Exception):
    """Base class for every error raised by the library."""


class ConfigError(NilalgError):
    pass


class ScalarError(NilalgError):
    pass


class DivisionByZero(ScalarError, ZeroDivisionError):
    pass


class TowerDepthExceeded(ScalarError):
    pass


class TowerMismatch(ScalarError):
    pass


class LiteralSyntaxError(NilalgError, ValueError):
    pass


class PoleAtZero(NilalgError):
    """A reduced denominator vanishes at the evaluation point."""

    def __init__(self, message: str, var: str = "t"):
        super().__init__(message)
        self.var = var


class BudgetExceeded(NilalgError):
    """Buchberger ran out of steps; keeps the partial basis for inspection."""

    def __init__(self, steps: int, partial: list):
        super().__init__(f"Groebner budget exhausted after {steps} steps")
        self.steps = steps
        self.partial = partial


class SingularMatrix(NilalgError):
    pass


class NotNil(NilalgError):
    pass


class UnknownFamily(NilalgError, KeyError):
    pass


class ParameterError(NilalgError, ValueError):
    pass


class OutsideCatalog(NilalgError):
    """A nilalgebra whose reduced table matches no catalog family."""

    def __init__(self, message: str, table=None):
        super().__init__(message)
        self.table = table


class ClassificationError(NilalgError):
    pass


class InvalidWitness(NilalgError, ValueError):
    pass


class InvalidCertificate(NilalgError, ValueError):
    pass
