"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
failures without a lookup table: 1 for invalid input, 2 for mathematical
domain violations, 3 for report I/O failures.
"""


class HardyError(Exception):
    exit_code = 1


class ValidationError(HardyError, ValueError):
    exit_code = 1


class MathDomainError(HardyError, ArithmeticError):
    exit_code = 2


class InvalidCoefficient(ValidationError):
    pass


class BandError(ValidationError):
    pass


class UnsupportedExponent(ValidationError):
    pass


class GridMismatch(ValidationError):
    pass


class InvalidInput(ValidationError):
    pass


class ParameterError(ValidationError):
    pass


class AliasingError(MathDomainError):
    pass


class ZeroFunction(MathDomainError):
    pass


class DomainError(MathDomainError):
    pass


class NotAnalytic(MathDomainError):
    pass


class NumericalConsistencyError(MathDomainError):
    pass


class MissingModel(MathDomainError):
    pass


class FitError(MathDomainError):
    pass


class ReportIOError(HardyError, OSError):
    exit_code = 3
