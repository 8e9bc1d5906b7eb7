"""Exception hierarchy. Each class carries the CLI exit status it maps to."""


class GenConcError(Exception):
    exit_code = 1


class ValidationError(GenConcError, ValueError):
    exit_code = 2


class DimensionError(ValidationError):
    pass


class DegenerateInputError(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class NotPSDError(ValidationError):
    pass


class UnsupportedStructureError(ValidationError):
    pass


class NumericalFailure(GenConcError, ArithmeticError):
    exit_code = 3


class NotInFamilyError(GenConcError):
    """Amplitude matrix is not in the requested parameter family."""

    exit_code = 4

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotInClassError(NotInFamilyError):
    """Density matrix support leaves the family subspace."""


class NotTwoLevelError(NotInFamilyError):
    pass
