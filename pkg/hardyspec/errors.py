'''
Exception hierarchy for hardyspec.

Every precondition violation raises a HardyError subclass carrying a human-readable
message; the cli turns these into a logged error and a non-zero exit status.
'''


class HardyError(Exception):
    '''
    Base class for expected hardyspec errors
    '''

    def __init__(self, message):
        super().__init__(message)
        self.message = message


class InvalidBladeError(HardyError):
    '''Blade mask or generator index outside the algebra'''


class DimensionMismatchError(HardyError):
    '''Operands belong to algebras of different dimension'''


class ParavectorInverseError(HardyError, ZeroDivisionError):
    '''Inverse of the zero paravector'''


class HeaderMismatchError(HardyError):
    '''Fields live on different grids'''


class DomainError(HardyError, ValueError):
    '''Argument outside the domain of an operation (x0 <= 0, p out of range, ...)'''


class InvalidEnvelopeError(HardyError):
    '''Test-function envelope reaching the origin or beyond the Nyquist ball'''


class SingularWeightError(HardyError):
    '''Density has mass at the zero frequency, where the spectral weight is singular'''


class SlabError(HardyError):
    '''Slab too thin, unevenly spaced, or a ball leaving it'''


class FieldFormatError(HardyError):
    '''Corrupt or incompatible CFLD1 file'''


class UnknownGeneratorError(HardyError):
    '''Generator name not known to cmd_gen'''
