"""Exception types raised by the library.

Every error carries an optional ``witness`` describing the offending data,
so that callers (and the command line front end) can report it.
"""


class AlgebraError(Exception):
    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class InputError(AlgebraError):
    """Malformed or inconsistent input data."""


class AmbientMismatch(InputError):
    pass


class DimMismatch(InputError):
    pass


class ParseError(InputError):
    pass


class ValidationError(InputError):
    pass


class NotPrime(ValidationError):
    pass


class NotAssociative(ValidationError):
    pass


class BadUnit(ValidationError):
    pass


class AlgebraMismatch(InputError):
    pass


class NotProjective(AlgebraError):
    pass


class NotAutomorphism(AlgebraError):
    pass


class RNotSubbimodule(InputError):
    pass


class NotFreeRight(InputError):
    pass


class BraidingNotBijective(InputError):
    pass


class RelationsNotStable(AlgebraError):
    pass


class NotClassicallyKoszul(AlgebraError):
    pass


class EquivarianceFailed(AlgebraError):
    pass


class SplittingMissing(AlgebraError):
    pass


class HomotopySolveFailed(AlgebraError):
    pass


class Pdim2PreconditionFailed(AlgebraError):
    pass


class NoFreeGenerator(AlgebraError):
    pass


class SigmaNotAutomorphism(AlgebraError):
    pass


class EOutsideSpace(AlgebraError):
    pass


class DimensionCapExceeded(AlgebraError):
    pass
