"""Exception types shared across the package."""


class SepkitError(Exception):
    pass


class MalformedInput(SepkitError, ValueError):
    """Input violates a structural invariant (bad JSON, unreachable state, ...)."""


class InputTooLarge(SepkitError, ValueError):
    pass


class CapacityExceeded(SepkitError, RuntimeError):
    """A configured brute-force or enumeration bound was hit."""


class PreconditionError(SepkitError, ValueError):
    pass


class LogicError(SepkitError, RuntimeError):
    pass


class UndefinedDistance(SepkitError, ValueError):
    pass


class InvalidScheme(SepkitError, ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ConstantsViolation(SepkitError, AssertionError):
    """A geometric inequality the separation relies on failed at run time."""


class AddressNotExact(SepkitError, ValueError):
    pass
