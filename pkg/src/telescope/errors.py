"""Exception types raised across the package."""


class TelescopeError(Exception):
    """Base class for computation errors (CLI exit status 1)."""


class EmptyComplex(TelescopeError, ValueError):
    pass


class DimensionLimit(TelescopeError, ValueError):
    pass


class NotMonotone(TelescopeError, ValueError):
    pass


class UnknownElement(TelescopeError, KeyError):
    pass


class IncompatibleSigns(TelescopeError, ValueError):
    pass


class BNotInS(TelescopeError, ValueError):
    pass


class FlagMismatch(TelescopeError, ValueError):
    pass


class NotAFlag(TelescopeError, ValueError):
    pass


class CriterionFails(TelescopeError, ValueError):
    pass


class WitnessRejected(TelescopeError, RuntimeError):
    pass


class ParseError(TelescopeError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)
        self.line = line
        self.column = column


class TooManyFunctions(TelescopeError, ValueError):
    pass


class BadThresholds(TelescopeError, ValueError):
    pass


class DepthExceeded(TelescopeError, RuntimeError):
    pass


class InvalidParams(TelescopeError, ValueError):
    pass
