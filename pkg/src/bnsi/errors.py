"""Exception hierarchy shared by every module."""


class BnsiError(Exception):
    """Base class for all library errors."""


class GuardExceeded(BnsiError):
    """A brute-force computation would exceed its desk-scale guard."""


class TooLarge(GuardExceeded):
    pass


class TableTooLarge(GuardExceeded):
    pass


class ZeroInverse(BnsiError, ZeroDivisionError):
    pass


class DimensionMismatch(BnsiError, ValueError):
    pass


class DependentRows(BnsiError, ValueError):
    pass


class FieldError(BnsiError, ValueError):
    """Unsupported or inconsistent field."""


class FieldTooSmall(FieldError):
    pass


class ParseError(BnsiError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class InvalidProblem(BnsiError, ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class EmptyKeepSet(BnsiError, ValueError):
    pass


class DuplicateSyndrome(BnsiError):
    """Two low-weight error patterns share a syndrome; the encoder is not valid."""


class SyndromeNotFound(BnsiError):
    """No error pattern of weight <= delta_s explains the syndrome."""


class PreconditionViolated(BnsiError, ValueError):
    pass


class DistanceTooSmall(BnsiError, ValueError):
    def __init__(self, required, actual):
        self.required = required
        self.actual = actual
        super().__init__(f"code has minimum distance {actual}, need at least {required}")


class InvalidEncoder(BnsiError):
    pass
