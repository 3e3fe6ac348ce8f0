"""Exception hierarchy.

Every error raised by the package derives from :class:`CapacityError`, which is
itself a :class:`ValueError` so callers that only care about bad input can
catch the builtin.
"""


class CapacityError(ValueError):
    pass


class NegativeWeight(CapacityError):
    pass


class AllZero(CapacityError):
    pass


class NonFinite(CapacityError):
    pass


class ZeroDimension(CapacityError):
    pass


class NonPositiveAlpha(CapacityError):
    pass


class AlphaNearOne(CapacityError):
    pass


class RhoOutOfRange(CapacityError):
    pass


class DimensionMismatch(CapacityError):
    pass


class SupportViolation(CapacityError):
    pass


class DegenerateNormalizer(CapacityError):
    pass


class NegativeEntry(CapacityError):
    pass


class RowSumOutOfTolerance(CapacityError):
    pass


class EmptyMatrix(CapacityError):
    pass


class InvalidConfig(CapacityError):
    pass


class DimensionTooLarge(CapacityError):
    pass


class ParseError(CapacityError):
    """Malformed channel file. ``line`` and ``column`` are 1-based."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class UnknownBuiltin(CapacityError):
    pass
