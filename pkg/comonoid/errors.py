"""Exception hierarchy shared by every comonoid module."""


class ComonoidError(Exception):
    """Base class for all errors raised by the comonoid package"""


class GroundSetMismatchError(ComonoidError, ValueError):
    """Words or families built on different ground sets were combined"""


class PreconditionError(ComonoidError, ValueError):
    """An operation was called outside its documented domain"""


class NotT1Error(PreconditionError):
    """The family does not separate some ordered pair of elements"""

    def __init__(self, pair, message=None):
        self.pair = pair
        super().__init__(message or f"family is not T1: no word contains {pair[0]} but omits {pair[1]}")


class HypothesisError(PreconditionError):
    """A chain hypothesis failed; ``witness`` holds the violating index pair"""

    def __init__(self, witness, message):
        self.witness = witness
        super().__init__(message)


class TermError(PreconditionError):
    """Malformed lattice expression or monotone term"""


class ChainError(PreconditionError):
    """Chain monotonicity or terminal condition violated"""


class NotAntichainError(PreconditionError):
    """Members supplied as an antichain are comparable"""


class NotUpSetError(PreconditionError):
    """Word supplied as an up-set is not upward closed"""


class MissingBoundsError(PreconditionError):
    """A poset lacks its least or greatest element"""


class BudgetError(ComonoidError):
    """An explicit size guard was exceeded"""


class SunflowerError(ComonoidError):
    """No sunflower extraction exists at the requested threshold"""


class InvariantViolation(ComonoidError, AssertionError):
    """An asserted mathematical property failed"""


class ParseError(ComonoidError):
    """Structure file could not be parsed"""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(f"{location}{message}")
