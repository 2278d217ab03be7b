"""Exception hierarchy shared by every module."""


class SigflowError(Exception):
    """Base class for user-facing errors (bad input, ill-sorted terms)."""


class ZeroDenominator(SigflowError, ZeroDivisionError):
    pass


class NotRational(SigflowError):
    """A fraction whose denominator vanishes at x = 0 where a stream was needed."""


class ShapeMismatch(SigflowError):
    pass


class LengthMismatch(SigflowError):
    pass


class ArityMismatch(SigflowError):
    pass


class IndexOutOfRange(SigflowError, IndexError):
    pass


class CircuitSyntaxError(SigflowError, SyntaxError):
    """Parse failure at a 1-based ``line``/``col`` position.

    Also a builtin ``SyntaxError``, so generic handlers catch it.
    """

    def __init__(self, message, line, col):
        SyntaxError.__init__(self, f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col


class UnknownGenerator(CircuitSyntaxError):
    pass


class SortMismatch(SigflowError):
    pass


class NotSF(SigflowError):
    """The term is not a signal flow graph (contains backward generators)."""


class Nondeterministic(SigflowError):
    def __init__(self, step, free_dims):
        super().__init__(
            f"step {step} has a {free_dims}-dimensional space of solutions; "
            "choose an input/output partition with `realise`"
        )
        self.step = step
        self.free_dims = free_dims


class InputLengthMismatch(SigflowError):
    pass


class InvariantViolation(Exception):
    """An internal consistency check failed.  Always a bug."""
