"""Exception hierarchy shared by all modules."""


class BackflowError(Exception):
    """Base class for errors raised by this package."""


class DomainError(BackflowError, ValueError):
    """Argument outside the domain of a function."""


class PoleError(DomainError):
    """Argument sits on a pole of a special function."""


class ConvergenceError(BackflowError, RuntimeError):
    """An adaptive numerical scheme ran out of budget."""


class NumericsError(BackflowError, FloatingPointError):
    """A propagated quantity became non-finite."""


class InputError(BackflowError, ValueError):
    """Inconsistent input data (for example mismatched series lengths)."""


class PreconditionError(BackflowError, ValueError):
    """An operation was called outside its admissible parameter region."""
