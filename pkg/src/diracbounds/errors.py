"""Exception hierarchy shared by the library and the command-line front end."""


class DiracBoundsError(Exception):
    """Base class; ``exit_code`` is what the CLI returns when it escapes."""

    exit_code = 3


class DomainError(DiracBoundsError, ValueError):
    """Argument outside the mathematical domain (poles, parameter ranges)."""

    exit_code = 2


class ConfigurationError(DiracBoundsError, ValueError):
    """Inconsistent grids, scan settings or basis options."""

    exit_code = 2


class UsageError(DiracBoundsError, ValueError):
    """Operands that cannot be combined (mismatched bases, bad channel lists)."""

    exit_code = 2


class DataError(DiracBoundsError, ValueError):
    """Input data violating a declared invariant (e.g. a non-PSD potential)."""

    exit_code = 2


class ComputationError(DiracBoundsError, ArithmeticError):
    """A numerical procedure failed to deliver a result with the promised accuracy."""

    exit_code = 3
