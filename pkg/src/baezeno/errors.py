"""Exception hierarchy shared by the kernel, model and engine."""


class ZenoError(Exception):
    """Base class for all package errors."""


class ValidationError(ZenoError, ValueError):
    """An input violates a documented precondition."""


class SizingError(ZenoError, ValueError):
    """A requested joint dimension exceeds the configured cap."""


class NumericalError(ZenoError, ArithmeticError):
    """A numerical routine failed or drifted outside tolerance."""
