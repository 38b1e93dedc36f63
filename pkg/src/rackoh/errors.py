"""Shared exception types with stable CLI exit-code semantics."""


class RackohError(Exception):
    """Base class for all package errors."""


class InputError(RackohError):
    """Malformed or out-of-contract input (CLI exit code 2)."""


class PreconditionError(RackohError):
    """A mathematical precondition fails for the given arguments (CLI exit code 2)."""


class ResourceError(RackohError):
    """A configured cap or budget was exceeded (CLI exit code 3)."""
