"""Exception taxonomy shared by all modules."""


class InvalidInputError(ValueError):
    """Caller passed arguments outside the documented domain."""


class PreconditionError(ValueError):
    """A stated precondition of an operation does not hold."""


class InternalConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree.

    Raised instead of silently preferring one side; always indicates a bug
    or corrupted data, never a mathematical finding.
    """


class ResourceLimitError(RuntimeError):
    """The instance exceeds a built-in size limit."""
