"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument is outside the operation's documented domain."""


class PreconditionError(ValueError):
    """A documented precondition of the operation does not hold."""


class UnboundedBodyError(ValueError):
    """A construction would produce an unbounded set."""


class NotSupportedError(NotImplementedError):
    """The requested computation is not available for this body kind."""
