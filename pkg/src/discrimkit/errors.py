"""Exception hierarchy shared by the library and the command line."""


class DiscrimError(Exception):
    """Base class for all library errors."""


class ValidationError(DiscrimError, ValueError):
    """An input object violates a type invariant (trace, positivity, ...)."""


class DomainError(DiscrimError, ValueError):
    """An operation was called outside its domain."""


class ResourceError(DiscrimError):
    """A dense computation would exceed the configured dimension cap."""

    def __init__(self, message, size=None):
        super().__init__(message)
        self.size = size
