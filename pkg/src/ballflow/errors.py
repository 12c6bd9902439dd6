"""Exception hierarchy shared by all modules."""


class BallflowError(Exception):
    """Base class for all engine errors."""


class ValidationError(BallflowError):
    """Bad user input: malformed document, invalid point, negative radius, ..."""


class InternalConsistencyError(BallflowError):
    """A proved invariant failed at runtime; indicates an engine bug."""
