"""Exception types shared across the package."""


class SuccinctError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(SuccinctError, ValueError):
    """Input violates a structural precondition."""


class CompletenessError(ValidationError):
    """A DFA transition is missing."""


class ConnectivityError(ValidationError):
    """Some state is unreachable from the initial state."""


class AlphabetError(ValidationError):
    """A letter lies outside 1..sigma, or alphabets disagree."""


class AcyclicityError(ValidationError):
    """The automaton is not acyclic (no unique absorbing dead state)."""


class DecodeError(ValidationError):
    """A Dyck boxed diagram does not describe a DFA."""


class ParseError(ValidationError):
    """Malformed text automaton; ``line`` is the offending 1-based line."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class IntegrityError(SuccinctError):
    """A serialized container is corrupt or truncated."""
