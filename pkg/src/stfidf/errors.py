"""Exception types shared across the package."""

from __future__ import annotations


class StfidfError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(StfidfError):
    """A persisted file (index, embeddings, labels) could not be parsed.

    ``line`` is 1-based when known; ``field`` names the offending key.
    """

    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        self.reason = message
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class IndexFormatError(ParseError):
    pass


class EmbeddingFormatError(ParseError):
    pass


class EmptyCorpusError(StfidfError):
    def __init__(self, message: str = "empty corpus"):
        super().__init__(message)


class ConfigMismatchError(StfidfError):
    """Index was built under a different tokenization config than the one in use."""


class DegenerateInputError(StfidfError):
    """Raised by primitives whose result is undefined for the given input
    (zero vectors, a single term carrying the whole score mass, ...)."""
