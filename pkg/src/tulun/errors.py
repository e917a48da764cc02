"""Shared exception types."""

from __future__ import annotations


class TulunError(Exception):
    """Base class for all engine errors."""


class ValidationError(TulunError):
    """Input failed a domain invariant."""


class NotFoundError(TulunError):
    """A referenced record does not exist."""


class StorageError(TulunError):
    """The persistent store could not be read or written."""


class BackendError(TulunError):
    """A remote MT or LLM call failed.

    ``kind`` is ``"mt"`` or ``"llm"``; ``detail`` carries provider-level
    information (status code, body excerpt) when available.
    """

    def __init__(self, kind: str, message: str, detail: object = None):
        super().__init__(message)
        self.kind = kind
        self.detail = detail
