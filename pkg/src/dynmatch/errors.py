"""Exception hierarchy for the dynmatch package."""

from __future__ import annotations


class DynMatchError(Exception):
    """Base class for every error raised by this package."""


class IllegalUpdateError(DynMatchError, ValueError):
    """An update was rejected: out-of-range vertex, self-loop, duplicate
    insert, or deletion of an absent edge.  Engine state is unchanged."""


class StreamFormatError(DynMatchError, ValueError):
    """A stream file could not be parsed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class OracleSizeError(DynMatchError, ValueError):
    """The instance is too large for the brute-force oracle guard."""


class InternalInvariantError(DynMatchError, RuntimeError):
    """A structural invariant the engines are built around was violated.
    This always indicates a bug, never bad input."""


class ArboricityContractError(InternalInvariantError):
    """An orientation rebalance cascade exceeded its flip budget, meaning the
    graph's density broke the arboricity bound the engine was configured for."""


class TokenUnderflowError(InternalInvariantError):
    """A lazy-maintenance walk tried to spend more tokens than its list had
    banked; the deferred-work accounting is broken."""
