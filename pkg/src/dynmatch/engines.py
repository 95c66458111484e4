"""Engine selection by name."""

from __future__ import annotations

from .arb_engine import ArboricityMatchingEngine
from .compact_engine import CompactMatchingEngine
from .graph import MatchingEngine, NaiveMatchingEngine
from .sqrt_engine import SqrtMatchingEngine

__all__ = ["ENGINE_KINDS", "new_engine"]

ENGINE_KINDS = ("naive", "sqrt", "arb", "compact")


def new_engine(
    kind: str,
    n: int,
    *,
    arboricity: int = 4,
    profile: str = "basic",
) -> MatchingEngine:
    """Construct an engine over the empty graph on n vertices.

    `arboricity` and `profile` configure the "arb" engine only: the caller
    promises the stream keeps arboricity at most that bound (the engine
    errors out of runaway rebalance cascades if the promise is broken).
    The other engines need no configuration.
    """
    if kind == "naive":
        return NaiveMatchingEngine(n)
    if kind == "sqrt":
        return SqrtMatchingEngine(n)
    if kind == "arb":
        return ArboricityMatchingEngine(n, arboricity=arboricity, profile=profile)
    if kind == "compact":
        return CompactMatchingEngine(n)
    raise ValueError(f"unknown engine kind {kind!r}; choose from {ENGINE_KINDS}")
