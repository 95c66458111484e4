"""Core state shared by every matching engine.

This module holds the dynamic graph representation (ordered adjacency with
deterministic iteration), the update model, the matched-pair bookkeeping, the
charged-operation counter that all complexity claims are measured against, and
the naive baseline engine.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from bisect import bisect_left, insort
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .errors import IllegalUpdateError, InternalInvariantError
from .oracle import Snapshot

__all__ = [
    "UpdateKind",
    "Update",
    "UpdateReport",
    "StepCounter",
    "OrderedVertexSet",
    "DynamicGraph",
    "MatchState",
    "MatchingEngine",
    "NaiveMatchingEngine",
    "edge_key",
    "int_ceil_sqrt",
    "log_weight",
]


def edge_key(u: int, v: int) -> tuple[int, int]:
    """Normal form for an undirected edge: (min, max)."""
    return (u, v) if u < v else (v, u)


def int_ceil_sqrt(x: int) -> int:
    """Smallest integer s with s*s >= x, in exact integer arithmetic."""
    if x <= 0:
        return 0
    r = math.isqrt(x)
    return r if r * r == x else r + 1


def log_weight(n: int) -> int:
    """Charged cost of one ordered-structure operation on n slots."""
    return max(1, (max(n, 2) - 1).bit_length())


class UpdateKind(Enum):
    INSERT = "+"
    DELETE = "-"


@dataclass(frozen=True)
class Update:
    """One edge insertion or deletion.  Endpoints are stored normalized."""

    kind: UpdateKind
    u: int
    v: int

    def __post_init__(self) -> None:
        if self.u == self.v:
            raise IllegalUpdateError(f"self-loop on vertex {self.u}")
        if self.u < 0 or self.v < 0:
            raise IllegalUpdateError(f"negative vertex in ({self.u}, {self.v})")
        if self.u > self.v:
            a, b = self.v, self.u
            object.__setattr__(self, "u", a)
            object.__setattr__(self, "v", b)

    @property
    def edge(self) -> tuple[int, int]:
        return (self.u, self.v)

    @staticmethod
    def insert(u: int, v: int) -> "Update":
        return Update(UpdateKind.INSERT, u, v)

    @staticmethod
    def delete(u: int, v: int) -> "Update":
        return Update(UpdateKind.DELETE, u, v)


@dataclass(frozen=True)
class UpdateReport:
    """Outcome of applying one update: matching delta plus charged cost."""

    index: int
    kind: UpdateKind
    u: int
    v: int
    ops: int
    m: int
    matching_size: int
    matched_added: tuple[tuple[int, int], ...]
    matched_removed: tuple[tuple[int, int], ...]


class StepCounter:
    """Charged-operation meter.

    One unit per neighbor-set probe, one per free-structure probe, one per
    orientation flip; ordered-structure (heap / balanced set) operations charge
    their log weight.  Wall time is never what the scaling tests measure.
    """

    __slots__ = ("total", "round_ops")

    def __init__(self) -> None:
        self.total = 0
        self.round_ops = 0

    def charge(self, k: int = 1) -> None:
        self.total += k
        self.round_ops += k

    def begin_round(self) -> None:
        self.round_ops = 0


class OrderedVertexSet:
    """Sorted set of vertex ids backed by a list.

    Iteration is always in ascending order, which is what makes every engine
    deterministic.  Membership and positioning are binary searches; each call
    charges the log weight of the structure to the supplied counter.
    """

    __slots__ = ("_items", "_counter")

    def __init__(self, counter: StepCounter) -> None:
        self._items: list[int] = []
        self._counter = counter

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, v: int) -> bool:
        self._counter.charge(log_weight(len(self._items) + 1))
        i = bisect_left(self._items, v)
        return i < len(self._items) and self._items[i] == v

    def add(self, v: int) -> None:
        self._counter.charge(log_weight(len(self._items) + 1))
        i = bisect_left(self._items, v)
        if i < len(self._items) and self._items[i] == v:
            raise InternalInvariantError(f"vertex {v} already present")
        self._items.insert(i, v)

    def remove(self, v: int) -> None:
        self._counter.charge(log_weight(len(self._items) + 1))
        i = bisect_left(self._items, v)
        if i >= len(self._items) or self._items[i] != v:
            raise InternalInvariantError(f"vertex {v} not present")
        del self._items[i]

    def iter_charged(self) -> Iterator[int]:
        """Ascending iteration, one charge per element yielded."""
        for v in self._items:
            self._counter.charge(1)
            yield v

    def first(self, r: int) -> list[int]:
        """The r smallest members, one charge each."""
        out = self._items[:r]
        self._counter.charge(len(out))
        return out

    def contains_uncharged(self, v: int) -> bool:
        """Membership test outside the charged-op model (validation paths)."""
        i = bisect_left(self._items, v)
        return i < len(self._items) and self._items[i] == v

    def as_list(self) -> list[int]:
        """Uncharged copy for diagnostics and snapshots."""
        return list(self._items)


class DynamicGraph:
    """Simple undirected graph over vertices 0..n-1 under edge updates.

    Neighbor sets are ordered; m is maintained incrementally and always equals
    half the degree sum.
    """

    __slots__ = ("n", "m", "adj", "_counter")

    def __init__(self, n: int, counter: StepCounter) -> None:
        if n < 1:
            raise IllegalUpdateError("graph needs at least one vertex")
        self.n = n
        self.m = 0
        self._counter = counter
        self.adj = [OrderedVertexSet(counter) for _ in range(n)]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def add_edge(self, u: int, v: int) -> None:
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.m += 1

    def remove_edge(self, u: int, v: int) -> None:
        self.adj[u].remove(v)
        self.adj[v].remove(u)
        self.m -= 1

    def neighbors(self, v: int) -> Iterator[int]:
        """Ascending neighbor iteration, one charge per neighbor visited."""
        return self.adj[v].iter_charged()

    def iter_edges(self) -> Iterator[tuple[int, int]]:
        """Uncharged edge iteration in normalized sorted order."""
        for u in range(self.n):
            for w in self.adj[u].as_list():
                if w > u:
                    yield (u, w)


class MatchState:
    """Matched pairs plus per-vertex mate pointers.

    The pair set is kept vertex-disjoint at every step.  Mate pointers are
    owned by the engines: the halved-cost engine intentionally lets them go
    stale for the two endpoints of a deleted matched edge until each one is
    re-resolved within the same round.
    """

    __slots__ = ("mate", "pairs", "_covered", "added_this_round", "removed_this_round")

    def __init__(self, n: int) -> None:
        self.mate: list[int | None] = [None] * n
        self.pairs: set[tuple[int, int]] = set()
        self._covered: set[int] = set()
        self.added_this_round: list[tuple[int, int]] = []
        self.removed_this_round: list[tuple[int, int]] = []

    def begin_round(self) -> None:
        self.added_this_round = []
        self.removed_this_round = []

    def __len__(self) -> int:
        return len(self.pairs)

    def has_pair(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.pairs

    def is_free(self, v: int) -> bool:
        return self.mate[v] is None

    def add_pair(self, u: int, v: int) -> None:
        key = edge_key(u, v)
        if u in self._covered or v in self._covered:
            raise InternalInvariantError(f"pair {key} overlaps an existing pair")
        self.pairs.add(key)
        self._covered.add(u)
        self._covered.add(v)
        self.added_this_round.append(key)

    def remove_pair(self, u: int, v: int) -> None:
        key = edge_key(u, v)
        if key not in self.pairs:
            raise InternalInvariantError(f"pair {key} not in matching")
        self.pairs.remove(key)
        self._covered.discard(u)
        self._covered.discard(v)
        self.removed_this_round.append(key)

    def audit(self, edges: Iterable[tuple[int, int]] | None = None) -> None:
        """Cross-check mate pointers against the pair set (diagnostic)."""
        seen: set[int] = set()
        for a, b in self.pairs:
            if self.mate[a] != b or self.mate[b] != a:
                raise InternalInvariantError(f"mate pointers disagree with pair ({a},{b})")
            if a in seen or b in seen:
                raise InternalInvariantError(f"pair ({a},{b}) overlaps another pair")
            seen.update((a, b))
        for v, mv in enumerate(self.mate):
            if mv is not None and edge_key(v, mv) not in self.pairs:
                raise InternalInvariantError(f"stale mate pointer {v}->{mv}")
        if edges is not None:
            present = set(edges)
            for pair in self.pairs:
                if pair not in present:
                    raise InternalInvariantError(f"matched pair {pair} is not a graph edge")


class MatchingEngine(ABC):
    """Shared driver for all engines: validation, reporting, snapshots.

    An illegal update raises before any state is touched, so rejected updates
    leave the engine bit-identical.
    """

    kind = "abstract"

    def __init__(self, n: int, counter: StepCounter | None = None) -> None:
        if n < 1:
            raise IllegalUpdateError("engine needs n >= 1 vertices")
        self.n = n
        self.counter = counter if counter is not None else StepCounter()
        self.match = MatchState(n)
        self.rounds = 0

    # -- state the driver needs ------------------------------------------------

    @property
    @abstractmethod
    def m(self) -> int:
        raise NotImplementedError

    @abstractmethod
    def has_edge(self, u: int, v: int) -> bool:
        raise NotImplementedError

    @abstractmethod
    def iter_edges(self) -> Iterator[tuple[int, int]]:
        raise NotImplementedError

    @abstractmethod
    def _insert(self, u: int, v: int) -> None:
        raise NotImplementedError

    @abstractmethod
    def _delete(self, u: int, v: int) -> None:
        raise NotImplementedError

    def _begin_round(self) -> None:
        """Hook run before the main handler of each round."""

    def _finish_round(self, update: Update) -> None:
        """Hook run after the main handler of each round."""

    # -- public API -------------------------------------------------------------

    @property
    def matching_size(self) -> int:
        return len(self.match)

    def apply(self, update: Update) -> UpdateReport:
        u, v = update.u, update.v
        if v >= self.n:
            raise IllegalUpdateError(f"vertex {v} out of range for n={self.n}")
        present = self.has_edge(u, v)
        if update.kind is UpdateKind.INSERT and present:
            raise IllegalUpdateError(f"edge ({u},{v}) already present")
        if update.kind is UpdateKind.DELETE and not present:
            raise IllegalUpdateError(f"edge ({u},{v}) not present")

        self.counter.begin_round()
        self.match.begin_round()
        self._begin_round()
        if update.kind is UpdateKind.INSERT:
            self._insert(u, v)
        else:
            self._delete(u, v)
        self._finish_round(update)
        self.rounds += 1
        return UpdateReport(
            index=self.rounds - 1,
            kind=update.kind,
            u=u,
            v=v,
            ops=self.counter.round_ops,
            m=self.m,
            matching_size=self.matching_size,
            matched_added=tuple(self.match.added_this_round),
            matched_removed=tuple(self.match.removed_this_round),
        )

    def apply_all(self, updates: Iterable[Update]) -> list[UpdateReport]:
        return [self.apply(up) for up in updates]

    def snapshot(self) -> Snapshot:
        free = tuple(self.match.mate[i] is None for i in range(self.n))
        return Snapshot(
            n=self.n,
            edges=tuple(sorted(self.iter_edges())),
            matching=tuple(sorted(self.match.pairs)),
            free=free,
        )


class GraphBackedEngine(MatchingEngine):
    """Engines that keep the full ordered adjacency structure."""

    def __init__(self, n: int, counter: StepCounter | None = None) -> None:
        super().__init__(n, counter)
        self.graph = DynamicGraph(n, self.counter)

    @property
    def m(self) -> int:
        return self.graph.m

    def has_edge(self, u: int, v: int) -> bool:
        return self.graph.adj[u].contains_uncharged(v)

    def iter_edges(self) -> Iterator[tuple[int, int]]:
        return self.graph.iter_edges()


class NaiveMatchingEngine(GraphBackedEngine):
    """Baseline maximal matcher: on a matched-edge deletion each freed
    endpoint scans its whole neighborhood for the smallest free neighbor.
    Worst-case linear per update; exists to be obviously correct."""

    kind = "naive"

    def _insert(self, u: int, v: int) -> None:
        self.graph.add_edge(u, v)
        mate = self.match.mate
        if mate[u] is None and mate[v] is None:
            self._link(u, v)

    def _delete(self, u: int, v: int) -> None:
        was_matched = self.match.has_pair(u, v)
        self.graph.remove_edge(u, v)
        if not was_matched:
            return
        self.match.remove_pair(u, v)
        mate = self.match.mate
        mate[u] = None
        mate[v] = None
        for z in (u, v):
            if mate[z] is not None:
                continue
            for w in self.graph.neighbors(z):
                if mate[w] is None:
                    self._link(z, w)
                    break

    def _link(self, a: int, b: int) -> None:
        self.match.add_pair(a, b)
        self.match.mate[a] = b
        self.match.mate[b] = a
