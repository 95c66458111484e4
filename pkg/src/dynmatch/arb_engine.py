"""Maximal matching tuned for sparse graphs.

The engine keeps every edge oriented with out-degree at most delta (a small
constant derived from the promised arboricity).  A vertex only ever scans
its own out-neighborhood D(v), so the expensive direction of the adjacency
is never walked.  Free vertices announce themselves instead: when w is free
it sits in F(y) for every y in D(w), so a vertex looking for a free
neighbor checks its in-facing announcements F(v) and then its at-most-delta
out-neighbors directly.  Announcements are withdrawn lazily; stale entries
are paid for by the withdrawals that created them.
"""

from __future__ import annotations

from collections import deque
from typing import Iterator

from .errors import InternalInvariantError
from .graph import GraphBackedEngine, StepCounter
from .orientation import FlipEvent, Orientation, delta_for_arboricity

__all__ = ["LazyFreeSet", "ArboricityMatchingEngine"]


class LazyFreeSet:
    """Set of announced vertices with O(1) logical removal.

    Membership truth lives in a set; the deque only orders candidates for
    peek().  A removal leaves its deque entry behind as a stale stub and
    deposits two credits; unlinking stubs (during peek or compaction)
    spends them.  The credit balance can never go negative, and the audit
    enforces that.
    """

    __slots__ = ("_truth", "_entries", "_credits", "_counter")

    def __init__(self, counter: StepCounter) -> None:
        self._truth: set[int] = set()
        self._entries: deque[int] = deque()
        self._credits = 0
        self._counter = counter

    def __len__(self) -> int:
        return len(self._truth)

    def __contains__(self, w: int) -> bool:
        return w in self._truth

    def insert(self, w: int) -> None:
        self._counter.charge(1)
        if w in self._truth:
            raise InternalInvariantError(f"vertex {w} announced twice")
        self._truth.add(w)
        self._entries.appendleft(w)

    def delete(self, w: int) -> None:
        self._counter.charge(1)
        if w not in self._truth:
            raise InternalInvariantError(f"vertex {w} is not announced")
        self._truth.discard(w)
        self._credits += 2
        self._maybe_compact()

    def discard(self, w: int) -> bool:
        self._counter.charge(1)
        if w not in self._truth:
            return False
        self._truth.discard(w)
        self._credits += 2
        self._maybe_compact()
        return True

    def peek(self) -> int | None:
        """Some announced vertex, or None.  Unlinks the stale prefix."""
        self._counter.charge(1)
        while self._entries and self._entries[0] not in self._truth:
            self._entries.popleft()
            self._counter.charge(1)
            self._credits -= 1
            if self._credits < 0:
                raise InternalInvariantError("stale unlink without funding")
        return self._entries[0] if self._entries else None

    def _maybe_compact(self) -> None:
        # keeps physical size within a constant factor of the truth size
        if len(self._entries) <= 2 * len(self._truth) + 4:
            return
        cost = len(self._entries)
        self._counter.charge(cost)
        self._credits -= cost
        if self._credits < 0:
            raise InternalInvariantError("compaction without funding")
        # one copy per live vertex: a delete/reinsert cycle leaves the old
        # stub indistinguishable from the fresh entry, so dedup is what
        # actually shrinks the deque
        live: list[int] = []
        seen: set[int] = set()
        for w in self._entries:
            if w in self._truth and w not in seen:
                live.append(w)
                seen.add(w)
        self._entries = deque(live)

    def members(self) -> list[int]:
        return sorted(self._truth)

    def audit(self) -> None:
        if self._credits < 0:
            raise InternalInvariantError("negative credit balance")
        present = set(self._entries)
        missing = self._truth - present
        if missing:
            raise InternalInvariantError(
                f"announced vertices {sorted(missing)} have no entry"
            )


class ArboricityMatchingEngine(GraphBackedEngine):
    """Maximal matching with amortized cost O(delta + log n) per update on
    graphs of arboricity at most the promised bound."""

    kind = "arb"

    __slots__ = ("arboricity", "profile", "orient", "free_in")

    def __init__(self, n: int, *, arboricity: int = 1, profile: str = "basic") -> None:
        super().__init__(n)
        self.arboricity = arboricity
        self.profile = profile
        delta = delta_for_arboricity(arboricity, n, profile)
        self.orient = Orientation(n, delta, self.counter)
        self.free_in = [LazyFreeSet(self.counter) for _ in range(n)]

    @property
    def delta(self) -> int:
        return self.orient.delta

    def _is_free(self, x: int) -> bool:
        return self.match.mate[x] is None

    # -- update handlers -------------------------------------------------

    def _insert(self, u: int, v: int) -> None:
        self.graph.add_edge(u, v)
        events = self.orient.insert(u, v)
        self._apply_events(events)
        if self._is_free(u) and self._is_free(v):
            self._match(u, v)

    def _delete(self, u: int, v: int) -> None:
        tail, head = self.orient.delete(u, v)
        self.graph.remove_edge(u, v)
        if self._is_free(tail):
            self.free_in[head].delete(tail)
        if self.match.mate[u] == v:
            self.match.remove_pair(u, v)
            self.match.mate[u] = None
            self.match.mate[v] = None
            self._rematch_or_notify(u)
            self._rematch_or_notify(v)

    # -- internals --------------------------------------------------------

    def _apply_events(self, events: list[FlipEvent]) -> None:
        """Replay orientation events against the announcement sets.  After
        each event the edge runs tail -> head; before a flip it ran the
        other way, so a free head withdraws and a free tail announces."""
        for ev in events:
            if ev.reoriented and self._is_free(ev.head):
                self.free_in[ev.tail].delete(ev.head)
            if self._is_free(ev.tail):
                self.free_in[ev.head].insert(ev.tail)

    def _match(self, a: int, b: int) -> None:
        self.match.add_pair(a, b)
        self.match.mate[a] = b
        self.match.mate[b] = a
        for x in (a, b):
            for y in self.orient.out_list(x):
                self.free_in[y].discard(x)

    def _rematch_or_notify(self, x: int) -> None:
        """x just lost its mate.  Rematch it with an announced in-neighbor,
        else with a free out-neighbor, else announce it everywhere in D(x)."""
        w = self.free_in[x].peek()
        if w is not None:
            self._match(x, w)
            return
        for y in self.orient.out_neighbors(x):
            if self._is_free(y):
                self._match(x, y)
                return
        for y in self.orient.out_neighbors(x):
            self.free_in[y].insert(x)

    # -- diagnostics -------------------------------------------------------

    def iter_announcements(self) -> Iterator[tuple[int, list[int]]]:
        for v in range(self.n):
            yield v, self.free_in[v].members()

    def audit_structures(self) -> None:
        edges = set(self.graph.iter_edges())
        self.match.audit(edges)
        self.orient.audit()
        if set(self.orient.iter_edges()) != edges:
            raise InternalInvariantError("orientation and adjacency disagree")
        expected: list[set[int]] = [set() for _ in range(self.n)]
        for w in range(self.n):
            if self._is_free(w):
                for y in self.orient.out[w]:
                    expected[y].add(w)
        for v in range(self.n):
            self.free_in[v].audit()
            got = set(self.free_in[v].members())
            if got != expected[v]:
                raise InternalInvariantError(
                    f"announcements at {v}: recorded {sorted(got)}, "
                    f"expected {sorted(expected[v])}"
                )
