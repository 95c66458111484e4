"""Edge orientation with a hard out-degree cap.

Every edge is directed; an insertion points the new edge away from the
endpoint with the smaller out-degree (ties to the smaller index), so that
endpoint absorbs the increment.  Whenever a vertex's out-degree exceeds the
cap delta, all of its out-edges are flipped inward, which may cascade.  For
graphs whose sparsity honours delta's design point the flip count is
amortized logarithmic per insertion; a cascade running past 10*(n+m) flips
in one update means the graph is denser than promised and raises.
Deletions only lower out-degrees, so they never flip.

The out-sets double as the authentic directed adjacency for the engines
built on top: D(u) here is exact at all times, never lazy.  Operations
charge the step counter one unit per placement, flip, removal, membership
probe, or yielded neighbor; no ordered-structure weights apply here.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterator

from .errors import ArboricityContractError, InternalInvariantError
from .graph import StepCounter

__all__ = ["FlipEvent", "Orientation", "delta_for_arboricity"]

FLIP_GUARD_FACTOR = 10


def delta_for_arboricity(c: int, n: int, profile: str = "basic") -> int:
    """Out-degree cap for a graph of arboricity at most c.

    profile "basic": delta = 5*c.
    profile "wide":  delta = 6*c + ceil(log n / log(log n / c)), valid when
    c is well below log n; trades a larger additive term for a tighter
    multiplicative one on very sparse graphs.
    """
    if c < 1:
        raise ValueError("arboricity bound must be >= 1")
    if profile == "basic":
        return 5 * c
    if profile == "wide":
        if n < 3:
            raise ValueError("wide profile needs n >= 3")
        ratio = math.log(n) / c
        if ratio <= 1.0:
            raise ValueError("wide profile needs c < log n")
        return 6 * c + max(1, math.ceil(math.log(n) / math.log(ratio)))
    raise ValueError(f"unknown orientation profile {profile!r}")


@dataclass(frozen=True)
class FlipEvent:
    """The edge {tail, head} is now directed tail -> head.  `reoriented` is
    False for the initial placement of a new edge and True for a flip, in
    which case the previous direction was head -> tail."""

    tail: int
    head: int
    reoriented: bool

    @property
    def edge(self) -> tuple[int, int]:
        return (self.tail, self.head) if self.tail < self.head else (self.head, self.tail)


class Orientation:
    __slots__ = ("n", "delta", "out", "m", "flips_total", "_counter")

    def __init__(self, n: int, delta: int, counter: StepCounter) -> None:
        if delta < 1:
            raise ValueError("out-degree cap must be >= 1")
        self.n = n
        self.delta = delta
        self.out: list[set[int]] = [set() for _ in range(n)]
        self.m = 0
        self.flips_total = 0
        self._counter = counter

    def out_degree(self, v: int) -> int:
        return len(self.out[v])

    def out_neighbors(self, v: int) -> Iterator[int]:
        """Charged ascending iteration over D(v)."""
        for w in sorted(self.out[v]):
            self._counter.charge(1)
            yield w

    def out_list(self, v: int) -> list[int]:
        """Uncharged ascending snapshot of D(v)."""
        return sorted(self.out[v])

    def points_to(self, tail: int, head: int) -> bool:
        """Charged probe: is the edge directed tail -> head?"""
        self._counter.charge(1)
        return head in self.out[tail]

    def direction(self, u: int, v: int) -> tuple[int, int]:
        """Uncharged direction lookup for an edge known to exist."""
        if v in self.out[u]:
            return (u, v)
        if u in self.out[v]:
            return (v, u)
        raise InternalInvariantError(f"edge ({u},{v}) is not oriented")

    def insert(self, u: int, v: int) -> list[FlipEvent]:
        """Orient a new edge and rebalance.  Returns the placement event
        followed by every flip, in execution order."""
        du, dv = len(self.out[u]), len(self.out[v])
        if du < dv or (du == dv and u < v):
            tail, head = u, v
        else:
            tail, head = v, u
        self.out[tail].add(head)
        self.m += 1
        self._counter.charge(1)
        events = [FlipEvent(tail, head, False)]

        guard = FLIP_GUARD_FACTOR * (self.n + self.m)
        flips_this_update = 0
        overflow: list[int] = []
        if len(self.out[tail]) > self.delta:
            heapq.heappush(overflow, tail)
        while overflow:
            x = heapq.heappop(overflow)
            if len(self.out[x]) <= self.delta:
                continue
            # flip every out-edge of x inward
            for w in sorted(self.out[x]):
                self.out[x].remove(w)
                self.out[w].add(x)
                self._counter.charge(1)
                self.flips_total += 1
                flips_this_update += 1
                events.append(FlipEvent(w, x, True))
                if len(self.out[w]) > self.delta:
                    heapq.heappush(overflow, w)
                if flips_this_update > guard:
                    raise ArboricityContractError(
                        f"{flips_this_update} flips in one update exceeds "
                        f"{FLIP_GUARD_FACTOR}*(n+m)={guard}; graph density "
                        f"breaks the cap delta={self.delta}"
                    )
        return events

    def delete(self, u: int, v: int) -> tuple[int, int]:
        """Remove an edge; returns the direction (tail, head) it held.
        Out-degrees only drop, so deletions never flip."""
        tail, head = self.direction(u, v)
        self.out[tail].remove(head)
        self.m -= 1
        self._counter.charge(1)
        return (tail, head)

    def iter_edges(self) -> Iterator[tuple[int, int]]:
        """Uncharged normalized edge iteration."""
        for u in range(self.n):
            for w in sorted(self.out[u]):
                yield (u, w) if u < w else (w, u)

    def audit(self) -> None:
        total = 0
        for v in range(self.n):
            d = len(self.out[v])
            total += d
            if d > self.delta:
                raise InternalInvariantError(
                    f"vertex {v} out-degree {d} exceeds cap {self.delta}"
                )
            for w in self.out[v]:
                if v in self.out[w]:
                    raise InternalInvariantError(
                        f"edge ({v},{w}) oriented both ways"
                    )
        if total != self.m:
            raise InternalInvariantError("edge count disagrees with out-lists")
