"""Free-vertex bookkeeping structures.

`FreeNeighborStructure` answers "does vertex v currently have a free
neighbor, and if so give me one" in O(1) / O(sqrt n) charged ops.  It is a
presence bitmap over [0, n) plus per-block counters with block size
ceil(sqrt(n)), so membership flips are O(1) and extraction scans at most one
block row plus one block.

`FreeMaxHeap` tracks the free vertices keyed by current degree and answers
find-max in O(1); every mutating operation charges its log weight.

Both structures are strict: inserting a present member or deleting an absent
one raises, because those are exactly the bookkeeping bugs the engines must
not paper over.  The `discard` variants exist for the few flow points where
absence is legitimate.
"""

from __future__ import annotations

from .errors import InternalInvariantError
from .graph import StepCounter, int_ceil_sqrt, log_weight

__all__ = ["FreeNeighborStructure", "FreeMaxHeap"]


class FreeNeighborStructure:
    """Set of free vertices adjacent to one fixed vertex."""

    __slots__ = ("n", "block", "present", "block_counts", "count", "_counter")

    def __init__(self, n: int, counter: StepCounter) -> None:
        self.n = n
        self.block = max(1, int_ceil_sqrt(n))
        self.present = bytearray(n)
        self.block_counts = [0] * ((n + self.block - 1) // self.block)
        self.count = 0
        self._counter = counter

    def __len__(self) -> int:
        return self.count

    def __bool__(self) -> bool:
        return self.count > 0

    def has(self, v: int) -> bool:
        self._counter.charge(1)
        return bool(self.present[v])

    def insert(self, v: int) -> None:
        self._counter.charge(1)
        if self.present[v]:
            raise InternalInvariantError(f"free-set insert of present vertex {v}")
        self.present[v] = 1
        self.block_counts[v // self.block] += 1
        self.count += 1

    def delete(self, v: int) -> None:
        self._counter.charge(1)
        if not self.present[v]:
            raise InternalInvariantError(f"free-set delete of absent vertex {v}")
        self.present[v] = 0
        self.block_counts[v // self.block] -= 1
        self.count -= 1

    def discard(self, v: int) -> bool:
        """Delete if present; returns whether anything was removed."""
        self._counter.charge(1)
        if not self.present[v]:
            return False
        self.present[v] = 0
        self.block_counts[v // self.block] -= 1
        self.count -= 1
        return True

    def get_free(self) -> int:
        """Smallest member; charges one op per block and cell scanned."""
        if self.count == 0:
            raise InternalInvariantError("get_free on empty free set")
        for bi, c in enumerate(self.block_counts):
            self._counter.charge(1)
            if c > 0:
                base = bi * self.block
                for v in range(base, min(base + self.block, self.n)):
                    self._counter.charge(1)
                    if self.present[v]:
                        return v
                raise InternalInvariantError("block counter disagrees with bitmap")
        raise InternalInvariantError("count disagrees with block counters")

    def members(self) -> list[int]:
        """Uncharged ascending member list for audits."""
        return [v for v in range(self.n) if self.present[v]]

    def audit(self) -> None:
        if sum(self.block_counts) != self.count:
            raise InternalInvariantError("block counters do not sum to count")
        for bi, c in enumerate(self.block_counts):
            base = bi * self.block
            real = sum(self.present[base : min(base + self.block, self.n)])
            if real != c:
                raise InternalInvariantError(f"block {bi} counter {c} != bitmap {real}")


class FreeMaxHeap:
    """Binary max-heap over free vertices keyed by degree.

    Ties break toward the smaller vertex index, so find_max is a total order
    and engine behavior never depends on internal array layout.
    """

    __slots__ = ("n", "_heap", "_pos", "_key", "_counter", "_weight")

    def __init__(self, n: int, counter: StepCounter) -> None:
        self.n = n
        self._heap: list[int] = []
        self._pos: list[int] = [-1] * n
        self._key: list[int] = [0] * n
        self._counter = counter
        self._weight = log_weight(n)

    def __len__(self) -> int:
        return len(self._heap)

    def __contains__(self, v: int) -> bool:
        return self._pos[v] >= 0

    def _before(self, a: int, b: int) -> bool:
        ka, kb = self._key[a], self._key[b]
        return ka > kb or (ka == kb and a < b)

    def _swap(self, i: int, j: int) -> None:
        h = self._heap
        h[i], h[j] = h[j], h[i]
        self._pos[h[i]] = i
        self._pos[h[j]] = j

    def _sift_up(self, i: int) -> None:
        h = self._heap
        while i > 0:
            parent = (i - 1) // 2
            if self._before(h[i], h[parent]):
                self._swap(i, parent)
                i = parent
            else:
                return

    def _sift_down(self, i: int) -> None:
        h = self._heap
        size = len(h)
        while True:
            left = 2 * i + 1
            right = left + 1
            best = i
            if left < size and self._before(h[left], h[best]):
                best = left
            if right < size and self._before(h[right], h[best]):
                best = right
            if best == i:
                return
            self._swap(i, best)
            i = best

    def insert(self, v: int, key: int) -> None:
        self._counter.charge(self._weight)
        if self._pos[v] >= 0:
            raise InternalInvariantError(f"heap insert of present vertex {v}")
        self._key[v] = key
        self._heap.append(v)
        self._pos[v] = len(self._heap) - 1
        self._sift_up(self._pos[v])

    def delete(self, v: int) -> None:
        self._counter.charge(self._weight)
        i = self._pos[v]
        if i < 0:
            raise InternalInvariantError(f"heap delete of absent vertex {v}")
        last = len(self._heap) - 1
        if i != last:
            self._swap(i, last)
        self._heap.pop()
        self._pos[v] = -1
        if i <= last - 1 and i < len(self._heap):
            self._sift_down(i)
            self._sift_up(i)

    def discard(self, v: int) -> bool:
        if self._pos[v] < 0:
            self._counter.charge(1)
            return False
        self.delete(v)
        return True

    def update_key(self, v: int, key: int) -> None:
        self._counter.charge(self._weight)
        i = self._pos[v]
        if i < 0:
            raise InternalInvariantError(f"heap update of absent vertex {v}")
        self._key[v] = key
        self._sift_down(i)
        self._sift_up(self._pos[v])

    def find_max(self) -> int | None:
        self._counter.charge(1)
        return self._heap[0] if self._heap else None

    def key_of(self, v: int) -> int:
        if self._pos[v] < 0:
            raise InternalInvariantError(f"vertex {v} not in heap")
        return self._key[v]

    def members(self) -> list[int]:
        """Uncharged member list for audits."""
        return sorted(self._heap)

    def audit(self) -> None:
        for i, v in enumerate(self._heap):
            if self._pos[v] != i:
                raise InternalInvariantError("heap position map corrupt")
            if i > 0:
                parent = self._heap[(i - 1) // 2]
                if self._before(v, parent):
                    raise InternalInvariantError("heap order violated")
