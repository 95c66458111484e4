"""Brute-force verification oracle.

Everything here is deliberately independent of the engines: plain dict/set
adjacency, no shared helpers, exhaustive search.  The engines are judged
against this module, never the other way around.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalInvariantError, OracleSizeError

__all__ = [
    "Snapshot",
    "check_wellformed",
    "check_maximal",
    "check_no_3_aug_path",
    "exact_mcm",
    "max_matching_by_enumeration",
    "approx_ratio",
]

MAX_ORACLE_EDGES = 40
MAX_ORACLE_VERTICES = 20


@dataclass(frozen=True)
class Snapshot:
    """Frozen view of one engine state: edges, matching, per-vertex freeness.

    Edge tuples are normalized (u < v) and sorted; `free[v]` is True when v is
    unmatched.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    matching: tuple[tuple[int, int], ...]
    free: tuple[bool, ...]

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


def check_wellformed(snap: Snapshot) -> None:
    """Raise unless the snapshot is internally consistent: matching is a set
    of vertex-disjoint graph edges and `free` agrees with it."""
    edge_set = set(snap.edges)
    if len(edge_set) != len(snap.edges):
        raise InternalInvariantError("duplicate edges in snapshot")
    covered: set[int] = set()
    for u, v in snap.matching:
        if (u, v) not in edge_set:
            raise InternalInvariantError(f"matched pair ({u},{v}) is not an edge")
        if u in covered or v in covered:
            raise InternalInvariantError(f"matched pair ({u},{v}) overlaps another")
        covered.update((u, v))
    for v in range(snap.n):
        if snap.free[v] == (v in covered):
            raise InternalInvariantError(f"free flag of vertex {v} disagrees with matching")
    for u, v in snap.edges:
        if not (0 <= u < v < snap.n):
            raise InternalInvariantError(f"edge ({u},{v}) out of range or unnormalized")


def check_maximal(snap: Snapshot) -> tuple[bool, tuple[int, int] | None]:
    """True iff no edge has two free endpoints; else returns such an edge."""
    for u, v in snap.edges:
        if snap.free[u] and snap.free[v]:
            return False, (u, v)
    return True, None


def check_no_3_aug_path(
    snap: Snapshot,
) -> tuple[bool, tuple[int, ...] | None]:
    """True iff the matching admits no augmenting path of length 1 or 3.

    A length-3 witness is returned as (f1, a, b, f2): f1, f2 free and
    distinct, {a,b} matched, f1 adjacent to a, f2 adjacent to b.  A length-1
    witness (edge with both endpoints free) is returned as (u, v).
    """
    ok, edge = check_maximal(snap)
    if not ok:
        return False, edge
    adj = snap.adjacency()
    for a, b in snap.matching:
        fa = sorted(w for w in adj[a] if snap.free[w])
        fb = sorted(w for w in adj[b] if snap.free[w])
        if not fa or not fb:
            continue
        f1 = fa[0]
        rest = [w for w in fb if w != f1]
        if rest:
            return False, (f1, a, b, rest[0])
        if len(fa) > 1:
            # fb is exactly {f1}; take a different free neighbor of a
            return False, (fb[0], b, a, fa[1])
    return True, None


def exact_mcm(snap: Snapshot) -> int:
    """Maximum-cardinality matching size by include/exclude branch and bound.

    Guarded: requires m <= 40 or n <= 20; larger snapshots raise rather than
    silently run forever.
    """
    m = len(snap.edges)
    if m > MAX_ORACLE_EDGES and snap.n > MAX_ORACLE_VERTICES:
        raise OracleSizeError(
            f"instance too large for exact search (n={snap.n}, m={m}); "
            f"needs m <= {MAX_ORACLE_EDGES} or n <= {MAX_ORACLE_VERTICES}"
        )
    edges = snap.edges
    best = 0
    used = [False] * snap.n

    def walk(i: int, size: int) -> None:
        nonlocal best
        if size > best:
            best = size
        # optimistic bound: every remaining edge could be added
        if size + (len(edges) - i) <= best:
            return
        for j in range(i, len(edges)):
            u, v = edges[j]
            if not used[u] and not used[v]:
                used[u] = used[v] = True
                walk(j + 1, size + 1)
                used[u] = used[v] = False

    walk(0, 0)
    return best


def max_matching_by_enumeration(snap: Snapshot) -> int:
    """Maximum matching size by full enumeration of every matching.

    No pruning, no bound: this is the oracle's own oracle, used to cross-check
    exact_mcm on tiny instances.
    """
    edges = snap.edges
    best = 0
    used = [False] * snap.n

    def walk(i: int, size: int) -> None:
        nonlocal best
        if size > best:
            best = size
        for j in range(i, len(edges)):
            u, v = edges[j]
            if not used[u] and not used[v]:
                used[u] = used[v] = True
                walk(j + 1, size + 1)
                used[u] = used[v] = False

    walk(0, 0)
    return best


def approx_ratio(snap: Snapshot) -> Fraction | float:
    """exact_mcm / |matching| as an exact rational.

    Returns Fraction(1) for the empty-over-empty case and +inf when the
    matching is empty while an augmenting edge exists (maximality forbids that
    whenever any edge is present, so inf signals a broken engine).
    """
    opt = exact_mcm(snap)
    size = len(snap.matching)
    if size == 0:
        return Fraction(1) if opt == 0 else float("inf")
    return Fraction(opt, size)
