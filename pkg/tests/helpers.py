"""Shared test utilities: reference models and stream drivers."""

from __future__ import annotations

from dynmatch.graph import Update
from dynmatch.oracle import Snapshot
from dynmatch.streams import Stream

# arb-engine arboricity promises that hold for each generator kind at the
# stream sizes used in tests
ARB_BOUND = {
    "random": 8,
    "delete-heavy": 8,
    "forest": 1,
    "star-adversary": 24,
}


def snap(n: int, edges, matching=()) -> Snapshot:
    """Build a Snapshot from edge/matching literals (normalizing both)."""
    norm = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
    mat = tuple(sorted((min(a, b), max(a, b)) for a, b in matching))
    covered = {x for e in mat for x in e}
    free = tuple(v not in covered for v in range(n))
    return Snapshot(n=n, edges=norm, matching=mat, free=free)


def check_stream_legal(stream: Stream) -> None:
    """Assert the update sequence is legal for a simple graph on n vertices."""
    present: set[tuple[int, int]] = set()
    for i, up in enumerate(stream.updates):
        assert 0 <= up.u < up.v < stream.n, f"update {i}: bad endpoints {up.edge}"
        if up.kind.value == "+":
            assert up.edge not in present, f"update {i}: duplicate insert {up.edge}"
            present.add(up.edge)
        else:
            assert up.edge in present, f"update {i}: phantom delete {up.edge}"
            present.discard(up.edge)


def legalize(n: int, raw_pairs) -> list[Update]:
    """Turn arbitrary (a, b) pairs into a legal update sequence: each pair
    toggles its edge (insert when absent, delete when present)."""
    present: set[tuple[int, int]] = set()
    ups: list[Update] = []
    for a, b in raw_pairs:
        a, b = a % n, b % n
        if a == b:
            continue
        e = (min(a, b), max(a, b))
        if e in present:
            present.discard(e)
            ups.append(Update.delete(*e))
        else:
            present.add(e)
            ups.append(Update.insert(*e))
    return ups


def reference_no_3_aug(n: int, edges, matching) -> bool:
    """Independent re-derivation: no augmenting path of length 1 or 3.

    Pure brute force over ordered vertex triples/pairs, sharing no code with
    the oracle module.
    """
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    mate: dict[int, int] = {}
    for a, b in matching:
        mate[a] = b
        mate[b] = a
    for u, v in edges:
        if u not in mate and v not in mate:
            return False
    for a, b in matching:
        for f1 in adj[a]:
            if f1 in mate:
                continue
            for f2 in adj[b]:
                if f2 in mate or f2 == f1:
                    continue
                return False
        # symmetric orientation of the matched pair
        for f1 in adj[b]:
            if f1 in mate:
                continue
            for f2 in adj[a]:
                if f2 in mate or f2 == f1:
                    continue
                return False
    return True


def all_matchings(edges: tuple[tuple[int, int], ...]):
    """Yield every matching (as a tuple of edges) of the given edge list."""

    def walk(i: int, used: set[int], acc: list[tuple[int, int]]):
        yield tuple(acc)
        for j in range(i, len(edges)):
            u, v = edges[j]
            if u not in used and v not in used:
                used.update((u, v))
                acc.append(edges[j])
                yield from walk(j + 1, used, acc)
                acc.pop()
                used.difference_update((u, v))

    yield from walk(0, set(), [])
