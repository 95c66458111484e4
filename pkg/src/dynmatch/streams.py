"""Update-stream text format and deterministic sequence generators.

A stream file is plain text: a header line ``n <count>`` followed by one
update per line, ``+ u v`` or ``- u v``, whitespace-separated decimal vertex
indices.  Parsing is strict and reports line numbers; simple-graph legality
(no duplicate inserts, no phantom deletes) is enforced at replay time, not
here.

Generators are seeded with SplitMix64 (Steele, Lea & Flood 2014), chosen
because its constants are public and eight lines reproduce it anywhere:
    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)
all modulo 2**64.  Bounded draws use plain modulo; the bias is irrelevant
for test-stream generation and keeps the algorithm one line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import StreamFormatError
from .graph import Update, UpdateKind, edge_key

__all__ = ["SplitMix64", "Stream", "parse_stream", "format_stream", "generate", "STREAM_KINDS"]

STREAM_KINDS = ("random", "star-adversary", "forest", "delete-heavy")

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """SplitMix64 PRNG; see module docstring for the exact recurrence."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def randrange(self, bound: int) -> int:
        """Uniform-enough integer in [0, bound)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def chance(self, num: int, den: int) -> bool:
        """True with probability num/den."""
        return self.next_u64() % den < num

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class Stream:
    """A vertex count plus an update sequence (the parsed stream file)."""

    n: int
    updates: tuple[Update, ...]

    def __len__(self) -> int:
        return len(self.updates)


def parse_stream(text: str) -> Stream:
    """Parse stream text; raises with a line number on any malformed line."""
    lines = text.splitlines()
    header_at = None
    n = 0
    updates: list[Update] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if header_at is None:
            if len(parts) != 2 or parts[0] != "n":
                raise StreamFormatError(f"expected header 'n <count>', got {line!r}", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise StreamFormatError(f"vertex count {parts[1]!r} is not an integer", lineno) from None
            if n < 1:
                raise StreamFormatError(f"vertex count must be >= 1, got {n}", lineno)
            header_at = lineno
            continue
        if len(parts) != 3 or parts[0] not in ("+", "-"):
            raise StreamFormatError(f"expected '+ u v' or '- u v', got {line!r}", lineno)
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise StreamFormatError(f"non-integer vertex in {line!r}", lineno) from None
        if max(u, v) >= n:
            raise StreamFormatError(f"vertex {max(u, v)} out of range for n={n}", lineno)
        kind = UpdateKind.INSERT if parts[0] == "+" else UpdateKind.DELETE
        try:
            updates.append(Update(kind, u, v))
        except Exception as exc:
            raise StreamFormatError(str(exc), lineno) from None
    if header_at is None:
        raise StreamFormatError("empty stream: missing 'n <count>' header", 1)
    return Stream(n, tuple(updates))


def format_stream(stream: Stream) -> str:
    """Render a stream to its text form (inverse of parse_stream)."""
    out = [f"n {stream.n}"]
    for up in stream.updates:
        out.append(f"{up.kind.value} {up.u} {up.v}")
    return "\n".join(out) + "\n"


class _EdgePool:
    """Present-edge tracker with O(1) deterministic random removal."""

    __slots__ = ("edges", "pos")

    def __init__(self) -> None:
        self.edges: list[tuple[int, int]] = []
        self.pos: dict[tuple[int, int], int] = {}

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, e: tuple[int, int]) -> bool:
        return e in self.pos

    def add(self, e: tuple[int, int]) -> None:
        self.pos[e] = len(self.edges)
        self.edges.append(e)

    def remove(self, e: tuple[int, int]) -> None:
        i = self.pos.pop(e)
        last = self.edges.pop()
        if i < len(self.edges):
            self.edges[i] = last
            self.pos[last] = i

    def pick(self, rng: SplitMix64) -> tuple[int, int]:
        return self.edges[rng.randrange(len(self.edges))]


def _random_absent_pair(rng: SplitMix64, n: int, pool: _EdgePool) -> tuple[int, int] | None:
    """A uniform-ish absent pair, or None when the graph is complete.
    Rejection sampling with a deterministic exhaustive fallback."""
    if len(pool) >= n * (n - 1) // 2:
        return None
    for _ in range(64):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        e = edge_key(u, v)
        if e not in pool:
            return e
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in pool:
                return (u, v)
    return None


def _gen_random(rng: SplitMix64, n: int, length: int) -> list[Update]:
    """Independent coin per step: insert with probability 0.6, else delete."""
    pool = _EdgePool()
    ups: list[Update] = []
    if n < 2:
        return ups
    while len(ups) < length:
        do_insert = rng.chance(6, 10)
        if do_insert or len(pool) == 0:
            e = _random_absent_pair(rng, n, pool)
            if e is None:
                e = pool.pick(rng)
                pool.remove(e)
                ups.append(Update.delete(*e))
                continue
            pool.add(e)
            ups.append(Update.insert(*e))
        else:
            e = pool.pick(rng)
            pool.remove(e)
            ups.append(Update.delete(*e))
    return ups


def _gen_delete_heavy(rng: SplitMix64, n: int, length: int) -> list[Update]:
    """Build-up phase (60% of the budget, inserts) followed by a long
    deletion phase driving m down by far more than n."""
    pool = _EdgePool()
    ups: list[Update] = []
    build = (length * 6) // 10
    while len(ups) < build:
        e = _random_absent_pair(rng, n, pool)
        if e is None:
            break
        pool.add(e)
        ups.append(Update.insert(*e))
    while len(ups) < length:
        if len(pool) == 0:
            e = _random_absent_pair(rng, n, pool)
            if e is None:
                break
            pool.add(e)
            ups.append(Update.insert(*e))
        else:
            e = pool.pick(rng)
            pool.remove(e)
            ups.append(Update.delete(*e))
    return ups


def _gen_forest(rng: SplitMix64, n: int, length: int) -> list[Update]:
    """All updates stay inside one fixed random spanning tree, so every
    prefix is a forest (arboricity 1).  The first n-1 steps insert the whole
    tree; afterwards tree edges churn in and out."""
    tree: list[tuple[int, int]] = []
    for i in range(1, n):
        p = rng.randrange(i)
        tree.append(edge_key(p, i))
    ups: list[Update] = []
    present: list[bool] = [False] * len(tree)
    absent_count = len(tree)
    for i, e in enumerate(tree):
        if len(ups) >= length:
            return ups
        present[i] = True
        absent_count -= 1
        ups.append(Update.insert(*e))
    present_count = len(tree) - absent_count
    while len(ups) < length:
        if n == 1:
            break
        want_delete = rng.chance(1, 2)
        if (want_delete and present_count > 0) or absent_count == 0:
            while True:
                i = rng.randrange(len(tree))
                if present[i]:
                    break
            present[i] = False
            present_count -= 1
            absent_count += 1
            ups.append(Update.delete(*tree[i]))
        else:
            while True:
                i = rng.randrange(len(tree))
                if not present[i]:
                    break
            present[i] = True
            present_count += 1
            absent_count -= 1
            ups.append(Update.insert(*tree[i]))
    return ups


def _gen_star_adversary(rng: SplitMix64, n: int, length: int) -> list[Update]:
    """Scripted hard case for free-vertex degree bounds: a hub collects a
    large star while bulk edges among the upper vertices inflate m, then a
    long deletion phase shrinks m far below the hub degree squared, with the
    hub's matched edge yanked mid-shrink so it is free while its degree is
    still pinned high."""
    if n < 4:
        return _gen_random(rng, n, length)
    hub = 0
    leaves = list(range(1, max(2, n // 2)))
    rng.shuffle(leaves)
    upper = list(range(max(2, n // 2), n))
    bulk: list[tuple[int, int]] = []
    for i in range(len(upper)):
        for j in range(i + 1, len(upper)):
            bulk.append(edge_key(upper[i], upper[j]))
    ups: list[Update] = []
    star_present: list[tuple[int, int]] = []

    def emit(up: Update) -> bool:
        ups.append(up)
        return len(ups) >= length

    while True:
        star_present.clear()
        for leaf in leaves:
            e = edge_key(hub, leaf)
            star_present.append(e)
            if emit(Update.insert(*e)):
                return ups
        bulk_present: list[tuple[int, int]] = []
        for e in bulk:
            bulk_present.append(e)
            if emit(Update.insert(*e)):
                return ups
        # shrink m with the star untouched, then yank the hub's edges
        yank_at = len(bulk_present) // 2
        for idx in range(len(bulk_present) - 1, -1, -1):
            if emit(Update.delete(*bulk_present[idx])):
                return ups
            if idx == yank_at:
                for e in star_present[: len(star_present) // 2]:
                    if emit(Update.delete(*e)):
                        return ups
                star_present = star_present[len(star_present) // 2 :]
        for e in star_present:
            if emit(Update.delete(*e)):
                return ups
        rng.shuffle(leaves)


_GENERATORS = {
    "random": _gen_random,
    "star-adversary": _gen_star_adversary,
    "forest": _gen_forest,
    "delete-heavy": _gen_delete_heavy,
}


def generate(kind: str, n: int, length: int, seed: int) -> Stream:
    """Deterministic update stream of the requested kind; same (kind, n,
    length, seed) always yields the identical stream on any platform."""
    if kind not in _GENERATORS:
        raise ValueError(f"unknown stream kind {kind!r}; choose from {STREAM_KINDS}")
    if n < 1:
        raise ValueError("n must be >= 1")
    if length < 0:
        raise ValueError("length must be >= 0")
    rng = SplitMix64(seed)
    ups = _GENERATORS[kind](rng, n, length)
    return Stream(n, tuple(ups))
