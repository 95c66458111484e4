"""Maximal matching in guaranteed O(n + m) space.

No full adjacency structure is kept.  The oriented out-sets D(v) (out-degree
capped by a stage constant near sqrt(m)) are the only authentic edge record;
the undirected neighbor lists N(v) and the free-neighbor announcement lists
F(v) are append-only and lazy.  Deletions and withdrawals leave stale
entries behind and mint tokens instead; every later pop of a stale entry
spends tokens deposited by the event that stranded it, so list sizes stay
within a constant factor of the true degree and the token balances never go
negative.  When m drifts a factor of two from the stage anchor the engine
rebuilds everything exactly and restarts the accounting.

Size discipline, checked after every round for each touched vertex:
  |N(v)| < max(2*deg(v), 1)   else authenticate, leaving |N(v)| = deg(v)
  |F(v)| < max(3*deg(v), 1)   else prune, leaving |F(v)| <= deg(v)
"""

from __future__ import annotations

from collections import deque
from typing import Iterator

from .errors import InternalInvariantError, TokenUnderflowError
from .graph import MatchState, MatchingEngine, StepCounter, int_ceil_sqrt
from .orientation import FlipEvent, Orientation

__all__ = ["SmartArray", "LazyList", "TokenLedger", "CompactMatchingEngine"]

MINT_N_PER_DELETE = 4
MINT_F_PER_DELETE = 1
POP_COST = 2


class SmartArray:
    """Stamp array with O(1) bulk reset.  begin() opens a fresh generation;
    claims from older generations are invisible."""

    __slots__ = ("_stamp", "_epoch")

    def __init__(self, n: int) -> None:
        self._stamp = [0] * n
        self._epoch = 0

    def begin(self) -> None:
        self._epoch += 1

    def claim(self, v: int) -> None:
        self._stamp[v] = self._epoch

    def is_claimed(self, v: int) -> bool:
        return self._stamp[v] == self._epoch


class LazyList:
    """Append-only vertex list with head pops.  Entries are never searched,
    only walked; staleness is decided by the caller against the orientation."""

    __slots__ = ("_entries", "_counter")

    def __init__(self, counter: StepCounter, preload: list[int] | None = None) -> None:
        self._entries: deque[int] = deque(preload or ())
        self._counter = counter

    def __len__(self) -> int:
        return len(self._entries)

    def append(self, w: int) -> None:
        self._counter.charge(1)
        self._entries.append(w)

    def head(self) -> int:
        return self._entries[0]

    def popleft(self) -> int:
        self._counter.charge(1)
        return self._entries.popleft()

    def rebuild(self, kept: list[int]) -> None:
        self._counter.charge(len(kept))
        self._entries = deque(kept)

    def snapshot(self) -> list[int]:
        return list(self._entries)


class TokenLedger:
    """Per-vertex token balances funding lazy-list cleanup.

    Each edge deletion mints 4*delta into the N-balance and delta into the
    F-balance of both endpoints; each postponed announcement withdrawal
    deposits 2 into the F-balance of the list owner.  Spends that would go
    negative raise: a stale entry may only be popped on a deposit made by
    the event that stranded it.
    """

    __slots__ = ("bal_n", "bal_f", "minted_total", "spent_total")

    def __init__(self, n: int) -> None:
        self.bal_n = [0] * n
        self.bal_f = [0] * n
        self.minted_total = 0
        self.spent_total = 0

    def zero(self) -> None:
        self.bal_n = [0] * len(self.bal_n)
        self.bal_f = [0] * len(self.bal_f)

    def mint_on_delete(self, u: int, v: int, delta: int) -> None:
        self.bal_n[u] += MINT_N_PER_DELETE * delta
        self.bal_n[v] += MINT_N_PER_DELETE * delta
        self.bal_f[u] += MINT_F_PER_DELETE * delta
        self.bal_f[v] += MINT_F_PER_DELETE * delta
        self.minted_total += 2 * (MINT_N_PER_DELETE + MINT_F_PER_DELETE) * delta

    def deposit_f(self, v: int, amount: int) -> None:
        self.bal_f[v] += amount
        self.minted_total += amount

    def spend_n(self, v: int, amount: int) -> None:
        self.bal_n[v] -= amount
        self.spent_total += amount
        if self.bal_n[v] < 0:
            raise TokenUnderflowError(
                f"N-balance of {v} driven to {self.bal_n[v]} by spend {amount}"
            )

    def spend_f(self, v: int, amount: int) -> None:
        self.bal_f[v] -= amount
        self.spent_total += amount
        if self.bal_f[v] < 0:
            raise TokenUnderflowError(
                f"F-balance of {v} driven to {self.bal_f[v]} by spend {amount}"
            )


class CompactMatchingEngine(MatchingEngine):
    """Maximal matching with O(sqrt(m)) amortized update cost and O(n + m)
    space, paid for with lazy lists and staged rebuilds."""

    kind = "compact"

    __slots__ = ("deg", "nlist", "flist", "orient", "ledger", "stamp", "m0", "_touched")

    def __init__(self, n: int, counter: StepCounter | None = None) -> None:
        super().__init__(n, counter)
        self.deg = [0] * n
        self.ledger = TokenLedger(n)
        self.stamp = SmartArray(n)
        self.m0 = 0
        self._touched: set[int] = set()
        self.orient = Orientation(n, self._stage_delta(0), self.counter)
        self.nlist = [LazyList(self.counter) for _ in range(n)]
        self.flist = [LazyList(self.counter) for _ in range(n)]

    # -- stage parameters --------------------------------------------------

    @staticmethod
    def _stage_delta(m: int) -> int:
        return 5 * 2 * int_ceil_sqrt(max(m, 1))

    @property
    def stage_delta(self) -> int:
        return self.orient.delta

    def _stage_needs_reset(self) -> bool:
        m0p = max(self.m0, 1)
        m = self.orient.m
        return m != self.m0 and (m >= 2 * m0p or m <= m0p // 2)

    # -- driver state ------------------------------------------------------

    @property
    def m(self) -> int:
        return self.orient.m

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.orient.out[u] or u in self.orient.out[v]

    def iter_edges(self) -> Iterator[tuple[int, int]]:
        return self.orient.iter_edges()

    def _is_free(self, x: int) -> bool:
        return self.match.mate[x] is None

    # -- update handlers -----------------------------------------------------

    def _insert(self, u: int, v: int) -> None:
        self.deg[u] += 1
        self.deg[v] += 1
        events = self.orient.insert(u, v)
        self.nlist[u].append(v)
        self.nlist[v].append(u)
        self._touched.update((u, v))
        self._apply_events(events)
        if self._is_free(u) and self._is_free(v):
            self._match(u, v)

    def _delete(self, u: int, v: int) -> None:
        tail, head = self.orient.delete(u, v)
        self.deg[u] -= 1
        self.deg[v] -= 1
        self.ledger.mint_on_delete(u, v, self.orient.delta)
        self._touched.update((u, v))
        if self.match.mate[u] == v:
            self.match.remove_pair(u, v)
            self.match.mate[u] = None
            self.match.mate[v] = None
            self._rematch_or_announce(u)
            self._rematch_or_announce(v)

    def _finish_round(self, update) -> None:
        if self._stage_needs_reset():
            self._stage_reset()
            self._touched.clear()
            return
        for x in sorted(self._touched):
            self._check_n(x)
            self._check_f(x)
        self._touched.clear()

    # -- matching internals -----------------------------------------------

    def _apply_events(self, events: list[FlipEvent]) -> None:
        """Mirror orientation events in the announcement lists.  A flip that
        turns a free announcer away leaves its entry stale and funds the
        eventual pop; a free vertex gaining an out-edge announces on it."""
        for ev in events:
            if ev.reoriented and self._is_free(ev.head):
                self.ledger.deposit_f(ev.tail, POP_COST)
                self._touched.add(ev.tail)
            if self._is_free(ev.tail):
                self.flist[ev.head].append(ev.tail)
                self._touched.add(ev.head)

    def _match(self, a: int, b: int) -> None:
        self.match.add_pair(a, b)
        self.match.mate[a] = b
        self.match.mate[b] = a
        for x in (a, b):
            for y in self.orient.out_list(x):
                self.counter.charge(1)
                self.ledger.deposit_f(y, POP_COST)
                self._touched.add(y)

    def _rematch_or_announce(self, x: int) -> None:
        """x just lost its mate: take a live announced in-neighbor, else a
        free out-neighbor, else announce x on every out-edge."""
        w = self._extract_announced_free(x)
        if w is not None:
            self._match(x, w)
            return
        for y in self.orient.out_neighbors(x):
            if self._is_free(y):
                self._match(x, y)
                return
        for y in self.orient.out_list(x):
            self.flist[y].append(x)
            self._touched.add(y)

    def _extract_announced_free(self, x: int) -> int | None:
        """First live announcement in F(x).  An entry w is live when w is
        still free and the edge still runs w -> x; dead entries are popped
        at POP_COST tokens apiece."""
        fl = self.flist[x]
        self.counter.charge(1)
        while len(fl):
            w = fl.head()
            self.counter.charge(1)
            if self.match.mate[w] is None and self.orient.points_to(w, x):
                return w
            fl.popleft()
            self.ledger.spend_f(x, POP_COST)
        return None

    # -- size discipline ----------------------------------------------------

    def _check_n(self, x: int) -> None:
        if len(self.nlist[x]) >= max(2 * self.deg[x], 1):
            self._authenticate_n(x)

    def _authenticate_n(self, x: int) -> None:
        """Walk N(x), drop ghosts and duplicates, keep one entry per live
        edge.  Afterwards |N(x)| equals the true degree exactly.  The whole
        walk is billed to the token balance: at the trigger size at least
        half the entries are dead, and each dead entry was funded with
        4*delta tokens by the deletion that killed it."""
        before = self.counter.total
        self.stamp.begin()
        kept: list[int] = []
        for w in self.nlist[x].snapshot():
            self.counter.charge(1)
            if self.stamp.is_claimed(w):
                continue
            if self.orient.points_to(x, w) or self.orient.points_to(w, x):
                self.stamp.claim(w)
                kept.append(w)
        self.nlist[x].rebuild(kept)
        self.ledger.spend_n(x, self.counter.total - before)
        if len(kept) != self.deg[x]:
            raise InternalInvariantError(
                f"authentication of N({x}) kept {len(kept)} entries "
                f"for degree {self.deg[x]}"
            )

    def _check_f(self, x: int) -> None:
        if len(self.flist[x]) >= max(3 * self.deg[x], 1):
            self._prune_f(x)

    def _prune_f(self, x: int) -> None:
        """Walk F(x), keep one entry per live announcement, drop the rest."""
        self.stamp.begin()
        kept: list[int] = []
        dropped = 0
        for w in self.flist[x].snapshot():
            self.counter.charge(1)
            if (
                not self.stamp.is_claimed(w)
                and self.match.mate[w] is None
                and self.orient.points_to(w, x)
            ):
                self.stamp.claim(w)
                kept.append(w)
            else:
                dropped += 1
        self.ledger.spend_f(x, POP_COST * dropped)
        self.flist[x].rebuild(kept)
        if len(kept) > self.deg[x]:
            raise InternalInvariantError(
                f"prune of F({x}) kept {len(kept)} entries for degree {self.deg[x]}"
            )

    # -- staged rebuild -----------------------------------------------------

    def _stage_reset(self) -> None:
        """Rebuild orientation, N, F and the accounting from scratch around
        the current m.  Charged as one flat n + m + 1."""
        edges = sorted(self.orient.iter_edges())
        m = len(edges)
        self.m0 = m
        build = StepCounter()
        orient = Orientation(self.n, self._stage_delta(m), build)
        for u, v in edges:
            orient.insert(u, v)
        orient._counter = self.counter
        self.orient = orient

        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.nlist = [LazyList(self.counter, sorted(nbrs[v])) for v in range(self.n)]
        if [len(a) for a in nbrs] != self.deg:
            raise InternalInvariantError("degree counters drifted from the edge set")

        announce: list[list[int]] = [[] for _ in range(self.n)]
        for w in range(self.n):
            if self._is_free(w):
                for y in sorted(orient.out[w]):
                    announce[y].append(w)
        self.flist = [LazyList(self.counter, announce[v]) for v in range(self.n)]

        self.ledger.zero()
        self.counter.charge(self.n + m + 1)

    # -- diagnostics ----------------------------------------------------------

    def space_census(self) -> dict[str, int]:
        """Logical slot count of every retained structure.  The total stays
        within a constant multiple of n + m + 1."""
        entries_n = sum(len(l) for l in self.nlist)
        entries_f = sum(len(l) for l in self.flist)
        entries_d = sum(len(s) for s in self.orient.out)
        fixed = 6 * self.n + 1
        return {
            "entries_n": entries_n,
            "entries_f": entries_f,
            "entries_d": entries_d,
            "fixed": fixed,
            "total": entries_n + entries_f + entries_d + fixed,
        }

    def audit_structures(self) -> None:
        self.orient.audit()
        edges = set(self.orient.iter_edges())
        self.match.audit(edges)
        for v in range(self.n):
            true_nbrs = {w for w in self.orient.out[v]}
            true_nbrs.update(w for w in range(self.n) if v in self.orient.out[w])
            if len(true_nbrs) != self.deg[v]:
                raise InternalInvariantError(f"degree counter wrong at {v}")
            if len(self.nlist[v]) > 2 * max(self.deg[v], 1):
                raise InternalInvariantError(f"N({v}) exceeds its size bound")
            if len(self.flist[v]) > 3 * max(self.deg[v], 1) + 1:
                raise InternalInvariantError(f"F({v}) exceeds its size bound")
            live = {w for w in self.nlist[v].snapshot() if w in true_nbrs}
            if live != true_nbrs:
                raise InternalInvariantError(f"N({v}) lost a live neighbor")
            if self.ledger.bal_n[v] < 0 or self.ledger.bal_f[v] < 0:
                raise InternalInvariantError(f"negative token balance at {v}")
        for w in range(self.n):
            if self._is_free(w):
                for y in self.orient.out[w]:
                    if w not in self.flist[y].snapshot():
                        raise InternalInvariantError(
                            f"free vertex {w} lacks its announcement in F({y})"
                        )
