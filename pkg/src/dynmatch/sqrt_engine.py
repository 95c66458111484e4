"""Matching engine with a worst-case per-update cost of O(sqrt(n+m) + log n)
charged operations.

Beyond maximality, the engine guarantees the matching admits no augmenting
path of length three or less, which pins its size to at least two thirds of
the maximum matching.  Three invariants carry the cost bound:

1. every free vertex has degree**2 <= 2*(n+m) at the end of each round;
2. every vertex that became free during a round has degree**2 <= 2*m at its
   end;
3. the matching is maximal with no length-<=3 augmenting path.

Deleting a matched edge leaves both endpoints with intentionally stale mate
pointers (tracked in an explicit pending set) until each is re-resolved: the
stale pointer is what suppresses redundant free-set sweeps when an endpoint
is re-matched, and what hides not-yet-processed endpoints from free-vertex
queries.  The pending set must drain before the round ends.

A free vertex whose degree climbs past sqrt(2*m) is "overloaded": it hands
its excess to a surrogate — some neighbor's mate of degree <= sqrt(2*m) —
which takes its place in the matching, and the surrogate is then re-settled
through the same free-neighbor / augmenting-path route.  At most three
vertices are examined for overload per round: the two update endpoints, then
the top of the degree heap.  All threshold comparisons are exact integer
arithmetic (deg > sqrt(2m) iff deg*deg > 2m).
"""

from __future__ import annotations

from .errors import IllegalUpdateError, InternalInvariantError
from .freestruct import FreeMaxHeap, FreeNeighborStructure
from .graph import GraphBackedEngine, StepCounter, Update, int_ceil_sqrt

__all__ = ["SqrtMatchingEngine"]


class SqrtMatchingEngine(GraphBackedEngine):
    kind = "sqrt"

    def __init__(self, n: int, counter: StepCounter | None = None) -> None:
        super().__init__(n, counter)
        self.free_nbrs = [FreeNeighborStructure(n, self.counter) for _ in range(n)]
        self.free_heap = FreeMaxHeap(n, self.counter)
        for v in range(n):
            self.free_heap.insert(v, 0)
        self._pending: set[int] = set()
        self.freed_this_round: list[int] = []
        self.corrections_applied = 0

    # -- round plumbing ---------------------------------------------------------

    def _begin_round(self) -> None:
        self.freed_this_round = []

    def _finish_round(self, update: Update) -> None:
        mate = self.match.mate
        deg = self.graph.degree
        for x in (update.u, update.v):
            if mate[x] is None and deg(x) ** 2 > 2 * self.graph.m:
                self._correct_overloaded(x)
        top = self.free_heap.find_max()
        if top is not None and deg(top) ** 2 > 2 * self.graph.m:
            self._correct_overloaded(top)
        if self._pending:
            raise InternalInvariantError(
                f"vertices {sorted(self._pending)} left unresolved at round end"
            )

    # -- insertion --------------------------------------------------------------

    def _insert(self, u: int, v: int) -> None:
        self.graph.add_edge(u, v)
        mate = self.match.mate
        deg = self.graph.degree
        u_free = mate[u] is None
        v_free = mate[v] is None
        if u_free:
            self.free_heap.update_key(u, deg(u))
            self.free_nbrs[v].insert(u)
        if v_free:
            self.free_heap.update_key(v, deg(v))
            self.free_nbrs[u].insert(v)
        if u_free and v_free:
            self._add_to_matching(u, v)
        elif u_free:
            self._insert_one_free(u, v)
        elif v_free:
            self._insert_one_free(v, u)
        # both matched: adjacency bookkeeping was all there is to do

    def _insert_one_free(self, u: int, v: int) -> None:
        """New edge (u, v) with u free and v matched: the only possible new
        short augmenting path is u - v - mate(v) - x, so look for a free x."""
        vp = self.match.mate[v]
        assert vp is not None
        # u must not be offered as mate(v)'s replacement (that is a triangle,
        # not a path); absence is legitimate here when {u, vp} is not an edge
        removed = self.free_nbrs[vp].discard(u)
        self.counter.charge(1)
        if len(self.free_nbrs[vp]) > 0:
            self.match.remove_pair(v, vp)
            self._pending.add(v)
            self._pending.add(vp)
            self._add_to_matching(u, v)
            x = self.free_nbrs[vp].get_free()
            self._add_to_matching(vp, x)
        elif removed:
            self.free_nbrs[vp].insert(u)

    # -- deletion ---------------------------------------------------------------

    def _delete(self, u: int, v: int) -> None:
        was_matched = self.match.has_pair(u, v)
        self.graph.remove_edge(u, v)
        mate = self.match.mate
        deg = self.graph.degree
        if mate[u] is None:
            self.free_heap.update_key(u, deg(u))
        if mate[v] is None:
            self.free_heap.update_key(v, deg(v))
        if not was_matched:
            if mate[u] is None:
                self.free_nbrs[v].delete(u)
            if mate[v] is None:
                self.free_nbrs[u].delete(v)
            return
        self.match.remove_pair(u, v)
        self._pending.add(u)
        self._pending.add(v)
        self._resolve(u)
        self._resolve(v)

    def _resolve(self, z: int) -> None:
        """Settle one endpoint of a removed matched pair: re-match it through
        a free neighbor, hand its load to a surrogate, or let it go free
        after an augmenting-path search."""
        assert z in self._pending
        self.counter.charge(1)
        if len(self.free_nbrs[z]) > 0:
            x = self.free_nbrs[z].get_free()
            self._add_to_matching(x, z)
            return
        two_m = 2 * self.graph.m
        if self.graph.degree(z) ** 2 > two_m:
            s = self._find_surrogate(z)
            self.counter.charge(1)
            if len(self.free_nbrs[s]) > 0:
                self._add_to_matching(self.free_nbrs[s].get_free(), s)
            else:
                if self.graph.degree(s) ** 2 > two_m:
                    raise InternalInvariantError(
                        f"surrogate {s} exceeds the low-degree bound"
                    )
                self._augment_or_free(s)
        else:
            self._augment_or_free(z)

    # -- shared machinery ---------------------------------------------------------

    def _add_to_matching(self, a: int, b: int) -> None:
        """Record the pair {a, b}.  An endpoint whose mate pointer is unset is
        genuinely free and gets swept out of every neighbor's free set; an
        endpoint with a (possibly stale) mate pointer was recorded matched all
        along and appears in no free set."""
        self.match.add_pair(a, b)
        self.free_heap.discard(a)
        self.free_heap.discard(b)
        mate = self.match.mate
        for w in (a, b):
            if mate[w] is None:
                for x in self.graph.neighbors(w):
                    self.free_nbrs[x].discard(w)
        mate[a] = b
        mate[b] = a
        self._pending.discard(a)
        self._pending.discard(b)

    def _augment_or_free(self, z: int) -> None:
        """z has no free neighbor: either augment through some matched
        neighbor pair (z - w - mate(w) - x) or declare z free."""
        n_plus_m = self.n + self.graph.m
        if self.graph.degree(z) ** 2 > 2 * n_plus_m:
            raise InternalInvariantError(
                f"augmenting-path search on overloaded vertex {z}"
            )
        mate = self.match.mate
        for w in self.graph.neighbors(z):
            self.counter.charge(1)
            wp = mate[w]
            if wp is None:
                raise InternalInvariantError(
                    f"free neighbor {w} of {z} missing from its free set"
                )
            self.counter.charge(1)
            if len(self.free_nbrs[wp]) > 0:
                x = self.free_nbrs[wp].get_free()
                self.match.remove_pair(w, wp)
                self._pending.add(w)
                self._pending.add(wp)
                self._add_to_matching(z, w)
                self._add_to_matching(wp, x)
                return
        self._declare_free(z)

    def _declare_free(self, z: int) -> None:
        self.match.mate[z] = None
        self._pending.discard(z)
        for w in self.graph.neighbors(z):
            self.free_nbrs[w].insert(z)
        self.free_heap.insert(z, self.graph.degree(z))
        self.freed_this_round.append(z)

    def _find_surrogate(self, z: int) -> int:
        """Scan z's neighbors for one whose mate has degree**2 <= 2m, move
        that neighbor over to z, and return the displaced mate (now pending).
        The degree-sum argument guarantees a hit within ceil(sqrt(2m))
        distinct neighbors; running past it means the invariants are broken."""
        mate = self.match.mate
        deg = self.graph.degree
        two_m = 2 * self.graph.m
        limit = int_ceil_sqrt(two_m)
        scanned = 0
        for w in self.graph.neighbors(z):
            scanned += 1
            self.counter.charge(1)
            wp = mate[w]
            if wp is None:
                raise InternalInvariantError(
                    f"free neighbor {w} of {z} missing from its free set"
                )
            if deg(wp) ** 2 <= two_m:
                self.match.remove_pair(w, wp)
                self._pending.add(w)
                self._pending.add(wp)
                self._add_to_matching(z, w)
                return wp
            if scanned >= limit:
                break
        raise InternalInvariantError(
            f"no surrogate for vertex {z} within {limit} neighbors"
        )

    def _correct_overloaded(self, x: int) -> None:
        """x is free with degree**2 > 2m: push it into the matching via a
        surrogate, then settle the surrogate."""
        self.counter.charge(1)
        if len(self.free_nbrs[x]) > 0:
            raise InternalInvariantError(
                f"overloaded free vertex {x} still has a free neighbor"
            )
        self.corrections_applied += 1
        s = self._find_surrogate(x)
        self.counter.charge(1)
        if len(self.free_nbrs[s]) > 0:
            self._add_to_matching(self.free_nbrs[s].get_free(), s)
        else:
            if self.graph.degree(s) ** 2 > 2 * self.graph.m:
                raise InternalInvariantError(
                    f"surrogate {s} exceeds the low-degree bound"
                )
            self._augment_or_free(s)

    # -- verification hooks -------------------------------------------------------

    def invariant_violations(self) -> list[str]:
        """End-of-round degree bounds; empty list means all hold."""
        out: list[str] = []
        mate = self.match.mate
        deg = self.graph.degree
        cap_all = 2 * (self.n + self.graph.m)
        cap_new = 2 * self.graph.m
        for v in range(self.n):
            if mate[v] is None and deg(v) ** 2 > cap_all:
                out.append(f"free vertex {v} has degree {deg(v)} > sqrt({cap_all})")
        for v in self.freed_this_round:
            if mate[v] is None and deg(v) ** 2 > cap_new:
                out.append(f"newly freed vertex {v} has degree {deg(v)} > sqrt({cap_new})")
        if self._pending:
            out.append(f"pending vertices {sorted(self._pending)} at round end")
        return out

    def audit_structures(self) -> None:
        """Full structural cross-check (test use; cost is O(n + m))."""
        self.match.audit(self.graph.iter_edges())
        mate = self.match.mate
        if self._pending:
            raise InternalInvariantError("pending set not empty between rounds")
        free = sorted(v for v in range(self.n) if mate[v] is None)
        if self.free_heap.members() != free:
            raise InternalInvariantError("degree heap disagrees with free vertices")
        for v in free:
            if self.free_heap.key_of(v) != self.graph.degree(v):
                raise InternalInvariantError(f"heap key of {v} is stale")
        self.free_heap.audit()
        for v in range(self.n):
            expected = sorted(
                w for w in self.graph.adj[v].as_list() if mate[w] is None
            )
            got = self.free_nbrs[v].members()
            if got != expected:
                raise InternalInvariantError(
                    f"free set of {v}: recorded {got}, expected {expected}"
                )
            self.free_nbrs[v].audit()

    @classmethod
    def from_state(
        cls,
        n: int,
        edges: tuple[tuple[int, int], ...],
        matching: tuple[tuple[int, int], ...],
    ) -> "SqrtMatchingEngine":
        """Rebuild an engine from (edge set, matching).  Between rounds every
        auxiliary structure is a pure function of that pair, so a rebuilt
        engine behaves identically to one that reached the state organically."""
        eng = cls(n)
        for u, v in edges:
            eng.graph.add_edge(u, v)
        covered: set[int] = set()
        for a, b in matching:
            if not eng.graph.adj[a].contains_uncharged(b):
                raise IllegalUpdateError(f"matched pair ({a},{b}) is not a live edge")
            if a in covered or b in covered:
                raise IllegalUpdateError(f"vertex reused by matched pair ({a},{b})")
            covered.update((a, b))
        for a, b in matching:
            eng.match.add_pair(a, b)
            eng.match.mate[a] = b
            eng.match.mate[b] = a
            eng.free_heap.delete(a)
            eng.free_heap.delete(b)
        mate = eng.match.mate
        for v in range(n):
            if mate[v] is None:
                eng.free_heap.update_key(v, eng.graph.degree(v))
                for w in eng.graph.adj[v].as_list():
                    eng.free_nbrs[w].insert(v)
        eng.match.begin_round()
        eng.counter.total = 0
        return eng
