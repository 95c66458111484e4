"""Stream replay with online verification, plus cross-engine benchmarking.

`replay` drives one engine over a stream and periodically audits it against
the brute-force oracle; every check failure becomes a violation string in the
resulting report rather than an exception, so a corrupted engine produces a
readable diagnosis instead of a stack trace.  `bench` runs several engines
over the same stream and reports charged-operation and wall-clock figures
side by side.

Reports are deterministic: replaying the same stream twice yields
byte-identical CSV text.  Wall-clock timings appear only in bench output and
carry no determinism guarantee.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import oracle
from .engines import new_engine
from .errors import IllegalUpdateError, InternalInvariantError
from .graph import MatchingEngine, UpdateReport
from .streams import Stream

__all__ = [
    "BenchRow",
    "RunReport",
    "REPORT_CSV_HEADER",
    "BENCH_CSV_HEADER",
    "bench",
    "bench_csv",
    "default_check_every",
    "maximal_violation",
    "replay",
]

REPORT_CSV_HEADER = "index,kind,u,v,ops,m,matching_size"
BENCH_CSV_HEADER = (
    "engine,n,updates,max_ops_per_update,amortized_ops,wall_ms,final_matching_size"
)


def default_check_every(n: int) -> int:
    """Check cadence when the caller does not pick one.

    Small instances are cheap enough to audit after every update; larger ones
    are sampled so verification does not dominate the run.  The final update
    is always checked regardless of cadence.
    """
    return 1 if n <= 64 else 32


def maximal_violation(engine: MatchingEngine) -> tuple[int, int] | None:
    """Fast maximality probe: an edge with both endpoints free, or None.

    Scans the live edge set against the mate array directly, without building
    a snapshot, so it is safe to run after every update even on large streams.
    """
    mate = engine.match.mate
    for u, v in engine.iter_edges():
        if mate[u] is None and mate[v] is None:
            return (u, v)
    return None


@dataclass(frozen=True)
class RunReport:
    """Everything one replay produced: per-update rows plus a verdict."""

    engine: str
    n: int
    rows: tuple[UpdateReport, ...]
    violations: tuple[str, ...]
    checks_run: int
    census: tuple[tuple[int, int, int], ...]

    @property
    def updates(self) -> int:
        return len(self.rows)

    @property
    def total_ops(self) -> int:
        return sum(r.ops for r in self.rows)

    @property
    def max_ops(self) -> int:
        return max((r.ops for r in self.rows), default=0)

    @property
    def amortized_ops(self) -> float:
        return self.total_ops / len(self.rows) if self.rows else 0.0

    @property
    def final_matching_size(self) -> int:
        return self.rows[-1].matching_size if self.rows else 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_csv(self) -> str:
        """Per-update rows as CSV text; deterministic for a given stream."""
        lines = [REPORT_CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.index},{r.kind.value},{r.u},{r.v},{r.ops},{r.m},{r.matching_size}"
            )
        return "\n".join(lines) + "\n"

    def summary_line(self) -> str:
        return (
            f"engine={self.engine} n={self.n} updates={self.updates}"
            f" max_ops={self.max_ops} total_ops={self.total_ops}"
            f" amortized_ops={self.amortized_ops:.3f}"
            f" final_matching_size={self.final_matching_size}"
            f" checks={self.checks_run} violations={len(self.violations)}"
        )


def _check_engine(
    engine: MatchingEngine,
    index: int,
    violations: list[str],
    census: list[tuple[int, int, int]],
) -> None:
    """Engine-appropriate audit after update `index`; appends findings."""
    tag = f"update {index}"
    snap = engine.snapshot()
    try:
        oracle.check_wellformed(snap)
    except InternalInvariantError as exc:
        violations.append(f"{tag}: malformed state: {exc}")
        return
    ok, witness = oracle.check_maximal(snap)
    if not ok:
        violations.append(f"{tag}: not maximal, edge {witness} has two free endpoints")
    if engine.kind == "sqrt":
        ok3, path = oracle.check_no_3_aug_path(snap)
        if not ok3:
            violations.append(f"{tag}: augmenting path of length <= 3: {path}")
        for msg in engine.invariant_violations():  # type: ignore[attr-defined]
            violations.append(f"{tag}: {msg}")
    elif engine.kind == "arb":
        orient = engine.orient  # type: ignore[attr-defined]
        worst = max(range(engine.n), key=lambda v: len(orient.out[v]))
        if len(orient.out[worst]) > orient.delta:
            violations.append(
                f"{tag}: out-degree {len(orient.out[worst])} of vertex {worst}"
                f" exceeds cap {orient.delta}"
            )
    elif engine.kind == "compact":
        report = engine.space_census()  # type: ignore[attr-defined]
        census.append((index, report["total"], engine.n + engine.m + 1))
        deg = engine.deg  # type: ignore[attr-defined]
        for v in range(engine.n):
            cap = max(deg[v], 1)
            if len(engine.nlist[v]) > 2 * cap:  # type: ignore[attr-defined]
                violations.append(
                    f"{tag}: neighbor list of {v} holds"
                    f" {len(engine.nlist[v])} entries, cap {2 * cap}"
                )
            if len(engine.flist[v]) > 3 * cap + 1:  # type: ignore[attr-defined]
                violations.append(
                    f"{tag}: free list of {v} holds"
                    f" {len(engine.flist[v])} entries, cap {3 * cap + 1}"
                )
            if engine.ledger.bal_n[v] < 0 or engine.ledger.bal_f[v] < 0:  # type: ignore[attr-defined]
                violations.append(f"{tag}: negative token balance at vertex {v}")


def replay(
    stream: Stream,
    engine_kind: str,
    *,
    check_every: int | None = None,
    arboricity: int = 4,
    profile: str = "basic",
    engine: MatchingEngine | None = None,
) -> RunReport:
    """Run one engine over a stream, auditing every `check_every` updates.

    The final update is always audited.  `check_every=0` disables all but
    that final audit.  A pre-built engine may be supplied instead of a kind
    string (it must be fresh: same n, zero updates applied).
    """
    if engine is None:
        engine = new_engine(engine_kind, stream.n, arboricity=arboricity, profile=profile)
    elif engine.n != stream.n or engine.rounds != 0:
        raise ValueError("supplied engine must be unused and sized to the stream")
    if check_every is None:
        check_every = default_check_every(stream.n)
    if check_every < 0:
        raise ValueError("check_every must be >= 0")

    rows: list[UpdateReport] = []
    violations: list[str] = []
    census: list[tuple[int, int, int]] = []
    checks_run = 0
    last = len(stream.updates) - 1
    for i, update in enumerate(stream.updates):
        try:
            rows.append(engine.apply(update))
        except IllegalUpdateError as exc:
            raise IllegalUpdateError(f"update {i} (stream line {i + 2}): {exc}") from exc
        due = check_every > 0 and (i + 1) % check_every == 0
        if due or i == last:
            _check_engine(engine, i, violations, census)
            checks_run += 1
    return RunReport(
        engine=engine.kind,
        n=stream.n,
        rows=tuple(rows),
        violations=tuple(violations),
        checks_run=checks_run,
        census=tuple(census),
    )


@dataclass(frozen=True)
class BenchRow:
    """One engine's cost figures over one stream."""

    engine: str
    n: int
    updates: int
    max_ops_per_update: int
    amortized_ops: float
    wall_ms: float
    final_matching_size: int

    def to_csv_line(self) -> str:
        return (
            f"{self.engine},{self.n},{self.updates},{self.max_ops_per_update},"
            f"{self.amortized_ops:.3f},{self.wall_ms:.2f},{self.final_matching_size}"
        )


def bench(
    stream: Stream,
    kinds: tuple[str, ...] | list[str],
    *,
    arboricity: int = 4,
    profile: str = "basic",
) -> list[BenchRow]:
    """Measure each engine over the stream; no online verification.

    Charged-operation figures are deterministic; wall_ms is not.
    """
    out: list[BenchRow] = []
    for kind in kinds:
        engine = new_engine(kind, stream.n, arboricity=arboricity, profile=profile)
        max_ops = 0
        total_ops = 0
        t0 = time.perf_counter()
        for update in stream.updates:
            report = engine.apply(update)
            total_ops += report.ops
            if report.ops > max_ops:
                max_ops = report.ops
        wall_ms = (time.perf_counter() - t0) * 1000.0
        count = len(stream.updates)
        out.append(
            BenchRow(
                engine=kind,
                n=stream.n,
                updates=count,
                max_ops_per_update=max_ops,
                amortized_ops=total_ops / count if count else 0.0,
                wall_ms=wall_ms,
                final_matching_size=len(engine.match),
            )
        )
    return out


def bench_csv(rows: list[BenchRow]) -> str:
    return "\n".join([BENCH_CSV_HEADER] + [r.to_csv_line() for r in rows]) + "\n"
