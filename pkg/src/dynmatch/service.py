"""HTTP facade over the engines: create one, stream updates at it, audit it.

Engines live in process memory, keyed by an id the create call returns; this
is a workbench service, not a durable store.  Apart from session bookkeeping
every route delegates to the same code paths the library and CLI use.
"""

from __future__ import annotations

from itertools import count

from fastapi import FastAPI, HTTPException

from . import oracle
from .engines import ENGINE_KINDS, new_engine
from .errors import (
    IllegalUpdateError,
    InternalInvariantError,
    StreamFormatError,
)
from .graph import MatchingEngine, Update
from .harness import bench, bench_csv, replay
from .schemas import (
    BenchRequest,
    BenchResponse,
    BenchRowModel,
    CheckResponse,
    EngineCreateRequest,
    EngineInfo,
    GenerateRequest,
    ReplayRequest,
    ReplayResponse,
    SnapshotResponse,
    StreamResponse,
    StreamSpec,
    UpdateRequest,
    UpdateResult,
)
from .streams import Stream, format_stream, generate, parse_stream

__all__ = ["create_app"]


def _resolve_stream(spec: StreamSpec) -> Stream:
    if spec.text is not None:
        try:
            return parse_stream(spec.text)
        except StreamFormatError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
    assert spec.kind is not None and spec.n is not None
    assert spec.length is not None and spec.seed is not None
    return generate(spec.kind, spec.n, spec.length, spec.seed)


def create_app() -> FastAPI:
    app = FastAPI(
        title="dynmatch",
        description="Dynamic maximal matching engines over edge-update streams.",
    )
    engines: dict[str, MatchingEngine] = {}
    ids = count(1)

    def get_engine(engine_id: str) -> MatchingEngine:
        engine = engines.get(engine_id)
        if engine is None:
            raise HTTPException(status_code=404, detail=f"no engine {engine_id!r}")
        return engine

    def info(engine_id: str, engine: MatchingEngine) -> EngineInfo:
        return EngineInfo(
            engine_id=engine_id,
            kind=engine.kind,
            n=engine.n,
            m=engine.m,
            matching_size=len(engine.match),
            rounds=engine.rounds,
            total_ops=engine.counter.total,
        )

    @app.get("/healthz")
    def healthz() -> dict[str, str]:
        return {"status": "ok", "engines": ",".join(ENGINE_KINDS)}

    @app.post("/engines", response_model=EngineInfo, status_code=201)
    def create_engine(req: EngineCreateRequest) -> EngineInfo:
        engine_id = f"e{next(ids)}"
        engines[engine_id] = new_engine(
            req.kind, req.n, arboricity=req.arboricity, profile=req.profile
        )
        return info(engine_id, engines[engine_id])

    @app.get("/engines", response_model=list[EngineInfo])
    def list_engines() -> list[EngineInfo]:
        return [info(eid, engine) for eid, engine in sorted(engines.items())]

    @app.get("/engines/{engine_id}", response_model=EngineInfo)
    def engine_info(engine_id: str) -> EngineInfo:
        return info(engine_id, get_engine(engine_id))

    @app.delete("/engines/{engine_id}", status_code=204)
    def delete_engine(engine_id: str) -> None:
        get_engine(engine_id)
        del engines[engine_id]

    @app.post("/engines/{engine_id}/updates", response_model=UpdateResult)
    def apply_update(engine_id: str, req: UpdateRequest) -> UpdateResult:
        engine = get_engine(engine_id)
        try:
            update = (
                Update.insert(req.u, req.v) if req.op == "+" else Update.delete(req.u, req.v)
            )
            report = engine.apply(update)
        except IllegalUpdateError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except InternalInvariantError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc
        return UpdateResult(
            index=report.index,
            op=report.kind.value,
            u=report.u,
            v=report.v,
            ops=report.ops,
            m=report.m,
            matching_size=report.matching_size,
            matched_added=list(report.matched_added),
            matched_removed=list(report.matched_removed),
        )

    @app.get("/engines/{engine_id}/snapshot", response_model=SnapshotResponse)
    def snapshot(engine_id: str) -> SnapshotResponse:
        snap = get_engine(engine_id).snapshot()
        free = [v for v in range(snap.n) if snap.free[v]]
        return SnapshotResponse(
            n=snap.n,
            edges=list(snap.edges),
            matching=list(snap.matching),
            free=free,
        )

    @app.post("/engines/{engine_id}/check", response_model=CheckResponse)
    def check(engine_id: str) -> CheckResponse:
        engine = get_engine(engine_id)
        snap = engine.snapshot()
        violations: list[str] = []
        try:
            oracle.check_wellformed(snap)
        except InternalInvariantError as exc:
            violations.append(f"malformed state: {exc}")
        if not violations:
            ok, witness = oracle.check_maximal(snap)
            if not ok:
                violations.append(f"not maximal, edge {witness} has two free endpoints")
            if engine.kind == "sqrt":
                ok3, path = oracle.check_no_3_aug_path(snap)
                if not ok3:
                    violations.append(f"augmenting path of length <= 3: {path}")
                violations.extend(engine.invariant_violations())  # type: ignore[attr-defined]
        return CheckResponse(
            ok=not violations,
            matching_size=len(snap.matching),
            violations=violations,
        )

    @app.post("/generate", response_model=StreamResponse)
    def generate_stream(req: GenerateRequest) -> StreamResponse:
        stream = generate(req.kind, req.n, req.length, req.seed)
        return StreamResponse(n=stream.n, length=len(stream), text=format_stream(stream))

    @app.post("/replay", response_model=ReplayResponse)
    def replay_stream(req: ReplayRequest) -> ReplayResponse:
        stream = _resolve_stream(req.stream)
        try:
            report = replay(
                stream,
                req.engine,
                check_every=req.check_every,
                arboricity=req.arboricity,
            )
        except IllegalUpdateError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except InternalInvariantError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc
        return ReplayResponse(
            engine=report.engine,
            n=report.n,
            updates=report.updates,
            max_ops=report.max_ops,
            total_ops=report.total_ops,
            amortized_ops=report.amortized_ops,
            final_matching_size=report.final_matching_size,
            checks_run=report.checks_run,
            violations=list(report.violations),
            rows_csv=report.to_csv() if req.include_rows else None,
        )

    @app.post("/bench", response_model=BenchResponse)
    def bench_stream(req: BenchRequest) -> BenchResponse:
        stream = _resolve_stream(req.stream)
        try:
            rows = bench(stream, req.engines, arboricity=req.arboricity)
        except IllegalUpdateError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except InternalInvariantError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc
        return BenchResponse(
            rows=[BenchRowModel(**row.__dict__) for row in rows],
            csv=bench_csv(rows),
        )

    return app
