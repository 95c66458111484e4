"""Request and response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

EngineKind = Literal["naive", "sqrt", "arb", "compact"]
StreamKind = Literal["random", "star-adversary", "forest", "delete-heavy"]
OpKind = Literal["+", "-"]


class EngineCreateRequest(BaseModel):
    kind: EngineKind
    n: int = Field(ge=1, le=1_000_000)
    arboricity: int = Field(default=4, ge=1)
    profile: Literal["basic", "wide"] = "basic"


class EngineInfo(BaseModel):
    engine_id: str
    kind: str
    n: int
    m: int
    matching_size: int
    rounds: int
    total_ops: int


class UpdateRequest(BaseModel):
    op: OpKind
    u: int = Field(ge=0)
    v: int = Field(ge=0)


class UpdateResult(BaseModel):
    index: int
    op: OpKind
    u: int
    v: int
    ops: int
    m: int
    matching_size: int
    matched_added: list[tuple[int, int]]
    matched_removed: list[tuple[int, int]]


class SnapshotResponse(BaseModel):
    n: int
    edges: list[tuple[int, int]]
    matching: list[tuple[int, int]]
    free: list[int]


class CheckResponse(BaseModel):
    ok: bool
    matching_size: int
    violations: list[str]


class GenerateRequest(BaseModel):
    kind: StreamKind
    n: int = Field(ge=1, le=1_000_000)
    length: int = Field(ge=0, le=10_000_000)
    seed: int = Field(ge=0)


class StreamResponse(BaseModel):
    n: int
    length: int
    text: str


class StreamSpec(BaseModel):
    """A stream given either literally or as generator parameters."""

    text: Optional[str] = None
    kind: Optional[StreamKind] = None
    n: Optional[int] = Field(default=None, ge=1, le=1_000_000)
    length: Optional[int] = Field(default=None, ge=0, le=10_000_000)
    seed: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _exactly_one_form(self) -> "StreamSpec":
        generated = [self.kind, self.n, self.length, self.seed]
        if self.text is not None:
            if any(f is not None for f in generated):
                raise ValueError("give either text or generator fields, not both")
        elif any(f is None for f in generated):
            raise ValueError("generator form needs kind, n, length and seed")
        return self


class ReplayRequest(BaseModel):
    engine: EngineKind
    stream: StreamSpec
    check_every: Optional[int] = Field(default=None, ge=0)
    arboricity: int = Field(default=4, ge=1)
    include_rows: bool = False


class ReplayResponse(BaseModel):
    engine: str
    n: int
    updates: int
    max_ops: int
    total_ops: int
    amortized_ops: float
    final_matching_size: int
    checks_run: int
    violations: list[str]
    rows_csv: Optional[str] = None


class BenchRequest(BaseModel):
    engines: list[EngineKind] = Field(min_length=1)
    stream: StreamSpec
    arboricity: int = Field(default=4, ge=1)


class BenchRowModel(BaseModel):
    engine: str
    n: int
    updates: int
    max_ops_per_update: int
    amortized_ops: float
    wall_ms: float
    final_matching_size: int


class BenchResponse(BaseModel):
    rows: list[BenchRowModel]
    csv: str
