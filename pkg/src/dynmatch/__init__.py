"""Dynamic maximal matching under edge insertions and deletions.

Four interchangeable engines maintain a maximal matching online:

- ``naive``: rescans after every deletion; the O(n)-per-update baseline.
- ``sqrt``: worst-case O(sqrt(n+m)) charged operations per update, and the
  matching never admits an augmenting path of length at most 3, so its size
  is within 3/2 of the maximum at all times.
- ``arb``: amortized sub-logarithmic updates on streams of bounded
  arboricity, built over a dynamic bounded-out-degree edge orientation.
- ``compact``: the arboricity scheme rebuilt to live in O(n + m) words,
  with lazily authenticated adjacency and free lists paid for by tokens
  minted on deletions.

A brute-force oracle verifies maximality, short-augmenting-path freeness and
approximation ratios on small instances; the harness replays update streams
with online checks and benchmarks engines against each other.
"""

from __future__ import annotations

from .arb_engine import ArboricityMatchingEngine
from .compact_engine import CompactMatchingEngine
from .engines import ENGINE_KINDS, new_engine
from .errors import (
    ArboricityContractError,
    DynMatchError,
    IllegalUpdateError,
    InternalInvariantError,
    OracleSizeError,
    StreamFormatError,
    TokenUnderflowError,
)
from .graph import (
    MatchingEngine,
    NaiveMatchingEngine,
    StepCounter,
    Update,
    UpdateKind,
    UpdateReport,
)
from .harness import BenchRow, RunReport, bench, bench_csv, replay
from .oracle import (
    Snapshot,
    approx_ratio,
    check_maximal,
    check_no_3_aug_path,
    exact_mcm,
)
from .orientation import Orientation, delta_for_arboricity
from .sqrt_engine import SqrtMatchingEngine
from .streams import STREAM_KINDS, Stream, format_stream, generate, parse_stream

__all__ = [
    "ArboricityContractError",
    "ArboricityMatchingEngine",
    "BenchRow",
    "CompactMatchingEngine",
    "DynMatchError",
    "ENGINE_KINDS",
    "IllegalUpdateError",
    "InternalInvariantError",
    "MatchingEngine",
    "NaiveMatchingEngine",
    "OracleSizeError",
    "Orientation",
    "RunReport",
    "STREAM_KINDS",
    "Snapshot",
    "SqrtMatchingEngine",
    "StepCounter",
    "Stream",
    "StreamFormatError",
    "TokenUnderflowError",
    "Update",
    "UpdateKind",
    "UpdateReport",
    "approx_ratio",
    "bench",
    "bench_csv",
    "check_maximal",
    "check_no_3_aug_path",
    "delta_for_arboricity",
    "exact_mcm",
    "format_stream",
    "generate",
    "new_engine",
    "parse_stream",
    "replay",
    "version",
]

version = "0.1.0"
