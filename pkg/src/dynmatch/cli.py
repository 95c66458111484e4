"""Command-line interface.

Verbs: generate (emit a stream), replay (run one engine with periodic
checks), verify (oracle checks after every update on the baseline engine),
bench (compare engines on one stream), serve (start the HTTP service).
Result CSV goes to stdout; everything diagnostic goes to stderr.

Exit codes: 0 success, 2 usage error, 3 stream parse error, 4 illegal
update, 5 verification violation.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .engines import ENGINE_KINDS
from .errors import IllegalUpdateError, InternalInvariantError, StreamFormatError
from .harness import bench, bench_csv, replay
from .streams import STREAM_KINDS, Stream, format_stream, generate, parse_stream

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_ILLEGAL = 4
EXIT_VIOLATION = 5


def _read_stream(path: str) -> Stream:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    return parse_stream(text)


def _add_engine_opts(sub: argparse.ArgumentParser, *, multi: bool) -> None:
    if multi:
        sub.add_argument(
            "--engine",
            default="all",
            help="comma-separated engine kinds, or 'all' (default)",
        )
    else:
        sub.add_argument(
            "--engine",
            default="sqrt",
            choices=ENGINE_KINDS,
            help="engine kind (default: sqrt)",
        )
    sub.add_argument(
        "--arboricity",
        type=int,
        default=4,
        metavar="C",
        help="promised arboricity bound for the arb engine (default: 4)",
    )
    sub.add_argument(
        "--profile",
        default="basic",
        choices=("basic", "wide"),
        help="out-degree cap profile for the arb engine (default: basic)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynmatch",
        description="Dynamic maximal matching engines over edge-update streams.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    gen = sub.add_parser("generate", help="emit a generated update stream")
    gen.add_argument("--kind", required=True, choices=STREAM_KINDS)
    gen.add_argument("--n", required=True, type=int, help="vertex count")
    gen.add_argument("--len", required=True, type=int, dest="length", help="update count")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--out", default="-", help="output file (default: stdout)")

    rep = sub.add_parser("replay", help="run one engine over a stream with checks")
    rep.add_argument("stream", help="stream file, or - for stdin")
    _add_engine_opts(rep, multi=False)
    rep.add_argument(
        "--check-every",
        type=int,
        default=None,
        metavar="K",
        help="audit cadence (default: 1 if n <= 64 else 32; final update always)",
    )
    rep.add_argument("--csv", action="store_true", help="write per-update rows to stdout")

    ver = sub.add_parser(
        "verify", help="oracle checks after every update, baseline engine"
    )
    ver.add_argument("stream", help="stream file, or - for stdin")

    ben = sub.add_parser("bench", help="compare engines over one stream")
    ben.add_argument("stream", help="stream file, or - for stdin")
    _add_engine_opts(ben, multi=True)

    srv = sub.add_parser("serve", help="start the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    return parser


def _cmd_generate(args: argparse.Namespace) -> int:
    try:
        stream = generate(args.kind, args.n, args.length, args.seed)
    except ValueError as exc:
        print(f"dynmatch: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = format_stream(stream)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(stream)} updates to {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_replay(args: argparse.Namespace) -> int:
    stream = _read_stream(args.stream)
    report = replay(
        stream,
        args.engine,
        check_every=args.check_every,
        arboricity=args.arboricity,
        profile=args.profile,
    )
    for line in report.violations:
        print(f"violation: {line}", file=sys.stderr)
    if args.csv:
        sys.stdout.write(report.to_csv())
        print(report.summary_line(), file=sys.stderr)
    else:
        print(report.summary_line())
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_verify(args: argparse.Namespace) -> int:
    stream = _read_stream(args.stream)
    report = replay(stream, "naive", check_every=1)
    for line in report.violations:
        print(f"violation: {line}", file=sys.stderr)
    print(report.summary_line())
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_bench(args: argparse.Namespace) -> int:
    kinds = (
        list(ENGINE_KINDS) if args.engine == "all" else [k for k in args.engine.split(",") if k]
    )
    for kind in kinds:
        if kind not in ENGINE_KINDS:
            print(f"dynmatch: unknown engine {kind!r}", file=sys.stderr)
            return EXIT_USAGE
    stream = _read_stream(args.stream)
    rows = bench(stream, kinds, arboricity=args.arboricity, profile=args.profile)
    sys.stdout.write(bench_csv(rows))
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.verb == "generate":
            return _cmd_generate(args)
        if args.verb == "replay":
            return _cmd_replay(args)
        if args.verb == "verify":
            return _cmd_verify(args)
        if args.verb == "bench":
            return _cmd_bench(args)
        if args.verb == "serve":
            return _cmd_serve(args)
    except FileNotFoundError as exc:
        print(f"dynmatch: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StreamFormatError as exc:
        print(f"dynmatch: stream parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except IllegalUpdateError as exc:
        print(f"dynmatch: illegal update: {exc}", file=sys.stderr)
        return EXIT_ILLEGAL
    except InternalInvariantError as exc:
        print(f"dynmatch: engine invariant violated: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    parser.error(f"unknown verb {args.verb!r}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
