"""Command-line front end.

Subcommands: ``filter`` (code -> .mss container), ``unfilter`` (container ->
original bytes), ``extract-text`` (ELF section -> raw image), ``stats``
(field distribution), ``bench`` (baseline vs filtered compression).

Exit codes are uniform across subcommands: 0 success, 1 usage error,
2 I/O or backend failure, 3 corrupt or invalid input.  Reports go to
stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import bench as bench_mod
from . import container, ingest, splitstream, stats
from .compressors import Backend, BackendError, BACKENDS, get_backend
from .container import ContainerError
from .ingest import IngestError
from .splitstream import STREAM_NAMES, MergeError, SplitStrategy

_STRATEGY_HELP = ", ".join(s.value for s in SplitStrategy)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; this tool reserves 2 for I/O errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_strategy(name: str) -> SplitStrategy:
    try:
        return SplitStrategy(name)
    except ValueError:
        raise UsageError(
            f"unknown strategy '{name}' (valid: {_STRATEGY_HELP})"
        ) from None


def _parse_strategies(names: str) -> list[SplitStrategy]:
    return [_parse_strategy(name) for name in names.split(",") if name]


def _parse_backends(names: str) -> list[Backend]:
    backends = []
    for name in names.split(","):
        if not name:
            continue
        try:
            backends.append(get_backend(name))
        except BackendError as exc:
            raise UsageError(str(exc)) from None
    if not backends:
        raise UsageError("no backends selected")
    return backends


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="mipssplit",
        description="Reversible split-stream filter for MIPS code, "
        "with compression benchmarking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter", help="split code into a .mss container")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="output container (default: INPUT.mss)")
    p.add_argument("--strategy", default="s4", help=f"one of: {_STRATEGY_HELP}")
    p.add_argument("--endian", choices=("big", "little"), default="big")
    p.add_argument(
        "--emit-streams",
        metavar="DIR",
        help="additionally write one .strm file per stream into DIR",
    )
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("unfilter", help="rebuild original bytes from a container")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="output file (default: INPUT minus .mss)")
    p.set_defaults(func=cmd_unfilter)

    p = sub.add_parser("extract-text", help="extract a section from an ELF image")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="output file (default: INPUT + section)")
    p.add_argument("--section", default=".text")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("stats", help="instruction field size distribution")
    p.add_argument("input")
    p.add_argument("--section", default=".text", help="section to use for ELF inputs")
    p.add_argument("--endian", choices=("big", "little"), default="big",
                   help="byte order for raw (non-ELF) inputs")
    p.add_argument("--format", choices=("table", "csv", "markdown"), default="table")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="compare compression with and without filter")
    p.add_argument("files", nargs="+")
    p.add_argument("--strategy", default="s4",
                   help=f"comma-separated list from: {_STRATEGY_HELP}")
    p.add_argument("--backends", default="gzip,bzip2",
                   help=f"comma-separated list from: {', '.join(sorted(BACKENDS))}")
    p.add_argument("--min-size", type=int, default=bench_mod.DEFAULT_MIN_SIZE,
                   metavar="BYTES", help="skip inputs smaller than this")
    p.add_argument("--section", default=".text", help="section to use for ELF inputs")
    p.add_argument("--endian", choices=("big", "little"), default="big",
                   help="byte order for raw (non-ELF) inputs")
    p.add_argument("--format", choices=("table", "csv", "markdown"), default="table")
    p.add_argument("--all-concat", action="store_true",
                   help="add a concatenation of all kept files as one corpus entry")
    p.set_defaults(func=cmd_bench)

    return parser


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _write(path: str, data: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(data)


def cmd_filter(args) -> int:
    strategy = _parse_strategy(args.strategy)
    data = _read(args.input)
    streams = splitstream.filter(data, strategy, args.endian)
    out_path = args.output or args.input + ".mss"
    _write(out_path, container.serialize(streams))
    if args.emit_streams:
        os.makedirs(args.emit_streams, exist_ok=True)
        container.emit_stream_files(streams, args.emit_streams)
    breakdown = " ".join(
        f"{STREAM_NAMES[sid]}={size}"
        for sid, size in splitstream.stream_breakdown(streams)
    )
    print(
        f"words={streams.word_count} {breakdown} trailer={len(streams.trailer)}"
    )
    print(f"wrote {out_path}", file=sys.stderr)
    return 0


def cmd_unfilter(args) -> int:
    streams = container.parse(_read(args.input))
    data = splitstream.merge(streams)
    if args.output:
        out_path = args.output
    elif args.input.endswith(".mss"):
        out_path = args.input[: -len(".mss")]
    else:
        out_path = args.input + ".out"
    _write(out_path, data)
    print(f"wrote {out_path} ({len(data)} bytes)", file=sys.stderr)
    return 0


def cmd_extract(args) -> int:
    image = ingest.extract_section(
        _read(args.input), args.section, source_path=args.input
    )
    out_path = args.output or args.input + args.section
    _write(out_path, image.data)
    print(
        f"{args.input}: section {args.section}, {len(image.data)} bytes, "
        f"{image.endianness}-endian -> {out_path}",
        file=sys.stderr,
    )
    return 0


def cmd_stats(args) -> int:
    image = ingest.load_code(args.input, args.section, args.endian)
    dist = stats.field_distribution(image)
    render = {
        "table": stats.render_text,
        "csv": stats.render_csv,
        "markdown": stats.render_markdown,
    }[args.format]
    sys.stdout.write(render(dist))
    return 0


def cmd_bench(args) -> int:
    strategies = _parse_strategies(args.strategy)
    if not strategies:
        raise UsageError("no strategies selected")
    backends = _parse_backends(args.backends)
    try:
        report = bench_mod.run_bench(
            args.files,
            strategies,
            backends,
            args.min_size,
            section_name=args.section,
            endianness=args.endian,
            concat=args.all_concat,
        )
    except ValueError as exc:  # empty corpus, mixed endianness
        raise UsageError(str(exc)) from exc
    sys.stdout.write(bench_mod.render_report(report, args.format))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"mipssplit: error: {exc}", file=sys.stderr)
        return 1
    except (ContainerError, MergeError, IngestError) as exc:
        print(f"mipssplit: error: {exc}", file=sys.stderr)
        return 3
    except BackendError as exc:
        print(f"mipssplit: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"mipssplit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
