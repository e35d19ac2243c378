"""Baseline-vs-filtered compression measurement across files.

For every (file, backend, strategy) cell the runner compares the size of
the compressed unfiltered image against the summed sizes of the separately
compressed streams.  Files below the minimum size are skipped and listed;
per-file ingestion failures are recorded without aborting the run.

improvement = (baseline - filtered) / baseline; negative means the filter
hurt.  Displayed percentages round half up to whole percent.  KB means
1024 bytes throughout.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import splitstream
from .compressors import (
    Backend,
    compressed_size,
    container_compressed_size,
    stream_compressed_sizes,
)
from .container import header_size
from .ingest import CodeImage, IngestError, load_code
from .splitstream import SplitStrategy, StreamId

DEFAULT_MIN_SIZE = 50 * 1024

CSV_SCHEMA = (
    "file,strategy,backend,status,size_bytes,size_kb,baseline_bytes,"
    "filtered_bytes,header_bytes,container_bytes,improvement,detail"
)


def improvement(baseline: int, filtered: int) -> float:
    """Fractional size reduction; negative when filtering hurt."""
    return (baseline - filtered) / baseline


def display_percent(fraction: float) -> int:
    """Whole-percent rendering of an improvement fraction, half rounds up."""
    return math.floor(fraction * 100.0 + 0.5)


def kb(size: int) -> int:
    return math.floor(size / 1024.0 + 0.5)


@dataclass(frozen=True)
class BenchRow:
    file: str
    strategy: SplitStrategy
    backend: str
    size: int
    baseline: int
    filtered: int
    header_bytes: int
    container_compressed: int = 0
    stream_sizes: tuple[tuple[StreamId, int], ...] = ()

    @property
    def improvement(self) -> float:
        return improvement(self.baseline, self.filtered)


@dataclass
class BenchReport:
    rows: list[BenchRow]
    skipped: list[tuple[str, int]]
    errors: list[tuple[str, str]]
    min_size: int
    backends: list[str] = field(default_factory=list)
    strategies: list[SplitStrategy] = field(default_factory=list)


def concat_corpus(
    images: Sequence[CodeImage], name: str = "all.text"
) -> CodeImage:
    """Concatenate images in order into one synthetic corpus entry."""
    if not images:
        raise ValueError("cannot concatenate an empty corpus")
    endiannesses = {image.endianness for image in images}
    if len(endiannesses) > 1:
        raise ValueError("cannot concatenate images of mixed endianness")
    return CodeImage(
        data=b"".join(image.data for image in images),
        source_path=name,
        endianness=images[0].endianness,
    )


def run_bench(
    files: Iterable[str | os.PathLike | CodeImage],
    strategies: Sequence[SplitStrategy | str],
    backends: Sequence[Backend],
    min_size: int = DEFAULT_MIN_SIZE,
    *,
    section_name: str = ".text",
    endianness: str = "big",
    concat: bool = False,
) -> BenchReport:
    """Measure every (file x backend x strategy) cell.

    ``files`` may mix paths (ELF images get their section extracted,
    anything else loads raw) and preloaded CodeImages.
    """
    files = list(files)
    strategies = [SplitStrategy(s) for s in strategies]
    if not files or not strategies or not backends:
        raise ValueError("need at least one file, one strategy and one backend")

    # column order in the pivoted report follows the request; row order
    # stays (file, backend, strategy) lexicographic
    seen: dict[str, Backend] = {}
    for backend in backends:
        seen.setdefault(backend.name, backend)
    report = BenchReport(
        rows=[],
        skipped=[],
        errors=[],
        min_size=min_size,
        backends=list(seen),
        strategies=sorted(set(strategies), key=lambda s: s.value),
    )

    images: list[CodeImage] = []
    for entry in files:
        if isinstance(entry, CodeImage):
            images.append(entry)
            continue
        path = os.fspath(entry)
        try:
            images.append(load_code(path, section_name, endianness))  # type: ignore[arg-type]
        except (IngestError, OSError) as exc:
            report.errors.append((path, str(exc)))
    if concat:
        kept = [image for image in images if len(image.data) >= min_size]
        if kept:
            images.append(concat_corpus(kept))

    measured: list[CodeImage] = []
    for image in images:
        if len(image.data) < min_size:
            report.skipped.append((image.source_path, len(image.data)))
        else:
            measured.append(image)

    backend_by_name = {b.name: b for b in backends}
    for image in measured:
        split = {
            strategy: splitstream.filter(image.data, strategy, image.endianness)
            for strategy in strategies
        }
        for name in report.backends:
            backend = backend_by_name[name]
            baseline = compressed_size(backend, image.data)
            for strategy in report.strategies:
                streams = split[strategy]
                per_stream = stream_compressed_sizes(backend, streams)
                report.rows.append(
                    BenchRow(
                        file=image.source_path,
                        strategy=strategy,
                        backend=name,
                        size=len(image.data),
                        baseline=baseline,
                        filtered=sum(s for _, s in per_stream)
                        + len(streams.trailer),
                        header_bytes=header_size(streams),
                        container_compressed=container_compressed_size(
                            backend, streams
                        ),
                        stream_sizes=tuple(per_stream),
                    )
                )

    report.rows.sort(key=lambda r: (r.file, r.backend, r.strategy.value))
    report.skipped.sort()
    report.errors.sort()
    return report


def render_report(report: BenchReport, format: str = "table") -> str:
    """Render to ``table``, ``csv`` or ``markdown``."""
    if format == "csv":
        return _render_csv(report)
    if format == "table":
        return _render_pivot(report, markdown=False)
    if format == "markdown":
        return _render_pivot(report, markdown=True)
    raise ValueError(f"unknown report format '{format}'")


def _pivot_cells(report: BenchReport):
    """(strategy -> file -> backend -> row) plus orderings."""
    by_key: dict[SplitStrategy, dict[str, dict[str, BenchRow]]] = {}
    for row in report.rows:
        by_key.setdefault(row.strategy, {}).setdefault(row.file, {})[
            row.backend
        ] = row
    strategies = report.strategies or sorted(by_key, key=lambda s: s.value)
    backends = report.backends or sorted(
        {row.backend for row in report.rows}
    )
    return by_key, strategies, backends


def _render_pivot(report: BenchReport, markdown: bool) -> str:
    by_key, strategies, backends = _pivot_cells(report)
    out = io.StringIO()
    for strategy in strategies:
        files = sorted(by_key.get(strategy, {}))
        header = ["file", "size"]
        for name in backends:
            header += [name, f"filter+{name}", "impr."]
        table = [header]
        for file in files:
            cells = by_key[strategy][file]
            line = [file, str(next(iter(cells.values())).size)]
            for name in backends:
                row = cells.get(name)
                if row is None:
                    line += ["-", "-", "-"]
                else:
                    line += [
                        str(row.baseline),
                        str(row.filtered),
                        f"{display_percent(row.improvement)} %",
                    ]
            table.append(line)

        if markdown:
            out.write(f"### strategy {strategy.value}\n\n")
            out.write("| " + " | ".join(table[0]) + " |\n")
            out.write("|" + "|".join([" --- "] + [" ---: "] * (len(header) - 1)) + "|\n")
            for line in table[1:]:
                out.write("| " + " | ".join(line) + " |\n")
            out.write("\n")
        else:
            out.write(f"strategy {strategy.value}\n")
            widths = [max(len(line[i]) for line in table) for i in range(len(header))]
            for line in table:
                out.write(
                    "  ".join(
                        cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i])
                        for i, cell in enumerate(line)
                    ).rstrip()
                    + "\n"
                )
            out.write("\n")

    if report.skipped:
        out.write(f"skipped (below {report.min_size} bytes):\n")
        for file, size in report.skipped:
            out.write(f"  {file} ({size} bytes)\n")
    if report.errors:
        out.write("errors:\n")
        for file, message in report.errors:
            out.write(f"  {file}: {message}\n")
    return out.getvalue()


def _render_csv(report: BenchReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_SCHEMA.split(","))
    for row in report.rows:
        writer.writerow(
            [
                row.file,
                row.strategy.value,
                row.backend,
                "ok",
                row.size,
                kb(row.size),
                row.baseline,
                row.filtered,
                row.header_bytes,
                row.container_compressed,
                repr(row.improvement),
                "",
            ]
        )
    for file, size in report.skipped:
        writer.writerow(
            [file, "", "", "skipped", size, kb(size), "", "", "", "", "", ""])
    for file, message in report.errors:
        writer.writerow(
            [file, "", "", "error", "", "", "", "", "", "", "", message])
    return out.getvalue()


def parse_report_csv(text: str, min_size: int = DEFAULT_MIN_SIZE) -> BenchReport:
    """Rebuild a report from its CSV rendering (breakdowns are not carried)."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != CSV_SCHEMA.split(","):
        raise ValueError("unrecognized bench CSV header")
    report = BenchReport(rows=[], skipped=[], errors=[], min_size=min_size)
    for rec in reader:
        file, strategy, backend, status = rec[0], rec[1], rec[2], rec[3]
        if status == "ok":
            report.rows.append(
                BenchRow(
                    file=file,
                    strategy=SplitStrategy(strategy),
                    backend=backend,
                    size=int(rec[4]),
                    baseline=int(rec[6]),
                    filtered=int(rec[7]),
                    header_bytes=int(rec[8]),
                    container_compressed=int(rec[9]),
                )
            )
        elif status == "skipped":
            report.skipped.append((file, int(rec[4])))
        elif status == "error":
            report.errors.append((file, rec[11]))
        else:
            raise ValueError(f"unknown row status '{status}'")
    report.backends = sorted({row.backend for row in report.rows})
    report.strategies = sorted(
        {row.strategy for row in report.rows}, key=lambda s: s.value
    )
    return report
