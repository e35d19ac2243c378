"""Reversible split-stream preprocessing for MIPS R3000 machine code.

The filter routes instruction fields into separate homogeneous byte
streams so that generic compressors see less mixed-context data; merge
restores the original image bit-exactly.  See the ``cli`` module or the
``mipssplit`` command for end-to-end workflows.
"""

from .isa import (
    DecodedInstruction,
    Endianness,
    Format,
    ImmClass,
    classify_format,
    classify_imm,
    decode,
    encode,
)
from .splitstream import (
    STRATEGY_STREAMS,
    STREAM_NAMES,
    MergeError,
    SplitStrategy,
    StreamExhaustedError,
    StreamId,
    StreamSet,
    SurplusDataError,
    filter,
    merge,
    stream_breakdown,
)
from .container import parse, serialize, emit_stream_files
from .ingest import CodeImage, extract_section, load_code, load_raw
from .compressors import Backend, BACKENDS, compressed_size, filtered_size
from .stats import FieldDistribution, field_distribution
from .bench import BenchReport, BenchRow, concat_corpus, run_bench, render_report

__version__ = "0.1.0"

__all__ = [
    "DecodedInstruction",
    "Endianness",
    "Format",
    "ImmClass",
    "classify_format",
    "classify_imm",
    "decode",
    "encode",
    "SplitStrategy",
    "StreamId",
    "StreamSet",
    "MergeError",
    "StreamExhaustedError",
    "SurplusDataError",
    "STRATEGY_STREAMS",
    "STREAM_NAMES",
    "filter",
    "merge",
    "stream_breakdown",
    "parse",
    "serialize",
    "emit_stream_files",
    "CodeImage",
    "extract_section",
    "load_code",
    "load_raw",
    "Backend",
    "BACKENDS",
    "compressed_size",
    "filtered_size",
    "FieldDistribution",
    "field_distribution",
    "BenchReport",
    "BenchRow",
    "concat_corpus",
    "run_bench",
    "render_report",
]
