"""Compression backends used for size measurement only.

Nothing here ever needs to decompress for correctness; the filter is
measured by comparing compressed sizes with and without it.  Both required
backends run at maximum settings (gzip level 9, bzip2 900 KB blocks) and
produce standard format streams, so sizes match what the canonical
command-line tools would write.  gzip output pins mtime to zero to stay
byte-deterministic.
"""

from __future__ import annotations

import bz2
import gzip
from dataclasses import dataclass
from typing import Callable

from .container import serialize
from .splitstream import STRATEGY_STREAMS, StreamId, StreamSet


class BackendError(RuntimeError):
    """A compression backend is unavailable or failed."""


@dataclass(frozen=True)
class Backend:
    name: str
    compress: Callable[[bytes], bytes]


GZIP = Backend("gzip", lambda data: gzip.compress(data, compresslevel=9, mtime=0))
BZIP2 = Backend("bzip2", lambda data: bz2.compress(data, compresslevel=9))

BACKENDS: dict[str, Backend] = {b.name: b for b in (GZIP, BZIP2)}


def get_backend(name: str) -> Backend:
    try:
        return BACKENDS[name]
    except KeyError:
        known = ", ".join(sorted(BACKENDS))
        raise BackendError(f"unknown backend '{name}' (available: {known})") from None


def compressed_size(backend: Backend, data: bytes) -> int:
    """Size in bytes of ``data`` compressed by ``backend``."""
    try:
        return len(backend.compress(bytes(data)))
    except Exception as exc:
        raise BackendError(f"backend '{backend.name}' failed: {exc}") from exc


def stream_compressed_sizes(
    backend: Backend, streams: StreamSet
) -> list[tuple[StreamId, int]]:
    """Per-stream compressed sizes, in the strategy's canonical order."""
    return [
        (sid, compressed_size(backend, streams.streams[sid]))
        for sid in STRATEGY_STREAMS[streams.strategy]
    ]


def filtered_size(backend: Backend, streams: StreamSet) -> int:
    """Total stored size with the filter: each stream compressed separately
    (as separate files would be) plus the raw trailer bytes.

    This per-stream measurement is the primary metric; container header
    bytes are excluded and reported separately.
    """
    per_stream = stream_compressed_sizes(backend, streams)
    return sum(size for _, size in per_stream) + len(streams.trailer)


def container_compressed_size(backend: Backend, streams: StreamSet) -> int:
    """Size of the whole serialized container compressed as one file.

    Secondary metric for single-file pipelines; one compressor context
    over all streams, so usually worse than ``filtered_size``.
    """
    return compressed_size(backend, serialize(streams))
