"""Single-file serialization of stream sets (the ``.mss`` container).

Wire layout, version 1:

    offset  size  field
    0       4     magic "MSS1"
    4       1     version (0x01)
    5       1     strategy id (s2=0x02 s4=0x04 s7=0x07 s7pad=0x17 s4r=0x24)
    6       1     flags: bit 0 = source endianness (0 big, 1 little),
                  bits 1-7 reserved, must be zero
    7       4     word count, unsigned little-endian
    11      1     trailer length (0-3)
    12      1     stream count
    13      5*n   stream table: stream id (1 byte) + payload length (u32 LE)

The trailer bytes follow the header, then the stream payloads concatenated
in table order.  Header integers are little-endian regardless of the source
image's byte order; that byte order describes the payload and lives in the
flags bit.  There is no checksum: the container is an intermediate format
and integrity is left to the outer compressor.
"""

from __future__ import annotations

import os
import struct

from .splitstream import (
    STRATEGY_STREAMS,
    STREAM_NAMES,
    SplitStrategy,
    StreamId,
    StreamSet,
)

MAGIC = b"MSS1"
VERSION = 1

STRATEGY_IDS: dict[SplitStrategy, int] = {
    SplitStrategy.S2: 0x02,
    SplitStrategy.S4: 0x04,
    SplitStrategy.S7_PACKED: 0x07,
    SplitStrategy.S7_PADDED: 0x17,
    SplitStrategy.S4R: 0x24,
}
_STRATEGY_BY_ID = {v: k for k, v in STRATEGY_IDS.items()}

_FIXED_HEADER = struct.Struct("<4sBBBIBB")


class ContainerError(ValueError):
    """Base class for container parse failures."""


class BadMagicError(ContainerError):
    pass


class UnsupportedVersionError(ContainerError):
    pass


class UnknownStrategyError(ContainerError):
    pass


class ReservedFlagError(ContainerError):
    pass


class TruncatedHeaderError(ContainerError):
    pass


class InvalidHeaderError(ContainerError):
    pass


class StreamTableError(ContainerError):
    pass


class TruncatedPayloadError(ContainerError):
    def __init__(self, what: str, missing: int):
        self.what = what
        super().__init__(f"payload for {what} truncated, {missing} byte(s) missing")


class TrailingDataError(ContainerError):
    pass


def header_size(streams: StreamSet) -> int:
    """Byte count of the header region (fixed part plus stream table)."""
    return _FIXED_HEADER.size + 5 * len(STRATEGY_STREAMS[streams.strategy])


def serialize(streams: StreamSet) -> bytes:
    """Encode a StreamSet to container bytes. Deterministic and injective."""
    order = STRATEGY_STREAMS[streams.strategy]
    flags = 1 if streams.source_endianness == "little" else 0
    parts = [
        _FIXED_HEADER.pack(
            MAGIC,
            VERSION,
            STRATEGY_IDS[streams.strategy],
            flags,
            streams.word_count,
            len(streams.trailer),
            len(order),
        )
    ]
    for sid in order:
        parts.append(struct.pack("<BI", sid, len(streams.streams[sid])))
    parts.append(streams.trailer)
    for sid in order:
        parts.append(streams.streams[sid])
    return b"".join(parts)


def parse(data: bytes) -> StreamSet:
    """Decode container bytes. Inverse of serialize on valid input."""
    data = bytes(data)
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagicError(f"not a MSS container (magic {data[:4]!r})")
    if len(data) < _FIXED_HEADER.size:
        raise TruncatedHeaderError(
            f"header needs {_FIXED_HEADER.size} bytes, have {len(data)}"
        )
    _, version, strategy_id, flags, word_count, trailer_len, stream_count = (
        _FIXED_HEADER.unpack_from(data)
    )
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported container version {version}")
    try:
        strategy = _STRATEGY_BY_ID[strategy_id]
    except KeyError:
        raise UnknownStrategyError(f"unknown strategy id {strategy_id:#04x}") from None
    if flags & ~0x01:
        raise ReservedFlagError(f"reserved flag bits set in {flags:#04x}")
    if trailer_len > 3:
        raise InvalidHeaderError(f"trailer length {trailer_len} exceeds 3")

    order = STRATEGY_STREAMS[strategy]
    if stream_count != len(order):
        raise StreamTableError(
            f"strategy {strategy.value} carries {len(order)} streams, "
            f"header declares {stream_count}"
        )
    pos = _FIXED_HEADER.size
    table: list[tuple[StreamId, int]] = []
    for expected in order:
        if pos + 5 > len(data):
            raise TruncatedHeaderError("stream table truncated")
        sid, length = struct.unpack_from("<BI", data, pos)
        pos += 5
        if sid != expected:
            raise StreamTableError(
                f"stream table entry {sid} does not match strategy "
                f"{strategy.value} (expected {STREAM_NAMES[expected]})"
            )
        table.append((expected, length))

    if pos + trailer_len > len(data):
        raise TruncatedPayloadError("trailer", pos + trailer_len - len(data))
    trailer = data[pos : pos + trailer_len]
    pos += trailer_len

    payloads: dict[StreamId, bytes] = {}
    for sid, length in table:
        if pos + length > len(data):
            raise TruncatedPayloadError(
                f"stream '{STREAM_NAMES[sid]}'", pos + length - len(data)
            )
        payloads[sid] = data[pos : pos + length]
        pos += length
    if pos != len(data):
        raise TrailingDataError(f"{len(data) - pos} byte(s) after last payload")

    endianness = "little" if flags & 1 else "big"
    return StreamSet(
        strategy=strategy,
        source_endianness=endianness,
        word_count=word_count,
        streams=payloads,
        trailer=trailer,
    )


def emit_stream_files(streams: StreamSet, directory: str | os.PathLike) -> list[str]:
    """Write one ``<name>.strm`` file per stream plus ``meta.strm``.

    ``meta.strm`` holds the container header (and trailer) so the directory
    alone suffices to rebuild the original image.  Returns written paths.
    """
    order = STRATEGY_STREAMS[streams.strategy]
    header_end = header_size(streams) + len(streams.trailer)
    meta = serialize(streams)[:header_end]
    written = []
    for name, payload in [("meta", meta)] + [
        (STREAM_NAMES[sid], streams.streams[sid]) for sid in order
    ]:
        path = os.path.join(os.fspath(directory), f"{name}.strm")
        try:
            with open(path, "wb") as fh:
                fh.write(payload)
        except OSError as exc:
            raise OSError(f"cannot write stream file {path}: {exc}") from exc
        written.append(path)
    return written
