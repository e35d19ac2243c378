"""Reversible routing of MIPS code into field-homogeneous byte streams.

``filter`` walks a code image word by word and appends each instruction's
fields to per-field streams according to the chosen strategy; ``merge`` is
its exact inverse.  Multi-byte values inside streams are always stored
most-significant-byte first (architectural value order), regardless of the
source image's byte order; the source byte order is carried in the
``StreamSet`` so merge can re-emit the original bytes.

Strategies:

    s2     core + 16-bit immediates
    s4     core + immediates split into branch / load-store / constant
    s7     opcodes, registers, functs, shamts, imm16, imm26, unknown,
           bit-packed MSB-first with zero fill at each stream's end
    s7pad  same seven streams, one value per byte (imm16 as 2 bytes,
           26-bit values as 4), right-aligned
    s4r    s4 with register fields additionally pulled out one per byte

The hot paths are vectorized with numpy; reconstruction of the s2/s4/s4r
core stream (whose entries have data-dependent sizes) uses a pointer-
doubling scan so merge stays O(n log n) vector work instead of a Python
loop per instruction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import isa
from .isa import Endianness, Format

_U4 = {"big": ">u4", "little": "<u4"}


class SplitStrategy(enum.Enum):
    S2 = "s2"
    S4 = "s4"
    S7_PACKED = "s7"
    S7_PADDED = "s7pad"
    S4R = "s4r"


class StreamId(enum.IntEnum):
    """Stable stream identifiers, serialized in the container format."""

    CORE = 0
    BRANCH = 1
    LOAD_STORE = 2
    CONST16 = 3
    OPCODE = 4
    REGISTERS = 5
    FUNCT = 6
    SHAMT = 7
    IMM16 = 8
    IMM26 = 9
    UNKNOWN_DATA = 10


STREAM_NAMES: dict[StreamId, str] = {
    StreamId.CORE: "core",
    StreamId.BRANCH: "branch",
    StreamId.LOAD_STORE: "loadstore",
    StreamId.CONST16: "const16",
    StreamId.OPCODE: "opcode",
    StreamId.REGISTERS: "registers",
    StreamId.FUNCT: "funct",
    StreamId.SHAMT: "shamt",
    StreamId.IMM16: "imm16",
    StreamId.IMM26: "imm26",
    StreamId.UNKNOWN_DATA: "unknown",
}

_S7_STREAMS = (
    StreamId.OPCODE,
    StreamId.REGISTERS,
    StreamId.FUNCT,
    StreamId.SHAMT,
    StreamId.IMM16,
    StreamId.IMM26,
    StreamId.UNKNOWN_DATA,
)

STRATEGY_STREAMS: dict[SplitStrategy, tuple[StreamId, ...]] = {
    SplitStrategy.S2: (StreamId.CORE, StreamId.IMM16),
    SplitStrategy.S4: (
        StreamId.CORE,
        StreamId.BRANCH,
        StreamId.LOAD_STORE,
        StreamId.CONST16,
    ),
    SplitStrategy.S7_PACKED: _S7_STREAMS,
    SplitStrategy.S7_PADDED: _S7_STREAMS,
    SplitStrategy.S4R: (
        StreamId.CORE,
        StreamId.BRANCH,
        StreamId.LOAD_STORE,
        StreamId.CONST16,
        StreamId.REGISTERS,
    ),
}


class MergeError(ValueError):
    """Streams cannot be reassembled into the original code image."""


class StreamExhaustedError(MergeError):
    def __init__(self, stream: StreamId, instruction: int, word_count: int):
        self.stream = stream
        self.instruction = instruction
        super().__init__(
            f"stream '{STREAM_NAMES[stream]}' exhausted at instruction "
            f"{instruction} of {word_count}"
        )


class SurplusDataError(MergeError):
    def __init__(self, stream: StreamId, extra: int):
        self.stream = stream
        self.extra = extra
        super().__init__(
            f"stream '{STREAM_NAMES[stream]}' holds {extra} surplus byte(s) "
            f"after reconstruction"
        )


@dataclass(frozen=True)
class StreamSet:
    """The filter's output: named byte streams plus reassembly metadata."""

    strategy: SplitStrategy
    source_endianness: Endianness
    word_count: int
    streams: dict[StreamId, bytes]
    trailer: bytes = b""


# ---------------------------------------------------------------------------
# Lookup tables derived from the instruction model (single source of truth).

_FMT_R, _FMT_I, _FMT_J, _FMT_U = 0, 1, 2, 3
_FMT_OF_OP = np.array(
    [
        {Format.R: _FMT_R, Format.I: _FMT_I, Format.J: _FMT_J, Format.UNKNOWN: _FMT_U}[
            isa.classify_format(op)
        ]
        for op in range(64)
    ],
    dtype=np.uint8,
)

_CLS_NONE = 255
_CLS_OF_OP = np.array(
    [
        {
            isa.ImmClass.BRANCH: 0,
            isa.ImmClass.LOAD_STORE: 1,
            isa.ImmClass.CONSTANT: 2,
        }[isa.classify_imm(op)]
        if isa.classify_format(op) is Format.I
        else _CLS_NONE
        for op in range(64)
    ],
    dtype=np.uint8,
)
_CLS_STREAMS = (StreamId.BRANCH, StreamId.LOAD_STORE, StreamId.CONST16)

# Per-format constants: s4r core residue bytes, register fields per word.
_S4R_SIZE_BY_FMT = np.array([3, 1, 4, 4], dtype=np.int32)
_REGFIELDS_BY_FMT = np.array([3, 2, 0, 0], dtype=np.int32)

# Core-entry widths keyed by the entry's first byte (whose top 6 bits are
# the opcode).  s2/s4 widths are in halfword slots, s4r widths in bytes.
_BYTE_TO_FMT = _FMT_OF_OP[np.arange(256) >> 2]
_HW_WIDTH = np.where(_BYTE_TO_FMT == _FMT_I, 1, 2).astype(np.int32)
_S4R_WIDTH = _S4R_SIZE_BY_FMT[_BYTE_TO_FMT]


def _check_endianness(endianness: str) -> Endianness:
    if endianness not in ("big", "little"):
        raise ValueError(f"endianness must be 'big' or 'little', got {endianness!r}")
    return endianness  # type: ignore[return-value]


def _pack_values(vals: np.ndarray, width: int) -> bytes:
    """MSB-first bit packing of equal-width values, zero-filled at the end."""
    if len(vals) == 0:
        return b""
    if width <= 8:
        src = vals.astype(np.uint8).reshape(-1, 1)
    elif width <= 16:
        src = vals.astype(">u2").view(np.uint8).reshape(-1, 2)
    else:
        src = vals.astype(">u4").view(np.uint8).reshape(-1, 4)
    bits = np.unpackbits(src, axis=1)[:, 8 * src.shape[1] - width :]
    return np.packbits(bits).tobytes()


def _unpack_values(buf: bytes, count: int, width: int) -> np.ndarray:
    """Inverse of _pack_values for the first ``count`` values of ``buf``."""
    if count == 0:
        return np.empty(0, dtype=np.uint32)
    bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8), count=count * width)
    bits = bits.reshape(count, width)
    nbytes = 1 if width <= 8 else 2 if width <= 16 else 4
    padded = np.zeros((count, 8 * nbytes), dtype=np.uint8)
    padded[:, 8 * nbytes - width :] = bits
    packed = np.packbits(padded)
    if nbytes == 1:
        return packed.astype(np.uint32)
    return packed.view(f">u{nbytes}").astype(np.uint32)


# ---------------------------------------------------------------------------
# filter

def filter(
    code: bytes,
    strategy: SplitStrategy | str = SplitStrategy.S4,
    endianness: Endianness = "big",
) -> StreamSet:
    """Split a code image into per-field streams.

    Total over arbitrary byte sequences: undecodable words travel through
    the unknown path intact and 1-3 leftover bytes land in the trailer.
    """
    strategy = SplitStrategy(strategy)
    endianness = _check_endianness(endianness)
    data = bytes(code)
    word_count = len(data) // 4
    words = np.frombuffer(data, dtype=_U4[endianness], count=word_count).astype(
        np.uint32, copy=False
    )
    trailer = data[word_count * 4 :]

    if strategy in (SplitStrategy.S2, SplitStrategy.S4):
        streams = _filter_halfword(words, strategy)
    elif strategy is SplitStrategy.S4R:
        streams = _filter_s4r(words)
    else:
        streams = _filter_s7(words, padded=strategy is SplitStrategy.S7_PADDED)

    return StreamSet(
        strategy=strategy,
        source_endianness=endianness,
        word_count=word_count,
        streams=streams,
        trailer=trailer,
    )


def _imm_streams(word_bytes: np.ndarray, op: np.ndarray, split_classes: bool):
    """(stream_id -> bytes) for the 16-bit immediates of I-format words."""
    lo = word_bytes[:, 2:4]
    if split_classes:
        cls = _CLS_OF_OP[op]
        return {
            sid: lo[cls == c].tobytes() for c, sid in enumerate(_CLS_STREAMS)
        }
    is_i = _FMT_OF_OP[op] == _FMT_I
    return {StreamId.IMM16: lo[is_i].tobytes()}


def _word_bytes(words: np.ndarray) -> np.ndarray:
    """(n, 4) matrix of each word's bytes, most significant first."""
    return words.astype(">u4").view(np.uint8).reshape(-1, 4)


def _filter_halfword(words: np.ndarray, strategy: SplitStrategy):
    op = words >> 26
    is_i = _FMT_OF_OP[op] == _FMT_I

    # Boolean compression walks the matrix row by row, so the core stream
    # keeps instruction order: 4 bytes for R/J/unknown, the top 2 for I.
    word_bytes = _word_bytes(words)
    keep = np.empty(word_bytes.shape, dtype=bool)
    keep[:, :2] = True
    keep[:, 2:] = (~is_i)[:, None]
    streams = {StreamId.CORE: word_bytes[keep].tobytes()}
    streams.update(_imm_streams(word_bytes, op, strategy is SplitStrategy.S4))
    return streams


def _register_field_array(words: np.ndarray, fmt: np.ndarray) -> np.ndarray:
    """rs,rt(,rd) as a flat value sequence in instruction order."""
    is_r = fmt == _FMT_R
    has_regs = is_r | (fmt == _FMT_I)
    tri = np.empty((len(words), 3), dtype=np.uint8)
    tri[:, 0] = (words >> 21) & 0x1F
    tri[:, 1] = (words >> 16) & 0x1F
    tri[:, 2] = (words >> 11) & 0x1F
    keep = np.empty(tri.shape, dtype=bool)
    keep[:, 0] = has_regs
    keep[:, 1] = has_regs
    keep[:, 2] = is_r
    return tri[keep]


def _filter_s4r(words: np.ndarray):
    op = words >> 26
    fmt = _FMT_OF_OP[op]
    is_r = fmt == _FMT_R
    is_i = fmt == _FMT_I
    whole = fmt >= _FMT_J

    # Core keeps the register-free residue: R as op+shamt+funct packed into
    # 3 bytes (17 bits, zero-filled), I as the opcode alone in 1 byte, and
    # J/unknown words whole.
    word_bytes = _word_bytes(words)
    mat = np.empty(word_bytes.shape, dtype=np.uint8)
    mat[whole] = word_bytes[whole]
    v24 = (op[is_r] << 18) | (((words[is_r] >> 6) & 0x1F) << 13) | (
        (words[is_r] & 0x3F) << 7
    )
    mat[is_r, 0] = v24 >> 16
    mat[is_r, 1] = (v24 >> 8) & 0xFF
    mat[is_r, 2] = v24 & 0xFF
    mat[is_i, 0] = op[is_i] << 2
    keep = np.empty(mat.shape, dtype=bool)
    keep[:, 0] = True
    keep[:, 1] = keep[:, 2] = ~is_i
    keep[:, 3] = whole
    streams = {StreamId.CORE: mat[keep].tobytes()}
    streams.update(_imm_streams(word_bytes, op, split_classes=True))
    streams[StreamId.REGISTERS] = _register_field_array(words, fmt).tobytes()
    return streams


def _filter_s7(words: np.ndarray, padded: bool):
    op = words >> 26
    fmt = _FMT_OF_OP[op]
    is_r = fmt == _FMT_R
    is_i = fmt == _FMT_I
    is_j = fmt == _FMT_J
    is_u = fmt == _FMT_U

    regs = _register_field_array(words, fmt)
    shamt = (words[is_r] >> 6) & 0x1F
    funct = words[is_r] & 0x3F
    imm16 = words[is_i] & 0xFFFF
    addr26 = words[is_j] & 0x3FFFFFF
    payload26 = words[is_u] & 0x3FFFFFF

    if padded:
        streams = {
            StreamId.OPCODE: op.astype(np.uint8).tobytes(),
            StreamId.REGISTERS: regs.tobytes(),
            StreamId.FUNCT: funct.astype(np.uint8).tobytes(),
            StreamId.SHAMT: shamt.astype(np.uint8).tobytes(),
            StreamId.IMM16: imm16.astype(">u2").tobytes(),
            StreamId.IMM26: addr26.astype(">u4").tobytes(),
            StreamId.UNKNOWN_DATA: payload26.astype(">u4").tobytes(),
        }
    else:
        streams = {
            StreamId.OPCODE: _pack_values(op, 6),
            StreamId.REGISTERS: _pack_values(regs, 5),
            StreamId.FUNCT: _pack_values(funct, 6),
            StreamId.SHAMT: _pack_values(shamt, 5),
            StreamId.IMM16: _pack_values(imm16, 16),
            StreamId.IMM26: _pack_values(addr26, 26),
            StreamId.UNKNOWN_DATA: _pack_values(payload26, 26),
        }
    return {sid: streams[sid] for sid in _S7_STREAMS}


# ---------------------------------------------------------------------------
# merge

def merge(streams: StreamSet) -> bytes:
    """Reassemble the original code image. Exact inverse of ``filter``.

    Raises StreamExhaustedError if any stream runs out before word_count
    instructions are rebuilt, SurplusDataError if bytes are left over.
    """
    _require_wellformed(streams)
    strategy = streams.strategy
    if strategy in (SplitStrategy.S2, SplitStrategy.S4):
        words = _merge_halfword(streams)
    elif strategy is SplitStrategy.S4R:
        words = _merge_s4r(streams)
    elif strategy is SplitStrategy.S7_PADDED:
        words = _merge_s7(streams, packed=False)
    else:
        words = _merge_s7(streams, packed=True)
    out = words.astype(_U4[streams.source_endianness]).tobytes()
    return out + streams.trailer


def _require_wellformed(streams: StreamSet) -> None:
    expected = STRATEGY_STREAMS[streams.strategy]
    got = tuple(streams.streams.keys())
    if got != expected:
        raise MergeError(
            f"stream set for {streams.strategy.value} must hold "
            f"{[STREAM_NAMES[s] for s in expected]}, got "
            f"{[STREAM_NAMES[s] for s in got]}"
        )
    if streams.word_count < 0:
        raise MergeError("negative word count")
    if len(streams.trailer) > 3:
        raise MergeError("trailer longer than 3 bytes")


def _entry_offsets(width_of_slot: np.ndarray, count: int, n_slots: int) -> np.ndarray:
    """Start slots of ``count`` consecutive variable-width entries.

    ``width_of_slot[j]`` is the width an entry would have if it started at
    slot j.  Offsets saturate at ``n_slots`` once the data runs out; the
    caller detects that as exhaustion.  Pointer doubling keeps this at
    O(log count) vectorized passes.
    """
    dtype = np.int32 if n_slots < 2**31 - 1 else np.int64
    offs = np.empty(count, dtype=dtype)
    offs[0] = 0
    if count == 1:
        return offs
    step = np.empty(n_slots + 1, dtype=dtype)
    np.add(
        np.arange(n_slots, dtype=dtype),
        width_of_slot,
        out=step[:n_slots],
        casting="unsafe",
    )
    step[n_slots] = n_slots
    np.minimum(step, n_slots, out=step)
    known = 1
    while known < count:
        take = min(known, count - known)
        offs[known : known + take] = step[offs[:take]]
        known += take
        if known < count:
            step = step[step]
    return offs


def _scan_core(
    n_slots: int, widths: np.ndarray, count: int
) -> tuple[np.ndarray, int]:
    """Locate core entries; fail precisely on the first truncated one.

    Returns entry start slots and the total number of slots consumed.
    Entry k starts at slot >= k, so at most n_slots + 1 entries need
    scanning before an overrun is certain; that bound keeps corrupt
    word counts from provoking huge allocations.
    """
    scan = min(count, n_slots + 1)
    offs = _entry_offsets(widths, scan, n_slots)
    width_ext = np.append(widths, 1)
    ends = offs + width_ext[offs]
    bad = ends > n_slots
    if bad.any():
        raise StreamExhaustedError(StreamId.CORE, int(np.argmax(bad)), count)
    if scan < count:
        raise StreamExhaustedError(StreamId.CORE, scan, count)
    return offs, int(ends[-1])


def _first_set(mask: np.ndarray, nth: int) -> int:
    """Index of the (nth+1)-th set bit; the failing word for error reports."""
    return int(np.nonzero(mask)[0][nth])


def _take_fixed(
    streams: StreamSet,
    sid: StreamId,
    mask: np.ndarray | None,
    itemsize: int,
    dtype,
    word_count: int,
) -> np.ndarray:
    """Read one value per set mask bit (or per word) from a byte stream."""
    buf = streams.streams[sid]
    needed = word_count if mask is None else int(mask.sum())
    available = len(buf) // itemsize
    if available < needed:
        word = available if mask is None else _first_set(mask, available)
        raise StreamExhaustedError(sid, word, word_count)
    if len(buf) != needed * itemsize:
        raise SurplusDataError(sid, len(buf) - needed * itemsize)
    return np.frombuffer(buf, dtype=dtype, count=needed)


def _unpack_fixed(
    streams: StreamSet,
    sid: StreamId,
    mask: np.ndarray | None,
    width: int,
    word_count: int,
) -> np.ndarray:
    """Read one ``width``-bit value per set mask bit from a packed stream."""
    buf = streams.streams[sid]
    needed = word_count if mask is None else int(mask.sum())
    available = (8 * len(buf)) // width
    if available < needed:
        word = available if mask is None else _first_set(mask, available)
        raise StreamExhaustedError(sid, word, word_count)
    if len(buf) != (needed * width + 7) // 8:
        raise SurplusDataError(sid, len(buf) - (needed * width + 7) // 8)
    return _unpack_values(buf, needed, width)


def _immediates(
    streams: StreamSet, op: np.ndarray, low: np.ndarray, split_classes: bool
) -> None:
    """Fill the 16-bit halves of I-format words from the immediate streams."""
    count = len(op)
    if split_classes:
        cls = _CLS_OF_OP[op]
        for c, sid in enumerate(_CLS_STREAMS):
            mask = cls == c
            low[mask] = _take_fixed(streams, sid, mask, 2, ">u2", count)
    else:
        mask = _FMT_OF_OP[op] == _FMT_I
        low[mask] = _take_fixed(streams, StreamId.IMM16, mask, 2, ">u2", count)


def _merge_halfword(streams: StreamSet) -> np.ndarray:
    count = streams.word_count
    core = streams.streams[StreamId.CORE]
    split = streams.strategy is SplitStrategy.S4
    if count == 0:
        if len(core):
            raise SurplusDataError(StreamId.CORE, len(core))
        _immediates(streams, np.empty(0, np.uint32), np.empty(0, np.uint16), split)
        return np.empty(0, np.uint32)

    n_slots = len(core) // 2
    units = np.frombuffer(core, dtype=">u2", count=n_slots).astype(np.uint16)
    top = units >> 8
    offs, used = _scan_core(n_slots, _HW_WIDTH[top], count)
    if used * 2 != len(core):
        raise SurplusDataError(StreamId.CORE, len(core) - used * 2)

    hi = units[offs].astype(np.uint32)
    op = hi >> 10
    low = np.empty(count, dtype=np.uint16)
    full = _FMT_OF_OP[op] != _FMT_I
    low[full] = units[offs[full] + 1]
    _immediates(streams, op, low, split)
    return (hi << 16) | low


def _register_fields(
    streams: StreamSet, fmt: np.ndarray, packed: bool
) -> tuple[np.ndarray, ...]:
    """(R rs, R rt, R rd, I rs, I rt) from the registers stream.

    The stream is a flat sequence of 5-bit register fields (one per byte
    when not packed): three per R word, two per I word, in word order.
    """
    buf = streams.streams[StreamId.REGISTERS]
    counts = _REGFIELDS_BY_FMT[fmt]
    ends = np.cumsum(counts)
    total = int(ends[-1]) if len(ends) else 0
    if packed:
        available = (8 * len(buf)) // 5
        expected_len = (5 * total + 7) // 8
    else:
        available = len(buf)
        expected_len = total
    if available < total:
        word = int(np.argmax(ends > available))
        raise StreamExhaustedError(StreamId.REGISTERS, word, len(fmt))
    if len(buf) != expected_len:
        raise SurplusDataError(StreamId.REGISTERS, len(buf) - expected_len)

    if packed:
        vals = _unpack_values(buf, total, 5)
    else:
        vals = np.frombuffer(buf, dtype=np.uint8).astype(np.uint32) & 0x1F
    offs = ends - counts
    r_off = offs[fmt == _FMT_R]
    i_off = offs[fmt == _FMT_I]
    empty = np.empty(0, np.uint32)
    return (
        vals[r_off] if len(r_off) else empty,
        vals[r_off + 1] if len(r_off) else empty,
        vals[r_off + 2] if len(r_off) else empty,
        vals[i_off] if len(i_off) else empty,
        vals[i_off + 1] if len(i_off) else empty,
    )


def _merge_s4r(streams: StreamSet) -> np.ndarray:
    count = streams.word_count
    core = np.frombuffer(streams.streams[StreamId.CORE], dtype=np.uint8)
    if count == 0:
        for sid in STRATEGY_STREAMS[SplitStrategy.S4R]:
            if streams.streams[sid]:
                raise SurplusDataError(sid, len(streams.streams[sid]))
        return np.empty(0, np.uint32)

    offs, used = _scan_core(len(core), _S4R_WIDTH[core], count)
    if used != len(core):
        raise SurplusDataError(StreamId.CORE, len(core) - used)

    op = core[offs].astype(np.uint32) >> 2
    fmt = _FMT_OF_OP[op]
    is_r = fmt == _FMT_R
    is_i = fmt == _FMT_I
    whole = fmt >= _FMT_J

    words = np.zeros(count, dtype=np.uint32)
    r_rs, r_rt, r_rd, i_rs, i_rt = _register_fields(streams, fmt, packed=False)

    r_off = offs[is_r]
    v24 = (
        (core[r_off].astype(np.uint32) << 16)
        | (core[r_off + 1].astype(np.uint32) << 8)
        | core[r_off + 2]
    )
    words[is_r] = (
        ((v24 >> 18) << 26)
        | (r_rs << 21)
        | (r_rt << 16)
        | (r_rd << 11)
        | (((v24 >> 13) & 0x1F) << 6)
        | ((v24 >> 7) & 0x3F)
    )

    low = np.empty(count, dtype=np.uint16)
    _immediates(streams, op, low, split_classes=True)
    words[is_i] = (op[is_i] << 26) | (i_rs << 21) | (i_rt << 16) | low[is_i]

    w_off = offs[whole]
    w = np.zeros(int(whole.sum()), dtype=np.uint32)
    for k in range(4):
        w = (w << 8) | core[w_off + k]
    words[whole] = w
    return words


def _merge_s7(streams: StreamSet, packed: bool) -> np.ndarray:
    count = streams.word_count
    if packed:
        op = _unpack_fixed(streams, StreamId.OPCODE, None, 6, count)
    else:
        op = (
            _take_fixed(streams, StreamId.OPCODE, None, 1, np.uint8, count).astype(
                np.uint32
            )
            & 0x3F
        )
    fmt = _FMT_OF_OP[op]
    is_r = fmt == _FMT_R
    is_i = fmt == _FMT_I
    is_j = fmt == _FMT_J
    is_u = fmt == _FMT_U

    r_rs, r_rt, r_rd, i_rs, i_rt = _register_fields(streams, fmt, packed)
    if packed:
        funct = _unpack_fixed(streams, StreamId.FUNCT, is_r, 6, count)
        shamt = _unpack_fixed(streams, StreamId.SHAMT, is_r, 5, count)
        imm16 = _unpack_fixed(streams, StreamId.IMM16, is_i, 16, count)
        addr26 = _unpack_fixed(streams, StreamId.IMM26, is_j, 26, count)
        pay26 = _unpack_fixed(streams, StreamId.UNKNOWN_DATA, is_u, 26, count)
    else:
        def u32(arr: np.ndarray) -> np.ndarray:
            return arr.astype(np.uint32)

        funct = u32(_take_fixed(streams, StreamId.FUNCT, is_r, 1, np.uint8, count)) & 0x3F
        shamt = u32(_take_fixed(streams, StreamId.SHAMT, is_r, 1, np.uint8, count)) & 0x1F
        imm16 = u32(_take_fixed(streams, StreamId.IMM16, is_i, 2, ">u2", count))
        addr26 = u32(_take_fixed(streams, StreamId.IMM26, is_j, 4, ">u4", count)) & 0x3FFFFFF
        pay26 = (
            u32(_take_fixed(streams, StreamId.UNKNOWN_DATA, is_u, 4, ">u4", count))
            & 0x3FFFFFF
        )

    words = np.zeros(count, dtype=np.uint32)
    words[is_r] = (
        (op[is_r] << 26)
        | (r_rs << 21)
        | (r_rt << 16)
        | (r_rd << 11)
        | (shamt << 6)
        | funct
    )
    words[is_i] = (op[is_i] << 26) | (i_rs << 21) | (i_rt << 16) | imm16
    words[is_j] = (op[is_j] << 26) | addr26
    words[is_u] = (op[is_u] << 26) | pay26
    return words


# ---------------------------------------------------------------------------

def stream_breakdown(streams: StreamSet) -> list[tuple[StreamId, int]]:
    """Per-stream byte lengths in the strategy's canonical order."""
    return [
        (sid, len(streams.streams.get(sid, b"")))
        for sid in STRATEGY_STREAMS[streams.strategy]
    ]
