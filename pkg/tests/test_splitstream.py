import random
import struct

import pytest
from hypothesis import given, settings, strategies as st

from mipssplit import isa, splitstream
from mipssplit.isa import Format
from mipssplit.splitstream import (
    STRATEGY_STREAMS,
    SplitStrategy,
    StreamExhaustedError,
    StreamId,
    StreamSet,
    SurplusDataError,
)

ALL_STRATEGIES = list(SplitStrategy)
ENDIANNESSES = ("big", "little")


def words_of(code: bytes, endianness: str):
    n = len(code) // 4
    fmt = ">I" if endianness == "big" else "<I"
    return [struct.unpack_from(fmt, code, 4 * i)[0] for i in range(n)]


def test_filter_empty_s4():
    ss = splitstream.filter(b"", SplitStrategy.S4, "big")
    assert ss.word_count == 0
    assert ss.trailer == b""
    assert list(ss.streams) == list(STRATEGY_STREAMS[SplitStrategy.S4])
    assert all(payload == b"" for payload in ss.streams.values())


def test_filter_lw_example_s4():
    ss = splitstream.filter(bytes.fromhex("8C430004"), SplitStrategy.S4, "big")
    assert ss.word_count == 1
    assert ss.streams[StreamId.CORE] == bytes.fromhex("8C43")
    assert ss.streams[StreamId.LOAD_STORE] == bytes.fromhex("0004")
    assert ss.streams[StreamId.BRANCH] == b""
    assert ss.streams[StreamId.CONST16] == b""


def test_filter_two_words_s2():
    code = bytes.fromhex("00000000") + bytes.fromhex("8C430004")
    ss = splitstream.filter(code, SplitStrategy.S2, "big")
    assert ss.streams[StreamId.CORE] == bytes.fromhex("000000008C43")
    assert ss.streams[StreamId.IMM16] == bytes.fromhex("0004")


def test_merge_hand_built_lw():
    ss = StreamSet(
        strategy=SplitStrategy.S4,
        source_endianness="big",
        word_count=1,
        streams={
            StreamId.CORE: bytes.fromhex("8C43"),
            StreamId.BRANCH: b"",
            StreamId.LOAD_STORE: bytes.fromhex("0004"),
            StreamId.CONST16: b"",
        },
    )
    assert splitstream.merge(ss) == bytes.fromhex("8C430004")


def test_merge_core_exhaustion_names_stream_and_index():
    ss = StreamSet(
        strategy=SplitStrategy.S4,
        source_endianness="big",
        word_count=2,
        streams={
            StreamId.CORE: bytes.fromhex("8C43"),
            StreamId.BRANCH: b"",
            StreamId.LOAD_STORE: bytes.fromhex("00040004"),
            StreamId.CONST16: b"",
        },
    )
    with pytest.raises(StreamExhaustedError) as err:
        splitstream.merge(ss)
    assert err.value.stream is StreamId.CORE
    assert err.value.instruction == 1
    assert "core" in str(err.value)


def test_merge_immediate_exhaustion():
    ss = StreamSet(
        strategy=SplitStrategy.S4,
        source_endianness="big",
        word_count=1,
        streams={
            StreamId.CORE: bytes.fromhex("8C43"),
            StreamId.BRANCH: b"",
            StreamId.LOAD_STORE: b"",
            StreamId.CONST16: b"",
        },
    )
    with pytest.raises(StreamExhaustedError) as err:
        splitstream.merge(ss)
    assert err.value.stream is StreamId.LOAD_STORE
    assert err.value.instruction == 0


def test_merge_surplus_rejected():
    good = splitstream.filter(bytes.fromhex("8C430004"), SplitStrategy.S4, "big")
    tampered = StreamSet(
        strategy=good.strategy,
        source_endianness=good.source_endianness,
        word_count=good.word_count,
        streams={
            **good.streams,
            StreamId.CONST16: bytes.fromhex("0102"),
        },
    )
    with pytest.raises(SurplusDataError) as err:
        splitstream.merge(tampered)
    assert err.value.stream is StreamId.CONST16


def test_merge_rejects_wrong_stream_list():
    ss = StreamSet(
        strategy=SplitStrategy.S2,
        source_endianness="big",
        word_count=0,
        streams={StreamId.CORE: b""},
    )
    with pytest.raises(splitstream.MergeError):
        splitstream.merge(ss)


@pytest.mark.parametrize("strategy", ALL_STRATEGIES, ids=lambda s: s.value)
@pytest.mark.parametrize("endianness", ENDIANNESSES)
def test_round_trip_special_inputs(strategy, endianness):
    cases = [
        b"",
        b"\x00",
        b"\x00\x01\x02",
        bytes(16),
        b"\xff" * 24,
        bytes(range(256)),
        bytes.fromhex("8C430004") * 7 + b"\xAB",
        bytes.fromhex("0C10000400000000AFBF001C"),
    ]
    for code in cases:
        ss = splitstream.filter(code, strategy, endianness)
        assert splitstream.merge(ss) == code


@settings(max_examples=120, deadline=None)
@given(
    code=st.binary(max_size=512),
    strategy=st.sampled_from(ALL_STRATEGIES),
    endianness=st.sampled_from(ENDIANNESSES),
)
def test_round_trip_property(code, strategy, endianness):
    ss = splitstream.filter(code, strategy, endianness)
    assert ss.word_count == len(code) // 4
    assert len(ss.trailer) == len(code) % 4
    assert splitstream.merge(ss) == code


def test_round_trip_real_code(big_text):
    for strategy in ALL_STRATEGIES:
        ss = splitstream.filter(big_text, strategy, "big")
        assert splitstream.merge(ss) == big_text


@settings(max_examples=60, deadline=None)
@given(code=st.binary(max_size=600), endianness=st.sampled_from(ENDIANNESSES))
def test_conservation_byte_strategies(code, endianness):
    words = words_of(code, endianness)
    formats = [isa.decode(w).format for w in words]
    i_count = sum(1 for f in formats if f is Format.I)
    r_count = sum(1 for f in formats if f is Format.R)
    for strategy in (SplitStrategy.S2, SplitStrategy.S4):
        ss = splitstream.filter(code, strategy, endianness)
        total = sum(len(p) for p in ss.streams.values())
        assert total == 4 * ss.word_count
        if strategy is SplitStrategy.S4:
            imm_total = sum(
                len(ss.streams[sid])
                for sid in (StreamId.BRANCH, StreamId.LOAD_STORE, StreamId.CONST16)
            )
            assert imm_total == 2 * i_count
            assert len(ss.streams[StreamId.CORE]) == 4 * ss.word_count - 2 * i_count
    # s4r expands by construction: R words cost 2 extra padding bytes
    # (17-bit residue in 3 bytes, 3 register bytes), I words 1 (6-bit
    # residue in 1 byte, 2 register bytes).
    ss = splitstream.filter(code, SplitStrategy.S4R, endianness)
    total = sum(len(p) for p in ss.streams.values())
    assert total == 4 * ss.word_count + 2 * r_count + i_count


def test_s4_routing_matches_scalar_decode():
    rng = random.Random(99)
    code = bytes(rng.randrange(256) for _ in range(4 * 300))
    ss = splitstream.filter(code, SplitStrategy.S4, "big")
    cursors = {sid: 0 for sid in (StreamId.BRANCH, StreamId.LOAD_STORE, StreamId.CONST16)}
    by_class = {
        isa.ImmClass.BRANCH: StreamId.BRANCH,
        isa.ImmClass.LOAD_STORE: StreamId.LOAD_STORE,
        isa.ImmClass.CONSTANT: StreamId.CONST16,
    }
    for w in words_of(code, "big"):
        d = isa.decode(w)
        if d.format is not Format.I:
            continue
        sid = by_class[isa.classify_imm(d.op)]
        entry = ss.streams[sid][cursors[sid] : cursors[sid] + 2]
        assert entry == d.imm16.to_bytes(2, "big")
        cursors[sid] += 2
    for sid, pos in cursors.items():
        assert pos == len(ss.streams[sid])


def scalar_s7_padded(words):
    """Reference construction of the padded seven streams via the codec."""
    streams = {sid: bytearray() for sid in STRATEGY_STREAMS[SplitStrategy.S7_PADDED]}
    for w in words:
        d = isa.decode(w)
        streams[StreamId.OPCODE].append(d.op)
        if d.format is Format.R:
            streams[StreamId.REGISTERS] += bytes([d.rs, d.rt, d.rd])
            streams[StreamId.SHAMT].append(d.shamt)
            streams[StreamId.FUNCT].append(d.funct)
        elif d.format is Format.I:
            streams[StreamId.REGISTERS] += bytes([d.rs, d.rt])
            streams[StreamId.IMM16] += d.imm16.to_bytes(2, "big")
        elif d.format is Format.J:
            streams[StreamId.IMM26] += d.addr26.to_bytes(4, "big")
        else:
            streams[StreamId.UNKNOWN_DATA] += d.payload26.to_bytes(4, "big")
    return {sid: bytes(b) for sid, b in streams.items()}


def test_s7_padded_layout_matches_scalar_decode():
    rng = random.Random(7)
    code = bytes(rng.randrange(256) for _ in range(4 * 400))
    ss = splitstream.filter(code, SplitStrategy.S7_PADDED, "big")
    assert ss.streams == scalar_s7_padded(words_of(code, "big"))


def scalar_bit_pack(values, width):
    acc = 0
    nbits = 0
    out = bytearray()
    for v in values:
        acc = (acc << width) | v
        nbits += width
        while nbits >= 8:
            nbits -= 8
            out.append((acc >> nbits) & 0xFF)
            acc &= (1 << nbits) - 1
    if nbits:
        out.append((acc << (8 - nbits)) & 0xFF)
    return bytes(out)


def test_s7_packed_is_bit_exact():
    rng = random.Random(13)
    code = bytes(rng.randrange(256) for _ in range(4 * 400))
    words = words_of(code, "big")
    decoded = [isa.decode(w) for w in words]
    ss = splitstream.filter(code, SplitStrategy.S7_PACKED, "big")

    expect = {
        StreamId.OPCODE: scalar_bit_pack([d.op for d in decoded], 6),
        StreamId.REGISTERS: scalar_bit_pack(
            [
                field
                for d in decoded
                for field in (
                    (d.rs, d.rt, d.rd) if d.format is Format.R
                    else (d.rs, d.rt) if d.format is Format.I
                    else ()
                )
            ],
            5,
        ),
        StreamId.FUNCT: scalar_bit_pack(
            [d.funct for d in decoded if d.format is Format.R], 6
        ),
        StreamId.SHAMT: scalar_bit_pack(
            [d.shamt for d in decoded if d.format is Format.R], 5
        ),
        StreamId.IMM16: scalar_bit_pack(
            [d.imm16 for d in decoded if d.format is Format.I], 16
        ),
        StreamId.IMM26: scalar_bit_pack(
            [d.addr26 for d in decoded if d.format is Format.J], 26
        ),
        StreamId.UNKNOWN_DATA: scalar_bit_pack(
            [d.payload26 for d in decoded if d.format is Format.UNKNOWN], 26
        ),
    }
    assert ss.streams == expect

    # packed length equals the unpadded bit total rounded up per stream
    counts = {
        StreamId.OPCODE: (len(decoded), 6),
        StreamId.REGISTERS: (
            sum(3 if d.format is Format.R else 2 if d.format is Format.I else 0
                for d in decoded),
            5,
        ),
        StreamId.FUNCT: (sum(d.format is Format.R for d in decoded), 6),
        StreamId.SHAMT: (sum(d.format is Format.R for d in decoded), 5),
        StreamId.IMM16: (sum(d.format is Format.I for d in decoded), 16),
        StreamId.IMM26: (sum(d.format is Format.J for d in decoded), 26),
        StreamId.UNKNOWN_DATA: (
            sum(d.format is Format.UNKNOWN for d in decoded), 26),
    }
    for sid, (n, width) in counts.items():
        assert len(ss.streams[sid]) == (n * width + 7) // 8


def test_s4r_core_layout_matches_scalar_decode():
    rng = random.Random(21)
    code = bytes(rng.randrange(256) for _ in range(4 * 300))
    ss = splitstream.filter(code, SplitStrategy.S4R, "big")
    core = bytearray()
    regs = bytearray()
    for w in words_of(code, "big"):
        d = isa.decode(w)
        if d.format is Format.R:
            v24 = (d.op << 18) | (d.shamt << 13) | (d.funct << 7)
            core += v24.to_bytes(3, "big")
            regs += bytes([d.rs, d.rt, d.rd])
        elif d.format is Format.I:
            core.append(d.op << 2)
            regs += bytes([d.rs, d.rt])
        else:
            core += w.to_bytes(4, "big")
    assert ss.streams[StreamId.CORE] == bytes(core)
    assert ss.streams[StreamId.REGISTERS] == bytes(regs)


def test_stream_breakdown_order_and_sums():
    ss = splitstream.filter(b"", SplitStrategy.S4, "big")
    assert splitstream.stream_breakdown(ss) == [
        (StreamId.CORE, 0),
        (StreamId.BRANCH, 0),
        (StreamId.LOAD_STORE, 0),
        (StreamId.CONST16, 0),
    ]
    ss = splitstream.filter(bytes.fromhex("8C430004"), SplitStrategy.S4, "big")
    assert splitstream.stream_breakdown(ss) == [
        (StreamId.CORE, 2),
        (StreamId.BRANCH, 0),
        (StreamId.LOAD_STORE, 2),
        (StreamId.CONST16, 0),
    ]
    rng = random.Random(3)
    code = bytes(rng.randrange(256) for _ in range(401))
    for strategy in (SplitStrategy.S2, SplitStrategy.S4):
        ss = splitstream.filter(code, strategy, "big")
        total = sum(size for _, size in splitstream.stream_breakdown(ss))
        assert total + len(ss.trailer) == len(code)


def test_s2_core_length_counting():
    rng = random.Random(5)
    code = bytes(rng.randrange(256) for _ in range(4 * 250))
    words = words_of(code, "big")
    k = sum(1 for w in words if isa.decode(w).format is Format.I)
    ss = splitstream.filter(code, SplitStrategy.S2, "big")
    assert len(ss.streams[StreamId.CORE]) == 4 * len(words) - 2 * k


def test_filter_rejects_bad_endianness():
    with pytest.raises(ValueError):
        splitstream.filter(b"", SplitStrategy.S4, "middle")


def test_filter_accepts_strategy_names():
    ss = splitstream.filter(b"", "s7pad", "big")
    assert ss.strategy is SplitStrategy.S7_PADDED
