"""MIPS R3000 instruction model.

Instructions are 32-bit architectural values (plain ints here; byte order
is resolved when words are read from or written to a byte image).  Three
encodings exist:

    R:  op(6) rs(5) rt(5) rd(5) shamt(5) funct(6)
    I:  op(6) rs(5) rt(5) imm16(16)
    J:  op(6) addr26(26)

Words whose opcode is not recognized as R, I or J keep their low 26 bits
as an opaque payload so they survive a decode/encode round trip unchanged.
Immediate values are never interpreted, only moved; signedness is out of
scope.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Literal

Endianness = Literal["big", "little"]


class Format(enum.Enum):
    R = "R"
    I = "I"
    J = "J"
    UNKNOWN = "Unknown"


class ImmClass(enum.Enum):
    """The three kinds of 16-bit immediates carried by I-format words."""

    BRANCH = "branch"
    LOAD_STORE = "loadstore"
    CONSTANT = "constant"


OP_SPECIAL = 0x00
OP_REGIMM = 0x01

# REGIMM's rt field is a sub-opcode (bltz/bgez/...); the word is still an
# I-format branch and rt travels with the register bits.
_BRANCH_OPS = frozenset({OP_REGIMM, 0x04, 0x05, 0x06, 0x07})
_CONSTANT_OPS = frozenset(range(0x08, 0x10))
_LOADSTORE_OPS = frozenset(
    set(range(0x20, 0x27))          # lb lh lwl lw lbu lhu lwr
    | {0x28, 0x29, 0x2A, 0x2B, 0x2E}  # sb sh swl sw swr
    | set(range(0x30, 0x34))        # lwc0..lwc3
    | set(range(0x38, 0x3C))        # swc0..swc3
)
_I_OPS = _BRANCH_OPS | _CONSTANT_OPS | _LOADSTORE_OPS
_J_OPS = frozenset({0x02, 0x03})
# Everything else (coprocessor operate 0x10-0x13 included) is opaque data.

_FORMAT_BY_OP: tuple[Format, ...] = tuple(
    Format.R if op == OP_SPECIAL
    else Format.J if op in _J_OPS
    else Format.I if op in _I_OPS
    else Format.UNKNOWN
    for op in range(64)
)

_IMMCLASS_BY_OP: dict[int, ImmClass] = {
    op: (
        ImmClass.BRANCH if op in _BRANCH_OPS
        else ImmClass.CONSTANT if op in _CONSTANT_OPS
        else ImmClass.LOAD_STORE
    )
    for op in sorted(_I_OPS)
}


def classify_format(op: int) -> Format:
    """Classify a 6-bit opcode into R, I, J or UNKNOWN.

    Total over all 64 opcodes; raises ValueError only if ``op`` is outside
    the 6-bit range.
    """
    if not 0 <= op <= 0x3F:
        raise ValueError(f"opcode {op:#x} does not fit in 6 bits")
    return _FORMAT_BY_OP[op]


def classify_imm(op: int) -> ImmClass:
    """Return the immediate class of an I-format opcode.

    Raises ValueError for opcodes that are not I-format.
    """
    if not 0 <= op <= 0x3F:
        raise ValueError(f"opcode {op:#x} does not fit in 6 bits")
    try:
        return _IMMCLASS_BY_OP[op]
    except KeyError:
        raise ValueError(
            f"opcode {op:#x} is {_FORMAT_BY_OP[op].value}-format, not I-format"
        ) from None


@dataclass(frozen=True)
class DecodedInstruction:
    """Field-level view of one instruction word.

    Only the fields belonging to ``format`` are meaningful (plus ``op``,
    which every word carries); the rest stay zero.
    """

    format: Format
    op: int
    rs: int = 0
    rt: int = 0
    rd: int = 0
    shamt: int = 0
    funct: int = 0
    imm16: int = 0
    addr26: int = 0
    payload26: int = 0


def decode(word: int) -> DecodedInstruction:
    """Split a 32-bit word into its fields. Total over all 2^32 values."""
    if not 0 <= word <= 0xFFFFFFFF:
        raise ValueError(f"word {word:#x} does not fit in 32 bits")
    op = word >> 26
    fmt = _FORMAT_BY_OP[op]
    if fmt is Format.R:
        return DecodedInstruction(
            format=fmt,
            op=op,
            rs=(word >> 21) & 0x1F,
            rt=(word >> 16) & 0x1F,
            rd=(word >> 11) & 0x1F,
            shamt=(word >> 6) & 0x1F,
            funct=word & 0x3F,
        )
    if fmt is Format.I:
        return DecodedInstruction(
            format=fmt,
            op=op,
            rs=(word >> 21) & 0x1F,
            rt=(word >> 16) & 0x1F,
            imm16=word & 0xFFFF,
        )
    if fmt is Format.J:
        return DecodedInstruction(format=fmt, op=op, addr26=word & 0x3FFFFFF)
    return DecodedInstruction(format=fmt, op=op, payload26=word & 0x3FFFFFF)


def _check_width(name: str, value: int, bits: int) -> int:
    if not 0 <= value < (1 << bits):
        raise ValueError(f"{name}={value:#x} does not fit in {bits} bits")
    return value


def encode(instr: DecodedInstruction) -> int:
    """Reassemble a word from decoded fields. Exact inverse of decode."""
    op = _check_width("op", instr.op, 6)
    if instr.format is Format.R:
        return (
            (op << 26)
            | (_check_width("rs", instr.rs, 5) << 21)
            | (_check_width("rt", instr.rt, 5) << 16)
            | (_check_width("rd", instr.rd, 5) << 11)
            | (_check_width("shamt", instr.shamt, 5) << 6)
            | _check_width("funct", instr.funct, 6)
        )
    if instr.format is Format.I:
        return (
            (op << 26)
            | (_check_width("rs", instr.rs, 5) << 21)
            | (_check_width("rt", instr.rt, 5) << 16)
            | _check_width("imm16", instr.imm16, 16)
        )
    if instr.format is Format.J:
        return (op << 26) | _check_width("addr26", instr.addr26, 26)
    return (op << 26) | _check_width("payload26", instr.payload26, 26)
