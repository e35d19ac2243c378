"""Instruction-field size distribution of a code image.

Attributes every bit of every whole word to one category:

    R       -> opcode 6, registers 15, shamt 5, funct 6
    I       -> opcode 6, registers 10, and 16 bits to the immediate's class
    J       -> opcode 6, addr26 26
    unknown -> all 32 bits (undecodable words are not split into an opcode
               slice; whole-word attribution is simpler to interpret)

Trailer bytes (an incomplete final word) are excluded from the categories
and reported separately.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .ingest import CodeImage
from .splitstream import _CLS_OF_OP, _FMT_I, _FMT_J, _FMT_OF_OP, _FMT_R, _U4

CATEGORIES = (
    "opcode",
    "registers",
    "shamt",
    "funct",
    "branch",
    "loadstore",
    "constant",
    "addr26",
    "unknown",
)

# Bits contributed per category by a word with a given opcode.
_CONTRIB = np.zeros((len(CATEGORIES), 64), dtype=np.int64)
for _op in range(64):
    _fmt = _FMT_OF_OP[_op]
    if _fmt == _FMT_R:
        _parts = {"opcode": 6, "registers": 15, "shamt": 5, "funct": 6}
    elif _fmt == _FMT_I:
        _cls = ("branch", "loadstore", "constant")[_CLS_OF_OP[_op]]
        _parts = {"opcode": 6, "registers": 10, _cls: 16}
    elif _fmt == _FMT_J:
        _parts = {"opcode": 6, "addr26": 26}
    else:
        _parts = {"unknown": 32}
    for _name, _bits in _parts.items():
        _CONTRIB[CATEGORIES.index(_name), _op] = _bits


@dataclass(frozen=True)
class FieldDistribution:
    word_count: int
    trailer_len: int
    bits: dict[str, int]

    @property
    def total_bits(self) -> int:
        return 32 * self.word_count

    @property
    def percentages(self) -> dict[str, float]:
        """Share of each category; all zero for empty input."""
        total = self.total_bits
        if total == 0:
            return {name: 0.0 for name in CATEGORIES}
        return {name: 100.0 * self.bits[name] / total for name in CATEGORIES}


def field_distribution(image: CodeImage) -> FieldDistribution:
    """Count how the bits of ``image`` divide across instruction fields."""
    word_count = len(image.data) // 4
    words = np.frombuffer(image.data, dtype=_U4[image.endianness], count=word_count)
    op_counts = np.bincount(
        (words.astype(np.uint32, copy=False) >> 26), minlength=64
    ).astype(np.int64)
    totals = _CONTRIB @ op_counts
    return FieldDistribution(
        word_count=word_count,
        trailer_len=len(image.data) - 4 * word_count,
        bits={name: int(totals[i]) for i, name in enumerate(CATEGORIES)},
    )


def render_text(dist: FieldDistribution) -> str:
    """Aligned table: category, bits, percent."""
    pct = dist.percentages
    width = max(len(name) for name in CATEGORIES)
    out = io.StringIO()
    out.write(f"{'category':<{width}}  {'bits':>12}  {'percent':>8}\n")
    for name in CATEGORIES:
        out.write(f"{name:<{width}}  {dist.bits[name]:>12}  {pct[name]:>8.3f}\n")
    out.write(
        f"{'total':<{width}}  {dist.total_bits:>12}  "
        f"{100.0 if dist.total_bits else 0.0:>8.3f}\n"
    )
    out.write(
        f"words={dist.word_count} trailer_bytes={dist.trailer_len} (excluded)\n"
    )
    return out.getvalue()


def render_csv(dist: FieldDistribution) -> str:
    """CSV with the documented column order: category,bits,percent."""
    pct = dist.percentages
    lines = ["category,bits,percent"]
    for name in CATEGORIES:
        lines.append(f"{name},{dist.bits[name]},{pct[name]!r}")
    return "\n".join(lines) + "\n"


def render_markdown(dist: FieldDistribution) -> str:
    pct = dist.percentages
    lines = [
        "| category | bits | percent |",
        "| --- | ---: | ---: |",
    ]
    for name in CATEGORIES:
        lines.append(f"| {name} | {dist.bits[name]} | {pct[name]:.3f} |")
    return "\n".join(lines) + "\n"


def render_kv(dist: FieldDistribution) -> str:
    """Machine-readable key=value lines."""
    pct = dist.percentages
    lines = [f"word_count={dist.word_count}", f"trailer_len={dist.trailer_len}"]
    for name in CATEGORIES:
        lines.append(f"bits.{name}={dist.bits[name]}")
    for name in CATEGORIES:
        lines.append(f"percent.{name}={pct[name]!r}")
    return "\n".join(lines) + "\n"
