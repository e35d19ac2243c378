#!/usr/bin/env python3
"""Regenerate the binary test fixtures under tests/fixtures/.

Everything here is produced by an independent toolchain (clang's MIPS
backend, lld, binutils readelf), never by the package under test, so the
fixtures act as oracles:

  decode_corpus.elf        linked big-endian MIPS executable whose every
                           instruction has known field values
  decode_corpus.text.bin   its .text bytes, located via readelf
  decode_corpus.json       per-instruction expected fields, derived from
                           the assembly source (not from any decoder)
  decode_corpus_le.elf     the same program assembled little-endian
  decode_corpus_le.text.bin
  elf64_be.o / elf64_le.o  small ELF64 objects (mips64 / host x86-64)
  elf64_be.text.bin / elf64_le.text.bin
  big_mips_text.bin        ~200 KB of optimized compiler output (big-endian
                           MIPS .text), for compression-direction tests

Requires clang with the MIPS backend, ld.lld, readelf and a host cc.
Usage: python3 tools/make_fixtures.py [--out tests/fixtures]

The same recipe applies to real binaries: compile or fetch any big-endian
MIPS executable (e.g. busybox built with a mips-linux-gnu toolchain),
extract its .text, and feed it to the bench command.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import subprocess
import tempfile
from pathlib import Path

TEXT_BASE = 0x00400000

# --- an independent model of the opcode space (mirrors the MIPS manual) ---

BRANCH_OPS = {0x01, 0x04, 0x05, 0x06, 0x07}
CONST_OPS = set(range(0x08, 0x10))
LS_OPS = (
    set(range(0x20, 0x27))
    | {0x28, 0x29, 0x2A, 0x2B, 0x2E}
    | set(range(0x30, 0x34))
    | set(range(0x38, 0x3C))
)
J_OPS = {0x02, 0x03}


def classify(op: int) -> str:
    if op == 0:
        return "R"
    if op in J_OPS:
        return "J"
    if op in BRANCH_OPS or op in CONST_OPS or op in LS_OPS:
        return "I"
    return "Unknown"


def fields_of_word(word: int) -> dict:
    """Field expectations for a raw data word, by pure bit arithmetic."""
    op = word >> 26
    fmt = classify(op)
    if fmt == "R":
        return {
            "format": "R",
            "op": op,
            "rs": (word >> 21) & 0x1F,
            "rt": (word >> 16) & 0x1F,
            "rd": (word >> 11) & 0x1F,
            "shamt": (word >> 6) & 0x1F,
            "funct": word & 0x3F,
        }
    if fmt == "I":
        return {
            "format": "I",
            "op": op,
            "rs": (word >> 21) & 0x1F,
            "rt": (word >> 16) & 0x1F,
            "imm16": word & 0xFFFF,
        }
    if fmt == "J":
        return {"format": "J", "op": op, "addr26": word & 0x3FFFFFF}
    return {"format": "Unknown", "op": op, "payload26": word & 0x3FFFFFF}


# --- corpus construction -----------------------------------------------


def R(asm, rs=0, rt=0, rd=0, shamt=0, funct=0):
    return (asm, {"format": "R", "op": 0, "rs": rs, "rt": rt, "rd": rd,
                  "shamt": shamt, "funct": funct})


def I(asm, op, rs=0, rt=0, imm=0):
    return (asm, {"format": "I", "op": op, "rs": rs, "rt": rt,
                  "imm16": imm & 0xFFFF})


def IBR(asm, op, rs, rt, target):
    """Branch whose imm16 is resolved from the label layout."""
    return (asm, {"format": "I", "op": op, "rs": rs, "rt": rt,
                  "branch_to": target})


def JMP(asm, op, target):
    return (asm, {"format": "J", "op": op, "jump_to": target})


def U(asm, op, payload):
    return (asm, {"format": "Unknown", "op": op, "payload26": payload})


def W(value):
    return (f".word 0x{value:08X}", fields_of_word(value))


def cop_move(asm, op, sub, rt, rd):
    # mfc/mtc/cfc/ctc encodings: sub-opcode in the rs slot, then rt, rd.
    return U(asm, op, (sub << 21) | (rt << 16) | (rd << 11))


def build_corpus() -> list:
    """Program items: ('label', name) markers and (asm, fields) entries."""
    p: list = [("label", "top")]
    p += [
        # R-format arithmetic and logic
        R("add $1, $2, $3", rs=2, rt=3, rd=1, funct=0x20),
        R("addu $4, $5, $6", rs=5, rt=6, rd=4, funct=0x21),
        R("sub $7, $8, $9", rs=8, rt=9, rd=7, funct=0x22),
        R("subu $10, $11, $12", rs=11, rt=12, rd=10, funct=0x23),
        R("and $13, $14, $15", rs=14, rt=15, rd=13, funct=0x24),
        R("or $16, $17, $18", rs=17, rt=18, rd=16, funct=0x25),
        R("xor $19, $20, $21", rs=20, rt=21, rd=19, funct=0x26),
        R("nor $22, $23, $24", rs=23, rt=24, rd=22, funct=0x27),
        R("slt $25, $26, $27", rs=26, rt=27, rd=25, funct=0x2A),
        R("sltu $28, $29, $30", rs=29, rt=30, rd=28, funct=0x2B),
        # shifts, immediate and variable
        R("nop"),
        R("sll $2, $3, 1", rt=3, rd=2, shamt=1, funct=0x00),
        R("sll $4, $5, 31", rt=5, rd=4, shamt=31, funct=0x00),
        R("srl $6, $7, 1", rt=7, rd=6, shamt=1, funct=0x02),
        R("srl $8, $9, 16", rt=9, rd=8, shamt=16, funct=0x02),
        R("sra $10, $11, 8", rt=11, rd=10, shamt=8, funct=0x03),
        R("sllv $12, $13, $14", rs=14, rt=13, rd=12, funct=0x04),
        R("srlv $15, $16, $17", rs=17, rt=16, rd=15, funct=0x06),
        R("srav $18, $19, $20", rs=20, rt=19, rd=18, funct=0x07),
        # hi/lo and multiply unit
        R("mult $13, $14", rs=13, rt=14, funct=0x18),
        R("multu $15, $16", rs=15, rt=16, funct=0x19),
        R("div $zero, $17, $18", rs=17, rt=18, funct=0x1A),
        R("divu $zero, $19, $20", rs=19, rt=20, funct=0x1B),
        R("mfhi $9", rd=9, funct=0x10),
        R("mthi $10", rs=10, funct=0x11),
        R("mflo $11", rd=11, funct=0x12),
        R("mtlo $12", rs=12, funct=0x13),
        R("syscall", funct=0x0C),
        R("break", funct=0x0D),
    ]
    p += [
        # branches (offsets resolved from layout, forward and backward)
        IBR("beq $4, $3, top", 0x04, rs=4, rt=3, target="top"),
        R("nop"),
        IBR("bne $5, $6, mid", 0x05, rs=5, rt=6, target="mid"),
        R("nop"),
        IBR("blez $7, top", 0x06, rs=7, rt=0, target="top"),
        R("nop"),
        IBR("bgtz $8, mid", 0x07, rs=8, rt=0, target="mid"),
        R("nop"),
        IBR("bltz $9, mid", 0x01, rs=9, rt=0x00, target="mid"),
        R("nop"),
        IBR("bgez $10, top", 0x01, rs=10, rt=0x01, target="top"),
        R("nop"),
        IBR("bltzal $11, mid", 0x01, rs=11, rt=0x10, target="mid"),
        R("nop"),
        IBR("bgezal $12, mid", 0x01, rs=12, rt=0x11, target="mid"),
        R("nop"),
        ("label", "mid"),
        # constant immediates
        I("addi $5, $6, -100", 0x08, rs=6, rt=5, imm=-100),
        I("addiu $29, $29, -32", 0x09, rs=29, rt=29, imm=-32),
        I("addiu $7, $0, 12345", 0x09, rs=0, rt=7, imm=12345),
        I("slti $8, $9, 100", 0x0A, rs=9, rt=8, imm=100),
        I("sltiu $10, $11, 32767", 0x0B, rs=11, rt=10, imm=32767),
        I("andi $12, $13, 0xFF00", 0x0C, rs=13, rt=12, imm=0xFF00),
        I("ori $14, $15, 0xABCD", 0x0D, rs=15, rt=14, imm=0xABCD),
        I("xori $16, $17, 0x00FF", 0x0E, rs=17, rt=16, imm=0x00FF),
        I("lui $18, 0x8000", 0x0F, rs=0, rt=18, imm=0x8000),
        I("lui $19, 0x1234", 0x0F, rs=0, rt=19, imm=0x1234),
        # loads and stores
        I("lb $2, -1($3)", 0x20, rs=3, rt=2, imm=-1),
        I("lh $4, 2($5)", 0x21, rs=5, rt=4, imm=2),
        I("lwl $6, 3($7)", 0x22, rs=7, rt=6, imm=3),
        I("lw $3, 4($2)", 0x23, rs=2, rt=3, imm=4),
        I("lw $31, 28($29)", 0x23, rs=29, rt=31, imm=28),
        I("lbu $8, 0($9)", 0x24, rs=9, rt=8, imm=0),
        I("lhu $10, 6($11)", 0x25, rs=11, rt=10, imm=6),
        I("lwr $12, 1($13)", 0x26, rs=13, rt=12, imm=1),
        I("sb $14, -128($15)", 0x28, rs=15, rt=14, imm=-128),
        I("sh $16, 32($17)", 0x29, rs=17, rt=16, imm=32),
        I("swl $18, 5($19)", 0x2A, rs=19, rt=18, imm=5),
        I("sw $31, 28($29)", 0x2B, rs=29, rt=31, imm=28),
        I("swr $20, 2($21)", 0x2E, rs=21, rt=20, imm=2),
        I("lwc1 $f2, 8($5)", 0x31, rs=5, rt=2, imm=8),
        I("swc1 $f4, -4($6)", 0x39, rs=6, rt=4, imm=-4),
    ]
    p += [
        # jumps
        JMP("j far", 0x02, "far"),
        R("nop"),
        JMP("jal far", 0x03, "far"),
        R("nop"),
        JMP("jal top", 0x03, "top"),
        R("nop"),
        R("jr $31", rs=31, funct=0x08),
        R("nop"),
        R("jalr $25", rs=25, rd=31, funct=0x09),
        R("nop"),
        R("jalr $4, $25", rs=25, rd=4, funct=0x09),
        R("nop"),
        ("label", "far"),
        # coprocessor traffic and data words: the unknown path
        cop_move("mfc0 $6, $8", 0x10, sub=0x00, rt=6, rd=8),
        cop_move("mtc0 $7, $9", 0x10, sub=0x04, rt=7, rd=9),
        cop_move("mfc1 $10, $f2", 0x11, sub=0x00, rt=10, rd=2),
        cop_move("mtc1 $11, $f6", 0x11, sub=0x04, rt=11, rd=6),
        # cop1 arithmetic: fmt in the sub slot (0x10 = single precision)
        U("add.s $f0, $f2, $f4", 0x11,
          (0x10 << 21) | (4 << 16) | (2 << 11) | (0 << 6) | 0x00),
        U("mul.s $f6, $f8, $f10", 0x11,
          (0x10 << 21) | (10 << 16) | (8 << 11) | (6 << 6) | 0x02),
        W(0x50000000),
        W(0x9FFFFFFF),
        W(0xB3333333),
        W(0xD0123456),
        W(0xFFFFFFFF),
        W(0x73000001),
        W(0x7C00003B),
        W(0x00400100),
        W(0x041F0000),  # REGIMM with an unallocated rt: still I-format bits
        W(0x0000000A),
    ]
    # a second helping of varied loads/stores to push the count past 100
    rng = random.Random(11)
    for k in range(24):
        rs, rt = rng.randrange(32), rng.randrange(32)
        off = rng.randrange(-0x200, 0x200) * 4
        if k % 2:
            p.append(I(f"lw ${rt}, {off}(${rs})", 0x23, rs=rs, rt=rt, imm=off))
        else:
            p.append(I(f"sw ${rt}, {off}(${rs})", 0x2B, rs=rs, rt=rt, imm=off))
    p.append(R("jr $31", rs=31, funct=0x08))
    p.append(R("nop"))
    return p


def resolve(program: list) -> tuple[list[str], list[dict]]:
    """Assign instruction indices, fix up branch/jump field expectations."""
    labels: dict[str, int] = {}
    index = 0
    for item in program:
        if isinstance(item, tuple) and item[0] == "label":
            labels[item[1]] = index
        else:
            index += 1

    asm_lines, fields = [], []
    index = 0
    for item in program:
        if isinstance(item, tuple) and item[0] == "label":
            asm_lines.append(f"{item[1]}:")
            continue
        asm, f = item
        f = dict(f)
        if "branch_to" in f:
            target = labels[f.pop("branch_to")]
            f["imm16"] = (target - (index + 1)) & 0xFFFF
        if "jump_to" in f:
            target = labels[f.pop("jump_to")]
            f["addr26"] = ((TEXT_BASE >> 2) + target) & 0x3FFFFFF
        asm_lines.append(f"    {asm}")
        fields.append(f)
        index += 1
    return asm_lines, fields


# --- toolchain plumbing --------------------------------------------------


def run(cmd: list[str], **kw) -> subprocess.CompletedProcess:
    proc = subprocess.run(cmd, capture_output=True, text=True, **kw)
    if proc.returncode != 0:
        raise RuntimeError(f"{' '.join(cmd)} failed:\n{proc.stderr}")
    return proc


def read_section(path: Path, name: str = ".text") -> bytes:
    """Slice a section out of an ELF file, located by readelf (the oracle)."""
    out = run(["readelf", "-S", "--wide", str(path)]).stdout
    for line in out.splitlines():
        m = re.match(r"\s*\[\s*\d+\]\s+(\S+)\s+\S+\s+(\S+)\s+(\S+)\s+(\S+)", line)
        if m and m.group(1) == name:
            offset, size = int(m.group(3), 16), int(m.group(4), 16)
            data = path.read_bytes()
            return data[offset : offset + size]
    raise RuntimeError(f"{path}: no {name} section in readelf output")


def assemble_and_link(asm: str, triple: str, emulation: str, out_elf: Path) -> bytes:
    with tempfile.TemporaryDirectory() as tmp:
        src = Path(tmp) / "corpus.s"
        obj = Path(tmp) / "corpus.o"
        src.write_text(asm)
        run([
            "clang", "-target", triple, "-march=mips2", "-fno-pic",
            "-mno-abicalls", "-c", str(src), "-o", str(obj),
        ])
        run([
            "ld.lld", "-m", emulation, f"-Ttext={TEXT_BASE:#x}",
            "-e", "__start", str(obj), "-o", str(out_elf),
        ])
    return read_section(out_elf)


def make_decode_corpus(out_dir: Path) -> None:
    asm_lines, fields = resolve(build_corpus())
    preamble = [
        "    .set noreorder",
        "    .set noat",
        "    .text",
        "    .globl __start",
        "__start:",
    ]
    asm = "\n".join(preamble + asm_lines) + "\n"

    text = assemble_and_link(
        asm, "mips-linux-gnu", "elf32btsmip", out_dir / "decode_corpus.elf"
    )
    if len(text) != 4 * len(fields):
        raise RuntimeError(
            f"corpus assembled to {len(text)} bytes, expected {4 * len(fields)};"
            f" an instruction probably expanded"
        )
    # hard cross-checks against encodings from the architecture manual
    words = [int.from_bytes(text[i : i + 4], "big") for i in range(0, len(text), 4)]
    insn_lines = [l.strip() for l in asm_lines if not l.endswith(":")]
    for source, expected in (("lw $3, 4($2)", 0x8C430004), ("nop", 0x00000000),
                             ("jr $31", 0x03E00008)):
        got = words[insn_lines.index(source)]
        if got != expected:
            raise RuntimeError(f"sanity check: {source!r} -> {got:#010x}, "
                               f"expected {expected:#010x}")

    (out_dir / "decode_corpus.text.bin").write_bytes(text)
    (out_dir / "decode_corpus.json").write_text(
        json.dumps(
            {
                "text_base": TEXT_BASE,
                "instructions": [
                    {"asm": line, **f}
                    for line, f in zip(insn_lines, fields)
                ],
            },
            indent=1,
        )
        + "\n"
    )

    text_le = assemble_and_link(
        asm, "mipsel-linux-gnu", "elf32ltsmip", out_dir / "decode_corpus_le.elf"
    )
    if len(text_le) != len(text):
        raise RuntimeError("little-endian corpus size mismatch")
    (out_dir / "decode_corpus_le.text.bin").write_bytes(text_le)
    print(f"decode corpus: {len(fields)} instructions")


SMALL_C = "int probe(int x) { return x * 3 + 1; }\n"


def make_elf64_fixtures(out_dir: Path) -> None:
    with tempfile.TemporaryDirectory() as tmp:
        src = Path(tmp) / "probe.c"
        src.write_text(SMALL_C)
        be = out_dir / "elf64_be.o"
        run([
            "clang", "-target", "mips64-linux-gnuabi64", "-O1", "-fno-pic",
            "-c", str(src), "-o", str(be),
        ])
        (out_dir / "elf64_be.text.bin").write_bytes(read_section(be))
        le = out_dir / "elf64_le.o"
        run(["cc", "-O1", "-c", str(src), "-o", str(le)])
        (out_dir / "elf64_le.text.bin").write_bytes(read_section(le))
    print("elf64 fixtures written")


def generate_c(n_functions: int, seed: int = 42) -> str:
    """Deterministic synthetic C with realistic integer control flow."""
    rng = random.Random(seed)
    lines = [
        "typedef unsigned int u32;",
        "typedef int i32;",
        "struct node { i32 a; i32 b; u32 c; struct node *next; i32 arr[8]; };",
    ]
    for i in range(n_functions):
        lines.append(f"i32 f{i}(struct node *n, i32 x, i32 y, u32 z) {{")
        lines.append(f"  i32 acc = x ^ {rng.randrange(1, 0xFFFF)};")
        for _ in range(rng.randrange(6, 24)):
            k = rng.randrange(9)
            if k == 0:
                lines.append(
                    f"  acc += n->arr[{rng.randrange(8)}] * {rng.randrange(3, 200)};")
            elif k == 1:
                lines.append(
                    f"  if (acc > {rng.randrange(0x7FFF)}) acc -= y << {rng.randrange(1, 8)};")
            elif k == 2:
                lines.append(
                    f"  for (i32 i = 0; i < (x & {rng.randrange(3, 31)}); i++)"
                    f" acc += n->b + i * {rng.randrange(2, 50)};")
            elif k == 3:
                lines.append(
                    f"  n->c ^= (z >> {rng.randrange(1, 16)}) + {rng.randrange(255)}u;")
            elif k == 4:
                lines.append(
                    f"  acc = (acc < y) ? acc + {rng.randrange(1, 1000)}"
                    f" : acc - {rng.randrange(1, 1000)};")
            elif k == 5 and i > 0:
                callee = rng.randrange(max(0, i - 40), i)
                lines.append(
                    f"  acc ^= f{callee}(n, acc, y ^ {rng.randrange(0xFF)}, z);")
            elif k == 6:
                lines.append(
                    f"  while (n->next && (acc & {rng.randrange(1, 64)}))"
                    f" {{ n = n->next; acc += n->a; }}")
            elif k == 7:
                lines.append(
                    f"  switch (acc & 7) {{ case 0: acc += {rng.randrange(100)}; break;"
                    f" case 3: acc ^= y; break;"
                    f" case 5: acc = acc * {rng.randrange(3, 17)} + z; break;"
                    f" default: acc--; }}")
            else:
                lines.append(
                    f"  z = (z * {rng.randrange(3, 0x7FFF)}u) + {rng.randrange(0xFFFF)}u;"
                    f" acc += (i32)(z >> 16);")
        lines.append("  return acc;")
        lines.append("}")
    lines.append("i32 __start(struct node *n) { i32 r = 0;")
    for i in range(0, n_functions, 7):
        lines.append(f"  r ^= f{i}(n, r, r + {i}, (u32)r);")
    lines.append("  return r; }")
    return "\n".join(lines) + "\n"


def make_big_text(out_dir: Path, n_functions: int = 300) -> None:
    with tempfile.TemporaryDirectory() as tmp:
        src = Path(tmp) / "big.c"
        obj = Path(tmp) / "big.o"
        elf = Path(tmp) / "big.elf"
        src.write_text(generate_c(n_functions))
        run([
            "clang", "-target", "mips-linux-gnu", "-march=mips2", "-O2",
            "-fno-pic", "-mno-abicalls", "-c", str(src), "-o", str(obj),
        ])
        run([
            "ld.lld", "-m", "elf32btsmip", f"-Ttext={TEXT_BASE:#x}",
            "-e", "__start", str(obj), "-o", str(elf),
        ])
        text = read_section(elf)
    if len(text) < 100 * 1024:
        raise RuntimeError(f"big fixture only {len(text)} bytes; raise n_functions")
    (out_dir / "big_mips_text.bin").write_bytes(text)
    print(f"big_mips_text.bin: {len(text)} bytes")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out", default=Path(__file__).resolve().parent.parent / "tests" / "fixtures",
        type=Path,
    )
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    make_decode_corpus(args.out)
    make_elf64_fixtures(args.out)
    make_big_text(args.out)


if __name__ == "__main__":
    main()
