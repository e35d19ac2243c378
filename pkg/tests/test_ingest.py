import struct
from pathlib import Path

import pytest

from mipssplit import ingest
from mipssplit.ingest import (
    MalformedElfError,
    MissingSectionTableError,
    NotElfError,
    SectionNotFoundError,
)

FIXTURES = Path(__file__).parent / "fixtures"


def minimal_elf32(
    text: bytes = bytes(range(16)),
    endian: str = "big",
    section: str = ".text",
    sh_type: int = 1,
    text_size: int | None = None,
    shoff: int | None = None,
) -> bytes:
    """Tiny valid ELF32: null section, one code section, .shstrtab."""
    bo = ">" if endian == "big" else "<"
    names = b"\x00" + section.encode() + b"\x00.shstrtab\x00"
    name_off = 1
    shstrtab_name_off = 1 + len(section.encode()) + 1

    ehsize = 52
    text_off = ehsize
    str_off = text_off + len(text)
    sh_off = str_off + len(names) if shoff is None else shoff

    ident = b"\x7fELF" + bytes([1, 2 if endian == "big" else 1, 1, 0]) + bytes(8)
    ehdr = ident + struct.pack(
        f"{bo}HHIIIIIHHHHHH",
        2, 8, 1, 0, 0, sh_off, 0, ehsize, 0, 0, 40, 3, 2,
    )

    def shdr(name, type_, offset, size):
        return struct.pack(f"{bo}IIIIIIIIII", name, type_, 0, 0, offset, size, 0, 0, 0, 0)

    table = (
        shdr(0, 0, 0, 0)
        + shdr(name_off, sh_type, text_off, len(text) if text_size is None else text_size)
        + shdr(shstrtab_name_off, 3, str_off, len(names))
    )
    return ehdr + text + names + table


def test_extract_minimal_handcrafted_elf():
    text = bytes(range(16))
    image = ingest.extract_section(minimal_elf32(text), ".text")
    assert image.data == text
    assert image.endianness == "big"
    assert image.section_name == ".text"


def test_extract_minimal_little_endian():
    image = ingest.extract_section(minimal_elf32(endian="little"), ".text")
    assert image.endianness == "little"


def test_extract_matches_readelf_oracle(corpus_elf):
    """Toolchain-produced ELF32 big-endian: bytes equal readelf's slice."""
    expected = (FIXTURES / "decode_corpus.text.bin").read_bytes()
    image = ingest.extract_section(corpus_elf, ".text")
    assert image.data == expected
    assert image.endianness == "big"


def test_extract_little_endian_toolchain_elf(corpus_elf_le):
    expected = (FIXTURES / "decode_corpus_le.text.bin").read_bytes()
    image = ingest.extract_section(corpus_elf_le, ".text")
    assert image.data == expected
    assert image.endianness == "little"


def test_extract_elf64_both_byte_orders():
    be = (FIXTURES / "elf64_be.o").read_bytes()
    image = ingest.extract_section(be, ".text")
    assert image.data == (FIXTURES / "elf64_be.text.bin").read_bytes()
    assert image.endianness == "big"

    le = (FIXTURES / "elf64_le.o").read_bytes()
    image = ingest.extract_section(le, ".text")
    assert image.data == (FIXTURES / "elf64_le.text.bin").read_bytes()
    assert image.endianness == "little"


def test_extract_other_section_name(corpus_elf):
    image = ingest.extract_section(corpus_elf, ".shstrtab")
    assert b".text" in image.data


def test_missing_section():
    with pytest.raises(SectionNotFoundError) as err:
        ingest.extract_section(minimal_elf32(), ".data")
    assert ".data" in str(err.value)


def test_not_elf():
    with pytest.raises(NotElfError):
        ingest.extract_section(b"GIF89a....are you an image?", ".text")
    with pytest.raises(NotElfError):
        ingest.extract_section(b"", ".text")


def test_stripped_section_table_rejected():
    blob = bytearray(minimal_elf32())
    struct.pack_into(">I", blob, 32, 0)  # e_shoff = 0
    with pytest.raises(MissingSectionTableError):
        ingest.extract_section(bytes(blob), ".text")


def test_nobits_section_rejected():
    with pytest.raises(MalformedElfError) as err:
        ingest.extract_section(minimal_elf32(sh_type=8), ".text")
    assert "SHT_NOBITS" in str(err.value)


def test_section_past_end_of_file():
    with pytest.raises(MalformedElfError):
        ingest.extract_section(minimal_elf32(text_size=0x10000), ".text")


def test_section_table_out_of_bounds():
    with pytest.raises(MalformedElfError):
        ingest.extract_section(minimal_elf32(shoff=0x100000), ".text")


def test_truncated_identification():
    with pytest.raises(MalformedElfError):
        ingest.extract_section(b"\x7fELF\x01\x02", ".text")


def test_load_raw(tmp_path: Path):
    empty = tmp_path / "empty.bin"
    empty.write_bytes(b"")
    image = ingest.load_raw(empty)
    assert image.data == b"" and image.endianness == "big"

    seven = tmp_path / "seven.bin"
    seven.write_bytes(b"\x01" * 7)
    image = ingest.load_raw(seven, "little")
    assert len(image.data) == 7 and image.endianness == "little"

    blob = tmp_path / "blob.bin"
    payload = bytes(range(256)) * 3
    blob.write_bytes(payload)
    assert ingest.load_raw(blob).data == payload


def test_load_raw_missing_file(tmp_path: Path):
    with pytest.raises(OSError) as err:
        ingest.load_raw(tmp_path / "nope.bin")
    assert "nope.bin" in str(err.value)


def test_load_code_autodetects(tmp_path: Path, corpus_elf):
    elf_path = tmp_path / "prog"
    elf_path.write_bytes(corpus_elf)
    image = ingest.load_code(elf_path)
    assert image.data == (FIXTURES / "decode_corpus.text.bin").read_bytes()

    raw_path = tmp_path / "dump.bin"
    raw_path.write_bytes(b"\x12\x34\x56\x78")
    image = ingest.load_code(raw_path, endianness="little")
    assert image.data == b"\x12\x34\x56\x78"
    assert image.endianness == "little"
