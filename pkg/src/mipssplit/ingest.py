"""Code image ingestion: ELF section extraction and raw binary loading.

Extraction walks the section header table only (no program-header
fallback); binaries stripped of section headers are rejected so the caller
can fall back to ``load_raw`` deliberately.  Both ELF classes and both byte
orders are supported; the image's endianness comes from the ELF
identification and drives how the filter reads instruction words.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass

from .isa import Endianness

ELF_MAGIC = b"\x7fELF"

_ELFCLASS32 = 1
_ELFCLASS64 = 2
_ELFDATA2LSB = 1
_ELFDATA2MSB = 2

_SHT_NOBITS = 8


class IngestError(ValueError):
    """Base class for code-image ingestion failures."""


class NotElfError(IngestError):
    pass


class MissingSectionTableError(IngestError):
    pass


class SectionNotFoundError(IngestError):
    pass


class MalformedElfError(IngestError):
    pass


@dataclass(frozen=True)
class CodeImage:
    """A chunk of machine code plus where it came from."""

    data: bytes
    source_path: str
    endianness: Endianness
    section_name: str | None = None


def extract_section(
    elf: bytes, section_name: str = ".text", source_path: str = "<memory>"
) -> CodeImage:
    """Pull one section's bytes out of an ELF image.

    Returns the section contents and the file's byte order.  Raises
    NotElfError, MissingSectionTableError, SectionNotFoundError or
    MalformedElfError, each carrying a human-readable reason.
    """
    elf = bytes(elf)
    if len(elf) < 4 or elf[:4] != ELF_MAGIC:
        raise NotElfError(f"{source_path}: not an ELF image")
    if len(elf) < 16:
        raise MalformedElfError(f"{source_path}: ELF identification truncated")

    ei_class, ei_data = elf[4], elf[5]
    if ei_class == _ELFCLASS32:
        is64 = False
    elif ei_class == _ELFCLASS64:
        is64 = True
    else:
        raise MalformedElfError(f"{source_path}: unknown ELF class {ei_class}")
    if ei_data == _ELFDATA2LSB:
        endianness: Endianness = "little"
    elif ei_data == _ELFDATA2MSB:
        endianness = "big"
    else:
        raise MalformedElfError(f"{source_path}: unknown ELF data encoding {ei_data}")
    bo = "<" if endianness == "little" else ">"

    # e_shoff / e_shentsize / e_shnum / e_shstrndx from the file header.
    try:
        if is64:
            e_shoff = struct.unpack_from(f"{bo}Q", elf, 40)[0]
            e_shentsize, e_shnum, e_shstrndx = struct.unpack_from(f"{bo}HHH", elf, 58)
        else:
            e_shoff = struct.unpack_from(f"{bo}I", elf, 32)[0]
            e_shentsize, e_shnum, e_shstrndx = struct.unpack_from(f"{bo}HHH", elf, 46)
    except struct.error:
        raise MalformedElfError(f"{source_path}: ELF header truncated") from None

    if e_shoff == 0 or e_shnum == 0:
        raise MissingSectionTableError(
            f"{source_path}: no section header table (stripped?); "
            f"use raw loading instead"
        )
    min_entsize = 64 if is64 else 40
    if e_shentsize < min_entsize:
        raise MalformedElfError(
            f"{source_path}: section header entry size {e_shentsize} too small"
        )
    if e_shoff + e_shnum * e_shentsize > len(elf):
        raise MalformedElfError(f"{source_path}: section header table out of bounds")
    if e_shstrndx >= e_shnum:
        raise MalformedElfError(
            f"{source_path}: section name string table index out of range"
        )

    def header(index: int) -> tuple[int, int, int, int]:
        base = e_shoff + index * e_shentsize
        if is64:
            sh_name, sh_type = struct.unpack_from(f"{bo}II", elf, base)
            sh_offset, sh_size = struct.unpack_from(f"{bo}QQ", elf, base + 24)
        else:
            sh_name, sh_type = struct.unpack_from(f"{bo}II", elf, base)
            sh_offset, sh_size = struct.unpack_from(f"{bo}II", elf, base + 16)
        return sh_name, sh_type, sh_offset, sh_size

    _, str_type, str_off, str_size = header(e_shstrndx)
    if str_off + str_size > len(elf):
        raise MalformedElfError(
            f"{source_path}: section name string table out of bounds"
        )
    strtab = elf[str_off : str_off + str_size]

    def name_of(sh_name: int) -> str:
        if sh_name >= len(strtab):
            return ""
        end = strtab.find(b"\x00", sh_name)
        if end == -1:
            end = len(strtab)
        return strtab[sh_name:end].decode("ascii", errors="replace")

    for index in range(e_shnum):
        sh_name, sh_type, sh_offset, sh_size = header(index)
        if name_of(sh_name) != section_name:
            continue
        if sh_type == _SHT_NOBITS:
            raise MalformedElfError(
                f"{source_path}: section {section_name} has no file contents "
                f"(SHT_NOBITS)"
            )
        if sh_offset + sh_size > len(elf):
            raise MalformedElfError(
                f"{source_path}: section {section_name} extends past end of file"
            )
        return CodeImage(
            data=elf[sh_offset : sh_offset + sh_size],
            source_path=source_path,
            endianness=endianness,
            section_name=section_name,
        )
    raise SectionNotFoundError(f"{source_path}: no section named {section_name}")


def load_raw(path: str | os.PathLike, endianness: Endianness = "big") -> CodeImage:
    """Read a raw code dump; bytes pass through unmodified."""
    path = os.fspath(path)
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    return CodeImage(data=data, source_path=path, endianness=endianness)


def load_code(
    path: str | os.PathLike,
    section_name: str = ".text",
    endianness: Endianness = "big",
) -> CodeImage:
    """Load a file, extracting ``section_name`` if it is an ELF image.

    Non-ELF files pass through as raw dumps with the given endianness.
    """
    path = os.fspath(path)
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    if data[:4] == ELF_MAGIC:
        image = extract_section(data, section_name, source_path=path)
        return image
    return CodeImage(data=data, source_path=path, endianness=endianness)
