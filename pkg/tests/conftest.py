import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def decode_corpus():
    """(be_text, le_text, expected field dicts) for the assembled corpus."""
    spec = json.loads((FIXTURES / "decode_corpus.json").read_text())
    be = (FIXTURES / "decode_corpus.text.bin").read_bytes()
    le = (FIXTURES / "decode_corpus_le.text.bin").read_bytes()
    return be, le, spec["instructions"]


@pytest.fixture(scope="session")
def corpus_elf() -> bytes:
    return (FIXTURES / "decode_corpus.elf").read_bytes()


@pytest.fixture(scope="session")
def corpus_elf_le() -> bytes:
    return (FIXTURES / "decode_corpus_le.elf").read_bytes()


@pytest.fixture(scope="session")
def big_text() -> bytes:
    return (FIXTURES / "big_mips_text.bin").read_bytes()
