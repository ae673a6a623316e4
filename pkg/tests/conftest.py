"""
Shared fixtures for the test suite
"""
from pathlib import Path
from typing import Callable, List

import pytest

from app.lang.checker import TypedProgram
from app.services.corpus import ManifestEntry, load_manifest
from app.services.toolchain import Toolchain

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"
MANIFEST = CORPUS_DIR / "manifest.tsv"


def corpus_source(name: str) -> str:
    return (CORPUS_DIR / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def tools() -> Toolchain:
    tools = Toolchain()
    tools.load_prelude()
    return tools


@pytest.fixture(scope="session")
def manifest() -> List[ManifestEntry]:
    return load_manifest(MANIFEST)


@pytest.fixture(scope="session")
def accepted(manifest) -> List[ManifestEntry]:
    """One entry per file the corpus expects to typecheck."""
    seen, out = set(), []
    for entry in manifest:
        if entry.expectation.kind == "accept" and entry.file.name not in seen:
            seen.add(entry.file.name)
            out.append(entry)
    return out


@pytest.fixture(scope="session")
def check_corpus(tools) -> Callable[..., TypedProgram]:
    """Typecheck a corpus file by name, caching the result."""
    cache = {}

    def check(name: str, prelude: bool = True) -> TypedProgram:
        key = (name, prelude)
        if key not in cache:
            cache[key] = tools.check(corpus_source(name), name, prelude)
        return cache[key]

    return check
