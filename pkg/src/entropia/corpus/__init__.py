"""Bundled MiniOO fixture corpus with hand-analyzed metric values."""

from __future__ import annotations

from importlib import resources

from entropia.model import ClassModel

CORPUS_FILES = ("shapes.moo", "bank.moo", "twins.moo")


def corpus_sources() -> list[tuple[str, str]]:
    root = resources.files(__name__)
    return [(name, root.joinpath(name).read_text(encoding="utf-8")) for name in CORPUS_FILES]


def load_corpus() -> ClassModel:
    from entropia.ingest import parse_source

    return parse_source(corpus_sources())
