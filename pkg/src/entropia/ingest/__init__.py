"""Turn MiniOO sources or interchange JSON into a :class:`~entropia.model.ClassModel`."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from entropia.ingest.interchange import (
    SchemaError,
    dump_interchange,
    dumps_interchange,
    load_interchange,
)
from entropia.ingest.minioo import MiniOOSyntaxError, parse_file, parse_source
from entropia.model import ClassModel

SOURCE_SUFFIX = ".moo"

__all__ = [
    "SOURCE_SUFFIX",
    "MiniOOSyntaxError",
    "SchemaError",
    "collect_sources",
    "dump_interchange",
    "dumps_interchange",
    "load_interchange",
    "parse_file",
    "parse_paths",
    "parse_source",
]


def collect_sources(paths: Iterable[str | Path]) -> list[Path]:
    """Expand directories into their ``*.moo`` files, sorted for stable output."""
    found: list[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            found.extend(sorted(p.rglob(f"*{SOURCE_SUFFIX}")))
        else:
            found.append(p)
    return found


def parse_paths(paths: Iterable[str | Path]) -> ClassModel:
    files = collect_sources(paths)
    return parse_source((str(f), f.read_text(encoding="utf-8")) for f in files)
