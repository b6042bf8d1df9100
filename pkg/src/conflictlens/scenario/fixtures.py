"""Bundled highway scenarios shipped as package data."""

from __future__ import annotations

from importlib import resources
from typing import List

from ..errors import InputError
from .ast import Scenario
from .parser import parse

FIXTURE_SUFFIX = ".cfl"


def _root():
    return resources.files(__package__).joinpath("fixtures")


def list_fixtures() -> List[str]:
    return sorted(p.name for p in _root().iterdir() if p.name.endswith(FIXTURE_SUFFIX))


def fixture_text(name: str) -> str:
    if not name.endswith(FIXTURE_SUFFIX):
        name += FIXTURE_SUFFIX
    entry = _root().joinpath(name)
    if not entry.is_file():
        raise InputError(f"no bundled fixture {name!r} (have: {', '.join(list_fixtures())})")
    return entry.read_text(encoding="utf-8")


def load_fixture(name: str) -> Scenario:
    """Parse a bundled fixture by file name, with or without the suffix."""
    return parse(fixture_text(name))
