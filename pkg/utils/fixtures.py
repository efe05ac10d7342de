"""
Named fixture polygraphs shipped in the fixtures directory.
"""

import os
from typing import List

import config
from precat.cells import InputError, Polygraph
from precat.functor import PolyMap
from utils.serialization import load_polygraph, load_polymap


def fixture_path(name: str) -> str:
    filename = name if name.endswith(".json") else f"{name}.json"
    return os.path.join(config.FIXTURES_DIR, filename)


def available_fixtures() -> List[str]:
    if not os.path.isdir(config.FIXTURES_DIR):
        return []
    return sorted(f[:-5] for f in os.listdir(config.FIXTURES_DIR) if f.endswith(".json"))


def load_fixture(name: str, validate: bool = True) -> Polygraph:
    """Load a fixture polygraph by name, e.g. 'fix_int'."""
    path = fixture_path(name)
    if not os.path.exists(path):
        raise InputError(f"unknown fixture {name!r}; available: {', '.join(available_fixtures())}")
    return load_polygraph(path, validate=validate)


def load_fixture_map(name: str) -> PolyMap:
    return load_polymap(fixture_path(name))
