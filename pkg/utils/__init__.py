"""
Utility package for the precategory kernel.

This package contains helper modules for:
- JSON forms of polygraphs, cells and morphisms (serialization.py)
- Named fixture polygraphs (fixtures.py)
- DOT rendering (dot.py)
"""

from .serialization import (
    dumps,
    load_json,
    load_polygraph,
    load_polymap,
    polygraph_from_json,
    polygraph_to_json,
    cell_from_json,
    cell_to_json,
)

__all__ = [
    'dumps',
    'load_json',
    'load_polygraph',
    'load_polymap',
    'polygraph_from_json',
    'polygraph_to_json',
    'cell_from_json',
    'cell_to_json',
]
