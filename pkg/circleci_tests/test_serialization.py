#!/usr/bin/env python3
"""
Tests for the JSON forms of polygraphs, cells and liftings.
"""

import json
import sys

from harness import cells, fixture, logger, run_tests

from precat.cells import Element, InputError
from precat.composition import enumerate_cells
from precat.oracle import expr_from_json, random_polygraph
from precat.polyplex import polyplex_lift
from utils.serialization import (
    cell_from_json, cell_to_json, dumps, lifting_to_json, polygraph_from_json, polygraph_to_json,
    polymap_from_json,
)


def reload(P):
    return polygraph_from_json(json.loads(dumps(polygraph_to_json(P))))


def expect_input_error(load, data):
    try:
        load(data)
    except InputError:
        return
    raise AssertionError(f"accepted {data!r}")


def test_polygraphs_reload_equal():
    for name in ('fix_int', 'fix_eh', 'fix_q', 'loop', 'point'):
        P = fixture(name)
        assert reload(P) == P, name
    for seed in range(10):
        P = random_polygraph(seed)
        assert reload(P) == P, f"seed {seed}"


def test_unwritable_names_rejected():
    expect_input_error(polygraph_from_json, {"generators": [{"name": "α", "dim": 0}]})
    expect_input_error(polygraph_from_json, {"generators": [{"name": "a b", "dim": 0}]})
    # an undeclared 0-generator named only in a JSON boundary
    expect_input_error(polygraph_from_json, {"generators": [
        {"name": "x", "dim": 0},
        {"name": "e", "dim": 1, "src": {"op": "gen", "name": "α"}, "tgt": "gen x"},
    ]})
    expect_input_error(expr_from_json, {"op": "gen", "name": "α"})


def test_boolean_dimensions_rejected():
    expect_input_error(polygraph_from_json, {"generators": [{"name": "x", "dim": True}]})
    expect_input_error(polygraph_from_json, {"dim": True, "generators": [{"name": "x", "dim": 0}]})
    expect_input_error(expr_from_json, {"op": "gen", "name": "x", "dim": False})
    P = fixture('point')
    expect_input_error(lambda data: cell_from_json(P, data), {"dim": False, "kind": "point", "name": "x"})


def test_cells_reload_equal():
    P = fixture('fix_int')
    for u in enumerate_cells(P, 2, 3):
        assert cell_from_json(P, json.loads(dumps(cell_to_json(u)))) == u


def test_lifting_map_is_a_morphism():
    P = fixture('fix_int')
    lifting = polyplex_lift(Element(P, cells(P, 'phi')[0]))
    data = json.loads(dumps(lifting_to_json(lifting)))
    assert set(data['map']) == {'src', 'tgt', 'map'}
    assert polymap_from_json(data['map']) == lifting.map
    assert polygraph_from_json(data['shape']) == lifting.pol


def run_all_tests():
    """Run all tests and return overall success."""
    return run_tests([
        ("Polygraph reload", test_polygraphs_reload_equal),
        ("Unwritable names", test_unwritable_names_rejected),
        ("Boolean dimensions", test_boolean_dimensions_rejected),
        ("Cell reload", test_cells_reload_equal),
        ("Lifting morphism", test_lifting_map_is_a_morphism),
    ])


if __name__ == "__main__":
    logger.info("Running serialization tests")
    sys.exit(0 if run_all_tests() else 1)
