#!/usr/bin/env python3
"""
Tests for the HTTP service.
"""

import sys

from harness import logger, run_tests

from app import app

INTERCHANGE = "comp_1(comp_0(gen phi, gen g), comp_0(gen f', gen psi))"

INLINE_LOOP = {
    "generators": [
        {"name": "x", "dim": 0},
        {"name": "f", "dim": 1, "src": "gen x", "tgt": "gen x"},
        {"name": "gamma", "dim": 2, "src": "gen f", "tgt": "gen f"},
    ]
}


def post(operation, body):
    with app.test_client() as client:
        return client.post(f'/api/precat/{operation}', json=body)


def test_health():
    with app.test_client() as client:
        response = client.get('/health')
    assert response.status_code == 200
    data = response.get_json()
    assert data['status'] == 'healthy'
    assert 'percent_used' in data['memory']


def test_documentation_page():
    with app.test_client() as client:
        response = client.get('/')
    assert response.status_code == 200
    assert b'/api/precat/' in response.data


def test_fixture_listing():
    with app.test_client() as client:
        response = client.get('/api/precat/fixtures')
    assert response.status_code == 200
    assert 'fix_int' in response.get_json()['fixtures']


def test_normalize_with_fixture_name():
    response = post('normalize', {'polygraph': 'fix_int', 'expr': INTERCHANGE})
    assert response.status_code == 200
    data = response.get_json()
    assert data['success'] is True
    assert data['result']['expr'] == INTERCHANGE


def test_inline_polygraph():
    response = post('measure', {'polygraph': INLINE_LOOP, 'expr': 'comp_1(gen gamma, gen gamma)'})
    assert response.status_code == 200
    assert response.get_json()['result']['measure'] == {'x': 2, 'f': 3, 'gamma': 2}


def test_conduche_with_fixture_map():
    response = post('conduche', {'map': 'collapse_map', 'expr': INTERCHANGE,
                                 'first': 'comp_0(gen beta, gen h)', 'second': 'comp_0(gen h, gen beta)',
                                 'index': 1})
    assert response.status_code == 200
    assert response.get_json()['result']['first']['expr'] == 'comp_0(gen phi, gen g)'


def test_error_statuses():
    response = post('compose', {'polygraph': 'fix_int', 'left': 'gen phi', 'index': 0, 'right': 'gen psi'})
    assert response.status_code == 422
    assert response.get_json()['error']['type'] == 'CompositionError'

    response = post('normalize', {'polygraph': 'fix_int', 'expr': 'comp_0(gen phi'})
    assert response.status_code == 400
    assert response.get_json()['error']['type'] == 'ExprSyntaxError'

    response = post('normalize', {'polygraph': 'fix_int'})
    assert response.status_code == 400

    response = post('normalize', {'polygraph': 'no_such_fixture', 'expr': 'gen x'})
    assert response.status_code == 400

    response = post('frobnicate', {})
    assert response.status_code == 404


def test_makkai_endpoint():
    response = post('makkai', {'polygraph': 'fix_int'})
    assert response.status_code == 200
    result = response.get_json()['result']
    assert result['valid'] is True
    assert result['summary']['sections'] == 9

    response = post('makkai', {'polygraph': 'fix_eh', 'table_weight': 7})
    assert response.status_code == 200
    assert response.get_json()['result']['summary']['sections'] == 3


def run_all_tests():
    """Run all tests and return overall success."""
    return run_tests([
        ("Health endpoint", test_health),
        ("Documentation page", test_documentation_page),
        ("Fixture listing", test_fixture_listing),
        ("Normalize by fixture name", test_normalize_with_fixture_name),
        ("Inline polygraph", test_inline_polygraph),
        ("Conduché by fixture map", test_conduche_with_fixture_map),
        ("Error statuses", test_error_statuses),
        ("Plex check endpoint", test_makkai_endpoint),
    ])


if __name__ == "__main__":
    logger.info("Running server tests")
    sys.exit(0 if run_all_tests() else 1)
