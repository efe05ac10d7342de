#!/usr/bin/env python3
"""
Tests for morphisms of polygraphs, free application and Conduché factorization.
"""

import sys

from harness import cells, fixture, logger, run_tests

from precat.cells import MINUS, PLUS, BudgetExhausted, ClassTag, classify, truncate
from precat.composition import boundary, compose, enumerate_cells, identity
from precat.functor import (
    ConducheError, PolyMap, PolyMapError, all_polymaps, apply_free, check_polymap, compose_polymaps,
    conduche_factorize, enumerate_splittings, identity_polymap, inverse, is_iso, is_mono,
    left_divide, lift_identity, random_polymap, right_divide,
)
from precat.oracle import evaluate_expr, random_expr
from utils.fixtures import load_fixture_map


def interchange(P):
    phi, psi, f2, g = cells(P, 'phi', 'psi', "f'", 'g')
    return compose(phi, 0, g), compose(f2, 0, psi)


def test_identity_map_is_valid():
    P = fixture('fix_int')
    F = identity_polymap(P)
    assert check_polymap(F)['valid']
    assert is_iso(F) and inverse(F) == F
    assert compose_polymaps(F, F) == F


def test_collapse_map():
    F = load_fixture_map('collapse_map')
    report = check_polymap(F)
    assert report['valid'], report['errors']
    assert not is_iso(F)
    assert compose_polymaps(F, identity_polymap(F.src_pol)) == F


def test_apply_free_whiskered_cell():
    F = load_fixture_map('collapse_map')
    P, Q = F.src_pol, F.tgt_pol
    phi, g = cells(P, 'phi', 'g')
    beta, h = cells(Q, 'beta', 'h')
    assert apply_free(F, compose(phi, 0, g)) == compose(beta, 0, h)
    assert apply_free(F, identity(g)) == identity(h)


def test_apply_free_is_functorial():
    P = fixture('fix_int')
    pool = [u for d in range(1, P.dim + 1) for u in enumerate_cells(P, d, 2)]
    for seed in range(5):
        F = random_polymap(P, seed)
        for u in pool:
            for v in pool:
                i = min(u.dim, v.dim) - 1
                if boundary(u, PLUS, i) == boundary(v, MINUS, i):
                    w = compose(u, i, v)
                    assert apply_free(F, w) == compose(apply_free(F, u), i, apply_free(F, v)), f"seed {seed}"
        for u in pool:
            assert apply_free(F, identity(u)) == identity(apply_free(F, u))


def test_apply_free_rejects_boundary_mismatch():
    P = fixture('fix_int')
    swapped = PolyMap(P, P, {0: {n: n for n in P.names(0)},
                             1: {'f': 'g', "f'": "f'", 'g': 'f', "g'": "g'"},
                             2: {'phi': 'phi', 'psi': 'psi'}})
    try:
        apply_free(swapped, cells(P, 'phi')[0])
    except PolyMapError as e:
        assert "'f'" in str(e)
    else:
        raise AssertionError("image of phi built under a map that breaks boundaries")


def test_invalid_maps_reported():
    P = fixture('fix_int')
    swapped = PolyMap(P, P, {0: {n: n for n in P.names(0)},
                             1: {'f': 'g', "f'": "f'", 'g': 'f', "g'": "g'"},
                             2: {'phi': 'phi', 'psi': 'psi'}})
    kinds = {e['kind'] for e in check_polymap(swapped)['errors']}
    assert 'boundary-mismatch' in kinds

    partial = PolyMap(P, P, {k: {n: n for n in P.names(k) if n != 'psi'} for k in range(3)})
    errors = check_polymap(partial)['errors']
    assert [(e['kind'], e['name']) for e in errors] == [('dangling-assignment', 'psi')]

    unknown = PolyMap(P, P, {0: {n: n for n in P.names(0)}, 1: {n: n for n in P.names(1)},
                             2: {'phi': 'phi', 'psi': 'omega'}})
    assert [e['kind'] for e in check_polymap(unknown)['errors']] == ['unknown-image']


def test_mono_checks():
    F = load_fixture_map('collapse_map')
    result = is_mono(F)
    assert not result
    assert result.witness == (0, 'x', 'y')
    assert (1, 'f', "f'") in result.collisions

    P = fixture('fix_int')
    T = truncate(P, 1)
    inclusion = PolyMap(T, P, {k: {n: n for n in T.names(k)} for k in range(2)})
    assert check_polymap(inclusion)['valid']
    assert is_mono(inclusion).mono and is_mono(inclusion).witness is None


def test_mono_matches_injectivity():
    P = fixture('fix_int')
    pool = [u for d in range(P.dim + 1) for u in enumerate_cells(P, d, 3)]
    for seed in range(50):
        F = random_polymap(P, seed)
        images = {}
        injective = True
        for u in pool:
            if images.setdefault(apply_free(F, u), u) != u:
                injective = False
                break
        assert bool(is_mono(F)) == injective, f"seed {seed}"


def test_conduche_interchange():
    F = load_fixture_map('collapse_map')
    P = F.src_pol
    left, right = interchange(P)
    u = compose(left, 1, right)
    v1, v2 = apply_free(F, left), apply_free(F, right)
    assert conduche_factorize(F, u, v1, v2, 1) == (left, right)


def test_conduche_all_splittings():
    F = load_fixture_map('collapse_map')
    left, right = interchange(F.src_pol)
    u = compose(left, 1, right)
    image = apply_free(F, u)
    for i in range(image.dim):
        splittings = enumerate_splittings(image, i)
        assert splittings, f"no splittings at index {i}"
        for v1, v2 in splittings:
            assert compose(v1, i, v2) == image
            u1, u2 = conduche_factorize(F, u, v1, v2, i)
            assert compose(u1, i, u2) == u
            assert apply_free(F, u1) == v1 and apply_free(F, u2) == v2


def test_conduche_precondition():
    F = load_fixture_map('collapse_map')
    left, right = interchange(F.src_pol)
    u = compose(left, 1, right)
    Q = F.tgt_pol
    beta, h = cells(Q, 'beta', 'h')
    try:
        conduche_factorize(F, u, compose(beta, 0, h), compose(beta, 0, h), 1)
    except ConducheError:
        return
    raise AssertionError("a splitting of another cell was factorized")


def test_divisions():
    P = fixture('fix_int')
    f, g, phi = cells(P, 'f', 'g', 'phi')
    w = compose(phi, 0, g)
    assert right_divide(w, g, 0) == phi
    assert left_divide(w, f, 0) is None
    assert left_divide(compose(f, 0, g), f, 0) == g


def test_lift_identity():
    F = load_fixture_map('collapse_map')
    f = cells(F.src_pol, 'f')[0]
    h = cells(F.tgt_pol, 'h')[0]
    assert lift_identity(F, identity(f), h) == f


def test_all_polymaps():
    P = fixture('fix_int')
    Q = fixture('fix_q')
    maps = all_polymaps(P, Q)
    assert len(maps) == 1
    assert maps[0] == load_fixture_map('collapse_map')
    assert len(all_polymaps(Q, P)) == 0


def test_random_maps_satisfy_conduche():
    P = fixture('fix_int')
    for seed in range(15):
        F = random_polymap(P, seed)
        assert check_polymap(F)['valid'], f"seed {seed}"
        try:
            u = evaluate_expr(P, random_expr(P, seed))
        except BudgetExhausted:
            continue
        image = apply_free(F, u)
        for i in range(image.dim):
            for v1, v2 in enumerate_splittings(image, i):
                u1, u2 = conduche_factorize(F, u, v1, v2, i)
                assert compose(u1, i, u2) == u
        assert boundary(image, MINUS, 0) == apply_free(F, boundary(u, MINUS, 0))


def test_classification_is_reflected():
    for name in ('fix_int', 'fix_eh', 'loop'):
        P = fixture(name)
        pool = [u for d in range(P.dim + 1) for u in enumerate_cells(P, d, 2)]
        for seed in range(5):
            F = random_polymap(P, seed)
            for u in pool:
                before, after = classify(u), classify(apply_free(F, u))
                assert before.tag == after.tag, f"{name} seed {seed}"
                if before.tag == ClassTag.GENERATOR:
                    assert after.name == F.image_name(u.dim, before.name)
                elif before.tag == ClassTag.IDENTITY:
                    assert after.base == apply_free(F, before.base)


def run_all_tests():
    """Run all tests and return overall success."""
    return run_tests([
        ("Identity map", test_identity_map_is_valid),
        ("Collapse map", test_collapse_map),
        ("Free application", test_apply_free_whiskered_cell),
        ("Functoriality", test_apply_free_is_functorial),
        ("Boundary-breaking maps", test_apply_free_rejects_boundary_mismatch),
        ("Invalid maps", test_invalid_maps_reported),
        ("Monomorphisms", test_mono_checks),
        ("Mono and injectivity", test_mono_matches_injectivity),
        ("Conduché interchange", test_conduche_interchange),
        ("Conduché splittings", test_conduche_all_splittings),
        ("Conduché precondition", test_conduche_precondition),
        ("Divisions", test_divisions),
        ("Identity lifting", test_lift_identity),
        ("Morphism search", test_all_polymaps),
        ("Random maps", test_random_maps_satisfy_conduche),
        ("Classification reflected", test_classification_is_reflected),
    ])


if __name__ == "__main__":
    logger.info("Running functor tests")
    sys.exit(0 if run_all_tests() else 1)
