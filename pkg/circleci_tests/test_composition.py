#!/usr/bin/env python3
"""
Tests for normal forms, boundaries and normalizing composition.
"""

import sys

import numpy as np

from harness import cells, fixture, logger, run_tests

from precat.cells import MINUS, PLUS, BoundaryError, Context
from precat.composition import (
    CompositionError, ContextError, boundary, compose, compose_many, enumerate_cells, eval_context,
    identity, size, true_dim,
)
from precat.oracle import random_polygraph


def interchange_pair(P):
    phi, psi, f, f2, g, g2 = cells(P, 'phi', 'psi', 'f', "f'", 'g', "g'")
    first = compose(compose(phi, 0, g), 1, compose(f2, 0, psi))
    second = compose(compose(f, 0, psi), 1, compose(phi, 0, g2))
    return first, second


def legal(u, i, v):
    return i >= 0 and i == min(u.dim, v.dim) - 1 and boundary(u, PLUS, i) == boundary(v, MINUS, i)


def chain(i, *parts):
    """Left-nested i-composite of parts, or None when a step is not legal."""
    out = parts[0]
    for part in parts[1:]:
        if not legal(out, i, part):
            return None
        out = compose(out, i, part)
    return out


def axiom_pool(P):
    pool = [u for d in range(P.dim + 1) for u in enumerate_cells(P, d, 2)]
    return pool + [identity(u) for u in pool if u.dim == P.dim]


def legal_pairs(pool):
    return [(u, min(u.dim, v.dim) - 1, v) for u in pool for v in pool if legal(u, min(u.dim, v.dim) - 1, v)]


def sample(rng, items, count):
    if len(items) <= count:
        return list(items)
    return [items[n] for n in rng.choice(len(items), size=count, replace=False)]


def test_generator_boundaries():
    P = fixture('fix_int')
    phi, f, f2 = cells(P, 'phi', 'f', "f'")
    assert boundary(phi, MINUS, 1) == f
    assert boundary(phi, PLUS, 1) == f2
    assert boundary(phi, MINUS, 0).body.gen.name == 'x'
    assert boundary(phi, PLUS, 0).body.gen.name == 'y'
    assert len(f.entries) == 1 and f.entries[0][0].depth == 0


def test_whiskered_boundary():
    P = fixture('fix_int')
    phi, f, g = cells(P, 'phi', 'f', 'g')
    source = boundary(compose(phi, 0, g), MINUS, 1)
    assert source == compose(f, 0, g)
    assert len(source.entries) == 2


def test_interchange_composites_differ():
    P = fixture('fix_int')
    first, second = interchange_pair(P)
    assert first != second
    x = cells(P, 'x')[0]
    g, f2 = cells(P, 'g', "f'")
    (ctx1, gen1), (ctx2, gen2) = first.entries
    assert gen1.name == 'phi' and ctx1.levels == ((identity(x), g),)
    assert gen2.name == 'psi' and ctx2.left(1) == f2 and ctx2.right(1).is_identity
    # both composites share their boundaries
    assert boundary(first, MINUS, 1) == boundary(second, MINUS, 1)
    assert boundary(first, PLUS, 1) == boundary(second, PLUS, 1)
    assert size(first) == 4


def test_unit_whiskers_differ():
    P = fixture('fix_eh')
    alpha, f = cells(P, 'alpha', 'f')
    right = compose(alpha, 0, f)
    left = compose(f, 0, alpha)
    assert right != left
    assert boundary(right, MINUS, 1) == f and boundary(left, MINUS, 1) == f
    assert boundary(right, PLUS, 1) == compose(f, 0, f) == boundary(left, PLUS, 1)


def test_illegal_compositions():
    P = fixture('fix_int')
    phi, psi = cells(P, 'phi', 'psi')
    for args in ((phi, 0, psi), (phi, 1, psi), (phi, 2, psi)):
        try:
            compose(*args)
        except CompositionError:
            continue
        raise AssertionError(f"composition at index {args[1]} was accepted")


def test_units_and_identities():
    P = fixture('fix_int')
    phi, f = cells(P, 'phi', 'f')
    x, y = cells(P, 'x', 'y')
    assert compose(identity(f), 1, phi) == phi
    assert compose(phi, 1, identity(cells(P, "f'")[0])) == phi
    assert compose(identity(x), 0, phi) == phi
    assert compose(phi, 0, identity(y)) == phi
    unit = compose(f, 0, identity(cells(P, 'g')[0]))
    assert unit.is_identity and unit.body.base == compose(f, 0, cells(P, 'g')[0])
    assert true_dim(identity(identity(x))) == 0


def test_compose_many():
    P = fixture('fix_int')
    phi, psi, f2, g = cells(P, 'phi', 'psi', "f'", 'g')
    first, _ = interchange_pair(P)
    assert compose_many([compose(phi, 0, g), compose(f2, 0, psi)], 1) == first


def test_eval_context():
    P = fixture('fix_int')
    phi, g, x = cells(P, 'phi', 'g', 'x')
    ctx = Context(((identity(x), g),))
    assert eval_context(ctx, phi) == compose(phi, 0, g)
    try:
        eval_context(Context(((g, g),)), phi)
    except ContextError:
        pass
    else:
        raise AssertionError("a context with mismatched slots was accepted")


def test_boundary_errors():
    P = fixture('fix_int')
    phi = cells(P, 'phi')[0]
    try:
        boundary(phi, MINUS, 3)
    except BoundaryError:
        return
    raise AssertionError("boundary above the cell dimension was accepted")


def test_enumerate_cells():
    P = fixture('fix_int')
    found = enumerate_cells(P, 1, 2)
    f, g = cells(P, 'f', 'g')
    assert len(set(found)) == len(found)
    assert all(u.dim == 1 for u in found)
    assert compose(f, 0, g) in found
    assert all(size(u) <= 2 for u in found)


def test_cancellativity():
    for name in ('fix_int', 'fix_eh'):
        P = fixture(name)
        pool = [u for d in range(1, P.dim + 1) for u in enumerate_cells(P, d, 3)]
        by_left, by_right = {}, {}
        for u in pool:
            for v in pool:
                i = min(u.dim, v.dim) - 1
                if boundary(u, PLUS, i) != boundary(v, MINUS, i):
                    continue
                w = compose(u, i, v)
                assert by_left.setdefault((u, i, w), v) == v, f"{name}: left factor not cancellable"
                assert by_right.setdefault((v, i, w), u) == u, f"{name}: right factor not cancellable"
        assert by_left


def test_globularity():
    checked = 0
    for P in [fixture('fix_int'), fixture('fix_eh')] + [random_polygraph(seed) for seed in range(5)]:
        for u in axiom_pool(P):
            for j in range(u.dim + 1):
                for a in (MINUS, PLUS):
                    face = boundary(u, a, j)
                    assert boundary(face, a, j) == face
                    for k in range(j):
                        for b in (MINUS, PLUS):
                            assert boundary(face, b, k) == boundary(u, b, k)
                            checked += 1
    assert checked > 0


def test_boundaries_of_composites():
    for P in (fixture('fix_int'), fixture('loop')):
        pool = axiom_pool(P)
        for u in pool:
            for sign in (MINUS, PLUS):
                assert boundary(identity(u), sign, u.dim) == u
        for u, i, v in legal_pairs(pool):
            w = compose(u, i, v)
            k, l = u.dim, v.dim
            for sign in (MINUS, PLUS):
                if k < l:
                    expected = compose(u, i, boundary(v, sign, l - 1))
                elif k > l:
                    expected = compose(boundary(u, sign, k - 1), i, v)
                else:
                    expected = boundary(u if sign == MINUS else v, sign, k - 1)
                assert boundary(w, sign, max(k, l) - 1) == expected, (k, l, i, sign)


def test_associativity():
    rng = np.random.default_rng(0)
    checked = 0
    for P in (fixture('fix_int'), fixture('loop')):
        pool = axiom_pool(P)
        for u, i, v in sample(rng, legal_pairs(pool), 200):
            for w in pool:
                if not legal(v, i, w):
                    continue
                left, right = chain(i, u, v, w), chain(i, v, w)
                if left is not None and legal(u, i, right):
                    assert left == compose(u, i, right)
                    checked += 1
    assert checked > 0


def test_whisker_distribution():
    rng = np.random.default_rng(1)
    checked = 0
    for P in (fixture('fix_int'), fixture('loop')):
        pool = axiom_pool(P)
        for v, j, v2 in sample(rng, legal_pairs(pool), 150):
            both = compose(v, j, v2)
            for u in pool:
                i = u.dim - 1
                if i < 0 or i >= j:
                    continue
                if legal(u, i, v) and legal(u, i, v2):
                    assert compose(u, i, both) == compose(compose(u, i, v), j, compose(u, i, v2))
                    checked += 1
                if legal(v, i, u) and legal(v2, i, u):
                    assert compose(both, i, u) == compose(compose(v, i, u), j, compose(v2, i, u))
                    checked += 1
    assert checked > 0


def test_symmetric_distribution():
    rng = np.random.default_rng(2)
    checked = 0
    for P in (fixture('fix_int'), fixture('loop')):
        pool = axiom_pool(P)
        tops = [w for w in pool if w.dim >= 2]
        for w in sample(rng, tops, 20):
            for j in range(1, w.dim):
                for i in range(j):
                    before = [v for v in pool if v.dim == j + 1 and legal(v, j, w)]
                    after = [v for v in pool if v.dim == j + 1 and legal(w, j, v)]
                    if not before or not after:
                        continue
                    v1, v2 = before[rng.integers(len(before))], after[rng.integers(len(after))]
                    inner = chain(j, v1, w, v2)
                    left_side = [u for u in pool if u.dim == i + 1 and legal(u, i, inner)]
                    right_side = [u for u in pool if u.dim == i + 1 and legal(inner, i, u)]
                    if not left_side or not right_side:
                        continue
                    u1, u2 = left_side[rng.integers(len(left_side))], right_side[rng.integers(len(right_side))]
                    pieces = [chain(i, u1, c, u2) for c in (v1, w, v2)]
                    assert all(p is not None for p in pieces)
                    assert chain(i, u1, inner, u2) == chain(j, *pieces)
                    checked += 1
    assert checked > 0


def run_all_tests():
    """Run all tests and return overall success."""
    return run_tests([
        ("Generator boundaries", test_generator_boundaries),
        ("Whiskered boundary", test_whiskered_boundary),
        ("Interchange composites", test_interchange_composites_differ),
        ("Unit whiskers", test_unit_whiskers_differ),
        ("Illegal compositions", test_illegal_compositions),
        ("Units and identities", test_units_and_identities),
        ("compose_many", test_compose_many),
        ("Context evaluation", test_eval_context),
        ("Boundary errors", test_boundary_errors),
        ("Cell enumeration", test_enumerate_cells),
        ("Cancellativity", test_cancellativity),
        ("Globularity", test_globularity),
        ("Boundaries of composites", test_boundaries_of_composites),
        ("Associativity", test_associativity),
        ("Whisker distribution", test_whisker_distribution),
        ("Symmetric distribution", test_symmetric_distribution),
    ])


if __name__ == "__main__":
    logger.info("Running composition tests")
    sys.exit(0 if run_all_tests() else 1)
