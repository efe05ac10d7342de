#!/usr/bin/env python3
"""
Tests for the expression grammar and the rewriting normalizer.

The rewriting normalizer is checked against evaluation by composition on
fixture polygraphs and on seeded random ones.
"""

import sys

from harness import fixture, logger, run_tests

from precat.cells import MINUS, PLUS, BoundaryError, BudgetExhausted
from precat.composition import CompositionError, boundary
from precat.oracle import (
    Comp, ExprSyntaxError, Gen, Id, TypingError, cell_text, evaluate_expr, expr_boundary, expr_from_json,
    expr_to_json, normalize_expr, one_step_rewrites, parse, random_equal_pair, random_expr,
    random_polygraph, to_expr, to_text,
)
from precat.validation import validate_polygraph

INTERCHANGE = "comp_1(comp_0(gen phi, gen g), comp_0(gen f', gen psi))"


def test_parse_and_print():
    e = parse(INTERCHANGE)
    assert e == Comp(1, Comp(0, Gen('phi'), Gen('g')), Comp(0, Gen("f'"), Gen('psi')))
    assert to_text(e) == INTERCHANGE
    assert parse("id( gen x@0 )") == Id(Gen('x', 0))


def test_syntax_errors_carry_positions():
    for text, position in (("comp_0(gen f)", 0), ("gen", 3), ("foo", 0), ("gen f )", 6)):
        try:
            parse(text)
        except ExprSyntaxError as e:
            assert e.position == position, f"{text!r}: position {e.position}"
            continue
        raise AssertionError(f"{text!r} parsed")


def test_json_expressions():
    e = parse(INTERCHANGE)
    data = expr_to_json(e)
    assert data['op'] == 'comp' and data['dim'] == 1
    assert expr_from_json(data) == e
    assert expr_from_json(INTERCHANGE) == e


def test_oracle_agrees_on_interchange():
    P = fixture('fix_int')
    e = parse(INTERCHANGE)
    u = normalize_expr(P, e)
    assert u == evaluate_expr(P, e)
    assert cell_text(P, u) == INTERCHANGE
    assert evaluate_expr(P, to_expr(u)) == u


def test_unit_whiskers_not_identified():
    P = fixture('fix_eh')
    first = normalize_expr(P, parse("comp_1(gen alpha, comp_0(gen alpha, gen f))"))
    second = normalize_expr(P, parse("comp_1(gen alpha, comp_0(gen f, gen alpha))"))
    assert first != second


def test_unit_laws_rewrite_away():
    P = fixture('fix_int')
    plain = normalize_expr(P, parse("gen phi"))
    assert normalize_expr(P, parse("comp_1(id(gen f), gen phi)")) == plain
    assert normalize_expr(P, parse("comp_0(id(gen x), comp_0(gen phi, id(gen y)))")) == plain


def test_typing_errors():
    P = fixture('fix_int')
    try:
        normalize_expr(P, parse("comp_1(gen phi, gen psi)"))
    except TypingError as e:
        assert "not composable" in str(e)
    else:
        raise AssertionError("non-composable expression type-checked")


def test_loop_square_is_inexpressible():
    # gamma o_0 gamma has no meaning between 2-cells
    P = fixture('loop')
    e = parse("comp_0(gen gamma, gen gamma)")
    try:
        normalize_expr(P, e)
    except TypingError as err:
        assert "illegal composition" in str(err)
    else:
        raise AssertionError("gamma o_0 gamma type-checked")
    try:
        evaluate_expr(P, e)
    except CompositionError:
        pass
    else:
        raise AssertionError("gamma o_0 gamma evaluated")


def test_random_pairs_agree():
    checked = 0
    for name in ('fix_int', 'fix_eh', 'loop'):
        P = fixture(name)
        for seed in range(25):
            try:
                first, second = random_equal_pair(P, seed)
            except BudgetExhausted:
                continue
            u = normalize_expr(P, first)
            assert u == normalize_expr(P, second), f"{name} seed {seed}: {to_text(first)} / {to_text(second)}"
            assert u == evaluate_expr(P, first)
            checked += 1
    assert checked > 0


def test_random_polygraphs_are_valid():
    for seed in range(10):
        P = random_polygraph(seed)
        assert validate_polygraph(P)['valid'], f"seed {seed}"
        try:
            e = random_expr(P, seed)
        except BudgetExhausted:
            continue
        assert normalize_expr(P, e) == evaluate_expr(P, e)


def test_symbolic_boundaries():
    P = fixture('fix_int')
    e = parse("comp_0(gen phi, gen g)")
    u = evaluate_expr(P, e)
    for sign in (MINUS, PLUS):
        for d in (0, 1):
            assert evaluate_expr(P, expr_boundary(P, e, sign, d)) == boundary(u, sign, d)
    try:
        expr_boundary(P, e, MINUS, 2)
    except BoundaryError:
        pass
    else:
        raise AssertionError("2-boundary of a 2-cell")


def test_one_step_rewrites():
    P = fixture('fix_int')
    assert one_step_rewrites(P, parse("comp_0(id(gen x), gen f)")) == [Gen('f')]
    e = parse("comp_1(comp_0(gen phi, gen g), comp_0(gen f', gen psi))")
    assert one_step_rewrites(P, e) == []
    nested = parse("comp_0(comp_0(gen f, gen g), id(gen z))")
    steps = one_step_rewrites(P, nested)
    assert steps
    for step in steps:
        assert normalize_expr(P, step) == normalize_expr(P, nested)


def test_local_confluence():
    checked = 0
    for P in [fixture('fix_int'), fixture('loop')] + [random_polygraph(seed) for seed in range(5)]:
        for seed in range(15):
            try:
                e = random_expr(P, seed)
            except BudgetExhausted:
                continue
            u = normalize_expr(P, e)
            for step in one_step_rewrites(P, e):
                assert normalize_expr(P, step) == u, f"{to_text(e)} -> {to_text(step)}"
                checked += 1
    assert checked > 0


def run_all_tests():
    """Run all tests and return overall success."""
    return run_tests([
        ("Parse and print", test_parse_and_print),
        ("Symbolic boundaries", test_symbolic_boundaries),
        ("One-step rewrites", test_one_step_rewrites),
        ("Local confluence", test_local_confluence),
        ("Syntax error positions", test_syntax_errors_carry_positions),
        ("JSON expressions", test_json_expressions),
        ("Interchange normal form", test_oracle_agrees_on_interchange),
        ("Unit whiskers", test_unit_whiskers_not_identified),
        ("Unit laws", test_unit_laws_rewrite_away),
        ("Typing errors", test_typing_errors),
        ("Inexpressible loop square", test_loop_square_is_inexpressible),
        ("Random equal pairs", test_random_pairs_agree),
        ("Random polygraphs", test_random_polygraphs_are_valid),
    ])


if __name__ == "__main__":
    logger.info("Running oracle tests")
    sys.exit(0 if run_all_tests() else 1)
