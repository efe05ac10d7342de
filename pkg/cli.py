#!/usr/bin/env python3
"""
Command-line interface to the precategory kernel.

Every subcommand prints one JSON document (DOT text for `dot`) on stdout.
Exit codes: 0 on success, 1 on a domain error or a failed self-check, 2 on an
input error; errors are printed as {"error": {"type": ..., "message": ...}}.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

import config
from precat import api
from precat.cells import InputError, PrecatError
from utils.fixtures import load_fixture
from utils.serialization import dumps, load_polygraph, load_polymap

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Free n-precategories over polygraphs')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('validate', help='Validate a polygraph file')
    p.add_argument('polygraph')

    p = sub.add_parser('normalize', help='Normal form of an expression')
    p.add_argument('polygraph')
    p.add_argument('expr')
    p.add_argument('--oracle', action='store_true', help='Normalize by rewriting instead of composition')

    p = sub.add_parser('compose', help='Compose two cells along an index')
    p.add_argument('polygraph')
    p.add_argument('left')
    p.add_argument('index', type=int)
    p.add_argument('right')

    p = sub.add_parser('boundary', help='Iterated source or target of a cell')
    p.add_argument('polygraph')
    p.add_argument('expr')
    p.add_argument('sign', choices=['-', '+'])
    p.add_argument('dim', type=int)

    for name, text in (('support', 'Support of a cell'),
                       ('restrict', 'Restriction of a polygraph to the support of a cell'),
                       ('polyplex', 'Polyplex lifting of a cell'),
                       ('measure', 'Polyplex measure of a cell')):
        p = sub.add_parser(name, help=text)
        p.add_argument('polygraph')
        p.add_argument('expr')

    p = sub.add_parser('conduche', help='Factor a cell along a splitting of its image')
    p.add_argument('map', help='Morphism JSON file')
    p.add_argument('expr')
    p.add_argument('first')
    p.add_argument('second')
    p.add_argument('index', type=int)

    p = sub.add_parser('plexes', help='Plexes of one dimension')
    p.add_argument('--dim', type=int, required=True)
    p.add_argument('--weight', type=int, default=config.DEFAULT_WEIGHT)
    p.add_argument('--length', type=int, default=None, help='Bound on boundary whisker-list lengths')
    p.add_argument('--jobs', type=int, default=None)

    p = sub.add_parser('presheaf', help='Sections of a polygraph at every plex')
    p.add_argument('polygraph')
    p.add_argument('--dim', type=int, required=True)
    p.add_argument('--weight', type=int, default=config.DEFAULT_WEIGHT)
    p.add_argument('--length', type=int, default=None)

    p = sub.add_parser('makkai', help='Per-generator plex checks')
    p.add_argument('--input', required=True, help='Polygraph file')
    p.add_argument('--weight', type=int, default=None)
    p.add_argument('--table-weight', type=int, default=None, help='Count sections over all plexes up to this weight')

    p = sub.add_parser('dot', help='DOT rendering of the 1-skeleton')
    p.add_argument('polygraph')

    p = sub.add_parser('selfcheck', help='Seeded property suites')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--count', type=int, default=100)

    return parser


def run(args: argparse.Namespace) -> str:
    """JSON output of the subcommand; the self-check report is returned even when a suite fails."""
    command = args.command
    if command == 'plexes':
        return dumps(api.handle_plexes(args.dim, args.weight, args.length, args.jobs))
    if command == 'selfcheck':
        fixtures = [load_fixture('fix_int'), load_fixture('fix_eh')]
        return dumps(api.handle_selfcheck(args.seed, args.count, fixtures))
    if command == 'makkai':
        return dumps(api.handle_makkai(load_polygraph(args.input), args.weight, args.table_weight))
    if command == 'conduche':
        F = load_polymap(args.map)
        return dumps(api.handle_conduche(F, args.expr, args.first, args.second, args.index))

    P = load_polygraph(args.polygraph, validate=command != 'validate')
    if command == 'validate':
        return dumps(api.handle_validate(P))
    if command == 'normalize':
        return dumps(api.handle_normalize(P, args.expr, args.oracle))
    if command == 'compose':
        return dumps(api.handle_compose(P, args.left, args.index, args.right))
    if command == 'boundary':
        return dumps(api.handle_boundary(P, args.expr, args.sign, args.dim))
    if command == 'support':
        return dumps(api.handle_support(P, args.expr))
    if command == 'restrict':
        return dumps(api.handle_restrict(P, args.expr))
    if command == 'polyplex':
        return dumps(api.handle_polyplex(P, args.expr))
    if command == 'measure':
        return dumps(api.handle_measure(P, args.expr))
    if command == 'presheaf':
        return dumps(api.handle_presheaf(P, args.dim, args.weight, args.length))
    if command == 'dot':
        return api.handle_dot(P).rstrip("\n")
    raise InputError(f"unknown command {command!r}")


def error_document(e: Exception) -> str:
    return dumps({"error": {"type": type(e).__name__, "message": str(e)}})


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the subcommand and map errors to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        output = run(args)
        failed = args.command == "selfcheck" and not json.loads(output)["valid"]
    except InputError as e:
        logger.error(f"Input error: {e}")
        print(error_document(e))
        return 2
    except PrecatError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(error_document(e))
        return 1
    except RecursionError as e:
        logger.error(f"Input too deep to process: {e}")
        print(error_document(InputError("input too deeply nested")))
        return 2
    print(output)
    if failed:
        logger.error("Self-check failed")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
