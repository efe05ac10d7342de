"""
Structural validation of polygraphs and cells.

Validation never raises: it returns a report dictionary with "valid",
"errors" and "warnings" keys. Each error entry names the kind of violation,
the generator concerned and a human readable message.
"""

import logging
from typing import Any, Dict, List, Optional

from precat.cells import MINUS, PLUS, Cell, Generator, Identity, Point, Polygraph, PrecatError, Whiskers
from precat.composition import boundary, compose, generator_cell

logger = logging.getLogger(__name__)


def _entry(kind: str, dim: Optional[int], name: Optional[str], message: str) -> Dict[str, Any]:
    return {"kind": kind, "dim": dim, "name": name, "message": message}


def cell_problems(P: Polygraph, u: Cell, owner: Optional[Generator] = None) -> List[Dict[str, Any]]:
    """
    List the structural problems of a cell over P.

    Checks that every generator written in u belongs to P (and, when owner is
    given, lies strictly below it), that whisker lists are composable and that
    every context slot fits the cell it is whiskered onto.
    """
    problems: List[Dict[str, Any]] = []
    dim = owner.dim if owner is not None else None
    name = owner.name if owner is not None else None
    reported = set()

    def dangling(gen: Generator) -> bool:
        if gen in P and (owner is None or gen.dim < owner.dim):
            return False
        if gen.key not in reported:
            reported.add(gen.key)
            where = f"{owner.name} refers to" if owner is not None else "cell refers to"
            problems.append(_entry("dangling-reference", dim, name,
                                   f"{where} missing {gen.dim}-generator {gen.name!r}"))
        return True

    def walk(cell: Cell) -> None:
        body = cell.body
        if isinstance(body, Point):
            dangling(body.gen)
            return
        if isinstance(body, Identity):
            if body.base.dim != cell.dim - 1:
                problems.append(_entry("ill-formed-cell", dim, name, "identity layer skips a dimension"))
            walk(body.base)
            return
        previous = None
        for ctx, gen in body.entries:
            if gen.dim != cell.dim:
                problems.append(_entry("ill-formed-cell", dim, name,
                                       f"{gen.dim}-generator {gen.name!r} in a {cell.dim}-cell"))
                return
            if ctx.depth != gen.dim - 1:
                problems.append(_entry("ill-formed-cell", dim, name,
                                       f"context of depth {ctx.depth} around {gen.name!r}"))
                return
            missing = dangling(gen)
            for left, right in ctx.levels:
                walk(left)
                walk(right)
            if missing or problems:
                continue
            try:
                current = generator_cell(gen)
                for j, (left, right) in enumerate(ctx.levels, start=1):
                    current = compose(compose(left, j - 1, current), j - 1, right)
            except PrecatError as e:
                problems.append(_entry("context-mismatch", dim, name, f"context around {gen.name!r}: {e}"))
                continue
            if current != Cell(gen.dim, Whiskers(((ctx, gen),))):
                problems.append(_entry("context-mismatch", dim, name,
                                       f"identity slots around {gen.name!r} do not match their boundaries"))
                continue
            if previous is not None and boundary(previous, PLUS, cell.dim - 1) != boundary(current, MINUS, cell.dim - 1):
                problems.append(_entry("not-composable", dim, name,
                                       f"whisker entries around {gen.name!r} are not composable"))
            previous = current

    walk(u)
    return problems


def validate_polygraph(P: Polygraph) -> Dict[str, Any]:
    """
    Validate every generator of a polygraph.

    Returns:
        Dict with "valid", "errors" (dangling references, dimension mismatches,
        non-parallel boundaries, ill-formed cells), "warnings" (cross-dimension
        name collisions) and a "summary" of generator counts
    """
    report: Dict[str, Any] = {
        "valid": False,
        "errors": [],
        "warnings": [],
        "summary": {str(k): len(P.generators(k)) for k in range(P.dim + 1)},
    }

    for gen in P.generators():
        if gen.dim == 0:
            if gen.src is not None or gen.tgt is not None:
                report["errors"].append(_entry("boundary-on-point", 0, gen.name, "0-generators have no boundary"))
            continue
        if gen.src is None or gen.tgt is None:
            report["errors"].append(_entry("missing-boundary", gen.dim, gen.name,
                                           f"{gen.dim}-generator {gen.name!r} lacks a source or target"))
            continue
        if gen.src.dim != gen.dim - 1 or gen.tgt.dim != gen.dim - 1:
            report["errors"].append(_entry("dimension-mismatch", gen.dim, gen.name,
                                           f"boundaries of {gen.name!r} must be {gen.dim - 1}-cells"))
            continue
        problems = cell_problems(P, gen.src, gen) + cell_problems(P, gen.tgt, gen)
        seen = set()
        for problem in problems:
            marker = (problem["kind"], problem["message"])
            if marker not in seen:
                seen.add(marker)
                report["errors"].append(problem)
        if problems or gen.dim < 2:
            continue
        sides = [side for sign, side in ((MINUS, "sources"), (PLUS, "targets"))
                 if boundary(gen.src, sign, gen.dim - 2) != boundary(gen.tgt, sign, gen.dim - 2)]
        if sides:
            report["errors"].append(_entry("non-parallel", gen.dim, gen.name,
                                           f"source and target of {gen.name!r} have different {' and '.join(sides)}"))

    for name in sorted(P.ambiguous_names()):
        report["warnings"].append(_entry("name-collision", None, name,
                                         f"name {name!r} is used in dimensions {P.dims_of(name)}"))

    report["valid"] = not report["errors"]
    if report["valid"]:
        logger.debug(f"Polygraph with {len(P)} generators is valid")
    else:
        logger.info(f"Polygraph validation found {len(report['errors'])} problem(s)")
    return report
