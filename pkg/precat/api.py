"""
Request handlers shared by the command line and the HTTP service.

Every handler takes already-loaded polygraphs or morphisms plus raw cell
arguments (expression text, JSON expressions or normal-form objects) and
returns a JSON-ready dictionary.
"""

import json
import logging
from typing import Any, Dict, List, Optional

import config
from precat.cells import Element, InputError, Polygraph, check_sign
from precat.composition import boundary, compose, size
from precat.functor import PolyMap, check_polymap, conduche_factorize, is_iso
from precat.oracle import cell_text, expr_from_json, normalize_expr
from precat.polyplex import polyplex_lift, polyplex_measure
from precat.presheaf import describe, enumerate_plexes, makkai_check, realize_presheaf
from precat.selfcheck import selfcheck
from precat.support import is_principal, restrict, supp
from precat.validation import validate_polygraph
from utils.dot import polygraph_to_dot
from utils.serialization import (
    assignment_to_json, cell_from_json, cell_to_json, lifting_to_json, polygraph_to_json,
)

logger = logging.getLogger(__name__)


def read_arg(raw: Any) -> Any:
    """Command-line cell arguments starting with '{' are JSON; anything else is expression text."""
    if isinstance(raw, str) and raw.lstrip().startswith("{"):
        try:
            return json.loads(raw)
        except json.JSONDecodeError as e:
            raise InputError(f"malformed JSON argument: {e}") from None
    return raw


def _cell_result(P: Polygraph, u) -> Dict[str, Any]:
    return {"cell": cell_to_json(u), "expr": cell_text(P, u), "size": size(u)}


def _natural(value: Any, name: str) -> int:
    try:
        number = int(value)
    except (TypeError, ValueError):
        raise InputError(f"{name} must be an integer, got {value!r}") from None
    if number < 0:
        raise InputError(f"{name} must be non-negative")
    return number


def _optional(value: Any, name: str) -> Optional[int]:
    return None if value is None else _natural(value, name)


def _bounded_dim(value: Any, name: str) -> int:
    dim = _natural(value, name)
    if dim > config.MAX_DIM:
        raise InputError(f"{name} must be at most {config.MAX_DIM}")
    return dim


def handle_validate(P: Polygraph) -> Dict[str, Any]:
    return validate_polygraph(P)


def handle_normalize(P: Polygraph, expr: Any, oracle: bool = False) -> Dict[str, Any]:
    if oracle:
        u = normalize_expr(P, expr_from_json(read_arg(expr)))
    else:
        u = cell_from_json(P, read_arg(expr))
    return _cell_result(P, u)


def handle_compose(P: Polygraph, left: Any, index: Any, right: Any) -> Dict[str, Any]:
    u = compose(cell_from_json(P, read_arg(left)), _bounded_dim(index, "index"), cell_from_json(P, read_arg(right)))
    return _cell_result(P, u)


def handle_boundary(P: Polygraph, expr: Any, sign: str, dim: Any) -> Dict[str, Any]:
    u = cell_from_json(P, read_arg(expr))
    return _cell_result(P, boundary(u, check_sign(sign), _bounded_dim(dim, "dimension")))


def handle_support(P: Polygraph, expr: Any) -> Dict[str, Any]:
    u = cell_from_json(P, read_arg(expr))
    return {"support": [{"dim": g.dim, "name": g.name} for g in supp(P, u)]}


def handle_restrict(P: Polygraph, expr: Any) -> Dict[str, Any]:
    sub, inclusion, u = restrict(P, cell_from_json(P, read_arg(expr)))
    return {"pol": polygraph_to_json(sub), "inclusion": assignment_to_json(inclusion),
            "cell": cell_text(sub, u), "principal": is_principal(Element(sub, u))}


def handle_conduche(F: PolyMap, expr: Any, first: Any, second: Any, index: Any) -> Dict[str, Any]:
    report = check_polymap(F)
    if not report["valid"]:
        raise InputError(f"invalid morphism: {report['errors'][0]['message']}")
    u = cell_from_json(F.src_pol, read_arg(expr))
    v1 = cell_from_json(F.tgt_pol, read_arg(first))
    v2 = cell_from_json(F.tgt_pol, read_arg(second))
    u1, u2 = conduche_factorize(F, u, v1, v2, _bounded_dim(index, "index"))
    return {"first": _cell_result(F.src_pol, u1), "second": _cell_result(F.src_pol, u2)}


def handle_polyplex(P: Polygraph, expr: Any) -> Dict[str, Any]:
    lifting = polyplex_lift(Element(P, cell_from_json(P, read_arg(expr))))
    result = lifting_to_json(lifting)
    result["polyplex"] = is_iso(lifting.map)
    return result


def handle_measure(P: Polygraph, expr: Any) -> Dict[str, Any]:
    return {"measure": polyplex_measure(Element(P, cell_from_json(P, read_arg(expr))))}


def handle_plexes(dim: Any, weight: Any, length: Optional[Any] = None,
                  jobs: Optional[int] = None) -> List[Dict[str, Any]]:
    k = _bounded_dim(dim, "dimension")
    table = enumerate_plexes(k, _natural(weight, "weight"), _optional(length, "length"), jobs)
    return [{"plex": polygraph_to_json(p.pol), "cell": cell_text(p.pol, p.cell), "weight": p.weight}
            for p in table.of_dim(k)]


def handle_presheaf(P: Polygraph, dim: Any, weight: Any, length: Optional[Any] = None) -> Dict[str, Any]:
    table = enumerate_plexes(_bounded_dim(dim, "dimension"), _natural(weight, "weight"), _optional(length, "length"))
    sections = realize_presheaf(P, table)
    return {"sections": [
        {"plex": describe(plex.pol), "dim": plex.dim, "weight": plex.weight,
         "count": len(maps), "maps": [assignment_to_json(F) for F in maps]}
        for plex, maps in sections.items()
    ]}


def handle_makkai(P: Polygraph, weight: Optional[Any] = None, table_weight: Optional[Any] = None) -> Dict[str, Any]:
    """Plex checks; with table_weight, sections are counted over every plex of P.dim up to that weight."""
    bound = _optional(table_weight, "table weight")
    plexes = enumerate_plexes(P.dim, bound) if bound is not None else None
    return makkai_check(P, _optional(weight, "weight"), plexes)


def handle_dot(P: Polygraph) -> str:
    return polygraph_to_dot(P)


def handle_selfcheck(seed: Any, count: Any, fixtures: List[Polygraph]) -> Dict[str, Any]:
    return selfcheck(_natural(seed, "seed"), _natural(count, "count"), fixtures)
