"""
JSON forms of polygraphs, cells, morphisms and liftings.

Polygraph files list generators with boundaries written as expressions
(text or JSON expression objects); boundaries are resolved dimension by
dimension, so a generator may only mention generators of lower dimension.
Cells are read either as expressions or as normal-form objects.
"""

import json
import logging
import os
from typing import Any, Dict, List

import config
from precat.cells import Cell, Context, Generator, InputError, Point, Polygraph, Whiskers
from precat.composition import CompositionError, compose, generator_cell, identity
from precat.functor import PolyMap
from precat.oracle import Expr, Gen, Id, cell_text, evaluate_expr, expr_from_json, is_name
from precat.polyplex import PolyplexLifting
from precat.validation import cell_problems, validate_polygraph

logger = logging.getLogger(__name__)


def load_json(path: str) -> Any:
    """Read a JSON file; missing files and bad JSON are input errors."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise InputError(f"file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON in {path}: {e}") from None


def dumps(data: Any) -> str:
    return json.dumps(data, sort_keys=True, ensure_ascii=False)


# ---------------------------------------------------------------------------
# Polygraphs
# ---------------------------------------------------------------------------

def _boundary_cell(below: Polygraph, data: Any, expected_dim: int, owner: str) -> Cell:
    """Evaluate a boundary expression; unknown 0-generators become dangling points for the validator."""

    def resolve(e: Gen) -> Generator:
        if e.dim is not None:
            if below.has(e.dim, e.name):
                return below.get(e.dim, e.name)
            dims = []
        else:
            dims = below.dims_of(e.name)
            if len(dims) == 1:
                return below.get(dims[0], e.name)
            if len(dims) > 1:
                raise InputError(f"generator name {e.name!r} in the boundary of {owner!r} is ambiguous; "
                                 f"qualify it as {e.name}@k")
        wanted = e.dim if e.dim is not None else expected_dim
        if wanted == 0:
            return Generator(e.name, 0)
        raise InputError(f"boundary of {owner!r} refers to unknown generator {e.name!r}")

    def evaluate(e: Expr) -> Cell:
        if isinstance(e, Gen):
            return generator_cell(resolve(e))
        if isinstance(e, Id):
            return identity(evaluate(e.arg))
        return compose(evaluate(e.left), e.index, evaluate(e.right))

    try:
        return evaluate(expr_from_json(data))
    except CompositionError as e:
        raise InputError(f"boundary of {owner!r}: {e}") from None


def _is_natural(value: Any) -> bool:
    # bool is an int subclass
    return isinstance(value, int) and not isinstance(value, bool) and value >= 0


def polygraph_from_json(data: Any) -> Polygraph:
    """
    Build a polygraph from its JSON form.

    Raises:
        InputError: malformed structure, duplicate names, unknown references
            or a dimension above the configured bound
    """
    if not isinstance(data, dict) or not isinstance(data.get("generators"), list):
        raise InputError("polygraph JSON must be an object with a 'generators' list")
    entries = data["generators"]
    for entry in entries:
        if not isinstance(entry, dict) or not isinstance(entry.get("name"), str) \
                or not _is_natural(entry.get("dim")):
            raise InputError(f"generator entries need a string 'name' and a natural 'dim': {entry!r}")
        if not is_name(entry["name"]):
            raise InputError(f"generator name {entry['name']!r} cannot be written in expressions")
        if entry["dim"] > config.MAX_DIM:
            raise InputError(f"generator {entry['name']!r} exceeds the maximum dimension {config.MAX_DIM}")
    declared = data.get("dim")
    if declared is not None and (not _is_natural(declared) or declared > config.MAX_DIM):
        raise InputError(f"declared dimension must be an integer at most {config.MAX_DIM}")

    gens: List[Generator] = []
    for k in sorted({entry["dim"] for entry in entries}):
        below = Polygraph(gens, dim=k - 1) if k > 0 else Polygraph([], dim=0)
        for entry in (e for e in entries if e["dim"] == k):
            name = entry["name"]
            if k == 0:
                if "src" in entry or "tgt" in entry:
                    raise InputError(f"0-generator {name!r} cannot have a boundary")
                gens.append(Generator(name, 0))
                continue
            if "src" not in entry or "tgt" not in entry:
                raise InputError(f"{k}-generator {name!r} needs 'src' and 'tgt'")
            src = _boundary_cell(below, entry["src"], k - 1, name)
            tgt = _boundary_cell(below, entry["tgt"], k - 1, name)
            gens.append(Generator(name, k, src, tgt))
    return Polygraph(gens, dim=declared)


def polygraph_to_json(P: Polygraph) -> Dict[str, Any]:
    generators = []
    for gen in P.generators():
        entry: Dict[str, Any] = {"name": gen.name, "dim": gen.dim}
        if gen.dim > 0:
            entry["src"] = cell_text(P, gen.src)
            entry["tgt"] = cell_text(P, gen.tgt)
        generators.append(entry)
    return {"dim": P.dim, "generators": generators}


def load_polygraph(path: str, validate: bool = True) -> Polygraph:
    """
    Load a polygraph file.

    Args:
        path: JSON file
        validate: Reject polygraphs whose validation report has errors
    """
    P = polygraph_from_json(load_json(path))
    if validate:
        report = validate_polygraph(P)
        if not report["valid"]:
            raise InputError(f"invalid polygraph {path}: {report['errors'][0]['message']}")
    logger.debug(f"Loaded {len(P)} generators from {path}")
    return P


# ---------------------------------------------------------------------------
# Cells
# ---------------------------------------------------------------------------

def cell_to_json(u: Cell) -> Dict[str, Any]:
    body = u.body
    if isinstance(body, Point):
        return {"dim": 0, "kind": "point", "name": body.gen.name}
    if u.is_identity:
        return {"dim": u.dim, "kind": "identity", "base": cell_to_json(body.base)}
    return {
        "dim": u.dim,
        "kind": "whiskers",
        "entries": [
            {"generator": gen.name,
             "context": [{"left": cell_to_json(l), "right": cell_to_json(r)} for l, r in ctx.levels]}
            for ctx, gen in body.entries
        ],
    }


def _normal_form(P: Polygraph, data: Any) -> Cell:
    try:
        kind, dim = data["kind"], data["dim"]
        if not _is_natural(dim):
            raise InputError(f"cell dimension must be a natural number, got {dim!r}")
        if kind == "point":
            return Cell(0, Point(P.get(0, data["name"])))
        if kind == "identity":
            base = _normal_form(P, data["base"])
            if base.dim != dim - 1:
                raise InputError(f"identity of dimension {dim} over a {base.dim}-cell")
            return identity(base)
        if kind == "whiskers":
            entries = []
            for entry in data["entries"]:
                levels = tuple((_normal_form(P, level["left"]), _normal_form(P, level["right"]))
                               for level in entry["context"])
                entries.append((Context(levels), P.get(dim, entry["generator"])))
            if not entries:
                raise InputError("a whisker list needs at least one entry")
            return Cell(dim, Whiskers(tuple(entries)))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed cell JSON: {e!r}") from None
    raise InputError(f"unknown cell kind {data.get('kind')!r}")


def cell_from_json(P: Polygraph, data: Any) -> Cell:
    """
    Read a cell given as expression text, a JSON expression or a normal-form object.

    Normal-form objects are checked for boundary compatibility.
    """
    if isinstance(data, dict) and "kind" in data:
        u = _normal_form(P, data)
        problems = cell_problems(P, u)
        if problems:
            raise InputError(f"ill-formed cell: {problems[0]['message']}")
        return u
    return evaluate_expr(P, expr_from_json(data))


# ---------------------------------------------------------------------------
# Morphisms and liftings
# ---------------------------------------------------------------------------

def assignment_to_json(F: PolyMap) -> Dict[str, Dict[str, str]]:
    return {str(k): dict(sorted(table.items())) for k, table in sorted(F.assign.items())}


def polymap_to_json(F: PolyMap) -> Dict[str, Any]:
    return {"src": polygraph_to_json(F.src_pol), "tgt": polygraph_to_json(F.tgt_pol),
            "map": assignment_to_json(F)}


def _polygraph_ref(data: Any, base_dir: str) -> Polygraph:
    if isinstance(data, str):
        return load_polygraph(os.path.join(base_dir, data))
    return polygraph_from_json(data)


def polymap_from_json(data: Any, base_dir: str = ".") -> PolyMap:
    """
    Read a morphism; 'src' and 'tgt' are inline polygraphs or paths relative to base_dir.
    """
    if not isinstance(data, dict) or not {"src", "tgt", "map"} <= set(data):
        raise InputError("morphism JSON must have 'src', 'tgt' and 'map'")
    src = _polygraph_ref(data["src"], base_dir)
    tgt = _polygraph_ref(data["tgt"], base_dir)
    try:
        assign = {int(k): {str(n): str(m) for n, m in table.items()} for k, table in data["map"].items()}
    except (AttributeError, ValueError) as e:
        raise InputError(f"malformed morphism table: {e}") from None
    return PolyMap(src, tgt, assign)


def load_polymap(path: str) -> PolyMap:
    return polymap_from_json(load_json(path), os.path.dirname(os.path.abspath(path)))


def lifting_to_json(L: PolyplexLifting) -> Dict[str, Any]:
    return {"shape": polygraph_to_json(L.pol), "cell": cell_text(L.pol, L.cell),
            "map": polymap_to_json(L.map)}
