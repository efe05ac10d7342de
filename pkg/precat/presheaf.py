"""
Plexes, the terminal polygraph, and polygraphs as presheaves on plexes.

This module provides:
- terminal_fragment: a finite piece of the terminal polygraph
- enumerate_plexes / PlexTable: plex liftings of its generators, up to isomorphism
- realize_presheaf, plex_morphisms, restrict_along: hom-set queries
- makkai_check: per-generator lifting, uniqueness and isomorphism checks
"""

import hashlib
import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional

from joblib import Parallel, delayed

import config
from precat.cells import MINUS, PLUS, Cell, Element, Generator, Polygraph
from precat.composition import boundary, enumerate_cells, generator_cell
from precat.functor import PolyMap, all_polymaps, apply_free, compose_polymaps
from precat.oracle import cell_text
from precat.polyplex import LiftingError, element_iso, is_polyplex, polyplex_lift, split_lift
from precat.support import element_morphisms, is_principal

logger = logging.getLogger(__name__)

TERMINAL_POINT = "*"


@dataclass(frozen=True)
class Plex:
    """A plex: a canonical polyplex whose distinguished cell is a generator."""
    element: Element
    source: str

    @property
    def pol(self) -> Polygraph:
        return self.element.pol

    @property
    def cell(self) -> Cell:
        return self.element.cell

    @property
    def dim(self) -> int:
        return self.element.cell.dim

    @property
    def weight(self) -> int:
        return len(self.element.pol)


class PlexTable:
    """Plexes sorted by dimension, weight and description, one per isomorphism class."""

    def __init__(self, plexes: List[Plex]):
        unique: Dict[Element, Plex] = {}
        for plex in plexes:
            unique.setdefault(plex.element, plex)
        self._plexes = sorted(unique.values(), key=lambda p: (p.dim, p.weight, describe(p.pol)))

    def of_dim(self, dim: int) -> List[Plex]:
        return [p for p in self._plexes if p.dim == dim]

    def index(self, element: Element) -> Optional[int]:
        for n, plex in enumerate(self._plexes):
            if plex.element == element:
                return n
        return None

    def __iter__(self) -> Iterator[Plex]:
        return iter(self._plexes)

    def __len__(self) -> int:
        return len(self._plexes)

    def __getitem__(self, n: int) -> Plex:
        return self._plexes[n]


def describe(P: Polygraph) -> str:
    """A deterministic one-line description of a polygraph."""
    parts = []
    for gen in P.generators():
        if gen.dim == 0:
            parts.append(gen.name)
        else:
            parts.append(f"{gen.name}:{cell_text(P, gen.src)}->{cell_text(P, gen.tgt)}")
    return "; ".join(parts)


# ---------------------------------------------------------------------------
# Terminal polygraph
# ---------------------------------------------------------------------------

def _terminal_name(k: int, text: str, taken: Dict[str, Any]) -> str:
    digest = hashlib.sha1(text.encode("utf-8")).hexdigest()
    width = 8
    while f"t{k}_{digest[:width]}" in taken:
        width += 4
    return f"t{k}_{digest[:width]}"


def _top_length(u: Cell) -> int:
    return 0 if u.is_identity else max(1, len(u.entries))


def terminal_fragment(dim_bound: int, weight_bound: int, length_bound: Optional[int] = None) -> Polygraph:
    """
    The generators of the terminal polygraph up to dimension dim_bound whose
    plex has at most weight_bound generators.

    Args:
        dim_bound: Highest dimension of generators
        weight_bound: Largest plex weight kept
        length_bound: Optional bound on the whisker-list length of source and target cells
    """
    gens: List[Generator] = [Generator(TERMINAL_POINT, 0)]
    for k in range(1, dim_bound + 1):
        below = Polygraph(gens, dim=k - 1)
        cells = enumerate_cells(below, k - 1, weight_bound)
        if length_bound is not None:
            cells = [c for c in cells if _top_length(c) <= length_bound]
        taken: Dict[str, Any] = {}
        kept = 0
        for src in cells:
            for tgt in cells:
                if k > 1 and (boundary(src, MINUS, k - 2) != boundary(tgt, MINUS, k - 2)
                              or boundary(src, PLUS, k - 2) != boundary(tgt, PLUS, k - 2)):
                    continue
                name = _terminal_name(k, f"{cell_text(below, src)} -> {cell_text(below, tgt)}", taken)
                candidate = Generator(name, k, src, tgt)
                trial = below.with_generators([candidate], dim=k)
                weight = polyplex_lift(Element(trial, generator_cell(candidate))).weight
                if weight <= weight_bound:
                    taken[name] = candidate
                    kept += 1
        gens += list(taken.values())
        logger.info(f"Terminal fragment: {kept} generator(s) in dimension {k}")
    return Polygraph(gens, dim=dim_bound)


# ---------------------------------------------------------------------------
# Plexes
# ---------------------------------------------------------------------------

def _plex_of(P: Polygraph, gen: Generator) -> Plex:
    lifting = polyplex_lift(Element(P, generator_cell(gen)))
    return Plex(lifting.shape, gen.name)


def enumerate_plexes(dim_bound: int, weight_bound: int, length_bound: Optional[int] = None,
                     n_jobs: Optional[int] = None) -> PlexTable:
    """
    Plexes up to dimension dim_bound and weight weight_bound, one per isomorphism class.

    Liftings are computed per terminal generator, in parallel when n_jobs > 1;
    the merged table is sorted, so the result does not depend on n_jobs.
    """
    T = terminal_fragment(dim_bound, weight_bound, length_bound)
    jobs = n_jobs if n_jobs is not None else config.N_JOBS
    plexes = Parallel(n_jobs=jobs)(delayed(_plex_of)(T, gen) for gen in T.generators())
    table = PlexTable(list(plexes))
    logger.info(f"Enumerated {len(table)} plex(es) from {len(T)} terminal generator(s)")
    return table


def plex_morphisms(V: Plex, U: Plex) -> List[PolyMap]:
    """Morphisms V -> U in the shape category."""
    return all_polymaps(V.pol, U.pol)


def realize_presheaf(P: Polygraph, plexes: PlexTable) -> Dict[Plex, List[PolyMap]]:
    """The sections Hom(U, P) of P at every plex U of the table."""
    return {plex: all_polymaps(plex.pol, P) for plex in plexes}


def restrict_along(theta: PolyMap, sections: List[PolyMap]) -> List[PolyMap]:
    """Restriction of sections at U to sections at V along theta: V -> U."""
    return [compose_polymaps(F, theta) for F in sections]


# ---------------------------------------------------------------------------
# Concreteness checks
# ---------------------------------------------------------------------------

def makkai_check(P: Polygraph, weight_bound: Optional[int] = None,
                 plexes: Optional[PlexTable] = None) -> Dict[str, Any]:
    """
    Check, for every generator of P, that its plex lifting exists, that the
    element morphism from the plex is unique, and that the lifting agrees with
    one assembled along other decompositions; then check that plex sections
    count the generators.

    Args:
        P: Polygraph to check
        weight_bound: Plexes heavier than this are not checked; the report is then partial
        plexes: Table to count sections over; by default the plexes of P's own generators

    Returns:
        Dict with "valid", "partial", "errors", "warnings", "generators" and "summary"
    """
    report: Dict[str, Any] = {
        "valid": False,
        "partial": False,
        "errors": [],
        "warnings": [],
        "generators": [],
        "summary": {},
    }
    errors = report["errors"]
    classes: Dict[Element, int] = {}

    def fail(condition: str, gen: Generator, message: str) -> None:
        errors.append({"kind": condition, "dim": gen.dim, "name": gen.name, "message": message})

    def skip(condition: str, gen: Generator, message: str) -> None:
        report["partial"] = True
        report["warnings"].append({"kind": condition, "dim": gen.dim, "name": gen.name, "message": message})

    for gen in P.generators():
        target = Element(P, generator_cell(gen))
        lifting = polyplex_lift(target)
        entry = {"dim": gen.dim, "name": gen.name, "weight": lifting.weight}
        report["generators"].append(entry)
        if weight_bound is not None and lifting.weight > weight_bound:
            skip("weight-bound", gen, f"plex of {gen.name!r} has {lifting.weight} generators")
            continue

        if not is_principal(lifting.shape):
            fail("lifting", gen, f"plex of {gen.name!r} is not principal")
        if apply_free(lifting.map, lifting.cell) != target.cell:
            fail("lifting", gen, f"plex of {gen.name!r} does not map onto it")
        if not is_polyplex(lifting.shape):
            fail("lifting", gen, f"plex of {gen.name!r} is not a polyplex")

        morphisms = element_morphisms(lifting.shape, target)
        entry["morphisms"] = len(morphisms)
        if len(morphisms) != 1:
            fail("uniqueness", gen, f"{len(morphisms)} element morphisms from the plex of {gen.name!r}")

        try:
            element_iso(lifting, split_lift(target))
            entry["isomorphic"] = True
        except LiftingError as e:
            entry["isomorphic"] = False
            fail("isomorphism", gen, f"liftings of {gen.name!r} are not isomorphic: {e}")

        entry["plex"] = classes.setdefault(lifting.shape, len(classes))
        if plexes is not None and plexes.index(lifting.shape) is None:
            skip("missing-plex", gen, f"plex of {gen.name!r} is not in the table")

    shapes = [plex.pol for plex in plexes] if plexes is not None else [shape.pol for shape in classes]
    sections = sum(len(all_polymaps(U, P)) for U in shapes)
    checked = sum(1 for entry in report["generators"] if "plex" in entry)
    if not report["partial"] and sections != len(P):
        errors.append({"kind": "bijection", "dim": None, "name": None,
                       "message": f"{sections} plex sections for {len(P)} generators"})
    report["summary"] = {"generators": len(P), "checked": checked, "plex_classes": len(classes),
                         "sections": sections}
    report["valid"] = not errors
    logger.info(f"Plex check: {checked}/{len(P)} generator(s), {len(classes)} plex class(es), "
                f"{len(errors)} problem(s)")
    return report
