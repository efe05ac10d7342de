"""
Support of cells, restriction to the support, principality, and the
unique morphism out of a principal element.
"""

import logging
from typing import List, Optional, Set, Tuple

from precat.cells import Cell, Element, Generator, Polygraph, PrecatError, occurring_generators
from precat.functor import (
    Assignment, PolyMap, all_polymaps, apply_free, check_polymap, identity_polymap, match_cells,
)

logger = logging.getLogger(__name__)


class NotPrincipalError(PrecatError):
    """Exception raised when an element is required to be principal and is not."""
    pass


def _support_set(u: Cell) -> Set[Generator]:
    found: Set[Generator] = set()
    stack = list(occurring_generators(u))
    while stack:
        gen = stack.pop()
        if gen in found:
            continue
        found.add(gen)
        if gen.dim > 0:
            stack.extend(occurring_generators(gen.src))
            stack.extend(occurring_generators(gen.tgt))
    return found


def supp(P: Polygraph, u: Cell) -> List[Generator]:
    """
    Generators recursively occurring in u, through boundaries included.

    Identities are transparent and composites take unions; the result is
    sorted by (dim, name).
    """
    return sorted(_support_set(u), key=lambda g: g.key)


def restrict(P: Polygraph, u: Cell) -> Tuple[Polygraph, PolyMap, Cell]:
    """
    Restrict P to the support of u.

    Returns:
        The sub-polygraph on supp(u), its inclusion into P and the transported cell
    """
    gens = supp(P, u)
    if len(gens) == len(P):
        return P, identity_polymap(P), u
    sub = Polygraph(gens, dim=P.dim)
    inclusion = PolyMap(sub, P, _names_by_dim(gens))
    return sub, inclusion, u


def _names_by_dim(gens: List[Generator]) -> Assignment:
    assign: Assignment = {}
    for gen in gens:
        assign.setdefault(gen.dim, {})[gen.name] = gen.name
    return assign


def is_principal(e: Element) -> bool:
    return {g.key for g in _support_set(e.cell)} == set(e.pol.keys())


def unique_morphism(src: Element, tgt: Element) -> Optional[PolyMap]:
    """
    The element morphism src -> tgt, if any.

    Built by a parallel traversal of the two normal forms; principality of
    src makes it unique.

    Raises:
        NotPrincipalError: src is not principal
    """
    if not is_principal(src):
        raise NotPrincipalError("source element is not principal")
    assign: Assignment = {}
    if not match_cells(src.cell, tgt.cell, assign):
        return None
    for k, table in assign.items():
        if any(not tgt.pol.has(k, image) for image in table.values()):
            return None
    F = PolyMap(src.pol, tgt.pol, assign)
    if not check_polymap(F)["valid"] or apply_free(F, src.cell) != tgt.cell:
        logger.debug("Structural match did not produce an element morphism")
        return None
    return F


def element_morphisms(src: Element, tgt: Element) -> List[PolyMap]:
    """Every morphism src.pol -> tgt.pol sending the distinguished cell to tgt.cell."""
    assign: Assignment = {}
    if not match_cells(src.cell, tgt.cell, assign):
        return []
    return [F for F in all_polymaps(src.pol, tgt.pol, partial=assign)
            if apply_free(F, src.cell) == tgt.cell]
