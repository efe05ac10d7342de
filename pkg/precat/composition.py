"""
Identities and normalizing composition on normal forms.

This module provides:
- identity, compose and compose_many (the operations o_i of a free precategory)
- boundary and eval_context
- generator_cell / cell_of for turning generators into cells
- true_dim, size and the bounded cell enumerator enumerate_cells

Composition never leaves normal form: whiskering a lower-dimensional cell onto a
whisker list rewrites the context slots of every entry, and composing at the
top dimension concatenates whisker lists after absorbing identities.
"""

import logging
from collections import defaultdict
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import config
from precat.cells import (
    MINUS, PLUS, BoundaryError, BudgetExhausted, Cell, Context, Generator,
    Identity, Point, Polygraph, PrecatError, Whiskers, check_sign,
)

logger = logging.getLogger(__name__)


class CompositionError(PrecatError):
    """Exception raised for illegal or non-composable compositions."""
    pass


class ContextError(PrecatError):
    """Exception raised when a context does not fit the cell plugged into it."""
    pass


def identity(u: Cell) -> Cell:
    return Cell(u.dim + 1, Identity(u))


def point(gen: Generator) -> Cell:
    return Cell(0, Point(gen))


@lru_cache(maxsize=1 << 14)
def generator_cell(gen: Generator) -> Cell:
    """The cell of a generator: one whisker entry with identity slots everywhere."""
    if gen.dim == 0:
        return point(gen)
    if gen.src is None or gen.tgt is None:
        raise CompositionError(f"{gen.dim}-generator {gen.name!r} has no boundary")
    levels = tuple(
        (identity(boundary(gen.src, MINUS, j - 1)), identity(boundary(gen.tgt, PLUS, j - 1)))
        for j in range(1, gen.dim)
    )
    return Cell(gen.dim, Whiskers(((Context(levels), gen),)))


def cell_of(P: Polygraph, name: str, dim: Optional[int] = None) -> Cell:
    return generator_cell(P.lookup(name, dim))


# ---------------------------------------------------------------------------
# Boundaries
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1 << 16)
def _face(u: Cell, sign: str) -> Cell:
    body = u.body
    if isinstance(body, Identity):
        return body.base
    if isinstance(body, Whiskers):
        if sign == MINUS:
            ctx, gen = body.entries[0]
            return _evaluate(ctx, gen.src)
        ctx, gen = body.entries[-1]
        return _evaluate(ctx, gen.tgt)
    raise BoundaryError("a 0-cell has no boundary")


def boundary(u: Cell, sign: str, target_dim: int) -> Cell:
    """
    Iterated source (sign '-') or target (sign '+') of u in dimension target_dim.

    Args:
        u: A cell in normal form
        sign: MINUS or PLUS
        target_dim: Dimension of the requested boundary, at most dim(u)

    Returns:
        The boundary, in normal form
    """
    check_sign(sign)
    if target_dim > u.dim or target_dim < 0:
        raise BoundaryError(f"no {target_dim}-dimensional boundary of a {u.dim}-cell")
    cell = u
    while cell.dim > target_dim:
        cell = _face(cell, sign)
    return cell


def true_dim(u: Cell) -> int:
    """Dimension of the first non-identity layer of u."""
    while isinstance(u.body, Identity):
        u = u.body.base
    return u.dim


@lru_cache(maxsize=1 << 16)
def size(u: Cell) -> int:
    """Number of generator occurrences in the normal form, identity slots excluded."""
    body = u.body
    if isinstance(body, Point):
        return 1
    if isinstance(body, Identity):
        return size(body.base)
    total = 0
    for ctx, _ in body.entries:
        total += 1
        for left, right in ctx.levels:
            if not left.is_identity:
                total += size(left)
            if not right.is_identity:
                total += size(right)
    return total


# ---------------------------------------------------------------------------
# Composition
# ---------------------------------------------------------------------------

def _illegal(u: Cell, i: int, v: Cell) -> CompositionError:
    if u.dim == v.dim:
        return CompositionError(f"illegal composition: no ∘_{i} of two {u.dim}-cells")
    return CompositionError(f"illegal composition: no ∘_{i} of a {u.dim}-cell and a {v.dim}-cell")


def compose(u: Cell, i: int, v: Cell) -> Cell:
    """
    Normal form of u o_i v.

    Args:
        u: Left cell
        i: Composition index, must equal min(dim u, dim v) - 1
        v: Right cell, with boundary(v, '-', i) == boundary(u, '+', i)

    Returns:
        The composite in normal form

    Raises:
        CompositionError: illegal index or non-matching boundaries
    """
    if i < 0 or i != min(u.dim, v.dim) - 1:
        raise _illegal(u, i, v)
    if boundary(u, PLUS, i) != boundary(v, MINUS, i):
        raise CompositionError(
            f"not composable: the {i}-target of the left {u.dim}-cell differs from "
            f"the {i}-source of the right {v.dim}-cell")
    return _compose(u, i, v)


def _compose(u: Cell, i: int, v: Cell) -> Cell:
    if u.dim == v.dim:
        if u.is_identity:
            return v
        if v.is_identity:
            return u
        return Cell(u.dim, Whiskers(u.body.entries + v.body.entries))
    if u.dim < v.dim:
        if u.is_identity:
            return v
        if v.is_identity:
            return identity(_compose(u, i, v.body.base))
        return Cell(v.dim, Whiskers(tuple(_whisker_left(u, i, ctx, gen) for ctx, gen in v.body.entries)))
    if v.is_identity:
        return u
    if u.is_identity:
        return identity(_compose(u.body.base, i, v))
    return Cell(u.dim, Whiskers(tuple(_whisker_right(ctx, gen, i, v) for ctx, gen in u.body.entries)))


def _whisker_left(u: Cell, i: int, ctx: Context, gen: Generator) -> Tuple[Context, Generator]:
    levels = []
    for j, (left, right) in enumerate(ctx.levels, start=1):
        if j == i + 1:
            levels.append((_compose(u, i, left), right))
        elif j > i + 1:
            levels.append((_compose(u, i, left), _compose(u, i, right)))
        else:
            levels.append((left, right))
    return Context(tuple(levels)), gen


def _whisker_right(ctx: Context, gen: Generator, i: int, v: Cell) -> Tuple[Context, Generator]:
    levels = []
    for j, (left, right) in enumerate(ctx.levels, start=1):
        if j == i + 1:
            levels.append((left, _compose(right, i, v)))
        elif j > i + 1:
            levels.append((_compose(left, i, v), _compose(right, i, v)))
        else:
            levels.append((left, right))
    return Context(tuple(levels)), gen


def compose_many(cells: Sequence[Cell], i: int) -> Cell:
    if not cells:
        raise CompositionError("compose_many needs at least one cell")
    result = cells[0]
    for cell in cells[1:]:
        result = compose(result, i, cell)
    return result


# ---------------------------------------------------------------------------
# Contexts
# ---------------------------------------------------------------------------

def _evaluate(ctx: Context, u: Cell) -> Cell:
    for j, (left, right) in enumerate(ctx.levels, start=1):
        u = _compose(_compose(left, j - 1, u), j - 1, right)
    return u


def eval_context(ctx: Context, u: Cell) -> Cell:
    """Evaluate E[u] = l_{m-1} o (... (l_1 o_0 u o_0 r_1) ...) o r_{m-1}."""
    if ctx.depth and u.dim < ctx.depth:
        raise ContextError(f"a context of depth {ctx.depth} cannot house a {u.dim}-cell")
    for j, (left, right) in enumerate(ctx.levels, start=1):
        if left.dim != j or right.dim != j:
            raise ContextError(f"context level {j} must hold {j}-cells")
        try:
            u = compose(compose(left, j - 1, u), j - 1, right)
        except CompositionError as e:
            raise ContextError(f"context does not fit at level {j}: {e}") from e
    return u


# ---------------------------------------------------------------------------
# Bounded enumeration of normal forms
# ---------------------------------------------------------------------------

def enumerate_cells(P: Polygraph, dim: int, max_size: int) -> List[Cell]:
    """
    All cells of the free precategory on P in dimension dim with size at most max_size.

    The order is deterministic: identities first, then whisker lists by length.
    """
    return list(_cells(P, dim, max_size))


@lru_cache(maxsize=256)
def _cells(P: Polygraph, dim: int, max_size: int) -> Tuple[Cell, ...]:
    if max_size < 1 or dim < 0:
        return ()
    if dim == 0:
        return tuple(point(g) for g in P.generators(0))
    out: List[Cell] = [identity(c) for c in _cells(P, dim - 1, max_size)]
    pieces = _whiskered(P, dim, max_size)
    by_source: Dict[Cell, List[Tuple[Cell, int]]] = defaultdict(list)
    for cell, weight in pieces:
        by_source[boundary(cell, MINUS, dim - 1)].append((cell, weight))
    frontier = list(pieces)
    while frontier:
        out.extend(cell for cell, _ in frontier)
        if len(out) > config.MAX_CELLS:
            raise BudgetExhausted(f"more than {config.MAX_CELLS} cells of dimension {dim}")
        grown = []
        for cell, weight in frontier:
            for piece, piece_weight in by_source.get(boundary(cell, PLUS, dim - 1), ()):
                if weight + piece_weight <= max_size:
                    grown.append((_compose(cell, dim - 1, piece), weight + piece_weight))
        frontier = grown
    return tuple(out)


def _whiskered(P: Polygraph, dim: int, max_size: int) -> List[Tuple[Cell, int]]:
    """Single-entry cells E[g] of dimension dim with their sizes."""
    found: List[Tuple[Cell, int]] = []

    def grow(cell: Cell, level: int, budget: int) -> None:
        if level == dim:
            found.append((cell, max_size - budget))
            return
        src = boundary(cell, MINUS, level - 1)
        tgt = boundary(cell, PLUS, level - 1)
        candidates = [c for c in _cells(P, level, budget) if not c.is_identity]
        lefts = [(None, 0)] + [(c, size(c)) for c in candidates if boundary(c, PLUS, level - 1) == src]
        rights = [(None, 0)] + [(c, size(c)) for c in candidates if boundary(c, MINUS, level - 1) == tgt]
        for left, left_size in lefts:
            for right, right_size in rights:
                if left_size + right_size > budget:
                    continue
                grown = cell
                if left is not None:
                    grown = _compose(left, level - 1, grown)
                if right is not None:
                    grown = _compose(grown, level - 1, right)
                grow(grown, level + 1, budget - left_size - right_size)

    for gen in P.generators(dim):
        grow(generator_cell(gen), 1, max_size - 1)
    return found
