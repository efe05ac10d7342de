"""
Pushouts of polygraphs and polyplex liftings.

This module provides:
- pushout, coproduct and the induced map out of a pushout (copair)
- polyplex_lift: the universal shape of a cell together with its map
- split_lift: the same lifting assembled along other decompositions
- canonical_element, element_iso, is_polyplex, is_generic
- polyplex_measure (generator multiplicities of the lifting)
- build_Dn and build_Dkl (globes and composable pairs of globes)

Intermediate shapes carry tagged names ("L.x", "R.x", "top"); every lifting
returned to callers is relabelled to canonical names g<dim>_<n>.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from precat.cells import MINUS, PLUS, Cell, Element, Generator, Identity, Point, Polygraph, PrecatError, Whiskers
from precat.composition import boundary, compose, generator_cell, identity
from precat.functor import (
    PolyMap, apply_free, compose_polymaps, inverse, is_iso, left_divide, rename_cell, right_divide,
)
from precat.support import unique_morphism

logger = logging.getLogger(__name__)

Lifter = Callable[[Polygraph, Cell], Tuple[Polygraph, Cell, PolyMap]]


class PushoutError(PrecatError):
    """Exception raised when identified generators receive different boundaries."""
    pass


class LiftingError(PrecatError):
    """Exception raised when a polyplex lifting cannot be assembled or compared."""
    pass


@dataclass(frozen=True)
class PolyplexLifting:
    """A polyplex (shape) with a map sending its distinguished cell to the lifted cell."""
    shape: Element
    map: PolyMap

    @property
    def pol(self) -> Polygraph:
        return self.shape.pol

    @property
    def cell(self) -> Cell:
        return self.shape.cell

    @property
    def weight(self) -> int:
        return len(self.shape.pol)


# ---------------------------------------------------------------------------
# Pushouts
# ---------------------------------------------------------------------------

class _Classes:
    """Union-find over tagged generator names of one dimension."""

    def __init__(self):
        self.parent: Dict[Tuple[str, str], Tuple[str, str]] = {}

    def add(self, node: Tuple[str, str]) -> None:
        self.parent.setdefault(node, node)

    def rep(self, node: Tuple[str, str]) -> Tuple[str, str]:
        root = node
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[node] != root:
            self.parent[node], node = root, self.parent[node]
        return root

    def merge(self, a: Tuple[str, str], b: Tuple[str, str]) -> None:
        ra, rb = self.rep(a), self.rep(b)
        if ra != rb:
            # the smaller node represents the class, so left names win
            low, high = sorted((ra, rb))
            self.parent[high] = low


def pushout(H: PolyMap, K: PolyMap) -> Tuple[Polygraph, PolyMap, PolyMap]:
    """
    Pushout of P <- R -> Q, computed dimension by dimension.

    Args:
        H: Map R -> P
        K: Map R -> Q

    Returns:
        (S, inl, inr) with inl: P -> S, inr: Q -> S

    Raises:
        PushoutError: identified generators receive different transported boundaries
    """
    if H.src_pol != K.src_pol:
        raise PushoutError("the two maps do not share a source")
    P, Q, R = H.tgt_pol, K.tgt_pol, H.src_pol
    top = max(P.dim, Q.dim)
    sides = {"L": P, "R": Q}
    tables: Dict[str, Dict[Generator, Generator]] = {"L": {}, "R": {}}
    left: Dict[int, Dict[str, str]] = {}
    right: Dict[int, Dict[str, str]] = {}
    made: List[Generator] = []

    for k in range(top + 1):
        classes = _Classes()
        for tag, pol in sides.items():
            for name in pol.names(k):
                classes.add((tag, name))
        for r in R.generators(k):
            classes.merge(("L", H.image(r).name), ("R", K.image(r).name))
        built: Dict[Tuple[str, str], Generator] = {}
        for node in sorted(classes.parent):
            root = classes.rep(node)
            tag, name = node
            gen = sides[tag].get(k, name)
            if k == 0:
                src = tgt = None
            else:
                src = rename_cell(gen.src, tables[tag])
                tgt = rename_cell(gen.tgt, tables[tag])
            target = built.get(root)
            if target is None:
                target = Generator(f"{root[0]}.{root[1]}", k, src, tgt)
                built[root] = target
                made.append(target)
            elif k > 0 and (target.src != src or target.tgt != tgt):
                raise PushoutError(f"{k}-generators glued into {target.name!r} have different boundaries")
            tables[tag][gen] = target
            (left if tag == "L" else right).setdefault(k, {})[name] = target.name

    S = Polygraph(made, dim=top)
    logger.debug(f"Pushout of {len(P)} and {len(Q)} generators over {len(R)}: {len(S)} generators")
    return S, PolyMap(P, S, left), PolyMap(Q, S, right)


def coproduct(P: Polygraph, Q: Polygraph) -> Tuple[Polygraph, PolyMap, PolyMap]:
    empty = Polygraph([], dim=0)
    return pushout(PolyMap(empty, P, {}), PolyMap(empty, Q, {}))


def copair(inl: PolyMap, inr: PolyMap, F: PolyMap, G: PolyMap) -> PolyMap:
    """
    The map out of a pushout (or coproduct) induced by a commuting cocone F, G.

    Raises:
        PushoutError: the cocone does not commute
    """
    S = inl.tgt_pol
    assign: Dict[int, Dict[str, str]] = {}
    for outer, inner in ((inl, F), (inr, G)):
        for k, table in outer.assign.items():
            for name, image in table.items():
                target = inner.image_name(k, name)
                current = assign.setdefault(k, {}).get(image)
                if current is not None and current != target:
                    raise PushoutError(f"cocone does not commute at {k}-generator {image!r}")
                assign[k][image] = target
    return PolyMap(S, F.tgt_pol, assign)


# ---------------------------------------------------------------------------
# Lifting
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _lift(P: Polygraph, u: Cell) -> Tuple[Polygraph, Cell, PolyMap]:
    body = u.body
    if isinstance(body, Point):
        gen = body.gen
        U = Polygraph([Generator(gen.name, 0)], dim=0)
        return U, generator_cell(U.get(0, gen.name)), PolyMap(U, P, {0: {gen.name: gen.name}})
    if isinstance(body, Identity):
        U, base, M = _lift(P, body.base)
        return U, identity(base), M
    if len(body.entries) == 1 and body.entries[0][0].is_trivial():
        return _lift_generator(P, body.entries[0][1])
    u1, i, u2 = _split(u)
    return _lift_composite(P, u1, i, u2)


def _split(u: Cell) -> Tuple[Cell, int, Cell]:
    """A decomposition u = u1 o_i u2 into strictly smaller cells."""
    n = u.dim
    if len(u.entries) > 1:
        return Cell(n, Whiskers(u.entries[:1])), n - 1, Cell(n, Whiskers(u.entries[1:]))
    ctx, gen = u.entries[0]
    for j in range(ctx.depth, 0, -1):
        left, right = ctx.levels[j - 1]
        if not left.is_identity:
            rest = left_divide(u, left, j - 1)
            if rest is None:
                raise LiftingError(f"cannot peel the level-{j} left whisker around {gen.name!r}")
            return left, j - 1, rest
        if not right.is_identity:
            rest = right_divide(u, right, j - 1)
            if rest is None:
                raise LiftingError(f"cannot peel the level-{j} right whisker around {gen.name!r}")
            return rest, j - 1, right
    raise LiftingError(f"cell around {gen.name!r} has nothing to split")


def _glue(U1: Polygraph, c1: Cell, U2: Polygraph, c2: Cell) -> Tuple[Polygraph, PolyMap, PolyMap]:
    """Pushout of U1 and U2 along the lifting of c1 in U1, matched with c2 in U2."""
    C, c, into_first = _lift(U1, c1)
    into_second = unique_morphism(Element(C, c), Element(U2, c2))
    if into_second is None:
        raise LiftingError("shared boundary shapes do not match")
    return pushout(into_first, into_second)


def _lift_generator(P: Polygraph, gen: Generator, lift: Optional[Lifter] = None) -> Tuple[Polygraph, Cell, PolyMap]:
    lift = lift or _lift
    m = gen.dim
    U_src, s, M_src = lift(P, gen.src)
    U_tgt, t, M_tgt = lift(P, gen.tgt)
    if m == 1:
        glued, inl, inr = coproduct(U_src, U_tgt)
    else:
        S, s_low, S_src = lift(U_src, boundary(s, MINUS, m - 2))
        T, t_low, T_src = lift(U_src, boundary(s, PLUS, m - 2))
        S_tgt = unique_morphism(Element(S, s_low), Element(U_tgt, boundary(t, MINUS, m - 2)))
        T_tgt = unique_morphism(Element(T, t_low), Element(U_tgt, boundary(t, PLUS, m - 2)))
        if S_tgt is None or T_tgt is None:
            raise LiftingError(f"boundaries of {gen.name!r} are not parallel")
        both, j_S, j_T = coproduct(S, T)
        glued, inl, inr = pushout(copair(j_S, j_T, S_src, T_src), copair(j_S, j_T, S_tgt, T_tgt))
    top = Generator("top", m, apply_free(inl, s), apply_free(inr, t))
    U = glued.with_generators([top], dim=m)
    M = copair(inl, inr, M_src, M_tgt)
    assign = {k: dict(v) for k, v in M.assign.items()}
    assign.setdefault(m, {})["top"] = gen.name
    return U, generator_cell(top), PolyMap(U, P, assign)


def _lift_composite(P: Polygraph, u1: Cell, i: int, u2: Cell) -> Tuple[Polygraph, Cell, PolyMap]:
    U1, a, M1 = _lift(P, u1)
    U2, b, M2 = _lift(P, u2)
    glued, inl, inr = _glue(U1, boundary(a, PLUS, i), U2, boundary(b, MINUS, i))
    cell = compose(apply_free(inl, a), i, apply_free(inr, b))
    return glued, cell, copair(inl, inr, M1, M2)


def polyplex_lift(e: Element) -> PolyplexLifting:
    """
    The polyplex lifting of an element.

    Identities reuse the shape of their base, generators are adjoined to the
    pushout of their lifted boundaries, and composites glue the liftings of
    their factors along the lifting of the shared boundary.

    Raises:
        LiftingError: the element's cell is not well formed over its polygraph
    """
    U, cell, M = _lift(e.pol, e.cell)
    lifting = _relabelled(U, cell, M)
    logger.debug(f"Lifted a {e.cell.dim}-cell to a shape with {lifting.weight} generators")
    return lifting


def _lift_last(P: Polygraph, u: Cell) -> Tuple[Polygraph, Cell, PolyMap]:
    """Like _lift, but a composite of several entries is split before its last entry."""
    body = u.body
    if isinstance(body, Identity):
        U, base, M = _lift_last(P, body.base)
        return U, identity(base), M
    if len(u.entries) < 2:
        return _lift(P, u)
    n = u.dim
    return _lift_composite(P, Cell(n, Whiskers(u.entries[:-1])), n - 1, Cell(n, Whiskers(u.entries[-1:])))


def split_lift(e: Element) -> PolyplexLifting:
    """
    A lifting of e assembled along other decompositions than polyplex_lift uses.

    Composites are split before their last entry instead of after their first,
    and a generator is glued from boundaries lifted that way. The result is
    isomorphic to polyplex_lift(e) whenever liftings are well defined.
    """
    entries = e.cell.entries
    if len(entries) == 1 and entries[0][0].is_trivial():
        U, cell, M = _lift_generator(e.pol, entries[0][1], lift=_lift_last)
    else:
        U, cell, M = _lift_last(e.pol, e.cell)
    return _relabelled(U, cell, M)


def _relabelled(U: Polygraph, cell: Cell, M: PolyMap) -> PolyplexLifting:
    canonical, relabel = canonical_element(Element(U, cell))
    return PolyplexLifting(canonical, compose_polymaps(M, inverse(relabel)))


# ---------------------------------------------------------------------------
# Canonical forms and isomorphisms
# ---------------------------------------------------------------------------

def _occurrence_order(u: Cell) -> List[Generator]:
    order: List[Generator] = []
    seen = set()

    def visit_gen(gen: Generator) -> None:
        if gen in seen:
            return
        seen.add(gen)
        if gen.dim > 0:
            visit_cell(gen.src)
            visit_cell(gen.tgt)
        order.append(gen)

    def visit_cell(cell: Cell) -> None:
        body = cell.body
        if isinstance(body, Point):
            visit_gen(body.gen)
        elif isinstance(body, Identity):
            visit_cell(body.base)
        else:
            for ctx, gen in body.entries:
                for left, _ in ctx.levels:
                    visit_cell(left)
                visit_gen(gen)
                for _, right in ctx.levels:
                    visit_cell(right)

    visit_cell(u)
    return order


def canonical_element(e: Element) -> Tuple[Element, PolyMap]:
    """
    Relabel an element by first occurrence along its normal form.

    Two principal elements are isomorphic exactly when their canonical
    elements are equal.

    Returns:
        (canonical element, isomorphism e.pol -> canonical polygraph)
    """
    order = _occurrence_order(e.cell)
    reached = set(order)
    order += [g for g in e.pol.generators() if g not in reached]
    counters: Dict[int, int] = {}
    names: Dict[Generator, str] = {}
    for gen in order:
        n = counters.get(gen.dim, 0)
        counters[gen.dim] = n + 1
        names[gen] = f"g{gen.dim}_{n}"
    table: Dict[Generator, Generator] = {}
    for gen in sorted(order, key=lambda g: g.dim):
        if gen.dim == 0:
            table[gen] = Generator(names[gen], 0)
        else:
            table[gen] = Generator(names[gen], gen.dim, rename_cell(gen.src, table), rename_cell(gen.tgt, table))
    pol = Polygraph(table.values(), dim=e.pol.dim)
    relabel = PolyMap(e.pol, pol, {k: {g.name: names[g] for g in e.pol.generators(k)} for k in range(e.pol.dim + 1)})
    return Element(pol, rename_cell(e.cell, table)), relabel


def element_iso(L1: PolyplexLifting, L2: PolyplexLifting) -> PolyMap:
    """
    The isomorphism theta between two liftings of one element, with L2.map o theta = L1.map.

    Raises:
        LiftingError: the liftings are not liftings of the same element
    """
    if L1.map.tgt_pol != L2.map.tgt_pol or apply_free(L1.map, L1.cell) != apply_free(L2.map, L2.cell):
        raise LiftingError("precondition violated: liftings of different elements")
    theta = unique_morphism(L1.shape, L2.shape)
    back = unique_morphism(L2.shape, L1.shape)
    if theta is None or back is None or not is_iso(theta):
        raise LiftingError("no isomorphism between the two liftings")
    if compose_polymaps(L2.map, theta) != L1.map:
        raise LiftingError("isomorphism does not commute with the lifting maps")
    return theta


def is_polyplex(e: Element) -> bool:
    return is_iso(polyplex_lift(e).map)


def is_generic(P: Polygraph, u: Cell) -> bool:
    """Whether the globe map classifying u is generic, i.e. (P, u) is a polyplex."""
    return is_polyplex(Element(P, u))


def measure_key(P: Polygraph, gen: Generator) -> str:
    return f"{gen.name}@{gen.dim}" if len(P.dims_of(gen.name)) > 1 else gen.name


def polyplex_measure(e: Element) -> Dict[str, int]:
    """Multiplicity of every generator of e.pol in the polyplex lifting of e.cell."""
    lifting = polyplex_lift(e)
    gens = e.pol.generators()
    index = {g.key: n for n, g in enumerate(gens)}
    hits = [index[(k, lifting.map.image_name(k, name))]
            for k in range(lifting.pol.dim + 1) for name in lifting.pol.names(k)]
    counts = np.bincount(np.asarray(hits, dtype=np.int64), minlength=len(gens))
    return {measure_key(e.pol, gens[n]): int(c) for n, c in enumerate(counts) if c > 0}


# ---------------------------------------------------------------------------
# Globes
# ---------------------------------------------------------------------------

def build_Dn(n: int) -> Tuple[Polygraph, Cell]:
    """The n-globe: s_k, t_k for k < n and a top generator d_n."""
    if n < 0:
        raise PrecatError("globe dimension must be non-negative")
    if n == 0:
        top = Generator("d0", 0)
        return Polygraph([top], dim=0), generator_cell(top)
    gens: List[Generator] = []
    src: Optional[Generator] = None
    tgt: Optional[Generator] = None
    for k in range(n):
        if k == 0:
            s, t = Generator("s0", 0), Generator("t0", 0)
        else:
            s = Generator(f"s{k}", k, generator_cell(src), generator_cell(tgt))
            t = Generator(f"t{k}", k, generator_cell(src), generator_cell(tgt))
        gens += [s, t]
        src, tgt = s, t
    top = Generator(f"d{n}", n, generator_cell(src), generator_cell(tgt))
    return Polygraph(gens + [top], dim=n), generator_cell(top)


def build_Dkl(k: int, l: int) -> Tuple[Polygraph, Cell]:
    """The free precategory on a k-cell and an l-cell composable along dimension min(k, l) - 1."""
    if k < 1 or l < 1:
        raise PrecatError("composable globes need dimensions of at least 1")
    i = min(k, l) - 1
    first, u1 = build_Dn(k)
    second, u2 = build_Dn(l)
    glue, g = build_Dn(i)
    into_first = unique_morphism(Element(glue, g), Element(first, boundary(u1, PLUS, i)))
    into_second = unique_morphism(Element(glue, g), Element(second, boundary(u2, MINUS, i)))
    S, inl, inr = pushout(into_first, into_second)
    cell = compose(apply_free(inl, u1), i, apply_free(inr, u2))
    canonical, _ = canonical_element(Element(S, cell))
    return canonical.pol, canonical.cell
