"""
Morphisms of polygraphs and the free functor on cells.

This module provides:
- PolyMap and its algebra (identity, composition, inverse, iso test)
- check_polymap (report-based validation) and apply_free
- is_mono with a collision witness
- Conduché factorization: conduche_factorize, lift_identity,
  enumerate_splittings, left_divide, right_divide
- Structural matching of cells and the backtracking search all_polymaps
- random_polymap for seeded test data
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Set, Tuple

import numpy as np

from precat.cells import (
    MINUS, PLUS, Cell, Context, Generator, Identity, Point, Polygraph, PrecatError, Whiskers,
)
from precat.composition import (
    CompositionError, _compose, boundary, compose, identity,
)

logger = logging.getLogger(__name__)

Assignment = Dict[int, Dict[str, str]]


class PolyMapError(PrecatError):
    """Exception raised when a morphism cannot be applied to a cell."""
    pass


class ConducheError(PrecatError):
    """Exception raised when a factorization precondition does not hold."""
    pass


@dataclass(frozen=True, eq=False)
class PolyMap:
    """A morphism of polygraphs: a dimensionwise assignment of generator names."""
    src_pol: Polygraph
    tgt_pol: Polygraph
    assign: Mapping[int, Mapping[str, str]] = field(default_factory=dict)

    def __post_init__(self):
        normalized = {int(k): dict(v) for k, v in self.assign.items() if v}
        object.__setattr__(self, "assign", normalized)

    def image_name(self, dim: int, name: str) -> Optional[str]:
        return self.assign.get(dim, {}).get(name)

    def image(self, gen: Generator) -> Generator:
        name = self.image_name(gen.dim, gen.name)
        if name is None:
            raise PolyMapError(f"{gen.dim}-generator {gen.name!r} has no image")
        if not self.tgt_pol.has(gen.dim, name):
            raise PolyMapError(f"image {name!r} of {gen.name!r} is not a {gen.dim}-generator of the target")
        return self.tgt_pol.get(gen.dim, name)

    def _items(self) -> frozenset:
        return frozenset((k, n, m) for k, table in self.assign.items() for n, m in table.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMap):
            return NotImplemented
        return (self.src_pol == other.src_pol and self.tgt_pol == other.tgt_pol
                and self._items() == other._items())

    def __hash__(self) -> int:
        return hash((self.src_pol, self.tgt_pol, self._items()))

    def __repr__(self) -> str:
        pairs = ", ".join(f"{n}->{m}" for k in sorted(self.assign) for n, m in sorted(self.assign[k].items()))
        return f"PolyMap({pairs})"


def identity_polymap(P: Polygraph) -> PolyMap:
    return PolyMap(P, P, {k: {n: n for n in P.names(k)} for k in range(P.dim + 1)})


def compose_polymaps(G: PolyMap, F: PolyMap) -> PolyMap:
    """The composite G after F."""
    assign: Assignment = {}
    for k, table in F.assign.items():
        for name, image in table.items():
            target = G.image_name(k, image)
            if target is None:
                raise PolyMapError(f"{k}-generator {image!r} has no image under the second map")
            assign.setdefault(k, {})[name] = target
    return PolyMap(F.src_pol, G.tgt_pol, assign)


def is_iso(F: PolyMap) -> bool:
    if len(F.src_pol) != len(F.tgt_pol):
        return False
    for k in range(F.src_pol.dim + 1):
        names = F.src_pol.names(k)
        images = {F.image_name(k, n) for n in names}
        if None in images or len(images) != len(names) or images != set(F.tgt_pol.names(k)):
            return False
    return True


def inverse(F: PolyMap) -> PolyMap:
    if not is_iso(F):
        raise PolyMapError("map is not an isomorphism")
    return PolyMap(F.tgt_pol, F.src_pol, {k: {m: n for n, m in t.items()} for k, t in F.assign.items()})


# ---------------------------------------------------------------------------
# Free application
# ---------------------------------------------------------------------------

def apply_free(F: PolyMap, u: Cell) -> Cell:
    """
    Image of a cell under the free functor of F.

    Generators go to generators of the same dimension, so the image keeps the
    shape of the normal form: contexts are mapped slot by slot.

    Raises:
        PolyMapError: u is not over the source polygraph, F is undefined on it,
            or F does not respect the boundaries of a generator of u
    """
    memo: Dict[Cell, Cell] = {}
    checked: Set[Generator] = set()

    def image_gen(gen: Generator) -> Generator:
        _check_source(F, gen)
        target = F.image(gen)
        if gen.dim > 0 and gen not in checked:
            if image(gen.src) != target.src or image(gen.tgt) != target.tgt:
                raise PolyMapError(f"map does not respect the boundaries of {gen.name!r}")
            checked.add(gen)
        return target

    def image(cell: Cell) -> Cell:
        cached = memo.get(cell)
        if cached is not None:
            return cached
        body = cell.body
        if isinstance(body, Point):
            result = Cell(0, Point(image_gen(body.gen)))
        elif isinstance(body, Identity):
            result = identity(image(body.base))
        else:
            entries = []
            for ctx, gen in body.entries:
                levels = tuple((image(left), image(right)) for left, right in ctx.levels)
                entries.append((Context(levels), image_gen(gen)))
            result = Cell(cell.dim, Whiskers(tuple(entries)))
        memo[cell] = result
        return result

    return image(u)


def _check_source(F: PolyMap, gen: Generator) -> None:
    if gen not in F.src_pol:
        raise PolyMapError(f"cell is not over the source polygraph ({gen.dim}-generator {gen.name!r})")


def rename_cell(u: Cell, table: Mapping[Generator, Generator]) -> Cell:
    """Structural image of u under a generator relabelling whose targets carry the relabelled boundaries."""
    body = u.body
    if isinstance(body, Point):
        return Cell(0, Point(table[body.gen]))
    if isinstance(body, Identity):
        return identity(rename_cell(body.base, table))
    entries = []
    for ctx, gen in body.entries:
        levels = tuple((rename_cell(l, table), rename_cell(r, table)) for l, r in ctx.levels)
        entries.append((Context(levels), table[gen]))
    return Cell(u.dim, Whiskers(tuple(entries)))


def check_polymap(F: PolyMap) -> Dict[str, Any]:
    """
    Validate a morphism of polygraphs.

    Returns:
        Dict with "valid" and "errors"; kinds are dangling-assignment,
        unknown-image, unknown-source and boundary-mismatch
    """
    report: Dict[str, Any] = {"valid": False, "errors": [], "warnings": []}
    errors = report["errors"]
    for k, table in sorted(F.assign.items()):
        for name in sorted(table):
            if not F.src_pol.has(k, name):
                errors.append({"kind": "unknown-source", "dim": k, "name": name,
                               "message": f"{name!r} is not a {k}-generator of the source"})
    undefined = set()
    for gen in F.src_pol.generators():
        image = F.image_name(gen.dim, gen.name)
        if image is None:
            undefined.add(gen.key)
            errors.append({"kind": "dangling-assignment", "dim": gen.dim, "name": gen.name,
                           "message": f"{gen.dim}-generator {gen.name!r} has no image"})
        elif not F.tgt_pol.has(gen.dim, image):
            undefined.add(gen.key)
            errors.append({"kind": "unknown-image", "dim": gen.dim, "name": gen.name,
                           "message": f"image {image!r} of {gen.name!r} is not a {gen.dim}-generator of the target"})
    for gen in F.src_pol.generators():
        if gen.dim == 0 or gen.key in undefined:
            continue
        target = F.tgt_pol.get(gen.dim, F.image_name(gen.dim, gen.name))
        try:
            ok = apply_free(F, gen.src) == target.src and apply_free(F, gen.tgt) == target.tgt
        except PolyMapError:
            continue
        if not ok:
            errors.append({"kind": "boundary-mismatch", "dim": gen.dim, "name": gen.name,
                           "message": f"boundaries of {gen.name!r} do not map to those of {target.name!r}"})
    report["valid"] = not errors
    return report


class MonoCheck(NamedTuple):
    mono: bool
    witness: Optional[Tuple[int, str, str]]
    collisions: List[Tuple[int, str, str]]

    def __bool__(self) -> bool:
        return self.mono


def is_mono(F: PolyMap) -> MonoCheck:
    """Injectivity of every dimensionwise assignment; collisions are (dim, name, name) triples."""
    collisions = []
    for k in range(F.src_pol.dim + 1):
        seen: Dict[str, str] = {}
        for name in F.src_pol.names(k):
            image = F.image_name(k, name)
            if image is None:
                continue
            if image in seen:
                collisions.append((k, seen[image], name))
            else:
                seen[image] = name
    return MonoCheck(not collisions, collisions[0] if collisions else None, collisions)


# ---------------------------------------------------------------------------
# Splittings and division
# ---------------------------------------------------------------------------

def _prefix(u: Cell, k: int) -> Cell:
    return Cell(u.dim, Whiskers(u.entries[:k]))


def _suffix(u: Cell, k: int) -> Cell:
    return Cell(u.dim, Whiskers(u.entries[k:]))


def _ldiv(w: Cell, v: Cell, i: int) -> Optional[Cell]:
    if w.dim == i + 1:
        k = len(v.entries)
        if w.is_identity or w.entries[:k] != v.entries:
            return None
        if len(w.entries) == k:
            return identity(boundary(w, PLUS, i))
        return _suffix(w, k)
    if w.is_identity:
        base = _ldiv(w.body.base, v, i)
        return None if base is None else identity(base)
    entries = []
    for ctx, gen in w.entries:
        levels = list(ctx.levels)
        for j in range(i + 1, w.dim):
            left, right = ctx.levels[j - 1]
            new_left = _ldiv(left, v, i)
            new_right = _ldiv(right, v, i) if j > i + 1 else right
            if new_left is None or new_right is None:
                return None
            levels[j - 1] = (new_left, new_right)
        entries.append((Context(tuple(levels)), gen))
    return Cell(w.dim, Whiskers(tuple(entries)))


def _rdiv(w: Cell, v: Cell, i: int) -> Optional[Cell]:
    if w.dim == i + 1:
        k = len(v.entries)
        if w.is_identity or len(w.entries) < k or w.entries[len(w.entries) - k:] != v.entries:
            return None
        if len(w.entries) == k:
            return identity(boundary(w, MINUS, i))
        return _prefix(w, len(w.entries) - k)
    if w.is_identity:
        base = _rdiv(w.body.base, v, i)
        return None if base is None else identity(base)
    entries = []
    for ctx, gen in w.entries:
        levels = list(ctx.levels)
        for j in range(i + 1, w.dim):
            left, right = ctx.levels[j - 1]
            new_right = _rdiv(right, v, i)
            new_left = _rdiv(left, v, i) if j > i + 1 else left
            if new_left is None or new_right is None:
                return None
            levels[j - 1] = (new_left, new_right)
        entries.append((Context(tuple(levels)), gen))
    return Cell(w.dim, Whiskers(tuple(entries)))


def left_divide(w: Cell, v: Cell, i: int) -> Optional[Cell]:
    """The cell w2 with v o_i w2 = w, where dim v = i + 1, or None."""
    if v.dim != i + 1 or w.dim < i + 1:
        raise CompositionError(f"cannot divide a {w.dim}-cell by a {v.dim}-cell along ∘_{i}")
    if v.is_identity:
        return w if boundary(w, MINUS, i) == v.body.base else None
    quotient = _ldiv(w, v, i)
    if quotient is None or boundary(quotient, MINUS, i) != boundary(v, PLUS, i):
        return None
    return quotient if _compose(v, i, quotient) == w else None


def right_divide(w: Cell, v: Cell, i: int) -> Optional[Cell]:
    """The cell w1 with w1 o_i v = w, where dim v = i + 1, or None."""
    if v.dim != i + 1 or w.dim < i + 1:
        raise CompositionError(f"cannot divide a {w.dim}-cell by a {v.dim}-cell along ∘_{i}")
    if v.is_identity:
        return w if boundary(w, PLUS, i) == v.body.base else None
    quotient = _rdiv(w, v, i)
    if quotient is None or boundary(quotient, PLUS, i) != boundary(v, MINUS, i):
        return None
    return quotient if _compose(quotient, i, v) == w else None


def _outer_slot(w: Cell, i: int, side: int) -> Cell:
    """The level-(i+1) slot on one side of the first (side 0) or last (side 1) entry."""
    while w.is_identity and w.dim > i + 1:
        w = w.body.base
    if w.dim == i + 1:
        return w
    ctx, _ = w.entries[0] if side == 0 else w.entries[-1]
    return ctx.left(i + 1) if side == 0 else ctx.right(i + 1)


def enumerate_splittings(w: Cell, i: int) -> List[Tuple[Cell, Cell]]:
    """
    All pairs (v1, v2) with compose(v1, i, v2) = w.

    For i = dim(w) - 1 these are the cuts of the whisker list; for lower i they
    are the whiskerings by an (i+1)-cell on either side.
    """
    n = w.dim
    if i < 0 or i > n - 1:
        raise CompositionError(f"no ∘_{i} splittings of a {n}-cell")
    if i == n - 1:
        if w.is_identity:
            return [(w, w)]
        cuts = [(identity(boundary(w, MINUS, i)), w)]
        cuts += [(_prefix(w, p), _suffix(w, p)) for p in range(1, len(w.entries))]
        cuts.append((w, identity(boundary(w, PLUS, i))))
        return cuts
    found: List[Tuple[Cell, Cell]] = []
    slot = _outer_slot(w, i, 0)
    candidates = [identity(boundary(w, MINUS, i))]
    if not slot.is_identity:
        candidates += [_prefix(slot, p) for p in range(1, len(slot.entries) + 1)]
    for v1 in candidates:
        w2 = left_divide(w, v1, i)
        if w2 is not None:
            found.append((v1, w2))
    slot = _outer_slot(w, i, 1)
    candidates = [identity(boundary(w, PLUS, i))]
    if not slot.is_identity:
        candidates += [_suffix(slot, p) for p in range(len(slot.entries))]
    for v2 in candidates:
        w1 = right_divide(w, v2, i)
        if w1 is not None and (w1, v2) not in found:
            found.append((w1, v2))
    return found


# ---------------------------------------------------------------------------
# Conduché factorization
# ---------------------------------------------------------------------------

def _factor(F: PolyMap, u: Cell, v1: Cell, v2: Cell, i: int) -> Tuple[Cell, Cell]:
    n = u.dim
    if v1.dim == v2.dim:
        if u.is_identity:
            return u, u
        if v1.is_identity:
            return identity(boundary(u, MINUS, i)), u
        if v2.is_identity:
            return u, identity(boundary(u, PLUS, i))
        k = len(v1.entries)
        return _prefix(u, k), _suffix(u, k)
    if v1.dim < v2.dim:
        if v1.is_identity:
            return identity(boundary(u, MINUS, i)), u
        if u.is_identity:
            if not v2.is_identity:
                raise ConducheError("precondition violated: an identity cannot map onto a whiskered cell")
            first, rest = _factor(F, u.body.base, v1, v2.body.base, i)
            return first, identity(rest)
        if len(u.entries) != len(v2.entries):
            raise ConducheError("precondition violated: whisker lists of different lengths")
        firsts = set()
        entries = []
        for (ctx, gen), (vctx, _) in zip(u.entries, v2.entries):
            levels = list(ctx.levels)
            for j in range(i + 1, n):
                left, right = ctx.levels[j - 1]
                vleft, vright = vctx.levels[j - 1]
                first, new_left = _factor(F, left, v1, vleft, i)
                firsts.add(first)
                new_right = right
                if j > i + 1:
                    first, new_right = _factor(F, right, v1, vright, i)
                    firsts.add(first)
                levels[j - 1] = (new_left, new_right)
            entries.append((Context(tuple(levels)), gen))
        if len(firsts) != 1:
            raise ConducheError("precondition violated: no common left factor")
        return firsts.pop(), Cell(n, Whiskers(tuple(entries)))
    if v2.is_identity:
        return u, identity(boundary(u, PLUS, i))
    if u.is_identity:
        if not v1.is_identity:
            raise ConducheError("precondition violated: an identity cannot map onto a whiskered cell")
        rest, last = _factor(F, u.body.base, v1.body.base, v2, i)
        return identity(rest), last
    if len(u.entries) != len(v1.entries):
        raise ConducheError("precondition violated: whisker lists of different lengths")
    lasts = set()
    entries = []
    for (ctx, gen), (vctx, _) in zip(u.entries, v1.entries):
        levels = list(ctx.levels)
        for j in range(i + 1, n):
            left, right = ctx.levels[j - 1]
            vleft, vright = vctx.levels[j - 1]
            new_right, last = _factor(F, right, vright, v2, i)
            lasts.add(last)
            new_left = left
            if j > i + 1:
                new_left, last = _factor(F, left, vleft, v2, i)
                lasts.add(last)
            levels[j - 1] = (new_left, new_right)
        entries.append((Context(tuple(levels)), gen))
    if len(lasts) != 1:
        raise ConducheError("precondition violated: no common right factor")
    return Cell(n, Whiskers(tuple(entries))), lasts.pop()


def conduche_factorize(F: PolyMap, u: Cell, v1: Cell, v2: Cell, i: int) -> Tuple[Cell, Cell]:
    """
    The unique (u1, u2) with F(u1) = v1, F(u2) = v2 and u1 o_i u2 = u.

    Raises:
        ConducheError: F(u) is not v1 o_i v2
    """
    try:
        target = compose(v1, i, v2)
    except CompositionError as e:
        raise ConducheError(f"precondition violated: {e}") from e
    if apply_free(F, u) != target:
        raise ConducheError("precondition violated: the image of u is not v1 ∘_i v2")
    u1, u2 = _factor(F, u, v1, v2, i)
    if apply_free(F, u1) != v1 or apply_free(F, u2) != v2 or compose(u1, i, u2) != u:
        raise ConducheError("factorization does not reproduce the given splitting")
    return u1, u2


def lift_identity(F: PolyMap, u: Cell, v: Cell) -> Cell:
    """The unique u' with u = identity(u') and F(u') = v."""
    if apply_free(F, u) != identity(v):
        raise ConducheError("precondition violated: the image of u is not the identity of v")
    if not u.is_identity:
        raise ConducheError("precondition violated: u is not an identity")
    return u.body.base


# ---------------------------------------------------------------------------
# Structural matching and morphism search
# ---------------------------------------------------------------------------

def match_generator(g: Generator, h: Generator, assign: Assignment) -> bool:
    """Extend assign with g -> h and the matching of their boundaries; mutates assign."""
    if g.dim != h.dim:
        return False
    current = assign.get(g.dim, {}).get(g.name)
    if current is not None:
        return current == h.name
    assign.setdefault(g.dim, {})[g.name] = h.name
    if g.dim == 0:
        return True
    return match_cells(g.src, h.src, assign) and match_cells(g.tgt, h.tgt, assign)


def match_cells(a: Cell, b: Cell, assign: Assignment) -> bool:
    """Parallel traversal of two normal forms; mutates assign."""
    if a.dim != b.dim or type(a.body) is not type(b.body):
        return False
    if isinstance(a.body, Point):
        return match_generator(a.body.gen, b.body.gen, assign)
    if isinstance(a.body, Identity):
        return match_cells(a.body.base, b.body.base, assign)
    if len(a.entries) != len(b.entries):
        return False
    for (ctx, gen), (other_ctx, other_gen) in zip(a.entries, b.entries):
        if not match_generator(gen, other_gen, assign):
            return False
        for (left, right), (other_left, other_right) in zip(ctx.levels, other_ctx.levels):
            if not (match_cells(left, other_left, assign) and match_cells(right, other_right, assign)):
                return False
    return True


def _copy(assign: Assignment) -> Assignment:
    return {k: dict(v) for k, v in assign.items()}


def all_polymaps(U: Polygraph, P: Polygraph, partial: Optional[Assignment] = None,
                 limit: Optional[int] = None) -> List[PolyMap]:
    """
    Every morphism U -> P extending a partial assignment.

    Generators are tried from the top dimension down; choosing the image of a
    generator forces the images of everything in its boundary.
    """
    order = sorted(U.generators(), key=lambda g: (-g.dim, g.name))
    found: List[PolyMap] = []

    def search(index: int, assign: Assignment) -> None:
        if limit is not None and len(found) >= limit:
            return
        while index < len(order) and order[index].name in assign.get(order[index].dim, {}):
            index += 1
        if index == len(order):
            found.append(PolyMap(U, P, assign))
            return
        gen = order[index]
        for candidate in P.generators(gen.dim):
            extended = _copy(assign)
            if match_generator(gen, candidate, extended):
                search(index + 1, extended)

    start = _copy(partial or {})
    search(0, start)
    return found


# ---------------------------------------------------------------------------
# Random morphisms
# ---------------------------------------------------------------------------

def random_polymap(P: Polygraph, seed: Any, merge_probability: float = 0.4,
                   extra_probability: float = 0.3) -> PolyMap:
    """
    A random valid morphism out of P.

    Parallel generators (after mapping lower dimensions) are merged at random,
    and unrelated target generators are occasionally added.
    """
    rng = np.random.default_rng(seed)
    table: Dict[Generator, Generator] = {}
    targets: List[Generator] = []
    assign: Assignment = {}
    for k in range(P.dim + 1):
        groups: Dict[Any, List[Generator]] = {}
        for gen in P.generators(k):
            key = None if k == 0 else (rename_cell(gen.src, table), rename_cell(gen.tgt, table))
            groups.setdefault(key, []).append(gen)
        count = 0
        for key, members in groups.items():
            made: List[Generator] = []
            for gen in members:
                if made and rng.random() < merge_probability:
                    image = made[int(rng.integers(len(made)))]
                else:
                    src, tgt = (None, None) if key is None else key
                    image = Generator(f"q{k}_{count}", k, src, tgt)
                    count += 1
                    made.append(image)
                    targets.append(image)
                table[gen] = image
                assign.setdefault(k, {})[gen.name] = image.name
            if rng.random() < extra_probability:
                src, tgt = (None, None) if key is None else key
                targets.append(Generator(f"q{k}_{count}", k, src, tgt))
                count += 1
    return PolyMap(P, Polygraph(targets, dim=P.dim), assign)
