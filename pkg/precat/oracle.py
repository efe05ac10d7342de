"""
Expression oracle for free precategories.

This module provides:
- Expression trees (Gen, Id, Comp), their text grammar and JSON form
- to_expr / evaluate_expr between expressions and normal forms
- Oracle: normalization of expressions by an oriented rewrite system
- random_expr / random_equal_pair: seeded test data

Grammar:
    E ::= gen NAME | gen NAME@k | id(E) | comp_i(E, E)

Rewrite rules, tried in this order at the root of a term whose children are
already normal (innermost-leftmost):
    R1   1_a o_i v -> v                    when dim 1_a <= dim v
    R1'  u o_i 1_b -> u                    when dim 1_b <= dim u
    R2   1_a o_i v -> 1_(a o_i v)          when dim 1_a > dim v
    R2'  u o_i 1_b -> 1_(u o_i b)          when dim 1_b > dim u
    R3   (u o_i v) o_i w -> u o_i (v o_i w)
    R4   u o_i (v o_j w) -> (u o_i v) o_j (u o_i w)      for i < j
    R4'  (v o_j w) o_i u -> (v o_i u) o_j (w o_i u)      for i < j
"""

import logging
import re
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Optional, Set, Tuple, Union

import numpy as np

import config
from precat.cells import (
    MINUS, PLUS, BoundaryError, BudgetExhausted, Cell, Context, Generator, Identity, InputError,
    Point, Polygraph, PrecatError, Whiskers, check_sign,
)
from precat.composition import (
    CompositionError, boundary, compose, enumerate_cells, generator_cell, identity,
)

logger = logging.getLogger(__name__)


class ExprSyntaxError(InputError):
    """Exception raised for malformed expression text; carries the character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class TypingError(PrecatError):
    """Exception raised for ill-typed expressions; carries the offending subterm."""

    def __init__(self, message: str, subterm: "Expr"):
        super().__init__(f"{message} in {to_text(subterm)}")
        self.subterm = subterm


def _cached_hash(obj, fields: Tuple) -> int:
    cached = obj.__dict__.get("_hash")
    if cached is None:
        cached = hash(fields)
        object.__setattr__(obj, "_hash", cached)
    return cached


@dataclass(frozen=True)
class Gen:
    name: str
    dim: Optional[int] = None

    def __hash__(self) -> int:
        return _cached_hash(self, ("gen", self.name, self.dim))


@dataclass(frozen=True)
class Id:
    arg: "Expr"

    def __hash__(self) -> int:
        return _cached_hash(self, ("id", self.arg))


@dataclass(frozen=True)
class Comp:
    index: int
    left: "Expr"
    right: "Expr"

    def __hash__(self) -> int:
        return _cached_hash(self, ("comp", self.index, self.left, self.right))


Expr = Union[Gen, Id, Comp]


# ---------------------------------------------------------------------------
# Text and JSON forms
# ---------------------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_*][A-Za-z0-9_'.*]*")
_QUALIFIER = re.compile(r"@(\d+)")
_COMP = re.compile(r"comp_(\d+)")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _expect(self, char: str) -> None:
        self._skip()
        if self.pos >= len(self.text) or self.text[self.pos] != char:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise ExprSyntaxError(f"expected {char!r}, found {found!r}", self.pos)
        self.pos += 1

    def _keyword(self, word: str) -> bool:
        end = self.pos + len(word)
        if self.text.startswith(word, self.pos) and (end == len(self.text) or not (
                self.text[end].isalnum() or self.text[end] in "_'.*")):
            self.pos = end
            return True
        return False

    def parse(self) -> Expr:
        expr = self.expr()
        self._skip()
        if self.pos != len(self.text):
            raise ExprSyntaxError("unexpected trailing input", self.pos)
        return expr

    def expr(self) -> Expr:
        self._skip()
        start = self.pos
        match = _COMP.match(self.text, self.pos)
        if match:
            self.pos = match.end()
            index = int(match.group(1))
            self._expect("(")
            args = [self.expr()]
            self._skip()
            while self.pos < len(self.text) and self.text[self.pos] == ",":
                self.pos += 1
                args.append(self.expr())
                self._skip()
            self._expect(")")
            if len(args) != 2:
                raise ExprSyntaxError(f"comp_{index} expects 2 arguments, got {len(args)}", start)
            return Comp(index, args[0], args[1])
        if self._keyword("id"):
            self._expect("(")
            arg = self.expr()
            self._expect(")")
            return Id(arg)
        if self._keyword("gen"):
            self._skip()
            match = _NAME.match(self.text, self.pos)
            if not match:
                raise ExprSyntaxError("expected a generator name", self.pos)
            self.pos = match.end()
            qualifier = _QUALIFIER.match(self.text, self.pos)
            dim = None
            if qualifier:
                self.pos = qualifier.end()
                dim = int(qualifier.group(1))
            return Gen(match.group(0), dim)
        raise ExprSyntaxError("expected 'gen', 'id' or 'comp_i'", start)


def is_name(text: str) -> bool:
    """Whether text can be written after `gen` in expression text."""
    return _NAME.fullmatch(text) is not None


def parse(text: str) -> Expr:
    """Parse expression text; raises ExprSyntaxError with a position."""
    return _Parser(text).parse()


def to_text(e: Expr) -> str:
    if isinstance(e, Gen):
        return f"gen {e.name}" if e.dim is None else f"gen {e.name}@{e.dim}"
    if isinstance(e, Id):
        return f"id({to_text(e.arg)})"
    return f"comp_{e.index}({to_text(e.left)}, {to_text(e.right)})"


def expr_to_json(e: Expr) -> Dict[str, Any]:
    if isinstance(e, Gen):
        data: Dict[str, Any] = {"op": "gen", "name": e.name}
        if e.dim is not None:
            data["dim"] = e.dim
        return data
    if isinstance(e, Id):
        return {"op": "id", "arg": expr_to_json(e.arg)}
    return {"op": "comp", "dim": e.index, "args": [expr_to_json(e.left), expr_to_json(e.right)]}


def expr_from_json(data: Any) -> Expr:
    if isinstance(data, str):
        return parse(data)
    if not isinstance(data, dict) or "op" not in data:
        raise InputError(f"expression must be text or an object with an 'op' field, got {data!r}")
    op = data["op"]
    try:
        if op == "gen":
            name, dim = data["name"], data.get("dim")
            if not isinstance(name, str) or not is_name(name):
                raise InputError(f"generator name {name!r} cannot be written in expressions")
            if dim is not None and (not isinstance(dim, int) or isinstance(dim, bool) or dim < 0):
                raise InputError(f"generator dimension must be a natural number, got {dim!r}")
            return Gen(name, dim)
        if op == "id":
            return Id(expr_from_json(data["arg"]))
        if op == "comp":
            args = data["args"]
            if len(args) != 2:
                raise InputError(f"comp expects 2 arguments, got {len(args)}")
            return Comp(int(data["dim"]), expr_from_json(args[0]), expr_from_json(args[1]))
    except KeyError as e:
        raise InputError(f"expression object lacks field {e}") from None
    raise InputError(f"unknown expression op {op!r}")


# ---------------------------------------------------------------------------
# Expressions of normal forms, and evaluation by composition
# ---------------------------------------------------------------------------

def _gen_expr(gen: Generator, qualify: Union[bool, Set[str]]) -> Gen:
    if qualify is True or (qualify and gen.name in qualify):
        return Gen(gen.name, gen.dim)
    return Gen(gen.name)


def to_expr(u: Cell, qualify: Union[bool, Set[str]] = False) -> Expr:
    """
    Expression of a normal form.

    Args:
        u: A cell
        qualify: True to qualify every generator with its dimension, or the set
            of names to qualify (the ambiguous names of the polygraph)
    """
    body = u.body
    if isinstance(body, Point):
        return _gen_expr(body.gen, qualify)
    if isinstance(body, Identity):
        return Id(to_expr(body.base, qualify))
    exprs = []
    for ctx, gen in body.entries:
        core: Expr = _gen_expr(gen, qualify)
        for j, (left, right) in enumerate(ctx.levels, start=1):
            if not left.is_identity:
                core = Comp(j - 1, to_expr(left, qualify), core)
            if not right.is_identity:
                core = Comp(j - 1, core, to_expr(right, qualify))
        exprs.append(core)
    result = exprs[-1]
    for expr in reversed(exprs[:-1]):
        result = Comp(u.dim - 1, expr, result)
    return result


def cell_text(P: Polygraph, u: Cell) -> str:
    return to_text(to_expr(u, P.ambiguous_names()))


def evaluate_expr(P: Polygraph, e: Expr) -> Cell:
    """Evaluate an expression by folding identity and compose over the tree."""
    if isinstance(e, Gen):
        return generator_cell(P.lookup(e.name, e.dim))
    if isinstance(e, Id):
        return identity(evaluate_expr(P, e.arg))
    return compose(evaluate_expr(P, e.left), e.index, evaluate_expr(P, e.right))


def _subterms(e: Expr) -> Iterable[Expr]:
    yield e
    if isinstance(e, Id):
        yield from _subterms(e.arg)
    elif isinstance(e, Comp):
        yield from _subterms(e.left)
        yield from _subterms(e.right)


def expr_size(e: Expr) -> int:
    return sum(1 for _ in _subterms(e))


# ---------------------------------------------------------------------------
# The oracle
# ---------------------------------------------------------------------------

class Oracle:
    """
    Normalizer of expressions over a fixed polygraph.

    Normal terms are read off into Cell values; identity slots of contexts are
    obtained by normalizing the symbolic boundary of the term they surround.
    """

    def __init__(self, P: Polygraph):
        self.P = P
        self._dims: Dict[Expr, int] = {}
        self._typed: Dict[Expr, int] = {}
        self._normal: Dict[Expr, Expr] = {}
        self._cells: Dict[Expr, Cell] = {}

    # -- typing --------------------------------------------------------------

    def resolve(self, e: Gen) -> Generator:
        return self.P.lookup(e.name, e.dim)

    def dim_of(self, e: Expr) -> int:
        cached = self._dims.get(e)
        if cached is not None:
            return cached
        if isinstance(e, Gen):
            result = self.resolve(e).dim
        elif isinstance(e, Id):
            result = self.dim_of(e.arg) + 1
        else:
            result = max(self.dim_of(e.left), self.dim_of(e.right))
        self._dims[e] = result
        return result

    def check(self, e: Expr) -> int:
        """Type-check e, returning its dimension; raises TypingError on the first bad subterm."""
        cached = self._typed.get(e)
        if cached is not None:
            return cached
        if isinstance(e, Gen):
            try:
                result = self.resolve(e).dim
            except InputError as err:
                raise TypingError(str(err), e) from None
        elif isinstance(e, Id):
            result = self.check(e.arg) + 1
        else:
            k, l = self.check(e.left), self.check(e.right)
            if e.index < 0 or e.index != min(k, l) - 1:
                if k == l:
                    raise TypingError(f"illegal composition: no ∘_{e.index} of two {k}-cells", e)
                raise TypingError(f"illegal composition: no ∘_{e.index} of a {k}-cell and a {l}-cell", e)
            left_target = boundary(self._norm(e.left), PLUS, e.index)
            right_source = boundary(self._norm(e.right), MINUS, e.index)
            if left_target != right_source:
                raise TypingError(f"not composable: {e.index}-boundaries differ", e)
            result = max(k, l)
        self._typed[e] = result
        return result

    # -- symbolic boundaries -------------------------------------------------

    def _face_expr(self, e: Expr, sign: str) -> Expr:
        if isinstance(e, Gen):
            gen = self.resolve(e)
            if gen.dim == 0:
                raise TypingError("a 0-cell has no boundary", e)
            return to_expr(gen.src if sign == MINUS else gen.tgt, qualify=True)
        if isinstance(e, Id):
            return e.arg
        k, l = self.dim_of(e.left), self.dim_of(e.right)
        if k == l:
            return self._face_expr(e.left if sign == MINUS else e.right, sign)
        if k < l:
            return Comp(e.index, e.left, self._face_expr(e.right, sign))
        return Comp(e.index, self._face_expr(e.left, sign), e.right)

    def boundary_expr(self, e: Expr, sign: str, d: int) -> Expr:
        """Expression of the d-dimensional source or target of e, by the source/target axiom."""
        check_sign(sign)
        current = e
        while self.dim_of(current) > d:
            current = self._face_expr(current, sign)
        return current

    # -- rewriting -----------------------------------------------------------

    def _local_rewrites(self, t: Expr, first_only: bool = False) -> List[Expr]:
        """Results of every oriented rule applicable at the root of t, in rule order."""
        if not isinstance(t, Comp):
            return []
        found: List[Expr] = []
        i, a, b = t.index, t.left, t.right
        da, db = self.dim_of(a), self.dim_of(b)
        if isinstance(a, Id) and da <= db:
            found.append(b)
        if isinstance(b, Id) and db <= da:
            found.append(a)
        if isinstance(a, Id) and da > db:
            found.append(Id(Comp(i, a.arg, b)))
        if isinstance(b, Id) and db > da:
            found.append(Id(Comp(i, a, b.arg)))
        if found and first_only:
            return found[:1]
        if isinstance(a, Comp) and a.index == i:
            found.append(Comp(i, a.left, Comp(i, a.right, b)))
        if isinstance(b, Comp) and b.index > i:
            found.append(Comp(b.index, Comp(i, a, b.left), Comp(i, a, b.right)))
        if isinstance(a, Comp) and a.index > i:
            found.append(Comp(a.index, Comp(i, a.left, b), Comp(i, a.right, b)))
        return found[:1] if first_only else found

    def normal_term(self, e: Expr) -> Expr:
        """Normal term of a well-typed expression (innermost-leftmost strategy)."""
        cached = self._normal.get(e)
        if cached is not None:
            return cached
        if isinstance(e, Gen):
            result: Expr = e if e.dim is not None else Gen(e.name, self.resolve(e).dim)
        elif isinstance(e, Id):
            result = Id(self.normal_term(e.arg))
        else:
            result = self._at_root(Comp(e.index, self.normal_term(e.left), self.normal_term(e.right)))
        self._normal[e] = result
        return result

    def _at_root(self, t: Expr) -> Expr:
        step = self._local_rewrites(t, first_only=True)
        if not step:
            return t
        return self.normal_term(step[0])

    def one_step_rewrites(self, e: Expr) -> List[Expr]:
        """Every term reachable from e by one oriented rule at one position."""
        return _everywhere(e, self._local_rewrites)

    # -- read-off ------------------------------------------------------------

    def _norm(self, e: Expr) -> Cell:
        cached = self._cells.get(e)
        if cached is not None:
            return cached
        result = self._read(self.normal_term(e))
        self._cells[e] = result
        return result

    def _read(self, t: Expr) -> Cell:
        if isinstance(t, Id):
            return identity(self._read(t.arg))
        m = self.dim_of(t)
        if m == 0:
            return Cell(0, Point(self.resolve(t)))
        entries = tuple(self._read_entry(piece, m) for piece in _flatten(t, m - 1))
        return Cell(m, Whiskers(entries))

    def _read_entry(self, t: Expr, m: int) -> Tuple[Context, Generator]:
        layers = []
        core = t
        for j in range(m - 1, 0, -1):
            chain = _flatten(core, j - 1)
            tops = [k for k, piece in enumerate(chain) if self.dim_of(piece) == m]
            if len(tops) != 1:
                raise PrecatError(f"term is not normal at level {j}: {to_text(t)}")
            k = tops[0]
            core = chain[k]
            layers.append((j, chain[:k], core, chain[k + 1:]))
        if not isinstance(core, Gen):
            raise PrecatError(f"term is not normal: {to_text(t)}")
        gen = self.resolve(core)
        levels = []
        for j, lefts, inner, rights in reversed(layers):
            left = self._read_chain(lefts, j) if lefts else identity(self._norm(self.boundary_expr(inner, MINUS, j - 1)))
            right = self._read_chain(rights, j) if rights else identity(self._norm(self.boundary_expr(inner, PLUS, j - 1)))
            levels.append((left, right))
        return Context(tuple(levels)), gen

    def _read_chain(self, pieces: List[Expr], j: int) -> Cell:
        entries: Tuple = ()
        for piece in pieces:
            entries += self._read(piece).entries
        return Cell(j, Whiskers(entries))

    def normalize(self, e: Expr) -> Cell:
        self.check(e)
        return self._norm(e)


def _flatten(t: Expr, index: int) -> List[Expr]:
    pieces = []
    while isinstance(t, Comp) and t.index == index:
        pieces.append(t.left)
        t = t.right
    pieces.append(t)
    return pieces


def _everywhere(t: Expr, local: Callable[[Expr], List[Expr]]) -> List[Expr]:
    results = list(local(t))
    if isinstance(t, Id):
        results.extend(Id(r) for r in _everywhere(t.arg, local))
    elif isinstance(t, Comp):
        results.extend(Comp(t.index, r, t.right) for r in _everywhere(t.left, local))
        results.extend(Comp(t.index, t.left, r) for r in _everywhere(t.right, local))
    return results


_ORACLES: Dict[Polygraph, Oracle] = {}


def oracle_for(P: Polygraph) -> Oracle:
    oracle = _ORACLES.get(P)
    if oracle is None:
        if len(_ORACLES) > 64:
            _ORACLES.clear()
        oracle = _ORACLES[P] = Oracle(P)
    return oracle


def normalize_expr(P: Polygraph, e: Expr) -> Cell:
    """Normal form of e obtained by rewriting, independently of compose."""
    return oracle_for(P).normalize(e)


def expr_boundary(P: Polygraph, e: Expr, sign: str, d: int) -> Expr:
    oracle = oracle_for(P)
    if not 0 <= d < oracle.check(e):
        raise BoundaryError(f"no {d}-boundary of a {oracle.dim_of(e)}-dimensional expression")
    return oracle.boundary_expr(e, sign, d)


def one_step_rewrites(P: Polygraph, e: Expr) -> List[Expr]:
    oracle = oracle_for(P)
    oracle.check(e)
    return oracle.one_step_rewrites(e)


# ---------------------------------------------------------------------------
# Random test data
# ---------------------------------------------------------------------------

class _RandomBuilder:
    def __init__(self, oracle: Oracle, rng: np.random.Generator):
        self.oracle = oracle
        self.P = oracle.P
        self.rng = rng

    def _pick(self, items: List[Any]) -> Any:
        return items[int(self.rng.integers(len(items)))]

    def leaf(self, d: int) -> Expr:
        gens = self.P.generators(d)
        if gens and (d == 0 or self.rng.random() < 0.85):
            gen = self._pick(gens)
            return Gen(gen.name, gen.dim)
        if d == 0:
            raise BudgetExhausted("no 0-generators")
        return Id(self.leaf(d - 1))

    def build(self, d: int, budget: int) -> Expr:
        if budget <= 1 or self.rng.random() < 0.25:
            return self.leaf(d)
        kinds = ["same"] if d >= 1 else []
        if d >= 2:
            kinds += ["left", "right"]
        if d >= 1 and self.rng.random() < 0.1:
            kinds.append("id")
        if not kinds:
            return self.leaf(d)
        kind = self._pick(kinds)
        if kind == "id":
            return Id(self.build(d - 1, budget - 1))
        half = max(1, (budget - 1) // 2)
        if kind == "same":
            a = self.build(d, half)
            return Comp(d - 1, a, self.matching(d, MINUS, a, d - 1, budget - 1 - half))
        k = int(self.rng.integers(1, d))
        if kind == "left":
            b = self.build(d, half)
            return Comp(k - 1, self.matching(k, PLUS, b, k - 1, budget - 1 - half), b)
        a = self.build(d, half)
        return Comp(k - 1, a, self.matching(k, MINUS, a, k - 1, budget - 1 - half))

    def matching(self, d: int, sign: str, anchor: Expr, i: int, budget: int) -> Expr:
        """A d-dimensional expression whose i-boundary on side `sign` meets the anchor's opposite boundary."""
        other = PLUS if sign == MINUS else MINUS
        wanted = boundary(self.oracle._norm(anchor), other, i)
        for _ in range(6):
            candidate = self.build(d, budget)
            if boundary(self.oracle._norm(candidate), sign, i) == wanted:
                return candidate
        pool = [c for c in enumerate_cells(self.P, d, max(1, min(budget, 3)))
                if not c.is_identity and boundary(c, sign, i) == wanted]
        if pool and self.rng.random() < 0.8:
            return to_expr(self._pick(pool), qualify=True)
        fill = to_expr(wanted, qualify=True)
        for _ in range(d - i):
            fill = Id(fill)
        return fill


def random_expr(P: Polygraph, seed: Any, size_budget: int = 6, dim: Optional[int] = None) -> Expr:
    """
    A random well-typed expression over P.

    Raises:
        BudgetExhausted: when no valid expression was produced within the retry budget
    """
    rng = np.random.default_rng(seed)
    oracle = oracle_for(P)
    dims = [k for k in range(P.dim + 1) if P.generators(k)]
    if dim is not None:
        dims = [dim] if dim <= P.dim and P.generators(0) else []
    if not dims:
        raise BudgetExhausted("polygraph has no generators to build expressions from")
    builder = _RandomBuilder(oracle, rng)
    for _ in range(config.RANDOM_RETRIES):
        target = dims[int(rng.integers(len(dims)))]
        try:
            expr = builder.build(target, size_budget)
            oracle.check(expr)
            return expr
        except (BudgetExhausted, TypingError, CompositionError):
            continue
    raise BudgetExhausted(f"no well-typed expression within {config.RANDOM_RETRIES} attempts")


def _expansions(oracle: Oracle, t: Expr) -> List[Expr]:
    """Right-to-left instances of the axioms applicable at the root of t."""
    found: List[Expr] = []
    d = oracle.dim_of(t)
    for i in range(d):
        found.append(Comp(i, Id(oracle.boundary_expr(t, MINUS, i)), t))
        found.append(Comp(i, t, Id(oracle.boundary_expr(t, PLUS, i))))
    if isinstance(t, Id) and isinstance(t.arg, Comp):
        inner = t.arg
        da, db = oracle.dim_of(inner.left), oracle.dim_of(inner.right)
        if da >= db:
            found.append(Comp(inner.index, Id(inner.left), inner.right))
        if db >= da:
            found.append(Comp(inner.index, inner.left, Id(inner.right)))
    if isinstance(t, Comp):
        i, a, b = t.index, t.left, t.right
        if isinstance(b, Comp) and b.index == i:
            da, db, dc = oracle.dim_of(a), oracle.dim_of(b.left), oracle.dim_of(b.right)
            if i == min(da, db) - 1 and i == min(max(da, db), dc) - 1:
                found.append(Comp(i, Comp(i, a, b.left), b.right))
        if isinstance(a, Comp) and isinstance(b, Comp) and a.index == b.index and a.index < i:
            k = a.index
            if a.left == b.left and oracle.dim_of(a.left) == k + 1:
                found.append(Comp(k, a.left, Comp(i, a.right, b.right)))
            if a.right == b.right and oracle.dim_of(a.right) == k + 1:
                found.append(Comp(k, Comp(i, a.left, b.left), a.right))
    return found


def random_equal_pair(P: Polygraph, seed: Any, walk_length: int = 6,
                      size_budget: int = 6) -> Tuple[Expr, Expr]:
    """
    Two expressions denoting the same cell: a random expression and the end of a
    random walk of axiom instances applied in either direction.
    """
    start = random_expr(P, seed, size_budget)
    oracle = oracle_for(P)
    rng = np.random.default_rng([int(seed), 7919, walk_length])
    current = start
    for _ in range(walk_length):
        moves = _everywhere(current, oracle._local_rewrites) + _everywhere(
            current, lambda t: _expansions(oracle, t))
        if not moves:
            break
        current = moves[int(rng.integers(len(moves)))]
        if expr_size(current) > 12 * max(size_budget, 4):
            current = oracle.normal_term(current)
    return start, current


def random_polygraph(seed: Any, max_dim: int = 3, max_per_dim: int = 3, cell_budget: int = 2) -> Polygraph:
    """
    A random valid polygraph of dimension at most max_dim.

    Each k-generator gets a random (k-1)-cell as source and a random cell
    parallel to it as target; identities are allowed on both sides.
    """
    rng = np.random.default_rng(seed)
    top = int(rng.integers(1, max_dim + 1))
    gens: List[Generator] = [Generator(f"x{j}", 0) for j in range(int(rng.integers(1, max_per_dim + 1)))]
    for k in range(1, top + 1):
        below = Polygraph(gens, dim=k - 1)
        cells = enumerate_cells(below, k - 1, cell_budget)
        count = int(rng.integers(1, max_per_dim + 1))
        for j in range(count):
            src = cells[int(rng.integers(len(cells)))]
            if k == 1:
                parallel = cells
            else:
                parallel = [c for c in cells
                            if boundary(c, MINUS, k - 2) == boundary(src, MINUS, k - 2)
                            and boundary(c, PLUS, k - 2) == boundary(src, PLUS, k - 2)]
            tgt = parallel[int(rng.integers(len(parallel)))]
            gens.append(Generator(f"a{k}_{j}", k, src, tgt))
    P = Polygraph(gens, dim=top)
    logger.debug(f"Random polygraph for seed {seed}: {P!r}")
    return P
