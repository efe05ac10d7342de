"""
Core data model for free n-precategories generated by polygraphs.

This module defines:
- Generators and polygraphs (dimension-indexed generator tables)
- Cells in normal form: Point, Identity and Whiskers bodies, with contexts
- Elements (a polygraph together with a distinguished cell)
- classify, truncate and include
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple, Union

logger = logging.getLogger(__name__)

MINUS = "-"
PLUS = "+"


class PrecatError(Exception):
    """Base class of every error raised by the precat package."""
    pass


class InputError(PrecatError):
    """Malformed input: bad JSON shape, duplicate names, unknown generators."""
    pass


class BoundaryError(PrecatError):
    """Exception raised when a boundary is requested above the cell dimension."""
    pass


class BudgetExhausted(PrecatError):
    """Exception raised when a bounded search runs out of budget."""
    pass


def check_sign(sign: str) -> str:
    if sign not in (MINUS, PLUS):
        raise InputError(f"sign must be '{MINUS}' or '{PLUS}', got {sign!r}")
    return sign


@dataclass(frozen=True)
class Generator:
    """A generator of a polygraph; src and tgt are absent in dimension 0."""
    name: str
    dim: int
    src: Optional["Cell"] = None
    tgt: Optional["Cell"] = None

    @property
    def key(self) -> Tuple[int, str]:
        return (self.dim, self.name)

    def __repr__(self) -> str:
        return f"Generator({self.name!r}, {self.dim})"


@dataclass(frozen=True)
class Point:
    gen: Generator


@dataclass(frozen=True)
class Identity:
    base: "Cell"


@dataclass(frozen=True)
class Context:
    """
    Nested whiskers around a generator of dimension m.

    levels[j - 1] holds the pair (l_j, r_j) of j-cells for j = 1 .. m-1.
    Slots with nothing composed store the identity of the matching boundary.
    """
    levels: Tuple[Tuple["Cell", "Cell"], ...] = ()

    @property
    def depth(self) -> int:
        return len(self.levels)

    def left(self, j: int) -> "Cell":
        return self.levels[j - 1][0]

    def right(self, j: int) -> "Cell":
        return self.levels[j - 1][1]

    def is_trivial(self) -> bool:
        return all(l.is_identity and r.is_identity for l, r in self.levels)

    def replace(self, j: int, left: "Cell", right: "Cell") -> "Context":
        levels = list(self.levels)
        levels[j - 1] = (left, right)
        return Context(tuple(levels))


@dataclass(frozen=True)
class Whiskers:
    entries: Tuple[Tuple[Context, Generator], ...]


Body = Union[Point, Identity, Whiskers]


@dataclass(frozen=True, eq=False)
class Cell:
    """
    A cell of a free precategory in normal form.

    Structural equality of Cell values is equality of cells.
    """
    dim: int
    body: Body

    def __hash__(self) -> int:
        cached = self.__dict__.get("_hash")
        if cached is None:
            cached = hash((self.dim, self.body))
            object.__setattr__(self, "_hash", cached)
        return cached

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Cell):
            return NotImplemented
        if hash(self) != hash(other):
            return False
        return self.dim == other.dim and self.body == other.body

    def __getstate__(self):
        # string hashes differ between processes
        state = dict(self.__dict__)
        state.pop("_hash", None)
        return state

    @property
    def is_identity(self) -> bool:
        return isinstance(self.body, Identity)

    @property
    def is_point(self) -> bool:
        return isinstance(self.body, Point)

    @property
    def entries(self) -> Tuple[Tuple[Context, Generator], ...]:
        if isinstance(self.body, Whiskers):
            return self.body.entries
        return ()

    def __repr__(self) -> str:
        if isinstance(self.body, Point):
            return f"Cell(0, {self.body.gen.name})"
        if isinstance(self.body, Identity):
            return f"Cell({self.dim}, id({self.body.base!r}))"
        names = ", ".join(g.name for _, g in self.body.entries)
        return f"Cell({self.dim}, [{names}])"


class Polygraph:
    """
    A finite polygraph: generator tables indexed by dimension.

    The declared dimension may exceed the highest non-empty table; this is how
    include() reinterprets an n-polygraph as a higher one.
    """

    def __init__(self, generators: Iterable[Generator] = (), dim: Optional[int] = None):
        tables: Dict[int, Dict[str, Generator]] = {}
        for gen in generators:
            table = tables.setdefault(gen.dim, {})
            if gen.name in table:
                raise InputError(f"duplicate {gen.dim}-generator name {gen.name!r}")
            table[gen.name] = gen
        top = max(tables) if tables else -1
        if dim is None:
            dim = top
        if dim < top:
            raise InputError(f"declared dimension {dim} below top generator dimension {top}")
        self._dim = dim
        self._tables = {k: dict(sorted(tables.get(k, {}).items())) for k in range(dim + 1)}
        self._key = (dim, tuple(sorted(((g.dim, g.name, g) for t in tables.values() for g in t.values()),
                                       key=lambda item: (item[0], item[1]))))
        self._hash = hash(self._key)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def top_dim(self) -> int:
        dims = [k for k, t in self._tables.items() if t]
        return max(dims) if dims else -1

    def generators(self, dim: Optional[int] = None) -> List[Generator]:
        if dim is None:
            return [g for k in sorted(self._tables) for g in self._tables[k].values()]
        return list(self._tables.get(dim, {}).values())

    def names(self, dim: int) -> List[str]:
        return list(self._tables.get(dim, {}))

    def has(self, dim: int, name: str) -> bool:
        return name in self._tables.get(dim, {})

    def get(self, dim: int, name: str) -> Generator:
        try:
            return self._tables[dim][name]
        except KeyError:
            raise InputError(f"no {dim}-generator named {name!r}") from None

    def dims_of(self, name: str) -> List[int]:
        return [k for k in sorted(self._tables) if name in self._tables[k]]

    def lookup(self, name: str, dim: Optional[int] = None) -> Generator:
        """Resolve a generator by name, requiring a dimension when the name is ambiguous."""
        if dim is not None:
            return self.get(dim, name)
        dims = self.dims_of(name)
        if not dims:
            raise InputError(f"unknown generator {name!r}")
        if len(dims) > 1:
            raise InputError(f"generator name {name!r} is ambiguous (dimensions {dims}); qualify it as {name}@k")
        return self._tables[dims[0]][name]

    def ambiguous_names(self) -> Set[str]:
        seen: Dict[str, int] = {}
        for gen in self.generators():
            seen[gen.name] = seen.get(gen.name, 0) + 1
        return {name for name, count in seen.items() if count > 1}

    def keys(self) -> List[Tuple[int, str]]:
        return [g.key for g in self.generators()]

    def with_generators(self, generators: Iterable[Generator], dim: Optional[int] = None) -> "Polygraph":
        gens = list(generators)
        top = max([g.dim for g in gens] + [self._dim])
        return Polygraph(self.generators() + gens, dim=max(top, dim if dim is not None else -1))

    def __contains__(self, gen: object) -> bool:
        if not isinstance(gen, Generator):
            return False
        return self._tables.get(gen.dim, {}).get(gen.name) == gen

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.generators())

    def __len__(self) -> int:
        return sum(len(t) for t in self._tables.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polygraph):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __getstate__(self):
        state = dict(self.__dict__)
        del state["_hash"]
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._hash = hash(self._key)

    def __repr__(self) -> str:
        parts = []
        for k in sorted(self._tables):
            parts.append(f"{k}: {{{', '.join(self._tables[k])}}}")
        return f"Polygraph(dim={self._dim}; {'; '.join(parts)})"


@dataclass(frozen=True)
class Element:
    """An object of the category of elements: a polygraph with a cell over it."""
    pol: Polygraph
    cell: Cell


class ClassTag(Enum):
    IDENTITY = "identity"
    GENERATOR = "generator"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class Classification:
    tag: ClassTag
    base: Optional[Cell] = None
    name: Optional[str] = None


def classify(u: Cell) -> Classification:
    body = u.body
    if isinstance(body, Identity):
        return Classification(ClassTag.IDENTITY, base=body.base)
    if isinstance(body, Point):
        return Classification(ClassTag.GENERATOR, name=body.gen.name)
    if len(body.entries) == 1 and body.entries[0][0].is_trivial():
        return Classification(ClassTag.GENERATOR, name=body.entries[0][1].name)
    return Classification(ClassTag.COMPOSITE)


def occurring_generators(u: Cell) -> Set[Generator]:
    """Generators written in the normal form of u, context slots included, boundaries excluded."""
    found: Set[Generator] = set()
    stack = [u]
    while stack:
        cell = stack.pop()
        body = cell.body
        if isinstance(body, Point):
            found.add(body.gen)
        elif isinstance(body, Identity):
            stack.append(body.base)
        else:
            for ctx, gen in body.entries:
                found.add(gen)
                for left, right in ctx.levels:
                    stack.append(left)
                    stack.append(right)
    return found


def truncate(P: Polygraph, n: int) -> Polygraph:
    if n >= P.dim:
        return P
    return Polygraph([g for g in P.generators() if g.dim <= n], dim=n)


def include(P: Polygraph, n: int) -> Polygraph:
    if n < P.top_dim:
        raise InputError(f"cannot include a {P.top_dim}-dimensional polygraph in dimension {n}")
    if n == P.dim:
        return P
    return Polygraph(P.generators(), dim=n)
