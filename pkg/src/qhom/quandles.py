"""Finite quandles, the standard families, and sets with quandle actions.

A quandle is a set X with a binary operation ``*`` such that

* (Q1) ``x * x == x`` for every x,
* (Q2) every right translation ``s_y : x -> x * y`` is a bijection of X,
* (Q3) ``(x * y) * z == (x * z) * (y * z)`` (right self-distributivity).

Elements are always the integers ``0 .. size-1`` and the operation is stored
as a full table with ``table[i][j] == i * j``.

An :class:`XSet` is a set Y carrying a right action of the quandle's
generators and their inverses; the action of longer words is taken letter by
letter.  The four shapes used here are the quandle acting on itself by
``y * x``, a one-point set, the integers acted on by ``y + 1`` for every
generator, and finite products acted on componentwise.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Sequence


class QuandleAxiomError(ValueError):
    """Raised when a candidate operation table violates a quandle axiom."""


@dataclass(frozen=True)
class Quandle:
    """A finite quandle given by its full operation table.

    Instances are immutable; build them with :func:`validate_quandle` or one
    of the family constructors so the axioms are known to hold.
    """

    table: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.table)

    def elements(self) -> range:
        return range(self.size)

    def op(self, i: int, j: int) -> int:
        """Return ``i * j``."""
        return self.table[i][j]

    @cached_property
    def _inv_table(self) -> tuple[tuple[int, ...], ...]:
        n = self.size
        inv = [[0] * n for _ in range(n)]
        for j in range(n):
            for i in range(n):
                inv[self.table[i][j]][j] = i
        return tuple(tuple(row) for row in inv)

    def inv_op(self, i: int, j: int) -> int:
        """Return the unique z with ``z * j == i`` (the inverse translation)."""
        return self._inv_table[i][j]

    def to_json(self) -> str:
        return json.dumps({"size": self.size, "table": [list(r) for r in self.table]})

    @staticmethod
    def from_json(text: str) -> "Quandle":
        data = json.loads(text)
        return validate_quandle(data["table"])


def validate_quandle(table: Sequence[Sequence[int]]) -> Quandle:
    """Check the three quandle axioms and return the validated quandle.

    Raises :class:`QuandleAxiomError` naming the first violated axiom together
    with a witness element (Q1), column (Q2) or triple (Q3).
    """
    n = len(table)
    if n == 0:
        raise QuandleAxiomError("empty table")
    rows = []
    for i, row in enumerate(table):
        if len(row) != n:
            raise QuandleAxiomError(f"row {i} has length {len(row)}, expected {n}")
        for j, v in enumerate(row):
            if not (isinstance(v, int) and 0 <= v < n):
                raise QuandleAxiomError(f"entry [{i}][{j}] = {v!r} out of range")
        rows.append(tuple(int(v) for v in row))
    t = tuple(rows)
    for i in range(n):
        if t[i][i] != i:
            raise QuandleAxiomError(f"Q1 fails at {i}: {i} * {i} = {t[i][i]}")
    for j in range(n):
        col = [t[i][j] for i in range(n)]
        if len(set(col)) != n:
            raise QuandleAxiomError(f"Q2 fails: column {j} is not a bijection")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if t[t[i][j]][k] != t[t[i][k]][t[j][k]]:
                    raise QuandleAxiomError(
                        f"Q3 fails at ({i}, {j}, {k}): "
                        f"({i}*{j})*{k} = {t[t[i][j]][k]} but "
                        f"({i}*{k})*({j}*{k}) = {t[t[i][k]][t[j][k]]}"
                    )
    return Quandle(t)


def dihedral(n: int) -> Quandle:
    """The dihedral quandle R_n: the set Z_n with ``i * j = 2j - i (mod n)``.

    The right translations are the point reflections of the n-gon, each an
    involution, so Q2 holds for every n.
    """
    if n < 1:
        raise ValueError("n must be positive")
    return Quandle(tuple(tuple((2 * j - i) % n for j in range(n)) for i in range(n)))


def trivial(n: int) -> Quandle:
    """The trivial quandle T_n: ``i * j = i`` for all i, j."""
    if n < 1:
        raise ValueError("n must be positive")
    return Quandle(tuple(tuple(i for _ in range(n)) for i in range(n)))


# Rotations of the regular tetrahedron acting on its four vertices: s_x is the
# 1/3 turn about the axis through x.  Row i lists i*0, i*1, i*2, i*3.
_TETRAHEDRAL_TABLE = (
    (0, 2, 3, 1),
    (3, 1, 0, 2),
    (1, 3, 2, 0),
    (2, 0, 1, 3),
)


def tetrahedral() -> Quandle:
    """The connected 4-element tetrahedral quandle S_4."""
    return Quandle(_TETRAHEDRAL_TABLE)


def is_connected(q: Quandle) -> bool:
    """True iff the inner automorphism group acts transitively.

    Computed as the orbit of element 0 under all right translations and their
    inverses; the quandle is connected iff that orbit is everything.
    """
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for j in q.elements():
            for y in (q.op(x, j), q.inv_op(x, j)):
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
    return len(seen) == q.size


def is_quandle_hom(f: Sequence[int], src: Quandle, dst: Quandle) -> bool:
    """True iff ``f(i * j) == f(i) * f(j)`` for all i, j."""
    if len(f) != src.size or any(not 0 <= v < dst.size for v in f):
        return False
    return all(
        f[src.op(i, j)] == dst.op(f[i], f[j])
        for i in src.elements()
        for j in src.elements()
    )


_NAMED = {"S4": tetrahedral}
_FAMILY = re.compile(r"^([RT])(\d+)$")


def by_name(name: str) -> Quandle:
    """Resolve a quandle name: ``Rn`` dihedral, ``Tn`` trivial, ``S4``."""
    key = name.strip()
    if key in _NAMED:
        return _NAMED[key]()
    m = _FAMILY.match(key)
    if m:
        n = int(m.group(2))
        return dihedral(n) if m.group(1) == "R" else trivial(n)
    raise ValueError(f"unknown quandle name {name!r} (expected R<n>, T<n> or S4)")


# ---------------------------------------------------------------------------
# X-sets and equivariant maps
# ---------------------------------------------------------------------------

SINGLETON_POINT = 0

QUANDLE_ITSELF = "quandle"
SINGLETON = "singleton"
INTEGERS = "integers"
PRODUCT = "product"


@dataclass(frozen=True)
class XSet:
    """A set with a right action of the quandle generators and inverses.

    ``act(e, g, +1)`` applies the generator g, ``act(e, g, -1)`` its inverse;
    the two are mutually inverse for every g.  ``elements`` is None exactly
    for the infinite integer X-set, which supports pointwise arithmetic but
    refuses enumeration.
    """

    quandle: Quandle
    kind: str
    parts: tuple["XSet", ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in (QUANDLE_ITSELF, SINGLETON, INTEGERS, PRODUCT):
            raise ValueError(f"unknown X-set kind {self.kind!r}")
        if self.kind == PRODUCT and len(self.parts) != 2:
            raise ValueError("product X-set needs exactly two factors")

    @property
    def is_finite(self) -> bool:
        if self.kind == INTEGERS:
            return False
        if self.kind == PRODUCT:
            return all(p.is_finite for p in self.parts)
        return True

    def elements(self) -> list[Any]:
        """Enumerate the underlying set; rejects the infinite integer X-set."""
        if self.kind == QUANDLE_ITSELF:
            return list(self.quandle.elements())
        if self.kind == SINGLETON:
            return [SINGLETON_POINT]
        if self.kind == PRODUCT:
            return [
                (a, b)
                for a in self.parts[0].elements()
                for b in self.parts[1].elements()
            ]
        raise ValueError("the integer X-set is infinite and cannot be enumerated")

    def act(self, e: Any, g: int, direction: int = 1) -> Any:
        """Act on element e by quandle generator g or its inverse."""
        if direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")
        if self.kind == QUANDLE_ITSELF:
            return self.quandle.op(e, g) if direction == 1 else self.quandle.inv_op(e, g)
        if self.kind == SINGLETON:
            return e
        if self.kind == INTEGERS:
            return e + direction
        return (
            self.parts[0].act(e[0], g, direction),
            self.parts[1].act(e[1], g, direction),
        )


def xset_quandle(q: Quandle) -> XSet:
    """The quandle acting on itself: ``y . x = y * x``."""
    return XSet(q, QUANDLE_ITSELF)


def xset_singleton(q: Quandle) -> XSet:
    """The one-point set with the trivial action."""
    return XSet(q, SINGLETON)


def xset_integers(q: Quandle) -> XSet:
    """The integers with every generator acting as ``y -> y + 1``."""
    return XSet(q, INTEGERS)


def xset_product(a: XSet, b: XSet) -> XSet:
    """The product of two X-sets over the same quandle, acted on componentwise."""
    if a.quandle is not b.quandle and a.quandle != b.quandle:
        raise ValueError("product factors must share the quandle")
    return XSet(a.quandle, PRODUCT, (a, b))


@dataclass(frozen=True, eq=False)
class XMap:
    """An equivariant map of X-sets: ``p(y . g) == p(y) . g``."""

    source: XSet
    target: XSet
    fn: Callable[[Any], Any]

    def __call__(self, e: Any) -> Any:
        return self.fn(e)

    def validate(self, sample: Sequence[Any] | None = None) -> None:
        """Check equivariance on every element (finite source) or a sample."""
        elems = list(sample) if sample is not None else self.source.elements()
        q = self.source.quandle
        for e in elems:
            for g in q.elements():
                for d in (1, -1):
                    got = self.target.act(self.fn(e), g, d)
                    want = self.fn(self.source.act(e, g, d))
                    if got != want:
                        raise ValueError(
                            f"not equivariant at element {e!r}, generator {g}, "
                            f"direction {d:+d}: {want!r} != {got!r}"
                        )


def xmap_identity(y: XSet) -> XMap:
    return XMap(y, y, lambda e: e)


def xmap_to_singleton(y: XSet) -> XMap:
    """The unique map onto the one-point X-set."""
    return XMap(y, xset_singleton(y.quandle), lambda e: SINGLETON_POINT)


def xmap_projection(product: XSet, index: int) -> XMap:
    """Projection of a product X-set onto its first (0) or second (1) factor."""
    if product.kind != PRODUCT:
        raise ValueError("source is not a product X-set")
    if index not in (0, 1):
        raise ValueError("index must be 0 or 1")
    return XMap(product, product.parts[index], lambda e: e[index])
