"""Chains and cochains of the quandle complex, plain or with an X-set.

A degree-n generator is a pair ``(y, xs)`` with ``xs`` an n-tuple of quandle
elements and ``y`` an element of the chosen X-set, or None throughout when
working in the plain complex.  Tuples with two equal adjacent entries are
degenerate and identified with zero; every operation here drops them eagerly,
so all stored chains live in the quotient (quandle, not rack) complex.

The two face maps on a generator are

    d0 (y; x1..xn) = sum_i (-1)^i (y; x1 .. ^xi .. xn)
    d1 (y; x1..xn) = sum_i (-1)^i (y.xi; x1*xi .. x_{i-1}*xi, x_{i+1} .. xn)

with boundary d = d0 - d1.  In the plain complex the boundary vanishes in
degrees <= 1, in the generalized complex only in degrees <= 0 (the X-set makes
d1 nontrivial already on (y; x)).

The shifting maps are the signed face maps sigma = (-1)^n d0 and
sigma_tilde = (-1)^n d1; both are chain maps lowering degree by one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Sequence

from .quandles import (
    QUANDLE_ITSELF,
    SINGLETON,
    Quandle,
    XMap,
    XSet,
    is_quandle_hom,
    xset_quandle,
)

Generator = tuple[Any, tuple[int, ...]]


@dataclass(frozen=True)
class ChainSpace:
    """The ambient complex: a quandle plus an optional X-set of coefficients.

    ``xset=None`` selects the plain quandle complex (free on X^n for n >= 1,
    zero in degree 0); an explicit X-set selects the generalized complex (free
    on Y x X^n, with Y itself in degree 0).
    """

    quandle: Quandle
    xset: XSet | None = None

    @property
    def is_plain(self) -> bool:
        return self.xset is None

    def generators(self, degree: int) -> list[Generator]:
        """All non-degenerate generators of the given degree, in lex order."""
        q = self.quandle
        if degree < 0:
            return []
        if self.is_plain:
            ys: list[Any] = [None]
            if degree == 0:
                return []
        else:
            if not self.xset.is_finite:
                raise ValueError("cannot enumerate generators over an infinite X-set")
            ys = self.xset.elements()
            if degree == 0:
                return [(y, ()) for y in ys]
        tuples: list[tuple[int, ...]] = [()]
        for _ in range(degree):
            tuples = [
                t + (x,)
                for t in tuples
                for x in q.elements()
                if not t or t[-1] != x
            ]
        return [(y, t) for y in ys for t in tuples]

    def dim(self, degree: int) -> int:
        n = self.quandle.size
        if degree < 0:
            return 0
        if self.is_plain:
            return 0 if degree == 0 else n * (n - 1) ** (degree - 1)
        k = len(self.xset.elements())
        return k if degree == 0 else k * n * (n - 1) ** (degree - 1)


def plain_space(q: Quandle) -> ChainSpace:
    return ChainSpace(q)


def is_degenerate(xs: tuple[int, ...]) -> bool:
    return any(a == b for a, b in zip(xs, xs[1:]))


def _fmt_gen(g: Generator) -> str:
    y, xs = g
    body = ",".join(str(x) for x in xs)
    return f"({body})" if y is None else f"({y}; {body})"


class Chain:
    """A finitely supported integer combination of non-degenerate generators."""

    __slots__ = ("space", "degree", "data")

    def __init__(self, space: ChainSpace, degree: int, data: dict[Generator, int] | None = None):
        self.space = space
        self.degree = degree
        # the complex is zero in negative degrees, and the plain one also in degree 0
        dead = degree < 0 or (space.is_plain and degree == 0)
        clean: dict[Generator, int] = {}
        for (y, xs), coeff in (data or {}).items():
            xs = tuple(xs)
            if len(xs) != degree:
                raise ValueError(f"generator {_fmt_gen((y, xs))} has wrong degree")
            if coeff and not dead and not is_degenerate(xs):
                clean[(y, xs)] = clean.get((y, xs), 0) + coeff
        self.data = {g: c for g, c in clean.items() if c}

    def is_zero(self) -> bool:
        return not self.data

    def _like(self, data: dict[Generator, int], degree: int | None = None) -> "Chain":
        return Chain(self.space, self.degree if degree is None else degree, data)

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        data = dict(self.data)
        for g, c in other.data.items():
            data[g] = data.get(g, 0) + c
        return self._like(data)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __neg__(self) -> "Chain":
        return self._like({g: -c for g, c in self.data.items()})

    def __mul__(self, k: int) -> "Chain":
        return self._like({g: k * c for g, c in self.data.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Chain)
            and self.space == other.space
            and self.degree == other.degree
            and self.data == other.data
        )

    def __repr__(self) -> str:
        if not self.data:
            return "0"
        bits = []
        for g in sorted(self.data):
            c = self.data[g]
            sign = "+" if c > 0 else "-"
            mag = "" if abs(c) == 1 else f"{abs(c)}"
            bits.append(f"{sign}{mag}{_fmt_gen(g)}")
        return " ".join(bits)

    def _check(self, other: "Chain") -> None:
        if self.space != other.space or self.degree != other.degree:
            raise ValueError("chain arithmetic requires matching space and degree")


def chain_of(space: ChainSpace, degree: int, terms: Iterable[tuple[int, Any, Sequence[int]]]) -> Chain:
    """Build a chain from (coefficient, y, tuple) triples; y is None when plain."""
    data: dict[Generator, int] = {}
    for coeff, y, xs in terms:
        g = (y, tuple(xs))
        data[g] = data.get(g, 0) + coeff
    return Chain(space, degree, data)


def zero_chain(space: ChainSpace, degree: int) -> Chain:
    return Chain(space, degree, {})


def _linear(c: Chain, out_degree: int, out_space: ChainSpace, gen_map: Callable[[Generator], Iterable[tuple[Generator, int]]]) -> Chain:
    data: dict[Generator, int] = {}
    for g, coeff in c.data.items():
        for h, w in gen_map(g):
            if w:
                data[h] = data.get(h, 0) + coeff * w
    return Chain(out_space, out_degree, data)


def _boundary_degree_floor(space: ChainSpace) -> int:
    # the plain boundary vanishes in degrees <= 1, the generalized one in <= 0
    return 1 if space.is_plain else 0


def _face0(space: ChainSpace, g: Generator) -> Iterator[tuple[Generator, int]]:
    y, xs = g
    sign = 1
    for i in range(len(xs)):
        sign = -sign
        yield (y, xs[:i] + xs[i + 1 :]), sign


def _face1(space: ChainSpace, g: Generator) -> Iterator[tuple[Generator, int]]:
    q = space.quandle
    y, xs = g
    sign = 1
    for i in range(len(xs)):
        sign = -sign
        xi = xs[i]
        moved = tuple(q.op(x, xi) for x in xs[:i]) + xs[i + 1 :]
        ynew = y if space.is_plain else space.xset.act(y, xi, 1)
        yield (ynew, moved), sign


def boundary0(c: Chain) -> Chain:
    """The deleting face map d0 (degenerate output dropped)."""
    if c.degree <= _boundary_degree_floor(c.space):
        return zero_chain(c.space, c.degree - 1)
    return _linear(c, c.degree - 1, c.space, lambda g: _face0(c.space, g))


def boundary1(c: Chain) -> Chain:
    """The acting face map d1."""
    if c.degree <= _boundary_degree_floor(c.space):
        return zero_chain(c.space, c.degree - 1)
    return _linear(c, c.degree - 1, c.space, lambda g: _face1(c.space, g))


def boundary(c: Chain) -> Chain:
    """The boundary d = d0 - d1."""
    return boundary0(c) - boundary1(c)


def sigma(c: Chain) -> Chain:
    """Shifting chain map: (-1)^n d0 in degree n."""
    s = boundary0(c)
    return s if c.degree % 2 == 0 else -s


def sigma_tilde(c: Chain) -> Chain:
    """The companion shifting map: (-1)^n d1 in degree n."""
    s = boundary1(c)
    return s if c.degree % 2 == 0 else -s


def iota(c: Chain) -> Chain:
    """Prepend the X-set coordinate: (x0; x1..xn) -> (-1)^n (x0, x1, .., xn).

    Defined on chains over the quandle acting on itself; lands in the plain
    complex one degree higher and is a chain map.
    """
    if c.space.is_plain or c.space.xset.kind != QUANDLE_ITSELF:
        raise ValueError("iota needs a chain over the quandle acting on itself")
    sign = 1 if c.degree % 2 == 0 else -1
    out = ChainSpace(c.space.quandle)
    return _linear(c, c.degree + 1, out, lambda g: [((None, (g[0],) + g[1]), sign)])


def to_plain(c: Chain) -> Chain:
    """Identify a chain over the one-point X-set with a plain chain.

    Degree 0 maps to zero: the plain complex is trivial there.
    """
    if c.space.is_plain:
        return c
    if c.space.xset.kind != SINGLETON:
        raise ValueError("only chains over the one-point X-set are plain in disguise")
    out = ChainSpace(c.space.quandle)
    if c.degree == 0:
        return zero_chain(out, 0)
    return _linear(c, c.degree, out, lambda g: [((None, g[1]), 1)])


def pushforward_xmap(p: XMap, c: Chain) -> Chain:
    """Relabel the X-set coordinate along an equivariant map: (y; x) -> (p(y); x)."""
    if c.space.is_plain or c.space.xset != p.source:
        raise ValueError("chain does not live over the map's source X-set")
    out = ChainSpace(c.space.quandle, p.target)
    return _linear(c, c.degree, out, lambda g: [((p(g[0]), g[1]), 1)])


def pushforward_hom(f: Sequence[int], src: Quandle, dst: Quandle, c: Chain) -> Chain:
    """Apply a quandle homomorphism f to every coordinate of a chain.

    Works on plain chains and on chains over the quandle acting on itself
    (where the X-set coordinate is mapped by f as well).  Rejects maps that
    fail ``f(i*j) = f(i)*f(j)``.
    """
    if not is_quandle_hom(f, src, dst):
        raise ValueError("not a quandle homomorphism")
    if c.space.quandle != src:
        raise ValueError("chain is not over the map's source quandle")
    if c.space.is_plain:
        out = ChainSpace(dst)
        return _linear(
            c, c.degree, out, lambda g: [((None, tuple(f[x] for x in g[1])), 1)]
        )
    if c.space.xset.kind == QUANDLE_ITSELF:
        out = ChainSpace(dst, xset_quandle(dst))
        return _linear(
            c, c.degree, out, lambda g: [((f[g[0]], tuple(f[x] for x in g[1])), 1)]
        )
    raise ValueError("homomorphism pushforward supports plain chains or Y = X")


# ---------------------------------------------------------------------------
# Cochains
# ---------------------------------------------------------------------------

class Cochain:
    """A map from degree-k generators to Z (modulus 0) or Z/m, sparse with default 0.

    Values are stored canonically reduced; keys on degenerate tuples are kept
    as given (a proper quandle cochain vanishes there, which is exactly what
    :func:`is_cocycle` checks).
    """

    __slots__ = ("space", "degree", "modulus", "data")

    def __init__(self, space: ChainSpace, degree: int, modulus: int, data: dict[Generator, int] | None = None):
        if modulus < 0 or modulus == 1:
            raise ValueError("modulus must be 0 (meaning Z) or >= 2")
        self.space = space
        self.degree = degree
        self.modulus = modulus
        clean: dict[Generator, int] = {}
        for (y, xs), v in (data or {}).items():
            v = v % modulus if modulus else v
            if v:
                clean[(y, tuple(xs))] = v
        self.data = clean

    def __call__(self, g: Generator) -> int:
        y, xs = g
        return self.data.get((y, tuple(xs)), 0)

    def value(self, *xs: int, y: Any = None) -> int:
        return self((y, tuple(xs)))

    def _reduce(self, v: int) -> int:
        return v % self.modulus if self.modulus else v

    def _check(self, other: "Cochain") -> None:
        if self.space != other.space or self.degree != other.degree:
            raise ValueError("cochain arithmetic requires matching space and degree")
        if self.modulus != other.modulus:
            raise ValueError("mixed coefficient rings are not coerced; convert explicitly")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        data = dict(self.data)
        for g, v in other.data.items():
            data[g] = data.get(g, 0) + v
        return Cochain(self.space, self.degree, self.modulus, data)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def __neg__(self) -> "Cochain":
        return self * (-1)

    def __mul__(self, k: int) -> "Cochain":
        return Cochain(self.space, self.degree, self.modulus, {g: k * v for g, v in self.data.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Cochain)
            and self.space == other.space
            and self.degree == other.degree
            and self.modulus == other.modulus
            and self.data == other.data
        )

    def is_zero(self) -> bool:
        return not self.data

    def __repr__(self) -> str:
        ring = "Z" if self.modulus == 0 else f"Z{self.modulus}"
        terms = " ".join(f"{_fmt_gen(g)}:{v}" for g, v in sorted(self.data.items())) or "0"
        return f"<{self.degree}-cochain/{ring} {terms}>"


def cochain_of(space: ChainSpace, degree: int, modulus: int, values: dict, y: Any = ...) -> Cochain:
    """Build a cochain from {tuple: value} (plain) or {(y, tuple): value}."""
    data: dict[Generator, int] = {}
    for k, v in values.items():
        if space.is_plain:
            data[(None, tuple(k))] = v
        else:
            yy, xs = k
            data[(yy, tuple(xs))] = v
    return Cochain(space, degree, modulus, data)


def evaluate(phi: Cochain, c: Chain) -> int:
    """Kronecker pairing: sum of coefficient(g) * phi(g), in phi's ring."""
    if phi.degree != c.degree:
        raise ValueError(f"degree mismatch: cochain {phi.degree}, chain {c.degree}")
    if phi.space != c.space:
        raise ValueError("cochain and chain live over different complexes")
    total = sum(coeff * phi(g) for g, coeff in c.data.items())
    return phi._reduce(total)


def coboundary(phi: Cochain) -> Cochain:
    """The dual boundary: (delta phi)(g) = phi(boundary g), one degree up.

    Values of phi on degenerate tuples are invisible here because boundaries
    are taken in the quotient complex.
    """
    out: dict[Generator, int] = {}
    for g in phi.space.generators(phi.degree + 1):
        c = Chain(phi.space, phi.degree + 1, {g: 1})
        v = evaluate(phi, boundary(c))
        if v:
            out[g] = v
    return Cochain(phi.space, phi.degree + 1, phi.modulus, out)


def is_cocycle(phi: Cochain) -> bool:
    """True iff phi vanishes on degenerate generators and its coboundary is zero."""
    if any(is_degenerate(xs) for (_, xs) in phi.data):
        return False
    return coboundary(phi).is_zero()


def pullback_sigma(phi: Cochain) -> Cochain:
    """Dual of the shifting map: a k-cocycle becomes the (k+1)-cocycle phi . sigma.

    For a 2-cochain this is the classical formula
    (sigma# phi)(x, y, z) = phi(y, z) - phi(x, z) + phi(x, y).
    """
    if not phi.space.is_plain:
        raise ValueError("the shifting pull-back is defined on the plain complex")
    out: dict[Generator, int] = {}
    for g in phi.space.generators(phi.degree + 1):
        c = Chain(phi.space, phi.degree + 1, {g: 1})
        v = evaluate(phi, sigma(c))
        if v:
            out[g] = v
    return Cochain(phi.space, phi.degree + 1, phi.modulus, out)


def pullback_xmap(p: XMap, phi: Cochain, y_window: Sequence[Any] | None = None) -> Cochain:
    """Pull a cochain back along an X-map: (p# phi)(y; x) = phi(p(y); x).

    Needs a finite source to materialize the table; for the infinite integer
    X-set pass ``y_window`` with the finitely many y values of interest.
    """
    plain_target = phi.space.is_plain and p.target.kind == SINGLETON
    if not plain_target and phi.space != ChainSpace(p.target.quandle, p.target):
        raise ValueError("cochain does not live over the map's target X-set")
    src_space = ChainSpace(p.source.quandle, p.source)
    if p.source.is_finite:
        ys = p.source.elements()
    elif y_window is not None:
        ys = list(y_window)
    else:
        raise ValueError("infinite source X-set: pass y_window to materialize")
    q = p.source.quandle
    out: dict[Generator, int] = {}
    tuples: list[tuple[int, ...]] = [()]
    for _ in range(phi.degree):
        tuples = [t + (x,) for t in tuples for x in q.elements() if not t or t[-1] != x]
    for y in ys:
        for xs in tuples:
            v = phi((None, xs)) if plain_target else phi((p(y), xs))
            if v:
                out[(y, xs)] = v
    return Cochain(src_space, phi.degree, phi.modulus, out)


def pullback_iota(theta: Cochain) -> Cochain:
    """Pull a plain (n+1)-cochain back along iota to the complex over Y = X.

    (iota# theta)(x0; x1..xn) = (-1)^n theta(x0, x1, .., xn).
    """
    if not theta.space.is_plain:
        raise ValueError("iota pull-back starts from a plain cochain")
    q = theta.space.quandle
    n = theta.degree - 1
    if n < 0:
        raise ValueError("need a cochain of degree >= 1")
    space = ChainSpace(q, xset_quandle(q))
    sign = 1 if n % 2 == 0 else -1
    out: dict[Generator, int] = {}
    for (y, xs) in space.generators(n):
        if xs and y == xs[0]:
            continue
        v = theta((None, (y,) + xs))
        if v:
            out[(y, xs)] = sign * v
    return Cochain(space, n, theta.modulus, out)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _gen_key(g: Generator) -> str:
    y, xs = g
    body = ",".join(str(x) for x in xs)
    return body if y is None else f"{y};{body}"


def _parse_key(key: str, plain: bool) -> Generator:
    if plain:
        y = None
        body = key
    else:
        ypart, body = key.split(";")
        y = int(ypart)
    xs = tuple(int(t) for t in body.split(",")) if body else ()
    return (y, xs)


def cochain_to_json(phi: Cochain) -> dict:
    ring = "Z" if phi.modulus == 0 else f"Z{phi.modulus}"
    values = {_gen_key(g): v for g, v in sorted(phi.data.items())}
    return {"degree": phi.degree, "ring": ring, "values": values}


def cochain_from_json(space: ChainSpace, payload: dict) -> Cochain:
    ring = payload["ring"]
    modulus = 0 if ring == "Z" else int(ring[1:])
    data = {
        _parse_key(k, space.is_plain): int(v) for k, v in payload["values"].items()
    }
    return Cochain(space, int(payload["degree"]), modulus, data)


def chain_to_json(c: Chain) -> dict:
    return {
        "degree": c.degree,
        "coefficients": {_gen_key(g): v for g, v in sorted(c.data.items())},
    }


def chain_from_json(space: ChainSpace, payload: dict) -> Chain:
    data = {
        _parse_key(k, space.is_plain): int(v)
        for k, v in payload["coefficients"].items()
    }
    return Chain(space, int(payload["degree"]), data)
