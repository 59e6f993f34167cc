"""Certified-truncation arithmetic: finite prefixes with sound l1 tails.

A :class:`TailVector` is a finite prefix plus one number, the tail bound,
certifying that the l1 mass of the represented value outside the stored
prefix -- more precisely, the l1 distance between the represented value and
the stored prefix -- is at most that number.  :class:`TailMap` does the same
for the entry table of an l1-bounded map, and :class:`TailPolyMap` for a
curried polylinear nest.

The contract every operation preserves: if the input certificates hold for
the (unknown) represented values, the output certificate holds for the
represented result.  Inputs built from exact data carry tail 0 and the
contract degenerates to exact arithmetic.  Bounds are certificates, not
estimates; the propagation formulas are deliberately conservative, and on
the float backend every bound step rounds upward, so certified claims
survive rounding.

Only the rational and float backends participate here; integer-backend
values must be lifted to rationals first.

Norm reporting is honest about what finite data can know: `norm_interval`
returns [prefix mass, prefix mass + tail], and `bound` on a map returns
[best stored column sum, total stored mass + tail].  True norms of exactly
represented values land inside; a point interval means the value is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .ring import FLOAT64, RATIONAL, Backend, BackendMismatchError, NormValue
from .hamel import ColumnFiniteMap, HamelVector, zero_map
from .algebra import StructureTable


def _check_tail_backend(backend: Backend) -> Backend:
    if backend is not RATIONAL and backend is not FLOAT64:
        raise ValueError(
            f"backend {backend.name!r} is not supported in the truncation layer; "
            "use the rational or float backend"
        )
    return backend


@dataclass(frozen=True)
class NormInterval:
    """Two-sided enclosure of an l1 norm."""

    backend: Backend
    lo: NormValue
    hi: NormValue

    def __post_init__(self):
        object.__setattr__(self, "lo", self.backend.norm_check(self.lo))
        object.__setattr__(self, "hi", self.backend.norm_check(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"interval out of order: lo {self.lo} > hi {self.hi}")

    def is_point(self) -> bool:
        return self.lo == self.hi

    def render(self) -> str:
        return f"[{self.backend.norm_render(self.lo)}, {self.backend.norm_render(self.hi)}]"

    def to_data(self) -> dict:
        return {"lo": self.backend.norm_render(self.lo), "hi": self.backend.norm_render(self.hi)}

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class TailVector:
    """Finite prefix plus a certified bound on the mass it leaves out."""

    prefix: HamelVector
    tail: NormValue

    def __post_init__(self):
        if not isinstance(self.prefix, HamelVector):
            raise TypeError(f"prefix must be HamelVector, got {type(self.prefix).__name__}")
        _check_tail_backend(self.prefix.backend)
        object.__setattr__(self, "tail", self.prefix.backend.norm_check(self.tail))

    @property
    def backend(self) -> Backend:
        return self.prefix.backend

    @classmethod
    def make(cls, backend: Backend, coords, tail=0) -> "TailVector":
        """Build from raw coordinates and a caller-certified tail bound."""
        return cls(HamelVector(backend, coords), tail)

    @classmethod
    def lift(cls, v: HamelVector) -> "TailVector":
        """An exact vector is its own prefix with nothing left out."""
        return cls(v, v.backend.norm_zero)

    def is_exact(self) -> bool:
        return self.tail == self.backend.norm_zero

    def _join(self, other: "TailVector") -> None:
        if not isinstance(other, TailVector):
            raise TypeError(f"expected TailVector, got {type(other).__name__}")
        if other.backend is not self.backend:
            raise BackendMismatchError("cannot mix tail vectors from different backends")

    def __add__(self, other):
        self._join(other)
        b = self.backend
        return TailVector(self.prefix + other.prefix, b.norm_add(self.tail, other.tail))

    def __neg__(self):
        return TailVector(-self.prefix, self.tail)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, d) -> "TailVector":
        return TailVector(self.prefix.scale(d), self.backend.norm_mul(d.norm(), self.tail))

    def truncate(self, keep) -> "TailVector":
        """Drop prefix coordinates outside `keep`, moving their mass into the tail."""
        keep = set(keep)
        b = self.backend
        kept = {}
        tail = self.tail
        for i, c in self.prefix.coords.items():
            if i in keep:
                kept[i] = c
            else:
                tail = b.norm_add(tail, c.norm())
        return TailVector(HamelVector(b, kept), tail)

    def norm_interval(self) -> NormInterval:
        lo = self.prefix.l1()
        return NormInterval(self.backend, lo, self.backend.norm_add(lo, self.tail))

    def to_data(self) -> dict:
        data = self.prefix.to_data()
        data["tail"] = self.backend.norm_render(self.tail)
        return data

    @classmethod
    def from_data(cls, backend: Backend, data) -> "TailVector":
        prefix = HamelVector.from_data(backend, data)
        tail = backend.norm_parse(data["tail"]) if "tail" in data else backend.norm_zero
        return cls(prefix, tail)


@dataclass(frozen=True)
class TailMap:
    """Finite entry table plus a certified bound on the entry mass left out."""

    finite: ColumnFiniteMap
    tail: NormValue

    def __post_init__(self):
        if not isinstance(self.finite, ColumnFiniteMap):
            raise TypeError(f"finite part must be ColumnFiniteMap, got {type(self.finite).__name__}")
        _check_tail_backend(self.finite.backend)
        object.__setattr__(self, "tail", self.finite.backend.norm_check(self.tail))

    @property
    def backend(self) -> Backend:
        return self.finite.backend

    @classmethod
    def lift(cls, f: ColumnFiniteMap) -> "TailMap":
        return cls(f, f.backend.norm_zero)

    def is_exact(self) -> bool:
        return self.tail == self.backend.norm_zero

    def _join(self, other: "TailMap") -> None:
        if not isinstance(other, TailMap):
            raise TypeError(f"expected TailMap, got {type(other).__name__}")
        if other.backend is not self.backend:
            raise BackendMismatchError("cannot mix tail maps from different backends")

    def __add__(self, other):
        self._join(other)
        b = self.backend
        return TailMap(self.finite + other.finite, b.norm_add(self.tail, other.tail))

    def scale(self, d) -> "TailMap":
        return TailMap(self.finite.scale(d), self.backend.norm_mul(d.norm(), self.tail))

    def bound(self) -> NormInterval:
        """Operator-norm enclosure: [best stored column sum, total mass + tail]."""
        b = self.backend
        lo = b.norm_zero
        for col in self.finite.cols.values():
            mass = col.l1()
            if mass > lo:
                lo = mass
        hi = b.norm_add(self.finite.l1_total(), self.tail)
        return NormInterval(b, lo, hi)

    def apply(self, v: TailVector) -> TailVector:
        """Apply with certified error: stored part exactly, the rest bounded.

        tail(result) = Ff*tail(v) + Ft*(prefix mass of v + tail(v)) where Ff
        is the stored entry mass and Ft this map's tail.
        """
        if not isinstance(v, TailVector):
            raise TypeError(f"expected TailVector, got {type(v).__name__}")
        if v.backend is not self.backend:
            raise BackendMismatchError("map and vector backends differ")
        b = self.backend
        prefix = self.finite.apply(v.prefix)
        ff = self.finite.l1_total()
        sv = v.prefix.l1()
        tail = b.norm_add(
            b.norm_mul(ff, v.tail),
            b.norm_mul(self.tail, b.norm_add(sv, v.tail)),
        )
        return TailVector(prefix, tail)

    def __call__(self, v: TailVector) -> TailVector:
        return self.apply(v)

    def compose(self, g: "TailMap") -> "TailMap":
        """self after g; tail = Ff*Gt + Ft*(Gf + Gt), total-mass submultiplicative."""
        self._join(g)
        b = self.backend
        ff = self.finite.l1_total()
        gf = g.finite.l1_total()
        tail = b.norm_add(
            b.norm_mul(ff, g.tail),
            b.norm_mul(self.tail, b.norm_add(gf, g.tail)),
        )
        return TailMap(self.finite.compose(g.finite), tail)

    def to_data(self) -> dict:
        data = self.finite.to_data()
        data["tail"] = self.backend.norm_render(self.tail)
        return data

    @classmethod
    def from_data(cls, backend: Backend, data) -> "TailMap":
        finite = ColumnFiniteMap.from_data(backend, data)
        tail = backend.norm_parse(data["tail"]) if "tail" in data else backend.norm_zero
        return cls(finite, tail)


def tail_mul(table: StructureTable, a: TailVector, b: TailVector) -> TailVector:
    """Product of tail vectors in an algebra with a declared pair bound K.

    Prefixes multiply exactly; the unseen cross terms are bounded by
    K*(Sa*tail(b) + tail(a)*Sb + tail(a)*tail(b)) with Sa, Sb the prefix
    masses.  Without a pair bound no finite certificate exists, so tables
    lacking one are refused.
    """
    if not isinstance(table, StructureTable):
        raise TypeError(f"expected StructureTable, got {type(table).__name__}")
    if table.pair_bound is None:
        raise ValueError(f"table {table.name!r} declares no pair bound; tail product undefined")
    a._join(b)
    if a.backend is not table.backend:
        raise BackendMismatchError("operand backend does not match table backend")
    be = a.backend
    k = table.pair_bound
    sa, sb = a.prefix.l1(), b.prefix.l1()
    cross = be.norm_add(
        be.norm_add(be.norm_mul(sa, b.tail), be.norm_mul(a.tail, sb)),
        be.norm_mul(a.tail, b.tail),
    )
    return TailVector(table.mul(a.prefix, b.prefix), be.norm_mul(k, cross))


TailNode = Union["TailPolyMap", TailMap]


@dataclass(frozen=True)
class TailPolyMap:
    """Curried polylinear nest with certified tails at every node.

    ``slots[j]`` is the nest obtained by feeding e_j into the first
    argument; ``tail`` bounds the flattened entry mass this node's stored
    structure leaves out (unstored first-argument slots included).  The
    total certified mass of a nest is the stored entry mass plus the sum of
    all node tails.
    """

    backend: Backend
    arity: int
    slots: dict[int, TailNode] = field(default_factory=dict)
    tail: NormValue = 0

    def __post_init__(self):
        _check_tail_backend(self.backend)
        if not isinstance(self.arity, int) or self.arity < 2:
            raise ValueError(f"TailPolyMap arity must be >= 2, got {self.arity}")
        cleaned: dict[int, TailNode] = {}
        for j, sub in self.slots.items():
            if self.arity == 2:
                if not isinstance(sub, TailMap):
                    raise TypeError("arity-2 slots must be TailMap")
            else:
                if not isinstance(sub, TailPolyMap) or sub.arity != self.arity - 1:
                    raise TypeError(
                        f"arity-{self.arity} slots must be TailPolyMap of arity {self.arity - 1}"
                    )
            if sub.backend is not self.backend:
                raise BackendMismatchError("slot backend does not match nest backend")
            cleaned[int(j)] = sub
        object.__setattr__(self, "slots", cleaned)
        object.__setattr__(self, "tail", self.backend.norm_check(self.tail))


def _nest_stored_mass(nest: TailNode) -> NormValue:
    """Total stored entry mass, flattened across all levels."""
    if isinstance(nest, TailMap):
        return nest.finite.l1_total()
    total = nest.backend.norm_zero
    for sub in nest.slots.values():
        total = nest.backend.norm_add(total, _nest_stored_mass(sub))
    return total


def _nest_tail_mass(nest: TailNode) -> NormValue:
    """Sum of the tails of every node in the nest."""
    if isinstance(nest, TailMap):
        return nest.tail
    total = nest.tail
    for sub in nest.slots.values():
        total = nest.backend.norm_add(total, _nest_tail_mass(sub))
    return total


def _nest_scale_finite(nest: TailNode, d) -> TailNode:
    """Scale the stored structure only; tails are dropped, not scaled."""
    if isinstance(nest, TailMap):
        return TailMap(nest.finite.scale(d), nest.backend.norm_zero)
    b = nest.backend
    return TailPolyMap(
        b,
        nest.arity,
        {j: _nest_scale_finite(sub, d) for j, sub in nest.slots.items()},
        b.norm_zero,
    )


def _nest_add(x: TailNode, y: TailNode) -> TailNode:
    if isinstance(x, TailMap):
        return x + y
    b = x.backend
    slots = dict(x.slots)
    for j, sub in y.slots.items():
        slots[j] = _nest_add(slots[j], sub) if j in slots else sub
    return TailPolyMap(b, x.arity, slots, b.norm_add(x.tail, y.tail))


def _zero_nest(backend: Backend, arity: int) -> TailNode:
    if arity == 1:
        return TailMap.lift(zero_map(backend))
    return TailPolyMap(backend, arity, {}, backend.norm_zero)


def _peel(nest: TailPolyMap, x: TailVector) -> TailNode:
    """Feed one tail vector into the first slot; same bound shape as apply.

    The stored structures combine exactly over the prefix with their tails
    dropped; one extra top tail S*tail(x) + T*(prefix mass + tail(x)), with
    S the nest's stored mass and T its total tail mass, jointly covers the
    certificate slack and the prefix error -- the map-application formula
    one level up.  Keeping the scaled sub-tails as well would double-count
    and break the bound-product inequality.
    """
    b = nest.backend
    stored = _nest_stored_mass(nest)
    tails = _nest_tail_mass(nest)
    combined = _zero_nest(b, nest.arity - 1)
    for j, c in x.prefix.coords.items():
        sub = nest.slots.get(j)
        if sub is not None:
            combined = _nest_add(combined, _nest_scale_finite(sub, c))
    extra = b.norm_add(
        b.norm_mul(stored, x.tail),
        b.norm_mul(tails, b.norm_add(x.prefix.l1(), x.tail)),
    )
    if isinstance(combined, TailMap):
        return TailMap(combined.finite, b.norm_add(combined.tail, extra))
    return TailPolyMap(b, combined.arity, combined.slots, b.norm_add(combined.tail, extra))


def _nest_arity(nest: TailNode) -> int:
    return 1 if isinstance(nest, TailMap) else nest.arity


def tpoly_apply(nest: TailNode, xs: Sequence[TailVector]) -> TailVector:
    """Evaluate a curried nest on tail vectors, peeling one slot at a time.

    Depth 1 is plain map application; the all-exact case reproduces the
    finite-support polylinear evaluation with tail 0.
    """
    if len(xs) != _nest_arity(nest):
        raise ValueError(
            f"arity mismatch: nest of arity {_nest_arity(nest)} applied to {len(xs)} arguments"
        )
    for x in xs:
        if not isinstance(x, TailVector):
            raise TypeError(f"expected TailVector, got {type(x).__name__}")
    while isinstance(nest, TailPolyMap):
        if xs[0].backend is not nest.backend:
            raise BackendMismatchError("argument backend does not match nest backend")
        nest = _peel(nest, xs[0])
        xs = xs[1:]
    return nest.apply(xs[0])


def tpoly_bound(nest: TailNode) -> NormInterval:
    """Enclosure for the nest's bound constant: hi = stored mass + tail mass.

    The hi end equals the hi end computed from the top curried level alone
    (slot masses summed plus tails), so currying does not change the bound.
    The lo end is the largest single stored entry, the value at the best
    stored basis tuple.
    """
    if isinstance(nest, TailMap):
        return nest.bound()
    b = nest.backend
    hi = b.norm_add(_nest_stored_mass(nest), _nest_tail_mass(nest))
    lo = _nest_best_entry(nest)
    return NormInterval(b, lo, hi)


def _nest_best_entry(nest: TailNode) -> NormValue:
    if isinstance(nest, TailMap):
        best = nest.backend.norm_zero
        for _, _, c in nest.finite.entries():
            if c.norm() > best:
                best = c.norm()
        return best
    best = nest.backend.norm_zero
    for sub in nest.slots.values():
        sb = _nest_best_entry(sub)
        if sb > best:
            best = sb
    return best
