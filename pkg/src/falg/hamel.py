"""Finite-support vectors over a countable basis, and the maps between them.

Everything here is exact: a vector is a finite table ``basis index ->
coefficient``, a linear map is a finite table of nonzero columns, and a
polylinear map is a nest of such tables curried on its first argument.
Storage is canonically zero-free -- constructors prune zero coefficients and
empty columns -- so structural equality coincides with mathematical equality
and the finiteness invariants can be checked by inspection.

Operations never mutate their inputs; treat all values as immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence, Union

from .ring import Backend, BackendMismatchError, NormValue, Scalar


def _check_index(i) -> int:
    if isinstance(i, bool) or not isinstance(i, int):
        raise TypeError(f"basis index must be int, got {type(i).__name__}")
    if i < 0:
        raise ValueError(f"basis index must be >= 0, got {i}")
    return i


def _clean_coords(backend: Backend, coords) -> dict[int, Scalar]:
    out: dict[int, Scalar] = {}
    items = coords.items() if isinstance(coords, Mapping) else coords
    for i, c in items:
        i = _check_index(i)
        if not isinstance(c, Scalar):
            c = backend.scalar(c)
        elif c.backend is not backend:
            raise BackendMismatchError(
                f"coefficient backend {c.backend.name} does not match {backend.name}"
            )
        if not c.is_zero():
            out[i] = c
    return out


@dataclass(frozen=True)
class HamelVector:
    """Finite-support vector: a zero-free table of basis coefficients."""

    backend: Backend
    coords: dict[int, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coords", _clean_coords(self.backend, self.coords))

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.coords))

    def coefficient(self, i: int) -> Scalar:
        _check_index(i)
        return self.coords.get(i, self.backend.zero)

    def is_zero(self) -> bool:
        return not self.coords

    def _join(self, other: "HamelVector") -> None:
        if not isinstance(other, HamelVector):
            raise TypeError(f"expected HamelVector, got {type(other).__name__}")
        if other.backend is not self.backend:
            raise BackendMismatchError(
                f"cannot mix {self.backend.name} and {other.backend.name} vectors"
            )

    def __add__(self, other):
        self._join(other)
        coords = dict(self.coords)
        for i, c in other.coords.items():
            coords[i] = coords[i] + c if i in coords else c
        return HamelVector(self.backend, coords)

    def __neg__(self):
        return HamelVector(self.backend, {i: -c for i, c in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, d: Scalar) -> "HamelVector":
        if not isinstance(d, Scalar):
            raise TypeError(f"scale takes a Scalar, got {type(d).__name__}")
        if d.backend is not self.backend:
            raise BackendMismatchError("scalar backend does not match vector backend")
        return HamelVector(self.backend, {i: d * c for i, c in self.coords.items()})

    def __rmul__(self, d):
        if isinstance(d, Scalar):
            return self.scale(d)
        return NotImplemented

    def l1(self) -> NormValue:
        """Sum of coefficient norms; an upper bound for any unit-basis norm."""
        total = self.backend.norm_zero
        for c in self.coords.values():
            total = self.backend.norm_add(total, c.norm())
        return total

    def to_data(self) -> dict:
        return {"coords": {str(i): self.coords[i].render() for i in sorted(self.coords)}}

    @classmethod
    def from_data(cls, backend: Backend, data) -> "HamelVector":
        if not isinstance(data, Mapping) or "coords" not in data:
            raise ValueError("vector data must be an object with a 'coords' field")
        coords = {}
        for key, text in data["coords"].items():
            coords[int(key)] = Scalar(backend, backend.parse(text))
        return cls(backend, coords)


def zero_vector(backend: Backend) -> HamelVector:
    return HamelVector(backend, {})


def basis_vector(backend: Backend, i: int) -> HamelVector:
    return HamelVector(backend, {_check_index(i): backend.one})


@dataclass(frozen=True)
class DualFunctional:
    """Finite combination of coordinate functionals; evaluates by pairing."""

    backend: Backend
    coords: dict[int, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coords", _clean_coords(self.backend, self.coords))

    def __call__(self, v: HamelVector) -> Scalar:
        return self.evaluate(v)

    def evaluate(self, v: HamelVector) -> Scalar:
        if not isinstance(v, HamelVector):
            raise TypeError(f"expected HamelVector, got {type(v).__name__}")
        if v.backend is not self.backend:
            raise BackendMismatchError("functional and vector backends differ")
        total = self.backend.zero
        small, large = self.coords, v.coords
        if len(large) < len(small):
            small, large = large, small
        for i in small:
            if i in large:
                total = total + self.coords[i] * v.coords[i]
        return total

    def __add__(self, other):
        if not isinstance(other, DualFunctional) or other.backend is not self.backend:
            raise BackendMismatchError("cannot mix functionals from different backends")
        coords = dict(self.coords)
        for i, c in other.coords.items():
            coords[i] = coords[i] + c if i in coords else c
        return DualFunctional(self.backend, coords)

    def scale(self, d: Scalar) -> "DualFunctional":
        return DualFunctional(self.backend, {i: d * c for i, c in self.coords.items()})

    def to_data(self) -> dict:
        return {"coords": {str(i): self.coords[i].render() for i in sorted(self.coords)}}

    @classmethod
    def from_data(cls, backend: Backend, data) -> "DualFunctional":
        v = HamelVector.from_data(backend, data)
        return cls(backend, v.coords)


def dual_basis(backend: Backend, i: int) -> DualFunctional:
    """The functional that reads off coordinate i: e^i(e_j) = delta^i_j."""
    return DualFunctional(backend, {_check_index(i): backend.one})


def _clean_cols(backend: Backend, cols) -> dict[int, HamelVector]:
    out: dict[int, HamelVector] = {}
    items = cols.items() if isinstance(cols, Mapping) else cols
    for j, col in items:
        j = _check_index(j)
        if not isinstance(col, HamelVector):
            col = HamelVector(backend, col)
        elif col.backend is not backend:
            raise BackendMismatchError("column backend does not match map backend")
        if not col.is_zero():
            out[j] = col
    return out


@dataclass(frozen=True)
class ColumnFiniteMap:
    """Linear map stored by columns: column j is the image of e_j.

    Only finitely many columns are stored and each is finite, so the image
    of any finite-support vector is again finite-support.  Absent columns
    are zero.
    """

    backend: Backend
    cols: dict[int, HamelVector] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "cols", _clean_cols(self.backend, self.cols))

    def column(self, j: int) -> HamelVector:
        _check_index(j)
        return self.cols.get(j, zero_vector(self.backend))

    def entry(self, i: int, j: int) -> Scalar:
        return self.column(j).coefficient(i)

    def entries(self) -> Iterator[tuple[int, int, Scalar]]:
        for j in sorted(self.cols):
            col = self.cols[j]
            for i in sorted(col.coords):
                yield i, j, col.coords[i]

    def is_zero(self) -> bool:
        return not self.cols

    def apply(self, v: HamelVector) -> HamelVector:
        if not isinstance(v, HamelVector):
            raise TypeError(f"expected HamelVector, got {type(v).__name__}")
        if v.backend is not self.backend:
            raise BackendMismatchError("map and vector backends differ")
        out = zero_vector(self.backend)
        for j, c in v.coords.items():
            col = self.cols.get(j)
            if col is not None:
                out = out + col.scale(c)
        return out

    def __call__(self, v: HamelVector) -> HamelVector:
        return self.apply(v)

    def _join(self, other: "ColumnFiniteMap") -> None:
        if not isinstance(other, ColumnFiniteMap):
            raise TypeError(f"expected ColumnFiniteMap, got {type(other).__name__}")
        if other.backend is not self.backend:
            raise BackendMismatchError("cannot mix maps from different backends")

    def __add__(self, other):
        self._join(other)
        cols = dict(self.cols)
        for j, col in other.cols.items():
            cols[j] = cols[j] + col if j in cols else col
        return ColumnFiniteMap(self.backend, cols)

    def __neg__(self):
        return ColumnFiniteMap(self.backend, {j: -c for j, c in self.cols.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, d: Scalar) -> "ColumnFiniteMap":
        return ColumnFiniteMap(self.backend, {j: col.scale(d) for j, col in self.cols.items()})

    def __rmul__(self, d):
        if isinstance(d, Scalar):
            return self.scale(d)
        return NotImplemented

    def compose(self, g: "ColumnFiniteMap") -> "ColumnFiniteMap":
        """self after g: column j of the result is self(g(e_j))."""
        self._join(g)
        return ColumnFiniteMap(self.backend, {j: self.apply(col) for j, col in g.cols.items()})

    def l1_total(self) -> NormValue:
        """Sum of |entry| over the whole table; finite by construction."""
        total = self.backend.norm_zero
        for _, _, c in self.entries():
            total = self.backend.norm_add(total, c.norm())
        return total

    def to_data(self) -> dict:
        return {
            "cols": {
                str(j): {str(i): col.coords[i].render() for i in sorted(col.coords)}
                for j, col in ((j, self.cols[j]) for j in sorted(self.cols))
            }
        }

    @classmethod
    def from_data(cls, backend: Backend, data) -> "ColumnFiniteMap":
        if not isinstance(data, Mapping) or "cols" not in data:
            raise ValueError("map data must be an object with a 'cols' field")
        cols = {}
        for j, column in data["cols"].items():
            cols[int(j)] = HamelVector.from_data(backend, {"coords": column})
        return cls(backend, cols)


def zero_map(backend: Backend) -> ColumnFiniteMap:
    return ColumnFiniteMap(backend, {})


def basis_map(backend: Backend, i: int, j: int) -> ColumnFiniteMap:
    """E(i,j): sends e_j to e_i and every other basis vector to zero.

    Any column-finite map with columns in a finite index window is a finite
    combination sum f^i_j E(i,j) of these.
    """
    return ColumnFiniteMap(backend, {_check_index(j): basis_vector(backend, i)})


def identity_on(backend: Backend, indices) -> ColumnFiniteMap:
    """The identity restricted to a finite set of columns."""
    return ColumnFiniteMap(backend, {j: basis_vector(backend, j) for j in indices})


MapNode = Union["PolyMap", ColumnFiniteMap]


@dataclass(frozen=True)
class PolyMap:
    """Polylinear map of arity >= 2, curried on its first argument.

    ``slots[j]`` is the arity-(n-1) map obtained by feeding e_j into the
    first argument; depth-1 nests are plain ColumnFiniteMaps.  Only finitely
    many first-argument slots are stored, each nonempty.
    """

    backend: Backend
    arity: int
    slots: dict[int, MapNode] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.arity, int) or self.arity < 2:
            raise ValueError(f"PolyMap arity must be >= 2, got {self.arity}")
        cleaned: dict[int, MapNode] = {}
        for j, sub in self.slots.items():
            j = _check_index(j)
            if self.arity == 2:
                if not isinstance(sub, ColumnFiniteMap):
                    raise TypeError("arity-2 slots must be ColumnFiniteMap")
            else:
                if not isinstance(sub, PolyMap) or sub.arity != self.arity - 1:
                    raise TypeError(f"arity-{self.arity} slots must be PolyMap of arity {self.arity - 1}")
            if sub.backend is not self.backend:
                raise BackendMismatchError("slot backend does not match nest backend")
            if not sub.is_zero():
                cleaned[j] = sub
        object.__setattr__(self, "slots", cleaned)

    def is_zero(self) -> bool:
        return not self.slots


def poly_apply(nest: MapNode, xs: Sequence[HamelVector]) -> HamelVector:
    """Evaluate a curried nest on a full argument tuple.

    Linear in every slot: peels the first argument against the stored
    slots, then recurses.  A depth-1 nest is ordinary map application.
    """
    if isinstance(nest, ColumnFiniteMap):
        if len(xs) != 1:
            raise ValueError(f"arity mismatch: map of arity 1 applied to {len(xs)} arguments")
        return nest.apply(xs[0])
    if not isinstance(nest, PolyMap):
        raise TypeError(f"expected PolyMap or ColumnFiniteMap, got {type(nest).__name__}")
    if len(xs) != nest.arity:
        raise ValueError(f"arity mismatch: nest of arity {nest.arity} applied to {len(xs)} arguments")
    head, rest = xs[0], xs[1:]
    if head.backend is not nest.backend:
        raise BackendMismatchError("argument backend does not match nest backend")
    out = zero_vector(nest.backend)
    for j, c in head.coords.items():
        sub = nest.slots.get(j)
        if sub is not None:
            out = out + poly_apply(sub, rest).scale(c)
    return out
