"""Tensor products of free modules, in standard coordinates.

A tensor of arity n is a finite, zero-free table ``(i_1, ..., i_n) ->
coefficient`` over the basis tensors e_{i_1} x ... x e_{i_n}.  A pure tensor
of finite-support vectors expands to the product of its supports, so the
table is always finite.  The balanced-product relations (additivity and
scalar slides in each slot) hold exactly by construction and are probed in
the test suite rather than assumed.

``map_via_tensor`` builds the two-sided multiplication x -> sum t^{ij} *
(e_i * f(x)) * e_j that a rank-2 tensor induces on an associative algebra.
The bracketing of that sandwich only collapses when the algebra associates,
so the operation refuses tables that do not claim associativity and
spot-checks the claim on seeded random basis triples before evaluating.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .ring import Backend, BackendMismatchError, Scalar
from .hamel import ColumnFiniteMap, HamelVector, _check_index, basis_vector
from .algebra import StructureTable


class NonAssociativeError(ValueError):
    """A sandwich map was requested over a table that fails associativity."""


def _clean_tensor_coords(backend: Backend, arity: int, coords) -> dict[tuple[int, ...], Scalar]:
    out: dict[tuple[int, ...], Scalar] = {}
    items = coords.items() if isinstance(coords, Mapping) else coords
    for key, c in items:
        key = tuple(_check_index(i) for i in key)
        if len(key) != arity:
            raise ValueError(f"coordinate key {key} does not match arity {arity}")
        if not isinstance(c, Scalar):
            c = backend.scalar(c)
        elif c.backend is not backend:
            raise BackendMismatchError("tensor coefficient backend does not match")
        if not c.is_zero():
            out[key] = c
    return out


@dataclass(frozen=True)
class TensorElement:
    """Element of an n-fold tensor product in basis-tensor coordinates."""

    backend: Backend
    arity: int
    coords: dict[tuple[int, ...], Scalar] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.arity, int) or self.arity < 1:
            raise ValueError(f"tensor arity must be >= 1, got {self.arity}")
        object.__setattr__(
            self, "coords", _clean_tensor_coords(self.backend, self.arity, self.coords)
        )

    def coefficient(self, key: Sequence[int]) -> Scalar:
        return self.coords.get(tuple(key), self.backend.zero)

    def is_zero(self) -> bool:
        return not self.coords

    def _join(self, other: "TensorElement") -> None:
        if not isinstance(other, TensorElement):
            raise TypeError(f"expected TensorElement, got {type(other).__name__}")
        if other.backend is not self.backend:
            raise BackendMismatchError("cannot mix tensors from different backends")
        if other.arity != self.arity:
            raise ValueError(f"cannot combine tensors of arity {self.arity} and {other.arity}")

    def __add__(self, other):
        self._join(other)
        coords = dict(self.coords)
        for key, c in other.coords.items():
            coords[key] = coords[key] + c if key in coords else c
        return TensorElement(self.backend, self.arity, coords)

    def __neg__(self):
        return TensorElement(self.backend, self.arity, {k: -c for k, c in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, d: Scalar) -> "TensorElement":
        if not isinstance(d, Scalar):
            raise TypeError(f"scale takes a Scalar, got {type(d).__name__}")
        if d.backend is not self.backend:
            raise BackendMismatchError("scalar backend does not match tensor backend")
        return TensorElement(self.backend, self.arity, {k: d * c for k, c in self.coords.items()})

    def __rmul__(self, d):
        if isinstance(d, Scalar):
            return self.scale(d)
        return NotImplemented

    def standard_components(self) -> dict[tuple[int, ...], Scalar]:
        """The finite coordinate table in the basis-tensor expansion."""
        return dict(self.coords)

    def to_data(self) -> dict:
        return {
            "arity": self.arity,
            "coords": {
                ",".join(str(i) for i in key): self.coords[key].render()
                for key in sorted(self.coords)
            },
        }

    @classmethod
    def from_data(cls, backend: Backend, data) -> "TensorElement":
        if not isinstance(data, Mapping) or "arity" not in data or "coords" not in data:
            raise ValueError("tensor data must be an object with 'arity' and 'coords'")
        arity = int(data["arity"])
        coords = {}
        for key, text in data["coords"].items():
            idx = tuple(int(part) for part in str(key).split(","))
            coords[idx] = Scalar(backend, backend.parse(text))
        return cls(backend, arity, coords)


def tensor_pure(factors: Sequence[HamelVector]) -> TensorElement:
    """x_1 x ... x x_n with components the products of the coordinates."""
    if not factors:
        raise ValueError("tensor_pure needs at least one factor")
    backend = factors[0].backend
    for v in factors:
        if not isinstance(v, HamelVector):
            raise TypeError(f"expected HamelVector, got {type(v).__name__}")
        if v.backend is not backend:
            raise BackendMismatchError("tensor factors must share one backend")
    coords: dict[tuple[int, ...], Scalar] = {(): backend.one}  # type: ignore[dict-item]
    for v in factors:
        if v.is_zero():
            return TensorElement(backend, len(factors), {})
        coords = {
            key + (i,): c * ci for key, c in coords.items() for i, ci in v.coords.items()
        }
    return TensorElement(backend, len(factors), coords)


def zero_tensor(backend: Backend, arity: int) -> TensorElement:
    return TensorElement(backend, arity, {})


def map_via_tensor(
    table: StructureTable,
    t: TensorElement,
    f: ColumnFiniteMap,
    x: HamelVector,
    samples: int = 64,
    seed: int = 0,
    max_index: int = 16,
) -> HamelVector:
    """Evaluate the two-sided multiplication induced by a rank-2 tensor.

    Returns sum over (i, j) in t of t^{ij} * ((e_i * f(x)) * e_j), taking
    products in `table`.  Requires the table to claim associativity and
    verifies the claim on `samples` seeded random basis triples drawn from
    indices up to `max_index`; a failing triple raises NonAssociativeError
    rather than returning a bracketing-dependent value.
    """
    if t.arity != 2:
        raise ValueError(f"map_via_tensor needs an arity-2 tensor, got arity {t.arity}")
    backend = table.backend
    for value, kind in ((t, TensorElement), (f, ColumnFiniteMap), (x, HamelVector)):
        if not isinstance(value, kind):
            raise TypeError(f"expected {kind.__name__}, got {type(value).__name__}")
        if value.backend is not backend:
            raise BackendMismatchError("tensor, map and vector must share the table backend")
    if not table.claims_associative:
        raise NonAssociativeError(
            f"table {table.name!r} does not claim associativity; sandwich map undefined"
        )
    rng = random.Random(seed)
    for _ in range(max(0, samples)):
        i, j, k = (rng.randint(0, max_index) for _ in range(3))
        triple = tuple(basis_vector(backend, n) for n in (i, j, k))
        if not table.associator(*triple).is_zero():
            raise NonAssociativeError(
                f"table {table.name!r} fails associativity at basis triple ({i}, {j}, {k})"
            )
    fx = f.apply(x)
    out = HamelVector(backend, {})
    for (i, j), c in t.coords.items():
        left = table.mul(basis_vector(backend, i), fx)
        out = out + table.mul(left, basis_vector(backend, j)).scale(c)
    return out
