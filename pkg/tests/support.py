"""Shared generators and checkers for the test suite.

Everything takes an explicit random.Random so suites stay seeded and
reproducible.  The tail-soundness harness lives here because both the unit
tests and the acceptance suite drive it, at different trial counts.
"""

from __future__ import annotations

import random
from fractions import Fraction

from falg import (
    RATIONAL,
    ColumnFiniteMap,
    DualFunctional,
    HamelVector,
    Scalar,
    TailMap,
    TailVector,
    TensorElement,
    load_builtin,
    tail_mul,
)


def rand_scalar(rng: random.Random, backend, span: int = 5) -> Scalar:
    n = rng.randint(-span, span)
    if backend is RATIONAL:
        return backend.scalar(Fraction(n, rng.randint(1, 4)))
    return backend.scalar(n)


def rand_nonzero_scalar(rng: random.Random, backend, span: int = 5) -> Scalar:
    while True:
        s = rand_scalar(rng, backend, span)
        if not s.is_zero():
            return s


def rand_vector(rng: random.Random, backend, max_index: int = 16, max_support: int = 4) -> HamelVector:
    coords = {}
    for _ in range(rng.randint(0, max_support)):
        coords[rng.randint(0, max_index)] = rand_scalar(rng, backend)
    return HamelVector(backend, coords)


def rand_map(
    rng: random.Random, backend, max_index: int = 16, max_cols: int = 3, max_rows: int = 3
) -> ColumnFiniteMap:
    cols = {}
    for _ in range(rng.randint(0, max_cols)):
        col = {}
        for _ in range(rng.randint(1, max_rows)):
            col[rng.randint(0, max_index)] = rand_scalar(rng, backend)
        cols[rng.randint(0, max_index)] = HamelVector(backend, col)
    return ColumnFiniteMap(backend, cols)


def assert_canonical(obj) -> None:
    """Structural invariant: zero-free finite storage, consistent backends."""
    if isinstance(obj, (HamelVector, DualFunctional)):
        for i, c in obj.coords.items():
            assert isinstance(i, int) and i >= 0, f"bad index {i!r}"
            assert isinstance(c, Scalar) and c.backend is obj.backend
            assert not c.is_zero(), f"stored zero at index {i}"
    elif isinstance(obj, ColumnFiniteMap):
        for j, col in obj.cols.items():
            assert isinstance(j, int) and j >= 0
            assert not col.is_zero(), f"stored empty column {j}"
            assert col.backend is obj.backend
            assert_canonical(col)
    elif isinstance(obj, TensorElement):
        for key, c in obj.coords.items():
            assert isinstance(key, tuple) and len(key) == obj.arity
            assert all(isinstance(i, int) and i >= 0 for i in key)
            assert not c.is_zero(), f"stored zero at {key}"
    elif isinstance(obj, TailVector):
        assert obj.tail >= 0
        assert_canonical(obj.prefix)
    elif isinstance(obj, TailMap):
        assert obj.tail >= 0
        assert_canonical(obj.finite)
    elif isinstance(obj, Scalar):
        pass
    else:
        raise TypeError(f"assert_canonical cannot check {type(obj).__name__}")


def l1_distance(a: HamelVector, b: HamelVector):
    """Exact sum of |a_i - b_i| over the union of supports."""
    total = a.backend.norm_zero
    for i in set(a.coords) | set(b.coords):
        total = a.backend.norm_add(total, (a.coefficient(i) - b.coefficient(i)).norm())
    return total


# tail-soundness harness ----------------------------------------------------
#
# Random expression trees over add/scale/mul/apply/compose, evaluated twice:
# once on exact values (the ground truth) and once on truncated inputs with
# certified tails.  Soundness means the l1 distance between the ground truth
# and the truncated result's prefix never exceeds the result's tail bound.

_POLY = load_builtin("polynomial", RATIONAL)


def _long_exact_vector(rng: random.Random) -> HamelVector:
    coords = {}
    for _ in range(rng.randint(6, 12)):
        coords[rng.randint(0, 24)] = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    return HamelVector(RATIONAL, coords)


def _truncate_vector(rng: random.Random, v: HamelVector) -> TailVector:
    kept, dropped = {}, Fraction(0)
    for i, c in v.coords.items():
        if rng.random() < 0.6:
            kept[i] = c
        else:
            dropped += c.norm()
    return TailVector(HamelVector(RATIONAL, kept), dropped)


def _long_exact_map(rng: random.Random) -> ColumnFiniteMap:
    cols = {}
    for _ in range(rng.randint(3, 6)):
        col = {}
        for _ in range(rng.randint(1, 4)):
            col[rng.randint(0, 24)] = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        cols[rng.randint(0, 24)] = HamelVector(RATIONAL, col)
    return ColumnFiniteMap(RATIONAL, cols)


def _truncate_map(rng: random.Random, f: ColumnFiniteMap) -> TailMap:
    cols: dict[int, dict] = {}
    dropped = Fraction(0)
    for i, j, c in f.entries():
        if rng.random() < 0.7:
            cols.setdefault(j, {})[i] = c
        else:
            dropped += c.norm()
    finite = ColumnFiniteMap(RATIONAL, {j: HamelVector(RATIONAL, col) for j, col in cols.items()})
    return TailMap(finite, dropped)


def _gen_map_node(rng: random.Random, depth: int):
    if depth <= 0 or rng.random() < 0.4:
        exact = _long_exact_map(rng)
        return exact, _truncate_map(rng, exact)
    f_exact, f_tail = _gen_map_node(rng, depth - 1)
    g_exact, g_tail = _gen_map_node(rng, depth - 1)
    return f_exact.compose(g_exact), f_tail.compose(g_tail)


def gen_vector_node(rng: random.Random, depth: int):
    """One random tree; returns (exact ground truth, certified result)."""
    if depth <= 0:
        exact = _long_exact_vector(rng)
        return exact, _truncate_vector(rng, exact)
    op = rng.choice(("leaf", "add", "scale", "mul", "apply"))
    if op == "leaf":
        exact = _long_exact_vector(rng)
        return exact, _truncate_vector(rng, exact)
    if op == "add":
        ue, ut = gen_vector_node(rng, depth - 1)
        ve, vt = gen_vector_node(rng, depth - 1)
        return ue + ve, ut + vt
    if op == "scale":
        d = RATIONAL.scalar(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        ve, vt = gen_vector_node(rng, depth - 1)
        return ve.scale(d), vt.scale(d)
    if op == "mul":
        ue, ut = gen_vector_node(rng, depth - 1)
        ve, vt = gen_vector_node(rng, depth - 1)
        return _POLY.table.mul(ue, ve), tail_mul(_POLY.table, ut, vt)
    fe, ft = _gen_map_node(rng, depth - 1)
    ve, vt = gen_vector_node(rng, depth - 1)
    return fe.apply(ve), ft.apply(vt)


def soundness_trial(rng: random.Random, max_depth: int = 4) -> tuple:
    """Run one tree; returns (error, bound) with error <= bound demanded."""
    exact, certified = gen_vector_node(rng, rng.randint(1, max_depth))
    err = l1_distance(exact, certified.prefix)
    return err, certified.tail
