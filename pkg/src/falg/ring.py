"""Scalar backends: arbitrary-precision integers, exact rationals, binary64.

Every coefficient in this library is a :class:`Scalar`, a value tagged with
the backend it lives in.  The integer and rational backends are exact, so
algebraic laws hold as structural equalities.  The float backend exists to
feed the truncation layer, where only upper bounds matter; it is kept out of
exact law checking.

Norm values (absolute values, column sums, tail bounds) are plain numbers
rather than Scalars: ``int``/``Fraction`` on the exact backends, ``float``
on the float backend.  Derived bound arithmetic goes through
:meth:`Backend.norm_add` / :meth:`Backend.norm_mul`, which the float backend
rounds toward +inf, so a chain of bound computations can only overestimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

NormValue = Union[int, Fraction, float]


class BackendMismatchError(TypeError):
    """Scalars from two different backends met in one operation."""


class Backend:
    """A coefficient domain: representation, ring ops, norm, serialization."""

    name: str
    exact: bool

    def __repr__(self):
        return self.name

    # raw-value operations; Scalar wraps these

    def check(self, value):
        """Validate and canonicalize a raw coefficient value."""
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def norm(self, a) -> NormValue:
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def from_rational(self, p: int, q: int):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def render(self, a) -> str:
        raise NotImplementedError

    # bound arithmetic on plain norm values

    def norm_check(self, x) -> NormValue:
        raise NotImplementedError

    def norm_add(self, x: NormValue, y: NormValue) -> NormValue:
        raise NotImplementedError

    def norm_mul(self, x: NormValue, y: NormValue) -> NormValue:
        raise NotImplementedError

    def norm_add_low(self, x: NormValue, y: NormValue) -> NormValue:
        """Addition that never overshoots the exact sum; used by certificate
        validation, which may only reject on provable violations."""
        return x + y

    @property
    def norm_zero(self) -> NormValue:
        return self.norm_check(0)

    def norm_render(self, x: NormValue) -> str:
        raise NotImplementedError

    def norm_parse(self, text: str) -> NormValue:
        raise NotImplementedError

    # conveniences

    def scalar(self, value) -> "Scalar":
        return Scalar(self, self.check(value))

    @property
    def zero(self) -> "Scalar":
        return Scalar(self, self.from_int(0))

    @property
    def one(self) -> "Scalar":
        return Scalar(self, self.from_int(1))


def _exact_norm_check(x) -> Union[int, Fraction]:
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise TypeError(f"exact bound must be int or Fraction, got {type(x).__name__}")
    if x < 0:
        raise ValueError(f"bound must be non-negative, got {x}")
    return x


class IntegerBackend(Backend):
    name = "int"
    exact = True

    def check(self, value):
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"integer backend takes int, got {type(value).__name__}")
        return value

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def norm(self, a):
        return abs(a)

    def from_int(self, n):
        return int(n)

    def from_rational(self, p, q):
        if q == 0:
            raise ZeroDivisionError("denominator is zero")
        raise ValueError("integer backend has no general quotients; use the rational backend")

    def parse(self, text):
        return int(text)

    def render(self, a):
        return str(a)

    # integer coefficients still produce rational bounds (column sums etc.)
    def norm_check(self, x):
        return _exact_norm_check(x)

    def norm_add(self, x, y):
        return x + y

    def norm_mul(self, x, y):
        return x * y

    def norm_render(self, x):
        return str(x)

    def norm_parse(self, text):
        return _exact_norm_check(Fraction(text))


class RationalBackend(Backend):
    name = "rat"
    exact = True

    def check(self, value):
        if isinstance(value, bool):
            raise TypeError("rational backend takes int/Fraction/str, got bool")
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise TypeError(f"rational backend takes int/Fraction/str, got {type(value).__name__}")

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def norm(self, a):
        return abs(a)

    def from_int(self, n):
        return Fraction(n)

    def from_rational(self, p, q):
        if q == 0:
            raise ZeroDivisionError("denominator is zero")
        return Fraction(p, q)

    def parse(self, text):
        return Fraction(text)

    def render(self, a):
        return str(a)  # Fraction prints reduced "p/q", integers bare

    def norm_check(self, x):
        if isinstance(x, str):
            x = Fraction(x)
        return _exact_norm_check(x)

    def norm_add(self, x, y):
        return x + y

    def norm_mul(self, x, y):
        return x * y

    def norm_render(self, x):
        return str(x)

    def norm_parse(self, text):
        return _exact_norm_check(Fraction(text))


def _up(x: float) -> float:
    """Round a float result toward +inf by one ulp; keeps bounds sound."""
    if math.isinf(x) or math.isnan(x):
        raise OverflowError("bound arithmetic left the finite range")
    return math.nextafter(x, math.inf)


class Float64Backend(Backend):
    name = "f64"
    exact = False

    def check(self, value):
        if isinstance(value, bool):
            raise TypeError("float backend takes int/float, got bool")
        if isinstance(value, (int, float)):
            v = float(value)
            if math.isnan(v) or math.isinf(v):
                raise ValueError("float coefficients must be finite")
            return v
        raise TypeError(f"float backend takes int/float, got {type(value).__name__}")

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def norm(self, a):
        return abs(a)

    def from_int(self, n):
        return float(n)

    def from_rational(self, p, q):
        if q == 0:
            raise ZeroDivisionError("denominator is zero")
        return float(Fraction(p, q))  # correctly rounded to nearest

    def parse(self, text):
        v = float(text)
        if math.isnan(v) or math.isinf(v):
            raise ValueError("float coefficients must be finite")
        return v

    def render(self, a):
        return repr(a)  # shortest round-trip decimal

    def norm_check(self, x):
        if isinstance(x, str):
            x = float(x)
        if isinstance(x, Fraction):
            x = float(x)
        if not isinstance(x, (int, float)):
            raise TypeError(f"float bound must be numeric, got {type(x).__name__}")
        x = float(x)
        if math.isnan(x) or x < 0:
            raise ValueError(f"bound must be non-negative, got {x}")
        return x

    def norm_add(self, x, y):
        return _up(x + y)

    def norm_mul(self, x, y):
        if x == 0.0 or y == 0.0:
            return 0.0
        return _up(x * y)

    def norm_add_low(self, x, y):
        # one ulp down dominates the half-ulp round-to-nearest error
        s = x + y
        if math.isinf(s) or math.isnan(s):
            raise OverflowError("bound arithmetic left the finite range")
        return max(0.0, math.nextafter(s, -math.inf))

    def norm_render(self, x):
        return repr(float(x))

    def norm_parse(self, text):
        return self.norm_check(float(text))


INTEGER = IntegerBackend()
RATIONAL = RationalBackend()
FLOAT64 = Float64Backend()

BACKENDS = {b.name: b for b in (INTEGER, RATIONAL, FLOAT64)}


@dataclass(frozen=True, slots=True)
class Scalar:
    """One coefficient, tagged with its backend.  Mixing backends raises."""

    backend: Backend
    value: object

    def _join(self, other: "Scalar") -> None:
        if other.backend is not self.backend:
            raise BackendMismatchError(
                f"cannot mix {self.backend.name} and {other.backend.name} scalars"
            )

    def __add__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        self._join(other)
        return Scalar(self.backend, self.backend.add(self.value, other.value))

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        self._join(other)
        return Scalar(self.backend, self.backend.add(self.value, self.backend.neg(other.value)))

    def __neg__(self):
        return Scalar(self.backend, self.backend.neg(self.value))

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        self._join(other)
        return Scalar(self.backend, self.backend.mul(self.value, other.value))

    def is_zero(self) -> bool:
        return self.value == self.backend.from_int(0)

    def norm(self) -> NormValue:
        return self.backend.norm(self.value)

    def render(self) -> str:
        return self.backend.render(self.value)

    def __str__(self):
        return self.render()


def embed_int(backend: Backend, n: int) -> Scalar:
    """Image of an integer under the canonical characteristic-zero embedding."""
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError(f"embed_int takes int, got {type(n).__name__}")
    return Scalar(backend, backend.from_int(n))


def embed_rational(backend: Backend, p: int, q: int) -> Scalar:
    """Image of p/q; rejects q = 0 and backends without quotients."""
    for v in (p, q):
        if isinstance(v, bool) or not isinstance(v, int):
            raise TypeError("embed_rational takes integers")
    return Scalar(backend, backend.from_rational(p, q))


def parse_scalar(backend: Backend, text: str) -> Scalar:
    return Scalar(backend, backend.parse(text))
