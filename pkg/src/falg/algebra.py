"""Algebra structure on a free module, given by structure constants.

A :class:`StructureTable` stores, for each basis pair (i, j), the expansion
of the product e_i * e_j.  The product of two finite-support vectors is the
double sum over their supports, so it stays finite-support.  Tables may be
extensional (a finite dict of entries, absent pairs are zero) or backed by a
rule that produces entries on demand; rule results are memoized.

A table may declare a pair bound K with sum_k |C^k_ij| <= K for every pair.
The bound is a certificate the truncation layer relies on; lookups verify it
lazily and raise :class:`CertificateError` on the first violating pair.

Claimed laws (associativity, commutativity) are never assumed silently:
:meth:`StructureTable.check_laws` probes them, and anything that needs a law
(endomorphism products do not, tensor sandwich maps do) re-checks by
sampling.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .ring import Backend, BackendMismatchError, NormValue, Scalar
from .hamel import ColumnFiniteMap, HamelVector, zero_vector


class CertificateError(ValueError):
    """A declared certificate (pair bound, tail bound) failed verification."""


@dataclass
class StructureTable:
    """Structure constants C^k_ij with optional pair bound and law claims."""

    backend: Backend
    name: str = "anonymous"
    entries: dict[tuple[int, int], HamelVector] = field(default_factory=dict)
    rule: Optional[Callable[[int, int], object]] = None
    pair_bound: Optional[NormValue] = None
    claims_associative: bool = False
    claims_commutative: bool = False

    def __post_init__(self):
        if self.pair_bound is not None:
            self.pair_bound = self.backend.norm_check(self.pair_bound)
        cleaned = {}
        for (i, j), entry in self.entries.items():
            cleaned[(i, j)] = self._coerce(entry)
        self.entries = cleaned
        self._checked: set[tuple[int, int]] = set()

    def _coerce(self, entry) -> HamelVector:
        if not isinstance(entry, HamelVector):
            entry = HamelVector(self.backend, entry)
        elif entry.backend is not self.backend:
            raise BackendMismatchError("table entry backend does not match table backend")
        return entry

    def lookup(self, i: int, j: int) -> HamelVector:
        """Expansion of e_i * e_j; zero for absent pairs of an extensional table."""
        key = (i, j)
        entry = self.entries.get(key)
        if entry is None:
            if self.rule is None:
                entry = zero_vector(self.backend)
            else:
                entry = self._coerce(self.rule(i, j))
            self.entries[key] = entry
        if self.pair_bound is not None and key not in self._checked:
            # accumulate without upward rounding: reject only provable violations
            mass = self.backend.norm_zero
            for c in entry.coords.values():
                mass = self.backend.norm_add_low(mass, c.norm())
            if mass > self.pair_bound:
                raise CertificateError(
                    f"pair bound violated at ({i}, {j}): "
                    f"sum of |C| is {mass}, declared bound {self.pair_bound}"
                )
            self._checked.add(key)
        return entry

    def mul(self, a: HamelVector, b: HamelVector) -> HamelVector:
        """(ab)^k = sum_ij a^i b^j C^k_ij over the two finite supports."""
        for v in (a, b):
            if not isinstance(v, HamelVector):
                raise TypeError(f"expected HamelVector, got {type(v).__name__}")
            if v.backend is not self.backend:
                raise BackendMismatchError("operand backend does not match table backend")
        out = zero_vector(self.backend)
        for i, ai in a.coords.items():
            for j, bj in b.coords.items():
                entry = self.lookup(i, j)
                if not entry.is_zero():
                    out = out + entry.scale(ai * bj)
        return out

    def commutator(self, a: HamelVector, b: HamelVector) -> HamelVector:
        """[a, b] = ab - ba; zero iff the pair commutes."""
        return self.mul(a, b) - self.mul(b, a)

    def associator(self, a: HamelVector, b: HamelVector, c: HamelVector) -> HamelVector:
        """(a, b, c) = (ab)c - a(bc); zero iff the triple associates."""
        return self.mul(self.mul(a, b), c) - self.mul(a, self.mul(b, c))

    def nucleus_defects(self, a, pairs) -> tuple["AssociatorDefect", ...]:
        """Nonzero associators with `a` in each slot, against witness pairs.

        Empty result means `a` associates with every given pair in all three
        positions (a nucleus membership certificate relative to the
        witnesses, nothing stronger).
        """
        out = []
        for x, y in pairs:
            for slot, triple in (
                ("left", (a, x, y)),
                ("middle", (x, a, y)),
                ("right", (x, y, a)),
            ):
                value = self.associator(*triple)
                if not value.is_zero():
                    out.append(AssociatorDefect(slot, x, y, value))
        return tuple(out)

    def center_defects(self, a, witnesses) -> "CenterReport":
        """Commutation and association defects of `a` against witnesses.

        Checks [a, x] for every witness x and all three associator slots
        over every ordered witness pair.
        """
        witnesses = list(witnesses)
        comms = []
        for x in witnesses:
            value = self.commutator(a, x)
            if not value.is_zero():
                comms.append(CommutatorDefect(x, value))
        pairs = [(x, y) for x in witnesses for y in witnesses]
        return CenterReport(tuple(comms), self.nucleus_defects(a, pairs))

    def check_laws(self, trials: int = 100, max_index: int = 16, seed: int = 0) -> "LawReport":
        """Probe bilinearity and claimed laws on seeded random vectors.

        Exact equality on every backend; float sampling sticks to small
        integers so IEEE arithmetic stays exact too.  Returns a report, one
        entry per law, with a rendered counterexample on failure.
        """
        if not isinstance(trials, int) or trials <= 0:
            raise ValueError(f"trials must be a positive integer, got {trials}")
        if max_index < 0:
            raise ValueError("max_index must be >= 0")
        rng = random.Random(seed)
        laws: list[tuple[str, Callable[..., Optional[str]]]] = [
            ("left_distributive", self._law_left_distributive),
            ("right_distributive", self._law_right_distributive),
            ("scalar_left", self._law_scalar_left),
            ("scalar_right", self._law_scalar_right),
        ]
        if self.claims_commutative:
            laws.append(("commutative", self._law_commutative))
        if self.claims_associative:
            laws.append(("associative", self._law_associative))
        results = []
        for law_name, probe in laws:
            counterexample = None
            done = 0
            for _ in range(trials):
                counterexample = probe(rng, max_index)
                done += 1
                if counterexample is not None:
                    break
            results.append(LawResult(law_name, counterexample is None, done, counterexample))
        return LawReport(self.name, seed, trials, tuple(results))

    # law probes: return None on success, a rendered counterexample on failure

    def _rand_scalar(self, rng) -> Scalar:
        n = rng.randint(-5, 5)
        if self.backend.name == "rat":
            return self.backend.scalar(Fraction(n, rng.randint(1, 4)))
        return self.backend.scalar(n)

    def _rand_vector(self, rng, max_index: int) -> HamelVector:
        size = rng.randint(0, 3)
        coords = {}
        for _ in range(size):
            coords[rng.randint(0, max_index)] = self._rand_scalar(rng)
        return HamelVector(self.backend, coords)

    @staticmethod
    def _describe(**parts) -> str:
        return "; ".join(f"{k}={_render_value(v)}" for k, v in parts.items())

    def _law_left_distributive(self, rng, max_index):
        u, v, w = (self._rand_vector(rng, max_index) for _ in range(3))
        if self.mul(u + v, w) != self.mul(u, w) + self.mul(v, w):
            return self._describe(u=u, v=v, w=w)
        return None

    def _law_right_distributive(self, rng, max_index):
        u, v, w = (self._rand_vector(rng, max_index) for _ in range(3))
        if self.mul(u, v + w) != self.mul(u, v) + self.mul(u, w):
            return self._describe(u=u, v=v, w=w)
        return None

    def _law_scalar_left(self, rng, max_index):
        d = self._rand_scalar(rng)
        u, v = (self._rand_vector(rng, max_index) for _ in range(2))
        if self.mul(u.scale(d), v) != self.mul(u, v).scale(d):
            return self._describe(d=d, u=u, v=v)
        return None

    def _law_scalar_right(self, rng, max_index):
        d = self._rand_scalar(rng)
        u, v = (self._rand_vector(rng, max_index) for _ in range(2))
        if self.mul(u, v.scale(d)) != self.mul(u, v).scale(d):
            return self._describe(d=d, u=u, v=v)
        return None

    def _law_commutative(self, rng, max_index):
        u, v = (self._rand_vector(rng, max_index) for _ in range(2))
        if self.mul(u, v) != self.mul(v, u):
            return self._describe(u=u, v=v, commutator=self.commutator(u, v))
        return None

    def _law_associative(self, rng, max_index):
        u, v, w = (self._rand_vector(rng, max_index) for _ in range(3))
        value = self.associator(u, v, w)
        if not value.is_zero():
            return self._describe(u=u, v=v, w=w, associator=value)
        return None


def _render_value(v) -> str:
    if isinstance(v, HamelVector):
        return "{" + ", ".join(f"{i}: {v.coords[i].render()}" for i in sorted(v.coords)) + "}"
    if isinstance(v, Scalar):
        return v.render()
    return str(v)


@dataclass(frozen=True)
class AssociatorDefect:
    slot: str  # which argument holds the probed element: left/middle/right
    x: HamelVector
    y: HamelVector
    value: HamelVector


@dataclass(frozen=True)
class CommutatorDefect:
    x: HamelVector
    value: HamelVector


@dataclass(frozen=True)
class CenterReport:
    commutator_defects: tuple[CommutatorDefect, ...]
    associator_defects: tuple[AssociatorDefect, ...]

    @property
    def ok(self) -> bool:
        return not self.commutator_defects and not self.associator_defects


@dataclass(frozen=True)
class LawResult:
    law: str
    ok: bool
    trials: int
    counterexample: Optional[str]


@dataclass(frozen=True)
class LawReport:
    table: str
    seed: int
    trials: int
    results: tuple[LawResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def to_data(self) -> dict:
        return {
            "table": self.table,
            "seed": self.seed,
            "trials": self.trials,
            "ok": self.ok,
            "laws": [
                {
                    "law": r.law,
                    "ok": r.ok,
                    "trials": r.trials,
                    **({"counterexample": r.counterexample} if r.counterexample else {}),
                }
                for r in self.results
            ],
        }


def endo_mul(f: ColumnFiniteMap, g: ColumnFiniteMap) -> ColumnFiniteMap:
    """Product in the endomorphism algebra: composition f after g."""
    return f.compose(g)


def table_to_data(table: StructureTable) -> dict:
    """Serialize an extensional table; rule-backed tables cannot be listed."""
    if table.rule is not None:
        raise ValueError("rule-backed table cannot be serialized extensionally")
    structure = []
    for (i, j) in sorted(table.entries):
        entry = table.entries[(i, j)]
        for k in sorted(entry.coords):
            structure.append({"i": i, "j": j, "k": k, "c": entry.coords[k].render()})
    data = {"name": table.name, "structure": structure}
    if table.pair_bound is not None:
        data["pairBound"] = table.backend.norm_render(table.pair_bound)
    data["claims"] = {
        "associative": table.claims_associative,
        "commutative": table.claims_commutative,
    }
    return data


def table_from_data(backend: Backend, data) -> StructureTable:
    """Parse an extensional table: {"name", "structure", "pairBound"?, "claims"?}."""
    if not isinstance(data, dict):
        raise ValueError("algebra data must be a JSON object")
    if "structure" not in data:
        raise ValueError("algebra data needs a 'structure' list (or use a builtin name)")
    grouped: dict[tuple[int, int], dict[int, Scalar]] = {}
    for row in data["structure"]:
        i, j, k = int(row["i"]), int(row["j"]), int(row["k"])
        c = Scalar(backend, backend.parse(row["c"]))
        cell = grouped.setdefault((i, j), {})
        cell[k] = cell[k] + c if k in cell else c
    entries = {key: HamelVector(backend, coords) for key, coords in grouped.items()}
    claims = data.get("claims", {})
    pair_bound = data.get("pairBound")
    if pair_bound is not None:
        pair_bound = backend.norm_parse(pair_bound)
    return StructureTable(
        backend,
        name=str(data.get("name", "anonymous")),
        entries=entries,
        pair_bound=pair_bound,
        claims_associative=bool(claims.get("associative", False)),
        claims_commutative=bool(claims.get("commutative", False)),
    )
