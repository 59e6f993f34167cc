"""Builtin algebra fixtures and their basis-label codecs.

Each fixture pairs a structure table with a bijection between structured
labels ("x^2", "ab", "g^-1") and basis indices, so expressions and tests can
name basis vectors the way a human would.  Index 0 is the unit in every
builtin.

Builtins:
  polynomial  one variable, x^i * x^j = x^(i+j); label x^n at index n
  free:k      words over the first k letters, concatenation product,
              enumerated length-lexicographically; empty word (the unit)
              has label "1"
  quaternion  indices 0..3 are 1, i, j, k with the standard table
  complex     indices 0..1 are 1, i
  group_z     group algebra of the integers; g^n zig-zag encoded
              (exponents 0, 1, -1, 2, -2, ... at indices 0, 1, 2, 3, 4, ...)

All of these have pair bound 1: every basis product is a single basis
vector with coefficient +-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .ring import RATIONAL, Backend
from .hamel import basis_vector
from .algebra import StructureTable, table_from_data


class LabelError(ValueError):
    """A basis label does not belong to the fixture's codec."""


@dataclass(frozen=True)
class AlgebraFixture:
    """A structure table plus the label codec naming its basis."""

    table: StructureTable
    encoder: Callable[[str], int]
    decoder: Callable[[int], str]

    @property
    def name(self) -> str:
        return self.table.name

    @property
    def backend(self) -> Backend:
        return self.table.backend

    def encode(self, label: str) -> int:
        return self.encoder(label)

    def decode(self, index: int) -> str:
        return self.decoder(index)


def _power_label(symbol: str, n: int) -> str:
    if n == 0:
        return "1"
    if n == 1:
        return symbol
    return f"{symbol}^{n}"


def _parse_power(symbol: str, label: str, allow_negative: bool) -> int:
    """Invert _power_label; accepts the redundant forms symbol^0, symbol^1."""
    if label == "1":
        return 0
    if label == symbol:
        return 1
    head = symbol + "^"
    if label.startswith(head):
        body = label[len(head):]
        try:
            n = int(body)
        except ValueError:
            raise LabelError(f"malformed label {label!r}") from None
        if str(n) != body:  # reject "x^+2", "x^ 2", "x^02"
            raise LabelError(f"malformed label {label!r}")
        if n < 0 and not allow_negative:
            raise LabelError(f"negative power in label {label!r}")
        return n
    raise LabelError(f"malformed label {label!r}")


def _polynomial(backend: Backend) -> AlgebraFixture:
    def rule(i, j):
        return basis_vector(backend, i + j)

    table = StructureTable(
        backend,
        name="polynomial",
        rule=rule,
        pair_bound=1,
        claims_associative=True,
        claims_commutative=True,
    )

    def encode(label: str) -> int:
        return _parse_power("x", label, allow_negative=False)

    def decode(index: int) -> str:
        if index < 0:
            raise LabelError(f"invalid basis index {index}")
        return _power_label("x", index)

    return AlgebraFixture(table, encode, decode)


def _zigzag(n: int) -> int:
    return 2 * n - 1 if n > 0 else -2 * n


def _unzigzag(index: int) -> int:
    return (index + 1) // 2 if index % 2 else -(index // 2)


def _group_z(backend: Backend) -> AlgebraFixture:
    def rule(i, j):
        return basis_vector(backend, _zigzag(_unzigzag(i) + _unzigzag(j)))

    table = StructureTable(
        backend,
        name="group_z",
        rule=rule,
        pair_bound=1,
        claims_associative=True,
        claims_commutative=True,
    )

    def encode(label: str) -> int:
        return _zigzag(_parse_power("g", label, allow_negative=True))

    def decode(index: int) -> str:
        if index < 0:
            raise LabelError(f"invalid basis index {index}")
        return _power_label("g", _unzigzag(index))

    return AlgebraFixture(table, encode, decode)


def _word_offset(k: int, length: int) -> int:
    """Number of words over k letters shorter than `length`."""
    if k == 1:
        return length
    return (k**length - 1) // (k - 1)


def _free_words(backend: Backend, k: int) -> AlgebraFixture:
    letters = "abcdefghijklmnopqrstuvwxyz"
    if k > len(letters):
        raise ValueError(f"free:{k} exceeds the {len(letters)}-letter alphabet")
    alphabet = letters[:k]

    def word_to_index(word: str) -> int:
        value = 0
        for ch in word:
            value = value * k + alphabet.index(ch)
        return _word_offset(k, len(word)) + value

    def index_to_word(index: int) -> str:
        length = 0
        while _word_offset(k, length + 1) <= index:
            length += 1
        rem = index - _word_offset(k, length)
        out = []
        for _ in range(length):
            rem, d = divmod(rem, k)
            out.append(alphabet[d])
        return "".join(reversed(out))

    def rule(i, j):
        return basis_vector(backend, word_to_index(index_to_word(i) + index_to_word(j)))

    table = StructureTable(
        backend,
        name=f"free:{k}",
        rule=rule,
        pair_bound=1,
        claims_associative=True,
        claims_commutative=False,
    )

    def encode(label: str) -> int:
        if label in ("1", ""):
            return 0
        for ch in label:
            if ch not in alphabet:
                raise LabelError(f"letter {ch!r} is not in the free:{k} alphabet {alphabet!r}")
        return word_to_index(label)

    def decode(index: int) -> str:
        if index < 0:
            raise LabelError(f"invalid basis index {index}")
        return index_to_word(index) if index else "1"

    return AlgebraFixture(table, encode, decode)


def _finite_fixture(backend, name, labels, products, commutative) -> AlgebraFixture:
    entries = {}
    for (i, j), (k, sign) in products.items():
        entries[(i, j)] = basis_vector(backend, k).scale(backend.scalar(sign))
    table = StructureTable(
        backend,
        name=name,
        entries=entries,
        pair_bound=1,
        claims_associative=True,
        claims_commutative=commutative,
    )

    def encode(label: str) -> int:
        try:
            return labels.index(label)
        except ValueError:
            raise LabelError(f"malformed label {label!r}; expected one of {labels}") from None

    def decode(index: int) -> str:
        if not 0 <= index < len(labels):
            raise LabelError(f"basis index {index} outside the {name} basis 0..{len(labels) - 1}")
        return labels[index]

    return AlgebraFixture(table, encode, decode)


def _quaternion(backend: Backend) -> AlgebraFixture:
    # 0..3 = 1, i, j, k; i^2 = j^2 = k^2 = -1; ij = k cyclic, anti on swap
    products = {}
    for n in range(4):
        products[(0, n)] = (n, 1)
        products[(n, 0)] = (n, 1)
    for n in (1, 2, 3):
        products[(n, n)] = (0, -1)
    cyclic = {(1, 2): 3, (2, 3): 1, (3, 1): 2}
    for (i, j), k in cyclic.items():
        products[(i, j)] = (k, 1)
        products[(j, i)] = (k, -1)
    return _finite_fixture(backend, "quaternion", ["1", "i", "j", "k"], products, False)


def _complex(backend: Backend) -> AlgebraFixture:
    products = {(0, 0): (0, 1), (0, 1): (1, 1), (1, 0): (1, 1), (1, 1): (0, -1)}
    return _finite_fixture(backend, "complex", ["1", "i"], products, True)


def load_builtin(name: str, backend: Backend = RATIONAL) -> AlgebraFixture:
    """Look up a builtin fixture by name ("polynomial", "free:2", ...)."""
    if name == "polynomial":
        return _polynomial(backend)
    if name == "quaternion":
        return _quaternion(backend)
    if name == "complex":
        return _complex(backend)
    if name == "group_z":
        return _group_z(backend)
    if name.startswith("free:"):
        body = name[len("free:"):]
        try:
            k = int(body)
        except ValueError:
            raise ValueError(f"malformed letter count in {name!r}") from None
        if str(k) != body or k < 1:
            raise ValueError(f"free:{body} needs a letter count k >= 1")
        return _free_words(backend, k)
    raise ValueError(f"unknown builtin algebra {name!r}")


def _identity_codec_fixture(table: StructureTable) -> AlgebraFixture:
    def encode(label: str) -> int:
        try:
            index = int(label)
        except ValueError:
            raise LabelError(f"label {label!r} is not a basis index") from None
        if str(index) != label or index < 0:
            raise LabelError(f"label {label!r} is not a basis index")
        return index

    return AlgebraFixture(table, encode, str)


def fixture_from_data(data, backend: Backend = RATIONAL) -> AlgebraFixture:
    """Fixture from parsed algebra JSON: builtin reference or extensional table.

    Extensional tables have no structured labels; their codec is the decimal
    basis index.
    """
    if isinstance(data, dict) and "builtin" in data:
        return load_builtin(str(data["builtin"]), backend)
    return _identity_codec_fixture(table_from_data(backend, data))
