"""
Gelfand-Tsetlin tableaux with exact entries.

notation:
n - height of the tableau (the Lie algebra is gl_n)
k - row index, 1 (bottom) .. n (top)
l_ki - entry in row k, column i

Every entry is an anchor plus an integer offset. Anchors are rationals whose
pairwise differences are never integers, so two entries differ by an integer
exactly when they share an anchor.
"""

from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction
from itertools import permutations, product
from math import floor
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

import numpy as np

from gt_modules.utils import (
    as_rng,
    default,
    format_fraction,
    is_integral,
    odd_primes,
    to_fraction,
)

INTEGER_ANCHOR = "0"


class ShapeError(ValueError):
    pass


class AnchorError(ValueError):
    pass


class InfiniteEnumeration(ValueError):
    pass


class CriticalTableau(ValueError):
    pass


# positions and entries


class Position(NamedTuple):
    row: int
    col: int

    def __str__(self):
        return f"({self.row},{self.col})"


def positions(n: int, rows: Iterable[int] | None = None) -> list[Position]:
    rows = default(rows, range(1, n + 1))
    return [Position(k, i) for k in rows for i in range(1, k + 1)]


class Entry(NamedTuple):
    anchor: str
    offset: int

    def __str__(self):
        if self.anchor == INTEGER_ANCHOR:
            return str(self.offset)
        if self.offset == 0:
            return self.anchor
        return f"{self.anchor}{self.offset:+d}"


class IntegerDiff(NamedTuple):
    value: int


class NonIntegerDiff(NamedTuple):
    value: Fraction


EntryLike = Union[Entry, int, Fraction, str, Mapping]


# anchors


class AnchorTable(Mapping):
    """Anchor ids mapped to rational values. The integer anchor "0" is always present."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping | None = None):
        table = {INTEGER_ANCHOR: Fraction(0)}
        for anchor, value in (values or {}).items():
            anchor, value = str(anchor), to_fraction(value)
            if anchor == INTEGER_ANCHOR and value != 0:
                raise AnchorError(f"Anchor {INTEGER_ANCHOR!r} is reserved for the integers")
            table[anchor] = value

        ids = sorted(table)
        for index, a in enumerate(ids):
            for b in ids[index + 1 :]:
                if is_integral(table[a] - table[b]):
                    raise AnchorError(
                        f"Anchors {a!r} and {b!r} differ by an integer "
                        f"({format_fraction(table[a] - table[b])})"
                    )
        self._values = table

    def __getitem__(self, anchor: str) -> Fraction:
        return self._values[anchor]

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._values))

    def __len__(self):
        return len(self._values)

    def __eq__(self, other):
        if isinstance(other, AnchorTable):
            return self._values == other._values
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._values.items()))

    def __repr__(self):
        inner = ", ".join(
            f"{a!r}: {format_fraction(v)}" for a, v in self.items() if a != INTEGER_ANCHOR
        )
        return f"AnchorTable({{{inner}}})"

    def merged(self, values: Mapping) -> AnchorTable:
        return AnchorTable({**self._values, **values})


def fresh_anchor_table(
    ids: Iterable[str],
    rng: int | np.random.Generator | None = None,
    base: Mapping | None = None,
) -> AnchorTable:
    """Assign the given ids values a/p with distinct odd primes p."""
    ids = [i for i in ids if i != INTEGER_ANCHOR]
    rng = as_rng(rng)
    base = dict(default(base, {}))
    start = int(rng.integers(0, 16))

    while True:
        values = {}
        for anchor, p in zip(ids, odd_primes(len(ids), start)):
            values[anchor] = Fraction(int(rng.integers(1, p)), p)
        try:
            return AnchorTable({**base, **values})
        except AnchorError:
            start += len(ids)


# tableaux


class Tableau:
    """
    Immutable height-n tableau. Rows are given top row first, as they are written;
    `row(k)` indexes them from the bottom.
    """

    __slots__ = ("n", "anchors", "_by_row", "_values", "_hash")

    def __init__(self, rows: Sequence[Sequence[Entry]], anchors: AnchorTable | None = None):
        anchors = default(anchors, AnchorTable())
        n = len(rows)
        if n < 2:
            raise ShapeError(f"A tableau needs at least two rows, got {n}")

        by_row = []
        for k, row in zip(range(n, 0, -1), rows):
            if len(row) != k:
                raise ShapeError(f"Row {k} must have {k} entries, got {len(row)}")
            entries = []
            for entry in row:
                if not isinstance(entry, Entry):
                    raise ShapeError(f"Expected an Entry, got {entry!r}")
                if entry.anchor not in anchors:
                    raise AnchorError(f"Unknown anchor {entry.anchor!r}")
                entries.append(Entry(entry.anchor, int(entry.offset)))
            by_row.append(tuple(entries))

        self._init(n, tuple(reversed(by_row)), anchors)

    def _init(self, n, by_row, anchors):
        self.n = n
        self.anchors = anchors
        self._by_row = by_row
        self._values = None
        self._hash = None

    @classmethod
    def _make(cls, n, by_row, anchors) -> Tableau:
        tableau = object.__new__(cls)
        tableau._init(n, by_row, anchors)
        return tableau

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[EntryLike]], anchors: Mapping | None = None) -> Tableau:
        """
        Build from literals, top row first: ints and rationals, anchor ids (offset 0),
        `Entry` values or {"anchor": ..., "offset": ...} mappings.
        """
        parsed, table = parse_rows(rows, anchors)
        return cls(parsed, table)

    # access

    def row(self, k: int) -> tuple[Entry, ...]:
        return self._by_row[k - 1]

    @property
    def top_row(self) -> tuple[Entry, ...]:
        return self._by_row[-1]

    def rows(self) -> list[tuple[Entry, ...]]:
        # top row first
        return list(reversed(self._by_row))

    def __getitem__(self, p: Position) -> Entry:
        return self._by_row[p[0] - 1][p[1] - 1]

    def values(self, k: int) -> tuple[Fraction, ...]:
        if self._values is None:
            anchors = self.anchors
            self._values = tuple(
                tuple(anchors[e.anchor] + e.offset for e in row) for row in self._by_row
            )
        return self._values[k - 1]

    def value(self, p: Position) -> Fraction:
        return self.values(p[0])[p[1] - 1]

    def entries(self) -> dict[Position, Entry]:
        return {p: self[p] for p in positions(self.n)}

    @property
    def layout(self) -> tuple:
        # anchor ids and offsets by row, bottom first; blind to anchor values
        return self._by_row

    def diff(self, p: Position, q: Position) -> IntegerDiff | NonIntegerDiff:
        a, b = self[p], self[q]
        if a.anchor == b.anchor:
            return IntegerDiff(a.offset - b.offset)
        return NonIntegerDiff(self.value(p) - self.value(q))

    # derived tableaux

    def moved(self, p: Position, delta: int) -> Tableau:
        k, i = p
        if k >= self.n:
            raise ShapeError("The top row never shifts")
        row = list(self._by_row[k - 1])
        entry = row[i - 1]
        row[i - 1] = Entry(entry.anchor, entry.offset + delta)
        by_row = self._by_row[: k - 1] + (tuple(row),) + self._by_row[k:]
        return Tableau._make(self.n, by_row, self.anchors)

    def shifted(self, z: ShiftVector) -> Tableau:
        if z.n != self.n:
            raise ShapeError(f"Shift of height {z.n} applied to a tableau of height {self.n}")
        by_row = [list(row) for row in self._by_row]
        for (k, i), amount in z.items():
            entry = by_row[k - 1][i - 1]
            by_row[k - 1][i - 1] = Entry(entry.anchor, entry.offset + amount)
        return Tableau._make(self.n, tuple(tuple(row) for row in by_row), self.anchors)

    def with_entries(self, entries: Mapping[Position, Entry], anchors: AnchorTable | None = None) -> Tableau:
        anchors = default(anchors, self.anchors)
        by_row = [list(row) for row in self._by_row]
        for (k, i), entry in entries.items():
            if entry.anchor not in anchors:
                raise AnchorError(f"Unknown anchor {entry.anchor!r}")
            by_row[k - 1][i - 1] = entry
        return Tableau._make(self.n, tuple(tuple(row) for row in by_row), anchors)

    def reanchored(self, anchors: AnchorTable) -> Tableau:
        missing = {e.anchor for row in self._by_row for e in row} - set(anchors)
        if missing:
            raise AnchorError(f"Anchor table lacks {sorted(missing)}")
        return Tableau._make(self.n, self._by_row, anchors)

    def shift_from(self, other: Tableau) -> ShiftVector | None:
        """The shift z with other + z = self, or None if the two are not shift-related."""
        if other.n != self.n or other.top_row != self.top_row:
            return None
        z = {}
        for k in range(1, self.n):
            for i, (a, b) in enumerate(zip(self.row(k), other.row(k)), start=1):
                if a.anchor != b.anchor:
                    return None
                if a.offset != b.offset:
                    z[Position(k, i)] = a.offset - b.offset
        return ShiftVector(self.n, z)

    # comparison

    def sort_key(self):
        return tuple((e.anchor, e.offset) for row in reversed(self._by_row) for e in row)

    def __eq__(self, other):
        if not isinstance(other, Tableau):
            return NotImplemented
        return self._by_row == other._by_row and self.anchors == other.anchors

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._by_row)
        return self._hash

    def __lt__(self, other: Tableau):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return "(" + "|".join(",".join(str(e) for e in row) for row in self.rows()) + ")"

    def __repr__(self):
        return f"Tableau{self}"

    def render(self) -> str:
        cells = [[str(e) for e in row] for row in self.rows()]
        width = max(len(c) for row in cells for c in row) + 1
        lines = []
        for depth, row in enumerate(cells):
            indent = " " * (depth * width // 2)
            lines.append(indent + "".join(c.rjust(width) for c in row).rstrip())
        return "\n".join(lines)


def parse_rows(rows: Sequence[Sequence[EntryLike]], anchors: Mapping | None = None):
    known = dict(AnchorTable(anchors).items())
    parsed = [[parse_entry(value, known) for value in row] for row in rows]
    return parsed, AnchorTable(known)


def parse_entry(value: EntryLike, known: dict) -> Entry:
    # `known` grows when a rational literal opens a new integral class
    if isinstance(value, Entry):
        if value.anchor not in known:
            raise AnchorError(f"Unknown anchor {value.anchor!r}")
        return value
    if isinstance(value, Mapping):
        entry = Entry(str(value["anchor"]), int(value.get("offset", 0)))
        return parse_entry(entry, known)
    if isinstance(value, str) and value in known:
        return Entry(value, 0)

    number = to_fraction(value)
    for anchor, base in known.items():
        delta = number - base
        if delta.denominator == 1:
            return Entry(anchor, int(delta))

    whole = floor(number)
    anchor = format_fraction(number - whole)
    known[anchor] = number - whole
    return Entry(anchor, whole)


def make_tableau(n: int, entries: Mapping[Position, Entry], anchors: AnchorTable) -> Tableau:
    expected = set(positions(n))
    given = {Position(*p) for p in entries}
    if given != expected:
        missing = sorted(expected - given)
        extra = sorted(given - expected)
        raise ShapeError(f"Tableau of height {n}: missing {missing}, extra {extra}")
    rows = [[entries[Position(k, i)] for i in range(1, k + 1)] for k in range(n, 0, -1)]
    return Tableau(rows, anchors)


def entry_diff(T: Tableau, p: Position, q: Position) -> IntegerDiff | NonIntegerDiff:
    return T.diff(p, q)


# shifts


class ShiftVector(Mapping):
    """Integer shift of the rows below the top row."""

    __slots__ = ("n", "_z")

    def __init__(self, n: int, z: Mapping | None = None):
        cleaned = {}
        for p, amount in (z or {}).items():
            p = Position(*p)
            if not 1 <= p.col <= p.row <= n:
                raise ShapeError(f"{p} is not a position of a height-{n} tableau")
            if p.row == n and amount:
                raise ShapeError("Shifts never move the top row")
            if amount:
                cleaned[p] = int(amount)
        self.n = n
        self._z = cleaned

    @classmethod
    def delta(cls, n: int, row: int, col: int, amount: int = 1) -> ShiftVector:
        return cls(n, {Position(row, col): amount})

    def __getitem__(self, p):
        return self._z.get(Position(*p), 0)

    def __iter__(self):
        return iter(sorted(self._z))

    def __len__(self):
        return len(self._z)

    def __add__(self, other: ShiftVector) -> ShiftVector:
        total = dict(self._z)
        for p, amount in other._z.items():
            total[p] = total.get(p, 0) + amount
        return ShiftVector(self.n, total)

    def __neg__(self) -> ShiftVector:
        return ShiftVector(self.n, {p: -a for p, a in self._z.items()})

    def __sub__(self, other: ShiftVector) -> ShiftVector:
        return self + (-other)

    def __eq__(self, other):
        if isinstance(other, ShiftVector):
            return self.n == other.n and self._z == other._z
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self._z.items())))

    def __repr__(self):
        inner = ", ".join(f"{p}: {a}" for p, a in self.items())
        return f"ShiftVector({inner})"

    def norm(self) -> int:
        return max((abs(a) for a in self._z.values()), default=0)


def shift(T: Tableau, z: ShiftVector) -> Tableau:
    return T.shifted(z)


# tableau predicates


def is_standard(T: Tableau) -> bool:
    for k in range(2, T.n + 1):
        for i in range(1, k):
            upper = T.diff(Position(k, i), Position(k - 1, i))
            lower = T.diff(Position(k - 1, i), Position(k, i + 1))
            if not isinstance(upper, IntegerDiff) or upper.value < 0:
                return False
            if not isinstance(lower, IntegerDiff) or lower.value <= 0:
                return False
    return True


def is_noncritical_tableau(T: Tableau) -> bool:
    for k in range(1, T.n):
        row = T.row(k)
        if len(set(row)) != len(row):
            return False
    return True


def critical_pairs(T: Tableau) -> list[tuple[Position, Position]]:
    pairs = []
    for k in range(1, T.n):
        row = T.row(k)
        for i in range(len(row)):
            for j in range(i + 1, len(row)):
                if row[i] == row[j]:
                    pairs.append((Position(k, i + 1), Position(k, j + 1)))
    return pairs


# standard tableaux


def top_row_from_weight(weight: Sequence) -> list[Fraction]:
    return [to_fraction(w) - i for i, w in enumerate(weight)]


def enumerate_standard(top_row: Sequence[EntryLike], anchors: Mapping | None = None) -> list[Tableau]:
    """All standard tableaux with the given top row, in lexicographic order of the lower rows."""
    (top,), table = parse_rows([top_row], anchors)
    n = len(top)
    if n < 2:
        raise ShapeError(f"A tableau needs at least two rows, got {n}")

    classes = {e.anchor for e in top}
    if len(classes) != 1:
        raise InfiniteEnumeration(
            f"Standard tableaux need a top row with integral differences, got anchors {sorted(classes)}"
        )
    anchor = classes.pop()

    found = []

    def descend(rows):
        upper = rows[-1]
        if len(upper) == 1:
            found.append(rows)
            return
        ranges = [range(upper[i + 1] + 1, upper[i] + 1) for i in range(len(upper) - 1)]
        for lower in product(*ranges):
            descend(rows + [lower])

    descend([tuple(e.offset for e in top)])

    return [
        Tableau._make(n, tuple(tuple(Entry(anchor, o) for o in row) for row in reversed(rows)), table)
        for rows in found
    ]


# the group G = S_n x ... x S_1 acting rowwise


Permutation = tuple  # σ[k - 1] is the image tuple of 1..k in row k


def _check_permutation(sigma: Permutation, n: int):
    if len(sigma) != n:
        raise ShapeError(f"Permutation needs {n} rows, got {len(sigma)}")
    for k, images in enumerate(sigma, start=1):
        if sorted(images) != list(range(1, k + 1)):
            raise ShapeError(f"Row {k} of the permutation is not a permutation of 1..{k}: {images}")


def identity_permutation(n: int) -> Permutation:
    return tuple(tuple(range(1, k + 1)) for k in range(1, n + 1))


def invert_permutation(sigma: Permutation) -> Permutation:
    inverse = []
    for images in sigma:
        row = [0] * len(images)
        for i, image in enumerate(images, start=1):
            row[image - 1] = i
        inverse.append(tuple(row))
    return tuple(inverse)


def compose_permutations(sigma: Permutation, tau: Permutation) -> Permutation:
    # (σ∘τ)(i) = σ(τ(i))
    return tuple(tuple(s[t - 1] for t in ts) for s, ts in zip(sigma, tau))


def apply_permutation(sigma: Permutation, T: Tableau) -> Tableau:
    _check_permutation(sigma, T.n)
    by_row = []
    for k, images in enumerate(sigma, start=1):
        row = [None] * k
        for i, image in enumerate(images, start=1):
            row[image - 1] = T[Position(k, i)]
        by_row.append(tuple(row))
    return Tableau._make(T.n, tuple(by_row), T.anchors)


def permutation_group(n: int) -> list[Permutation]:
    """Every element of S_n x ... x S_1, identity first."""
    rows = [list(permutations(range(1, k + 1))) for k in range(1, n + 1)]
    return [tuple(sigma) for sigma in product(*rows)]
