"""
The action of gl_n on spans of tableaux by the Gelfand-Tsetlin formulas.

E_ij is the matrix unit, e_k = E_{k,k+1}, f_k = E_{k+1,k}, h_k = E_kk - E_{k+1,k+1}.
A generator sends a basis tableau to a combination of shifted tableaux; shifted
tableaux outside the basis contribute nothing.
"""

from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction
from itertools import product
from math import prod
from typing import Iterable, Sequence

from gt_modules.relations import RelationSet
from gt_modules.realization import satisfies
from gt_modules.tableau import (
    AnchorTable,
    CriticalTableau,
    Position,
    ShiftVector,
    Tableau,
    positions,
)
from gt_modules.utils import format_fraction


class NotInBasis(ValueError):
    pass


# vectors


class FormalVector(dict):
    """Finite combination of tableaux with rational coefficients; zero terms are never stored."""

    def __init__(self, terms: Mapping | Iterable = ()):
        super().__init__()
        items = terms.items() if isinstance(terms, Mapping) else terms
        for T, c in items:
            self.add_term(T, c)

    @classmethod
    def of(cls, T: Tableau) -> FormalVector:
        return cls({T: 1})

    def add_term(self, T: Tableau, c):
        c = self.get(T, 0) + Fraction(c)
        if c:
            self[T] = c
        else:
            self.pop(T, None)

    def accumulate(self, other: Mapping, scale=1):
        """In place: self += scale * other."""
        scale = Fraction(scale)
        for T, c in other.items():
            self.add_term(T, c * scale)

    def __add__(self, other: FormalVector) -> FormalVector:
        result = FormalVector(self)
        for T, c in other.items():
            result.add_term(T, c)
        return result

    def __neg__(self) -> FormalVector:
        return FormalVector({T: -c for T, c in self.items()})

    def __sub__(self, other: FormalVector) -> FormalVector:
        return self + (-other)

    def __mul__(self, scalar) -> FormalVector:
        scalar = Fraction(scalar)
        return FormalVector({T: c * scalar for T, c in self.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self

    def terms(self) -> list[tuple[Tableau, Fraction]]:
        return sorted(self.items(), key=lambda item: item[0].sort_key())

    def __str__(self):
        if not self:
            return "0"
        return " + ".join(f"{format_fraction(c)}*{T}" for T, c in self.terms())


# bases


class Basis:
    """Membership plus caches of generator and word images of single tableaux."""

    n: int

    def __init__(self, n: int):
        self.n = n
        self._members = {}
        self._images = {}
        self._words = {}

    def _contains(self, T: Tableau) -> bool:
        raise NotImplementedError

    def __contains__(self, T: Tableau) -> bool:
        if T not in self._members:
            self._members[T] = self._contains(T)
        return self._members[T]


class BasisSpec(Basis):
    """
    Shifts of the seed on the rows below the top that satisfy the relation set.

    Membership only looks at anchor ids and offsets, so copies made by
    `reanchored` share one membership cache.
    """

    def __init__(self, relations: RelationSet, seed: Tableau, members: dict | None = None):
        if relations.n != seed.n:
            raise ValueError(f"Relation set of height {relations.n} with a seed of height {seed.n}")
        super().__init__(seed.n)
        self.relations = relations
        self.seed = seed
        if members is not None:
            self._members = members

    def __contains__(self, T: Tableau) -> bool:
        if T.n != self.n:
            return False
        if T.anchors is not self.seed.anchors and T.anchors != self.seed.anchors:
            return False
        key = T.layout
        if key not in self._members:
            self._members[key] = self._contains(T)
        return self._members[key]

    def _contains(self, T: Tableau) -> bool:
        return T.shift_from(self.seed) is not None and satisfies(T, self.relations)

    def reanchored(self, anchors: AnchorTable) -> BasisSpec:
        return BasisSpec(self.relations, self.seed.reanchored(anchors), members=self._members)

    def __repr__(self):
        return f"BasisSpec({self.relations}, seed={self.seed})"


class TableauBasis(Basis):
    """An explicit finite list of tableaux."""

    def __init__(self, tableaux: Sequence[Tableau]):
        tableaux = list(dict.fromkeys(tableaux))
        if not tableaux:
            raise ValueError("An explicit basis needs at least one tableau")
        super().__init__(tableaux[0].n)
        self.tableaux = tableaux
        self._set = set(tableaux)

    def _contains(self, T: Tableau) -> bool:
        return T in self._set

    def __iter__(self):
        return iter(self.tableaux)

    def __len__(self):
        return len(self.tableaux)


def in_basis(B: Basis, T: Tableau) -> bool:
    return T in B


def _require(B: Basis, T: Tableau):
    if T not in B:
        raise NotInBasis(f"{T} is not in the basis")


# coefficients


def _denominator(T: Tableau, k: int, i: int) -> Fraction:
    row = T.values(k)
    denominator = prod(row[i - 1] - row[j] for j in range(k) if j != i - 1)
    if denominator == 0:
        raise CriticalTableau(f"{T} repeats an entry in row {k}")
    return denominator


def coeff_e(B: Basis, k: int, i: int, T: Tableau) -> Fraction:
    if T not in B:
        return Fraction(0)
    l = T.values(k)[i - 1]
    numerator = prod(l - u for u in T.values(k + 1))
    return -Fraction(numerator) / _denominator(T, k, i)


def coeff_f(B: Basis, k: int, i: int, T: Tableau) -> Fraction:
    if T not in B:
        return Fraction(0)
    l = T.values(k)[i - 1]
    numerator = prod((l - w for w in T.values(k - 1)), start=Fraction(1)) if k > 1 else Fraction(1)
    return Fraction(numerator) / _denominator(T, k, i)


def coeff_h(B: Basis, k: int, T: Tableau) -> Fraction:
    if T not in B:
        return Fraction(0)
    below = sum(T.values(k - 1)) if k > 1 else 0
    return Fraction(2 * sum(T.values(k)) - below - sum(T.values(k + 1)) - 1)


def weight(T: Tableau, k: int) -> Fraction:
    """Eigenvalue of E_kk."""
    below = sum(T.values(k - 1)) if k > 1 else 0
    return Fraction(k - 1 + sum(T.values(k)) - below)


# generator images of single tableaux


def _image_e(B: Basis, k: int, T: Tableau) -> FormalVector:
    image = FormalVector()
    for i in range(1, k + 1):
        target = T.moved(Position(k, i), 1)
        if target in B:
            image.add_term(target, coeff_e(B, k, i, T))
    return image


def _image_f(B: Basis, k: int, T: Tableau) -> FormalVector:
    image = FormalVector()
    for i in range(1, k + 1):
        target = T.moved(Position(k, i), -1)
        if target in B:
            image.add_term(target, coeff_f(B, k, i, T))
    return image


def _bracket_index(i: int, j: int, via: int | None) -> int:
    if via is not None:
        if via in (i, j):
            raise ValueError(f"E_{i}{j} cannot be bracketed through {via}")
        return via
    return j - 1 if i < j else j + 1


def image(B: Basis, i: int, j: int, T: Tableau, via: int | None = None) -> FormalVector:
    """E_ij applied to one basis tableau."""
    if not (1 <= i <= B.n and 1 <= j <= B.n):
        raise ValueError(f"E_{i}{j} is not a matrix unit of gl_{B.n}")
    _require(B, T)

    key = (i, j, via, T)
    if key in B._images:
        return B._images[key]

    if i == j:
        result = FormalVector({T: weight(T, i)})
    elif j == i + 1:
        result = _image_e(B, i, T)
    elif i == j + 1:
        result = _image_f(B, j, T)
    else:
        # [E_im, E_mj] = E_ij
        m = _bracket_index(i, j, via)
        result = apply_Eij(B, i, m, apply_Eij(B, m, j, FormalVector.of(T))) - apply_Eij(
            B, m, j, apply_Eij(B, i, m, FormalVector.of(T))
        )

    B._images[key] = result
    return result


# generators on vectors


def apply_Eij(B: Basis, i: int, j: int, v: FormalVector, via: int | None = None) -> FormalVector:
    result = FormalVector()
    for T, c in v.items():
        result.accumulate(image(B, i, j, T, via), c)
    return result


def apply_e(B: Basis, k: int, v: FormalVector) -> FormalVector:
    return apply_Eij(B, k, k + 1, v)


def apply_f(B: Basis, k: int, v: FormalVector) -> FormalVector:
    return apply_Eij(B, k + 1, k, v)


def apply_E(B: Basis, k: int, v: FormalVector) -> FormalVector:
    return apply_Eij(B, k, k, v)


def apply_h(B: Basis, k: int, v: FormalVector) -> FormalVector:
    result = FormalVector()
    for T, c in v.items():
        _require(B, T)
        result.add_term(T, c * coeff_h(B, k, T))
    return result


# operators


Word = tuple  # letters (i, j) for E_ij, applied right to left


class Operator(dict):
    """Formal combination of words in the matrix units."""

    def __init__(self, terms: Mapping | Iterable = ()):
        super().__init__()
        items = terms.items() if isinstance(terms, Mapping) else terms
        for word, c in items:
            self.add_term(tuple(tuple(letter) for letter in word), c)

    def add_term(self, word: Word, c):
        c = self.get(word, 0) + Fraction(c)
        if c:
            self[word] = c
        else:
            self.pop(word, None)

    @classmethod
    def unit(cls) -> Operator:
        return cls({(): 1})

    @classmethod
    def E(cls, i: int, j: int) -> Operator:
        return cls({((i, j),): 1})

    @classmethod
    def e(cls, k: int) -> Operator:
        return cls.E(k, k + 1)

    @classmethod
    def f(cls, k: int) -> Operator:
        return cls.E(k + 1, k)

    @classmethod
    def h(cls, k: int) -> Operator:
        return cls.E(k, k) - cls.E(k + 1, k + 1)

    def __add__(self, other: Operator) -> Operator:
        result = Operator(self)
        for word, c in other.items():
            result.add_term(word, c)
        return result

    def __neg__(self) -> Operator:
        return Operator({word: -c for word, c in self.items()})

    def __sub__(self, other: Operator) -> Operator:
        return self + (-other)

    def __mul__(self, other) -> Operator:
        if isinstance(other, Operator):
            result = Operator()
            for (a, x), (b, y) in product(self.items(), other.items()):
                result.add_term(a + b, x * y)
            return result
        scalar = Fraction(other)
        return Operator({word: c * scalar for word, c in self.items()})

    def __rmul__(self, scalar) -> Operator:
        return self * scalar

    def __str__(self):
        if not self:
            return "0"

        def spell(word):
            return "".join(f"E{i}{j}" for i, j in word) or "1"

        return " + ".join(f"{format_fraction(c)}*{spell(word)}" for word, c in sorted(self.items()))


def bracket(a: Operator, b: Operator) -> Operator:
    return a * b - b * a


def word_image(B: Basis, word: Word, T: Tableau) -> FormalVector:
    """A word applied to one tableau, cached per basis by (word, tableau)."""
    key = (word, T)
    cached = B._words.get(key)
    if cached is not None:
        return cached

    if not word:
        result = FormalVector.of(T)
    else:
        (i, j), rest = word[-1], word[:-1]
        result = FormalVector()
        for target, c in image(B, i, j, T).items():
            result.accumulate(word_image(B, rest, target), c)

    B._words[key] = result
    return result


def apply_word(B: Basis, word: Word, v: FormalVector) -> FormalVector:
    word = tuple(tuple(letter) for letter in word)
    result = FormalVector()
    for T, c in v.items():
        result.accumulate(word_image(B, word, T), c)
    return result


def apply_operator(B: Basis, X: Operator, v: FormalVector) -> FormalVector:
    result = FormalVector()
    for word, c in X.items():
        result.accumulate(apply_word(B, word, v), c)
    return result


# gates and balls


def phi(B: Basis, L: Tableau, path: Sequence[ShiftVector]) -> int:
    """1 when every partial sum of the path keeps L inside the basis."""
    if L not in B:
        return 0
    current = L
    for z in path:
        current = current.shifted(z)
        if current not in B:
            return 0
    return 1


def enumerate_ball(B: BasisSpec, radius: int) -> list[Tableau]:
    """Basis members whose shift from the seed has max-norm at most radius."""
    if radius < 0:
        raise ValueError(f"Radius must be non-negative, got {radius}")
    free = positions(B.n, range(1, B.n))
    ball = []
    for shifts in product(range(-radius, radius + 1), repeat=len(free)):
        T = B.seed.shifted(ShiftVector(B.n, dict(zip(free, shifts))))
        if T in B:
            ball.append(T)
    return ball
