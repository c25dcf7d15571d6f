"""
The Gelfand-Tsetlin subalgebra: the central elements c_mk of U(gl_m) and
their eigenvalues gamma_mk on tableaux.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from typing import NamedTuple, Sequence

import sympy as sp

from gt_modules.action import (
    Basis,
    BasisSpec,
    FormalVector,
    NotInBasis,
    Operator,
    apply_word,
    enumerate_ball,
)
from gt_modules.tableau import Tableau
from gt_modules.utils import format_fraction, to_fraction

MAX_CMK_ORDER = 4


class SingularRow(ValueError):
    pass


class GammaBudgetExceeded(ValueError):
    pass


# eigenvalues


def gamma_value(m: int, k: int, row: Sequence) -> Fraction:
    """sum_i (l_i + m - 1)^k prod_{j != i} (1 - 1/(l_i - l_j))"""
    values = [to_fraction(v) for v in row]
    if len(values) != m:
        raise ValueError(f"gamma_{m}{k} needs a row of {m} entries, got {len(values)}")
    if k < 1:
        raise ValueError(f"gamma_{m}{k} needs k >= 1")

    total = Fraction(0)
    for i, l in enumerate(values):
        term = (l + m - 1) ** k
        for j, other in enumerate(values):
            if j == i:
                continue
            if l == other:
                raise SingularRow(f"Row {[format_fraction(v) for v in values]} repeats {format_fraction(l)}")
            term *= 1 - Fraction(1) / (l - other)
        total += term
    return total


def tableau_gamma(T: Tableau, m: int, k: int) -> Fraction:
    return gamma_value(m, k, T.values(m))


def gamma_expression(m: int, k: int) -> sp.Expr:
    """gamma_mk as a polynomial in l_1..l_m."""
    l = sp.symbols(f"l1:{m + 1}")
    expr = sum(
        (l[i] + m - 1) ** k * sp.Mul(*[1 - 1 / (l[i] - l[j]) for j in range(m) if j != i])
        for i in range(m)
    )
    return sp.expand(sp.cancel(sp.together(expr)))


# central elements


def _check_budget(m: int, k: int):
    if k < 1:
        raise ValueError(f"c_{m}{k} needs k >= 1")
    if m > MAX_CMK_ORDER or k > MAX_CMK_ORDER:
        raise GammaBudgetExceeded(f"c_{m}{k} has {m ** k} words, beyond the order {MAX_CMK_ORDER} budget")


def cmk_expression(m: int, k: int) -> list[tuple]:
    """The words E_{i1 i2} E_{i2 i3} ... E_{ik i1} over (i1, ..., ik) in lexicographic order."""
    _check_budget(m, k)
    words = []
    for indices in product(range(1, m + 1), repeat=k):
        words.append(tuple((indices[a], indices[(a + 1) % k]) for a in range(k)))
    return words


def cmk_operator(m: int, k: int) -> Operator:
    return Operator({word: 1 for word in cmk_expression(m, k)})


def apply_cmk(B: Basis, m: int, k: int, T: Tableau) -> FormalVector:
    if T not in B:
        raise NotInBasis(f"{T} is not in the basis")
    v = FormalVector.of(T)
    result = FormalVector()
    for word in cmk_expression(m, k):
        result = result + apply_word(B, word, v)
    return result


class GammaCheck(NamedTuple):
    m: int
    k: int
    eigenvalue: Fraction
    defect: FormalVector

    @property
    def passed(self) -> bool:
        return self.defect.is_zero()

    def __bool__(self):
        return self.passed


def check_gamma_action(B: Basis, T: Tableau, m: int, k: int) -> GammaCheck:
    """c_mk T - gamma_mk T, which vanishes when c_mk acts by its eigenvalue formula."""
    eigenvalue = tableau_gamma(T, m, k)
    defect = apply_cmk(B, m, k, T) - FormalVector({T: eigenvalue})
    return GammaCheck(m, k, eigenvalue, defect)


# fingerprints


class EigenFingerprint:
    """
    gamma_mk for 1 <= k <= m <= n. A top row with repeated entries has no gamma
    values; its sorted entries stand in for them.
    """

    __slots__ = ("n", "values", "row_multisets")

    def __init__(self, n: int, values: dict, row_multisets: dict):
        self.n = n
        self.values = values
        self.row_multisets = row_multisets

    def key(self):
        return tuple(
            ("multiset", self.row_multisets[m])
            if m in self.row_multisets
            else tuple(self.values[m, k] for k in range(1, m + 1))
            for m in range(1, self.n + 1)
        )

    def __eq__(self, other):
        if not isinstance(other, EigenFingerprint):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"EigenFingerprint({self.key()})"


def fingerprint(T: Tableau) -> EigenFingerprint:
    values, multisets = {}, {}
    for m in range(1, T.n + 1):
        row = T.values(m)
        if m == T.n and len(set(row)) < len(row):
            multisets[m] = tuple(sorted(row, reverse=True))
            for k in range(1, m + 1):
                values[m, k] = None
            continue
        for k in range(1, m + 1):
            values[m, k] = gamma_value(m, k, row)
    return EigenFingerprint(T.n, values, multisets)


def fingerprints_equal(F1: EigenFingerprint, F2: EigenFingerprint) -> bool:
    return F1 == F2


def multiplicity_one_check(B: BasisSpec, radius: int) -> bool:
    ball = enumerate_ball(B, radius)
    keys = [fingerprint(T).key() for T in ball]
    return len(set(keys)) == len(keys)


def repeated_fingerprints(tableaux: Sequence[Tableau]) -> list[tuple[Tableau, Tableau]]:
    prints = [(T, fingerprint(T)) for T in tableaux]
    return [(S, T) for (S, a), (T, b) in combinations(prints, 2) if a == b]
