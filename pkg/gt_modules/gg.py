"""
Index families of gaps, the relation sets they define, and the check that such a
set gives a module exactly when consecutive families are compatible.
"""

from __future__ import annotations

from itertools import product
from typing import NamedTuple, Sequence

import numpy as np
from tqdm import tqdm

from gt_modules.action import BasisSpec, FormalVector, Operator, apply_operator, bracket, enumerate_ball
from gt_modules.realization import distance_one_witness, sample_realization
from gt_modules.relations import (
    RelationSet,
    admissibility_defects,
    ge,
    gt,
    is_admissible,
)
from gt_modules.tableau import Position, Tableau, parse_rows
from gt_modules.utils import as_rng, format_fraction, is_integral, to_fraction
from gt_modules.verifier import (
    DEFAULT_RADIUS,
    VerificationReport,
    check_defining_relations,
    find_violation,
)

WIDENING = (1, 2, 4, 8)


class InvalidFamily(ValueError):
    pass


class IndexFamily:
    """
    One pair (i_k, i'_k) for each k = 1..n-1: the two gaps of row k+1 that row k
    leaves empty, numbered 0..k+1 from the left.
    """

    __slots__ = ("pairs",)

    def __init__(self, pairs: Sequence[Sequence[int]]):
        pairs = tuple((int(a), int(b)) for a, b in pairs)
        for k, (a, b) in enumerate(pairs, start=1):
            if not (0 <= a <= k and 1 <= b <= k + 1):
                raise InvalidFamily(f"Pair {k} = ({a},{b}) outside 0..{k} x 1..{k + 1}")
            if a >= b:
                raise InvalidFamily(f"Pair {k} = ({a},{b}) needs i_{k} < i'_{k}")
        self.pairs = pairs

    @property
    def n(self) -> int:
        return len(self.pairs) + 1

    def __getitem__(self, k: int) -> tuple[int, int]:
        return self.pairs[k - 1]

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __eq__(self, other):
        if not isinstance(other, IndexFamily):
            return NotImplemented
        return self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __str__(self):
        return "[" + ",".join(f"[{a},{b}]" for a, b in self.pairs) + "]"

    def __repr__(self):
        return f"IndexFamily({self})"


def enumerate_families(n: int) -> list[IndexFamily]:
    if n < 2:
        return []
    choices = [[(a, b) for a in range(k + 1) for b in range(1, k + 2) if a < b] for k in range(1, n)]
    return [IndexFamily(pairs) for pairs in product(*choices)]


def gg_relation_set(family: IndexFamily, n: int | None = None) -> RelationSet:
    """Row k sits in the non-empty gaps of row k+1; the top row is a weak chain."""
    n = family.n if n is None else n
    if n != family.n:
        raise InvalidFamily(f"Family {family} has {len(family)} pairs, a height {n} set needs {n - 1}")

    relations = []
    for k in range(1, n):
        a, b = family[k]
        for j in range(1, k + 1):
            if j <= a:
                gap = j - 1
            elif j < b:
                gap = j
            else:
                gap = j + 1
            # row k entry j lies between (k+1, gap) and (k+1, gap+1)
            if gap >= 1:
                relations.append(ge(Position(k + 1, gap), Position(k, j)))
            if gap + 1 <= k + 1:
                relations.append(gt(Position(k, j), Position(k + 1, gap + 1)))

    relations += [ge(Position(n, i), Position(n, i + 1)) for i in range(1, n)]
    return RelationSet(n, relations)


def lp_condition(family: IndexFamily) -> bool:
    for k in range(2, family.n):
        a, b = family[k]
        allowed = {0, a, b - 1, k}
        if not set(family[k - 1]) <= allowed:
            return False
    return True


# module check


class GGVerdict(NamedTuple):
    family: IndexFamily
    top_row: list
    module: bool
    lp: bool
    admissible: bool
    witness: Tableau | None = None
    relation: str | None = None
    defect: FormalVector | None = None
    report: VerificationReport | None = None

    @property
    def agreed(self) -> bool:
        return self.module == self.lp == self.admissible


def _check_top_row(top_row: Sequence, n: int) -> list:
    values = [to_fraction(v) for v in top_row]
    if len(values) != n:
        raise InvalidFamily(f"Top row {[format_fraction(v) for v in values]} needs {n} entries")
    if not all(is_integral(v) for v in values):
        raise InvalidFamily("Top row entries must be integers")
    if any(a <= b for a, b in zip(values, values[1:])):
        raise InvalidFamily(f"Top row {[format_fraction(v) for v in values]} must strictly decrease")
    return values


def _commutator_defect(k: int) -> tuple[str, Operator]:
    return f"[e{k},f{k}]", bracket(Operator.e(k), Operator.f(k)) - Operator.h(k)


def _witness_violation(C: RelationSet, top: list, rng) -> tuple | None:
    # distance-one pairs from the failing adjacent pairs, widening the top row until one completes
    defects = admissibility_defects(C)
    for scale in WIDENING:
        (entries,), anchors = parse_rows([[v * scale for v in top]])
        for p, q in defects:
            T = distance_one_witness(C, p, q, top_row=entries, anchors=anchors, rng=rng)
            if T is None:
                continue
            B = BasisSpec(C, T)
            name, operator = _commutator_defect(p.row)
            defect = apply_operator(B, operator, FormalVector.of(T))
            if defect:
                return [v * scale for v in top], T, name, defect
            violation = find_violation(B, [T] + enumerate_ball(B, 1))
            if violation is not None:
                return [v * scale for v in top], violation.tableau, violation.relation, violation.defect
    return None


def theorem1_check(
    family: IndexFamily,
    top_row: Sequence,
    radius: int = DEFAULT_RADIUS,
    rng: int | np.random.Generator | None = None,
) -> GGVerdict:
    """
    Verify the relations on a sampled basis when the family is compatible;
    otherwise build a tableau with two adjacent entries at distance one and
    return the defect it produces.
    """
    rng = as_rng(rng)
    n = family.n
    top = _check_top_row(top_row, n)
    C = gg_relation_set(family, n)
    lp = lp_condition(family)
    admissible = is_admissible(C)

    if lp:
        (entries,), anchors = parse_rows([top])
        seed = sample_realization(C, top_row=entries, anchors=anchors, rng=rng)
        report = check_defining_relations(BasisSpec(C, seed), radius)
        if report.passed:
            return GGVerdict(family, top, True, lp, admissible, seed, report=report)
        failure = report.failures[0]
        return GGVerdict(family, top, False, lp, admissible, failure.tableau, failure.relation, failure.defect, report)

    found = _witness_violation(C, top, rng)
    if found is None:
        # no defect located; reported as a module so the disagreement shows
        return GGVerdict(family, top, True, lp, admissible)
    used_top, T, name, defect = found
    return GGVerdict(family, used_top, False, lp, admissible, T, name, defect)


def gg_sweep(
    n: int,
    top_rows: Sequence[Sequence],
    radius: int = DEFAULT_RADIUS,
    rng: int | np.random.Generator | None = None,
    progress: bool = False,
) -> list[GGVerdict]:
    rng = as_rng(rng)
    verdicts = []
    jobs = [(family, top) for family in enumerate_families(n) for top in top_rows]
    bar = tqdm(jobs, desc=f"families n={n}", disable=not progress)
    for family, top in bar:
        verdict = theorem1_check(family, top, radius, rng)
        verdicts.append(verdict)
        if not verdict.agreed:
            tqdm.write(f"disagreement on {family} with top {[format_fraction(v) for v in verdict.top_row]}")
    return verdicts
