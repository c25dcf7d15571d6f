"""
Exact verification of module structure on finite windows of a basis.

Every check applies an operator to a single basis tableau, so each defect is
an exact finite vector; only the set of tableaux that get checked is bounded.
"""

from __future__ import annotations

from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np
from tqdm import tqdm

from gt_modules.action import (
    Basis,
    BasisSpec,
    FormalVector,
    Operator,
    TableauBasis,
    apply_e,
    apply_operator,
    bracket,
    enumerate_ball,
)
from gt_modules.gamma import check_gamma_action, repeated_fingerprints
from gt_modules.realization import (
    DEFAULT_GAP,
    distance_one_witness,
    is_realization,
    sample_realization,
    satisfied_set,
)
from gt_modules.relations import (
    CriticalSet,
    RelationSet,
    equivalent,
    forced_order,
    implied_relations,
    is_admissible,
    is_noncritical_set,
    is_satisfiable,
    reduce,
    relabel,
    relation_universe,
    top_pins,
)
from gt_modules.tableau import (
    AnchorTable,
    CriticalTableau,
    INTEGER_ANCHOR,
    Position,
    Tableau,
    fresh_anchor_table,
    is_noncritical_tableau,
    parse_rows,
    permutation_group,
    top_row_from_weight,
)
from gt_modules.utils import as_rng, format_fraction, seed_of

DEFAULT_RADIUS = 2
DEFAULT_SAMPLES = 5
DEFAULT_ANCHOR_ASSIGNMENTS = 3
FRZ_SEARCH_LIMIT = 4096


class NotRealization(ValueError):
    pass


class PreconditionFailed(ValueError):
    pass


# defining relations of gl_n


class DefiningRelation(NamedTuple):
    name: str
    operator: Operator  # vanishes on a module


def defining_relations(n: int) -> list[DefiningRelation]:
    E, e, f, h = Operator.E, Operator.e, Operator.f, Operator.h
    relations = []

    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            relations.append(DefiningRelation(f"[E{i}{i},E{j}{j}]", bracket(E(i, i), E(j, j))))

    for i in range(1, n):
        for j in range(1, n):
            op = bracket(e(i), f(j))
            if i == j:
                op = op - h(i)
            relations.append(DefiningRelation(f"[e{i},f{j}]", op))

    for k in range(1, n + 1):
        for j in range(1, n):
            w = int(k == j) - int(k == j + 1)
            relations.append(DefiningRelation(f"[E{k}{k},e{j}]", bracket(E(k, k), e(j)) - e(j) * w))
            relations.append(DefiningRelation(f"[E{k}{k},f{j}]", bracket(E(k, k), f(j)) + f(j) * w))

    for i in range(1, n):
        for j in range(1, n):
            if abs(i - j) == 1:
                relations.append(DefiningRelation(f"serre e{i}{j}", bracket(e(i), bracket(e(i), e(j)))))
                relations.append(DefiningRelation(f"serre f{i}{j}", bracket(f(i), bracket(f(i), f(j)))))
            elif j > i + 1:
                relations.append(DefiningRelation(f"[e{i},e{j}]", bracket(e(i), e(j))))
                relations.append(DefiningRelation(f"[f{i},f{j}]", bracket(f(i), f(j))))

    return relations


def check_relation(B: Basis, name: str, T: Tableau) -> FormalVector:
    operators = {r.name: r.operator for r in defining_relations(B.n)}
    if name not in operators:
        raise ValueError(f"gl_{B.n} has no defining relation named {name!r}")
    return apply_operator(B, operators[name], FormalVector.of(T))


# reports


class Check(NamedTuple):
    relation: str
    tableau: Tableau
    defect: FormalVector

    @property
    def passed(self) -> bool:
        return self.defect.is_zero()


class VerificationReport:
    def __init__(self, description: str, radius: int | None, checks: list[Check], seed_rng=None):
        self.description = description
        self.radius = radius
        self.checks = checks
        self.seed_rng = seed_rng

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [check for check in self.checks if not check.passed]

    @property
    def tableaux(self) -> int:
        return len({check.tableau for check in self.checks})

    def __bool__(self):
        return self.passed

    def __repr__(self):
        status = "passed" if self.passed else f"{len(self.failures)} failures"
        return f"VerificationReport({self.description}, {len(self.checks)} checks, {status})"


def check_tableaux(
    B: Basis,
    tableaux: Sequence[Tableau],
    progress: bool = False,
    desc: str = "relations",
) -> list[Check]:
    relations = defining_relations(B.n)
    checks = []
    failures = 0
    bar = tqdm(tableaux, desc=desc, disable=not progress)
    for T in bar:
        v = FormalVector.of(T)
        for relation in relations:
            defect = apply_operator(B, relation.operator, v)
            checks.append(Check(relation.name, T, defect))
            if defect:
                failures += 1
                bar.set_postfix(failures=failures)
    return checks


def check_defining_relations(
    B: BasisSpec,
    radius: int = DEFAULT_RADIUS,
    progress: bool = False,
    anchor_assignments_count: int = 1,
    rng: int | np.random.Generator | None = None,
) -> VerificationReport:
    """
    Every defining relation on every member of the ball around the seed. With
    more than one anchor assignment the same ball is checked again under fresh
    anchor values.
    """
    if not is_realization(B.seed, B.relations):
        raise NotRealization(f"{B.seed} is not a realization of {B.relations}")

    seed_rng = seed_of(rng)
    ball = enumerate_ball(B, radius)
    checks = []
    for table in anchor_assignments(B.seed, anchor_assignments_count, rng):
        checks += check_tableaux(
            _under(B, table),
            _reanchor_all(ball, table),
            progress=progress,
            desc=f"verify r={radius}",
        )
    return VerificationReport(f"{B.relations} at {B.seed}", radius, checks, seed_rng)


class Violation(NamedTuple):
    tableau: Tableau
    relation: str
    defect: FormalVector


def find_violation(B: Basis, candidates: Sequence[Tableau]) -> Violation | None:
    relations = defining_relations(B.n)
    for T in candidates:
        v = FormalVector.of(T)
        for relation in relations:
            defect = apply_operator(B, relation.operator, v)
            if defect:
                return Violation(T, relation.name, defect)
    return None


# anchors


def anchor_assignments(seed: Tableau, count: int, rng=None) -> list[AnchorTable]:
    """The seed's own anchor table followed by count - 1 fresh values for the same ids; integral seeds have one."""
    rng = as_rng(rng)
    ids = [a for a in seed.anchors if a != INTEGER_ANCHOR]
    tables = [seed.anchors]
    while ids and len(tables) < count:
        tables.append(fresh_anchor_table(ids, rng))
    return tables


def _under(B: BasisSpec, table: AnchorTable) -> BasisSpec:
    return B if table is B.seed.anchors else B.reanchored(table)


def _reanchor_all(tableaux: Sequence[Tableau], table: AnchorTable) -> list[Tableau]:
    return [T if T.anchors is table else T.reanchored(table) for T in tableaux]


def distance_one_witnesses(B: BasisSpec) -> list[Tableau]:
    """Basis tableaux putting each adjacent pair of a forced row order at distance one."""
    C = B.relations
    witnesses = []
    for part in C.components:
        for k in range(1, C.n):
            for order in forced_order(part, k):
                for p, q in zip(order, order[1:]):
                    T = distance_one_witness(C, p, q, realization=B.seed)
                    if T is not None and T in B and T not in witnesses:
                        witnesses.append(T)
    return witnesses


# admissibility against the module structure


class CrossValidation(NamedTuple):
    relations: RelationSet
    admissible: bool
    samples: int
    conclusive: int  # samples whose realization satisfies nothing beyond the set
    violation: Violation | None
    seed_rng: int | None = None

    @property
    def inconclusive(self) -> bool:
        # not admissible, and no sample was a realization satisfying only the set
        return not self.admissible and self.conclusive == 0

    @property
    def agreed(self) -> bool:
        if self.admissible:
            return self.violation is None
        return self.violation is not None

    def __bool__(self):
        return self.agreed


def cross_validate(
    C: RelationSet,
    samples: int = DEFAULT_SAMPLES,
    radius: int = DEFAULT_RADIUS,
    anchor_assignments_count: int = DEFAULT_ANCHOR_ASSIGNMENTS,
    rng: int | np.random.Generator | None = None,
    gap: int = DEFAULT_GAP,
) -> CrossValidation:
    """
    Compare the admissibility predicate with direct verification on sampled
    realizations. A set judged not admissible only counts against the predicate
    on samples for which it is the full set of satisfied relations; with no such
    sample the result is inconclusive.
    """
    seed_rng = seed_of(rng)
    rng = as_rng(rng)
    if not is_noncritical_set(C):
        raise CriticalSet(f"{C} is critical")

    admissible = is_admissible(C)
    conclusive = 0
    for _ in range(samples):
        seed = sample_realization(C, gap=gap, rng=rng)
        if not admissible:
            if not equivalent(C, satisfied_set(seed), top_pins(seed)):
                continue
            conclusive += 1

        B = BasisSpec(C, seed)
        candidates = enumerate_ball(B, radius)
        if not admissible:
            candidates = distance_one_witnesses(B) + candidates
        for table in anchor_assignments(seed, anchor_assignments_count, rng):
            violation = find_violation(_under(B, table), _reanchor_all(candidates, table))
            if violation is not None:
                return CrossValidation(C, admissible, samples, conclusive, violation, seed_rng)

    return CrossValidation(C, admissible, samples, conclusive, None, seed_rng)


class SweepResult(NamedTuple):
    enumerated: int  # subsets of the relation universe visited
    results: list
    seed_rng: int | None = None

    @property
    def checked(self) -> int:
        return len(self.results)

    @property
    def disagreements(self) -> list[CrossValidation]:
        return [result for result in self.results if not result.agreed and not result.inconclusive]

    @property
    def inconclusive(self) -> list[CrossValidation]:
        return [result for result in self.results if result.inconclusive]


def _canonical(indices, relabelings) -> tuple:
    return min(tuple(sorted(table[a] for a in indices)) for table in relabelings)


def sweep_small_sets(
    n: int,
    max_relations: int,
    samples: int = DEFAULT_SAMPLES,
    radius: int = DEFAULT_RADIUS,
    anchor_assignments_count: int = DEFAULT_ANCHOR_ASSIGNMENTS,
    rng: int | np.random.Generator | None = None,
    progress: bool = False,
    dedupe: bool = True,
) -> SweepResult:
    """
    cross_validate every noncritical set of at most max_relations module-defining
    relations. With `dedupe` one set stands in for every set equivalent to it up
    to a relabeling by S_n x ... x S_1; admissibility and verification are
    invariant under both.
    """
    seed_rng = seed_of(rng)
    rng = as_rng(rng)
    universe = list(relation_universe(n))
    index = {r: a for a, r in enumerate(universe)}
    relabelings = [[index[relabel(sigma, r)] for r in universe] for sigma in permutation_group(n)]
    subsets = [s for size in range(max_relations + 1) for s in combinations(range(len(universe)), size)]

    seen_subsets, seen_classes = set(), set()
    results = []
    disagreements = 0
    bar = tqdm(subsets, desc=f"small sets n={n}", disable=not progress)
    for subset in bar:
        if dedupe:
            key = _canonical(subset, relabelings)
            if key in seen_subsets:
                continue
            seen_subsets.add(key)

        C = RelationSet(n, [universe[a] for a in subset])
        if not is_satisfiable(C) or not is_noncritical_set(C):
            continue
        if dedupe:
            key = _canonical([index[r] for r in implied_relations(C, universe)], relabelings)
            if key in seen_classes:
                continue
            seen_classes.add(key)

        result = cross_validate(C, samples, radius, anchor_assignments_count, rng)
        results.append(result)
        if not result.agreed and not result.inconclusive:
            disagreements += 1
            bar.set_postfix(checked=len(results), disagreements=disagreements)
            tqdm.write(f"disagreement on {C}: admissible={result.admissible}")
    return SweepResult(len(subsets), results, seed_rng)


def generic_basis(n: int, rng: int | np.random.Generator | None = None) -> BasisSpec:
    """The empty relation set on a seed with a fresh anchor in every position."""
    empty = RelationSet(n)
    return BasisSpec(empty, sample_realization(empty, rng=rng))


# irreducibility and the FRZ condition


def is_irreducible(C: RelationSet, T: Tableau) -> bool:
    if not is_realization(T, C):
        raise NotRealization(f"{T} is not a realization of {C}")
    return equivalent(C, satisfied_set(T), top_pins(T))


class FrzResult(NamedTuple):
    relations: RelationSet | None
    candidates: list
    ambiguous: bool
    exhausted: bool  # the search hit its node limit

    def __bool__(self):
        return self.relations is not None


def _realized_admissible(C: RelationSet, T: Tableau) -> bool:
    return is_realization(T, C) and is_admissible(C)


def frz_check(T: Tableau, limit: int = FRZ_SEARCH_LIMIT) -> FrzResult:
    """
    An admissible set that T realizes and no larger admissible set does. The
    maximal satisfied set is tried first, then its subsets level by level.
    """
    if not is_noncritical_tableau(T):
        raise CriticalTableau(f"{T} repeats an entry below the top row")

    maximal = satisfied_set(T)
    if is_noncritical_set(maximal):
        maximal = reduce(maximal)
    if _realized_admissible(maximal, T):
        return FrzResult(maximal, [maximal], False, False)

    found = []
    seen = {maximal}
    frontier = [maximal]
    exhausted = False
    while frontier and not exhausted:
        below = []
        for C in frontier:
            for r in C:
                subset = C - [r]
                if subset in seen:
                    continue
                if len(seen) >= limit:
                    exhausted = True
                    break
                seen.add(subset)
                if _realized_admissible(subset, T):
                    found.append(subset)
                else:
                    below.append(subset)
        frontier = below

    pins = top_pins(T)
    tops = [C for C in found if not any(C.relations < D.relations for D in found)]
    distinct = []
    for C in tops:
        if not any(equivalent(C, D, pins) for D in distinct):
            distinct.append(C)

    chosen = distinct[0] if len(distinct) == 1 else None
    return FrzResult(chosen, distinct, len(distinct) > 1, exhausted)


# explicit bases


class TableauModuleReport:
    def __init__(self, conditions: dict, relation_failures, repeated, gamma_failures):
        self.conditions = conditions
        self.relation_failures = relation_failures
        self.repeated = repeated
        self.gamma_failures = gamma_failures

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())

    def __bool__(self):
        return self.passed

    def __repr__(self):
        return f"TableauModuleReport({self.conditions})"


def tableau_module_check(tableaux: Sequence[Tableau], progress: bool = False) -> TableauModuleReport:
    """
    Conditions on an explicit basis: (i) noncritical tableaux, (ii) the defining
    relations hold, (iii) distinct fingerprints, (iv) c_mk acts by gamma_mk.
    """
    B = TableauBasis(tableaux)
    noncritical = all(is_noncritical_tableau(T) for T in B)
    if not noncritical:
        conditions = {"noncritical": False, "relations": False, "multiplicity_one": False, "gamma": False}
        return TableauModuleReport(conditions, [], [], [])

    relation_failures = [c for c in check_tableaux(B, list(B), progress=progress) if not c.passed]
    repeated = repeated_fingerprints(list(B))

    gamma_failures = []
    for T in tqdm(list(B), desc="gamma", disable=not progress):
        for m in range(1, B.n + 1):
            if m == B.n and len(set(T.top_row)) < B.n:
                continue
            for k in range(1, m + 1):
                check = check_gamma_action(B, T, m, k)
                if not check.passed:
                    gamma_failures.append((T, check))

    conditions = {
        "noncritical": True,
        "relations": not relation_failures,
        "multiplicity_one": not repeated,
        "gamma": not gamma_failures,
    }
    return TableauModuleReport(conditions, relation_failures, repeated, gamma_failures)


# highest weight modules


class HighestWeightModule(NamedTuple):
    relations: RelationSet
    seed: Tableau
    admissible: bool
    realization: bool
    seed_killed: bool  # every e_k sends the seed to zero


def hw_module_build(weight: Sequence) -> HighestWeightModule:
    """
    Relations and seed for the highest weight module of `weight`. Within each
    integral class the top-row entries in columns 1..n-1 must strictly decrease;
    column n may sit anywhere in its class.
    """
    top = top_row_from_weight(weight)
    n = len(top)
    if n < 2:
        raise PreconditionFailed(f"Weights need at least two entries, got {n}")

    (entries,), anchors = parse_rows([top])
    for i, j in combinations(range(n - 1), 2):
        if entries[i].anchor == entries[j].anchor and top[i] <= top[j]:
            raise PreconditionFailed(
                f"lambda_{i + 1} - lambda_{j + 1} = {format_fraction(top[i] - top[j] + i - j)} "
                f"must exceed {i - j}"
            )

    classes = {}
    for col, entry in enumerate(entries, start=1):
        classes.setdefault(entry.anchor, []).append(col)

    relations = []
    for members in classes.values():
        for k in range(1, n):
            # row k+1 of the seed repeats the top row, largest first
            chain = sorted((a for a in members if a <= k + 1), key=lambda a: (-top[a - 1], -a))
            for a in chain:
                if a <= k:
                    relations.append(((k + 1, a), (k, a), False))
            for a, b in zip(chain, chain[1:]):
                if a <= k:
                    relations.append(((k, a), (k + 1, b), True))
                elif b <= k:
                    relations.append(((k + 1, a), (k, b), False))
    C = RelationSet(n, relations)

    rows = [entries[:k] for k in range(n, 0, -1)]
    seed = Tableau(rows, anchors)

    B = BasisSpec(C, seed)
    killed = all(apply_e(B, k, FormalVector.of(seed)).is_zero() for k in range(1, n))
    return HighestWeightModule(C, seed, is_admissible(C), is_realization(seed, C), killed)


def hw_weight_top(weight: Sequence) -> list:
    """Top-row entries of a weight as literals, for reports."""
    return [format_fraction(v) for v in top_row_from_weight(weight)]
