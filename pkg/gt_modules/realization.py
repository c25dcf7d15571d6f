"""
Tableaux realizing relation sets: satisfaction, realizations, maximal satisfied
sets, sampling, witnesses and cross elimination.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Sequence

import networkx as nx
import numpy as np

from gt_modules.constraints import DifferenceSystem
from gt_modules.relations import (
    CriticalSet,
    Cross,
    RelationSet,
    UnsatisfiableSet,
    closure,
    critical_pairs_of,
    detect_crosses,
    ge,
    gt,
    is_noncritical_set,
    reduce,
    relation_universe,
    row_pins,
)
from gt_modules.tableau import (
    AnchorTable,
    CriticalTableau,
    Entry,
    IntegerDiff,
    Position,
    Tableau,
    fresh_anchor_table,
    is_noncritical_tableau,
    positions,
)
from gt_modules.utils import as_rng, default, exists

DEFAULT_GAP = 2
WITNESS_SCALES = (16, 8, 4, 2, 1)


class NoCaseApplies(ValueError):
    pass


# satisfaction


def holds(T: Tableau, r) -> bool:
    d = T.diff(r.high, r.low)
    return isinstance(d, IntegerDiff) and d.value >= r.slack


def satisfies(T: Tableau, C: RelationSet) -> bool:
    return all(holds(T, r) for r in C)


def top_row_chain(T: Tableau) -> RelationSet:
    """The top-row GE chain of every anchor class, largest entry first."""
    classes = defaultdict(list)
    for i, entry in enumerate(T.top_row, start=1):
        classes[entry.anchor].append(Position(T.n, i))

    relations = []
    for members in classes.values():
        members.sort(key=lambda p: (-T.value(p), p.col))
        relations += [ge(p, q) for p, q in zip(members, members[1:])]
    return RelationSet(T.n, relations)


def extend(C: RelationSet, T: Tableau) -> RelationSet:
    return C | top_row_chain(T)


def realization_defects(T: Tableau, C: RelationSet) -> list[tuple[Position, Position]]:
    """Same-row pairs whose integral difference disagrees with their component membership."""
    graph = nx.Graph()
    graph.add_nodes_from(positions(T.n))
    graph.add_edges_from((r.high, r.low) for r in extend(C, T))
    component = {p: index for index, nodes in enumerate(nx.connected_components(graph)) for p in nodes}

    defects = []
    for k in range(1, T.n + 1):
        row = T.row(k)
        for i in range(k):
            for j in range(i + 1, k):
                p, q = Position(k, i + 1), Position(k, j + 1)
                if (row[i].anchor == row[j].anchor) != (component[p] == component[q]):
                    defects.append((p, q))
    return defects


def is_realization(T: Tableau, C: RelationSet) -> bool:
    return T.n == C.n and satisfies(T, C) and not realization_defects(T, C)


def max_satisfied_set(T: Tableau) -> RelationSet:
    """
    The reduced set of every module-defining relation T satisfies. Raises
    CriticalSet when that set lets two entries of a row below the top meet;
    `satisfied_set` gives the unreduced set in every case.
    """
    C = satisfied_set(T)
    pairs = critical_pairs_of(C)
    if pairs:
        raise CriticalSet(f"The relations satisfied by {T} let {pairs[0][0]} and {pairs[0][1]} meet")
    return reduce(C)


def satisfied_set(T: Tableau) -> RelationSet:
    """Every module-defining relation T satisfies, unreduced."""
    if not is_noncritical_tableau(T):
        raise CriticalTableau(f"{T} repeats an entry below the top row")

    satisfied = []
    for r in relation_universe(T.n):
        d = T.diff(r.high, r.low)
        if not isinstance(d, IntegerDiff) or d.value < r.slack:
            continue
        if r.high.row == r.low.row and d.value == 0 and r.high.col > r.low.col:
            continue
        satisfied.append(r)

    return RelationSet(T.n, satisfied)


# sampling


def _fresh_ids(count: int, taken) -> list[str]:
    ids, index = [], 1
    while len(ids) < count:
        candidate = f"a{index}"
        if candidate not in taken:
            ids.append(candidate)
        index += 1
    return ids


def sample_realization(
    C: RelationSet,
    gap: int = DEFAULT_GAP,
    rng: int | np.random.Generator | None = None,
    top_row: Sequence[Entry] | None = None,
    anchors: AnchorTable | None = None,
) -> Tableau:
    """
    A C-realization whose related entries are at least `gap` apart. Each component
    gets its own fresh anchor, as does every position no relation touches.
    With a fixed `top_row` the entries are spread as far as the top row allows.
    """
    rng = as_rng(rng)
    pins = row_pins(C.n, top_row) if exists(top_row) else ()
    if not is_noncritical_set(C, pins):
        raise CriticalSet(f"{C} is critical")

    if exists(top_row):
        T = complete_tableau(C, top_row, anchors, rng=rng, scales=tuple(gap * s for s in WITNESS_SCALES))
        if T is None:
            raise UnsatisfiableSet(f"{C} has no realization with top row {list(map(str, top_row))}")
        return T

    order_graph = nx.DiGraph()
    order_graph.add_nodes_from(C.positions())
    order_graph.add_edges_from((r.high, r.low) for r in C)
    condensed = nx.condensation(order_graph)
    keys = rng.permutation(len(condensed))
    ranked = list(nx.lexicographical_topological_sort(condensed, key=lambda c: keys[c]))
    level = {}
    for rank, c in enumerate(ranked):
        for p in condensed.nodes[c]["members"]:
            level[p] = gap * (len(ranked) - rank)

    groups = [part.positions() for part in C.components]
    free = [p for p in positions(C.n) if p not in level]
    ids = _fresh_ids(len(groups) + len(free), ())
    table = fresh_anchor_table(ids, rng)

    entries = {}
    for anchor, group in zip(ids, groups):
        for p in group:
            entries[p] = Entry(anchor, level[p])
    for anchor, p in zip(ids[len(groups) :], free):
        entries[p] = Entry(anchor, 0)

    rows = [[entries[Position(k, i)] for i in range(1, k + 1)] for k in range(C.n, 0, -1)]
    return Tableau(rows, table)


def _path_relations(C: RelationSet, equalities) -> set:
    # relations on some directed path between the ends of an equality
    graph = nx.DiGraph()
    graph.add_edges_from((r.high, r.low) for r in C)
    on_path = set()
    for a, b, _ in equalities:
        for source, target in ((a, b), (b, a)):
            if source not in graph or target not in graph:
                continue
            reach = nx.descendants(graph, source) | {source}
            back = nx.ancestors(graph, target) | {target}
            on_path |= {r for r in C if r.high in reach and r.low in back}
    return on_path


def _spread_solution(C: RelationSet, fixed, scales) -> dict | None:
    keep = _path_relations(C, fixed)

    def solve(scale, strict_only):
        system = DifferenceSystem(C.positions())
        for r in C:
            slack = r.slack
            if r not in keep and (r.strict or not strict_only):
                slack = max(slack, scale)
            system.add_constraint(r.high, r.low, slack)
        for p, q, c in fixed:
            system.add_equality(p, q, c)
        return system.solution()

    for strict_only in (False, True):
        for scale in scales:
            x = solve(scale, strict_only)
            if x is not None:
                return x
    return solve(0, True)


def complete_tableau(
    C: RelationSet,
    top_row: Sequence[Entry] | None,
    anchors: AnchorTable | None = None,
    equalities: Sequence = (),
    base: Tableau | None = None,
    rng: int | np.random.Generator | None = None,
    scales: Sequence[int] = WITNESS_SCALES,
) -> Tableau | None:
    """
    A tableau satisfying C and the given equalities (p, q, c) meaning l_p - l_q = c,
    or None when there is none. The top row is kept when given; classes untouched by
    the top row take their anchors from `base` when given, else fresh ones.
    """
    n = C.n
    rng = as_rng(rng)
    anchors = default(anchors, base.anchors if exists(base) else AnchorTable())
    if exists(base):
        top_row = default(top_row, base.top_row)
    pins = row_pins(n, top_row) if exists(top_row) else ()
    fixed = tuple(pins) + tuple(equalities)

    x = _spread_solution(C, fixed, scales)
    if x is None:
        return None

    groups = closure(C, fixed).groups
    entries = {}
    loose = []
    for group in groups:
        tops = [p for p in group if p.row == n and exists(top_row)]
        if tops:
            if len({top_row[p.col - 1].anchor for p in tops}) > 1:
                return None
            ref = tops[0]
            anchor, offset = top_row[ref.col - 1]
        elif exists(base):
            ref = group[0]
            anchor, offset = base[ref]
        else:
            loose.append(group)
            continue
        for p in group:
            entries[p] = Entry(anchor, offset + x.get(p, 0) - x.get(ref, 0))

    free = [p for p in positions(n) if p not in entries and not any(p in g for g in loose)]
    if exists(top_row):
        for p in free:
            if p.row == n:
                entries[p] = top_row[p.col - 1]
    if exists(base):
        for p in free:
            entries.setdefault(p, base[p])
    free = [p for p in free if p not in entries]

    ids = _fresh_ids(len(loose) + len(free), set(anchors))
    if ids:
        anchors = fresh_anchor_table(ids, rng, base=anchors)
    for anchor, group in zip(ids, loose):
        low = min(x.get(p, 0) for p in group)
        for p in group:
            entries[p] = Entry(anchor, x.get(p, 0) - low)
    for anchor, p in zip(ids[len(loose) :], free):
        entries[p] = Entry(anchor, 0)

    rows = [[entries[Position(k, i)] for i in range(1, k + 1)] for k in range(n, 0, -1)]
    T = Tableau(rows, anchors)
    return T if satisfies(T, C) else None


def distance_one_witness(
    C: RelationSet,
    upper: Position,
    lower: Position,
    realization: Tableau | None = None,
    top_row: Sequence[Entry] | None = None,
    anchors: AnchorTable | None = None,
    rng: int | np.random.Generator | None = None,
) -> Tableau | None:
    """A tableau satisfying C with l_upper - l_lower = 1, shift-related to `realization` when given."""
    upper, lower = Position(*upper), Position(*lower)
    return complete_tableau(
        C,
        top_row,
        anchors,
        equalities=[(upper, lower, 1)],
        base=realization,
        rng=rng,
    )


def critical_witness(C: RelationSet, rng: int | np.random.Generator | None = None) -> Tableau | None:
    """A tableau satisfying C with two equal entries in one row below the top, if C is critical."""
    pairs = critical_pairs_of(C)
    if not pairs:
        return None
    p, q = pairs[0]
    return complete_tableau(C, None, equalities=[(p, q, 0)], rng=rng)


# crosses


def eliminate_cross(C: RelationSet, x: Cross, T: Tableau) -> RelationSet:
    """Replace the cross by the chain of relations T actually satisfies between its four entries."""
    k, i, s, j, t = x
    ki, kj = Position(k, i), Position(k, j)
    us, ut = Position(k + 1, s), Position(k + 1, t)

    cases = (
        (gt(ki, us), ge(us, kj), gt(kj, ut)),
        (gt(ki, us), ge(ut, kj)),
        (ge(us, ki), gt(kj, ut)),
        (ge(us, ki), gt(ki, ut), ge(ut, kj)),
    )
    for chain in cases:
        if all(holds(T, r) for r in chain):
            return (C - x.relations()) | chain
    raise NoCaseApplies(f"Entries of {T} around the cross {tuple(x)} match no elimination case")


def eliminate_all_crosses(C: RelationSet, T: Tableau) -> RelationSet:
    seen = {C}
    while True:
        crosses = detect_crosses(C)
        if not crosses:
            return C
        C = eliminate_cross(C, crosses[0], T)
        if C in seen:
            raise NoCaseApplies(f"Cross elimination returned to {C}")
        seen.add(C)
