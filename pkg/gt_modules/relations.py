"""
Relation sets on tableau positions.

A relation p >= q or p > q asks that the entry at p minus the entry at q is a
non-negative (positive) integer. Sets are decided by integer difference
constraints; see `constraints.DifferenceSystem`.
"""

from __future__ import annotations

import re
from collections import Counter, deque
from functools import lru_cache
from math import inf
from typing import Iterable, NamedTuple, Sequence

import networkx as nx
from tqdm import tqdm

from gt_modules.constraints import DifferenceSystem
from gt_modules.tableau import Permutation, Position, Tableau, _check_permutation


class InvalidRelation(ValueError):
    pass


class UnsatisfiableSet(ValueError):
    pass


class CriticalSet(ValueError):
    pass


class OrderUndetermined(ValueError):
    pass


class NotReleasable(ValueError):
    pass


# relations


class Relation(NamedTuple):
    high: Position
    low: Position
    strict: bool = False

    @property
    def slack(self) -> int:
        return int(self.strict)

    @property
    def symbol(self) -> str:
        return ">" if self.strict else ">="

    def involves(self, p: Position) -> bool:
        return p == self.high or p == self.low

    def __str__(self):
        return f"{self.high}{self.symbol}{self.low}"


def ge(p, q) -> Relation:
    return Relation(Position(*p), Position(*q), False)


def gt(p, q) -> Relation:
    return Relation(Position(*p), Position(*q), True)


def is_r_form(r: Relation, n: int) -> bool:
    """GE from a row down to the next, GT from a row up to the next, or GE inside the top row."""
    if r.high.row == r.low.row + 1:
        return not r.strict
    if r.low.row == r.high.row + 1:
        return r.strict
    return r.high.row == r.low.row == n and not r.strict


class RelationSet:
    __slots__ = ("n", "relations", "_components", "_hash")

    def __init__(self, n: int, relations: Iterable = ()):
        if n < 2:
            raise InvalidRelation(f"Relation sets live on tableaux of height at least 2, got {n}")
        checked = set()
        for r in relations:
            r = Relation(Position(*r[0]), Position(*r[1]), bool(r[2]))
            for p in (r.high, r.low):
                if not 1 <= p.col <= p.row <= n:
                    raise InvalidRelation(f"{p} in {r} is not a position of a height-{n} tableau")
            if r.high == r.low:
                raise InvalidRelation(f"{r} relates a position to itself")
            checked.add(r)

        self.n = n
        self.relations = frozenset(checked)
        self._components = None
        self._hash = None

    def __iter__(self):
        return iter(sorted(self.relations))

    def __len__(self):
        return len(self.relations)

    def __contains__(self, r):
        return r in self.relations

    def __eq__(self, other):
        if not isinstance(other, RelationSet):
            return NotImplemented
        return self.n == other.n and self.relations == other.relations

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.relations))
        return self._hash

    def __or__(self, other: RelationSet | Iterable) -> RelationSet:
        return RelationSet(self.n, self.relations | frozenset(_relations_of(other)))

    def __sub__(self, other: RelationSet | Iterable) -> RelationSet:
        return RelationSet(self.n, self.relations - frozenset(_relations_of(other)))

    def __str__(self):
        return "{" + ", ".join(str(r) for r in self) + "}"

    def __repr__(self):
        return f"RelationSet(n={self.n}, {self})"

    def sort_key(self):
        return tuple(sorted(self.relations))

    def positions(self) -> list[Position]:
        return sorted({p for r in self.relations for p in (r.high, r.low)})

    def involving(self, p: Position) -> list[Relation]:
        return [r for r in self if r.involves(p)]

    @property
    def components(self) -> list[RelationSet]:
        if self._components is None:
            graph = nx.Graph()
            graph.add_edges_from((r.high, r.low) for r in self.relations)
            parts = [
                RelationSet(self.n, (r for r in self.relations if r.high in nodes))
                for nodes in nx.connected_components(graph)
            ]
            self._components = sorted(parts, key=RelationSet.sort_key)
        return self._components


def _relations_of(value):
    if isinstance(value, RelationSet):
        return value.relations
    return (Relation(Position(*r[0]), Position(*r[1]), bool(r[2])) for r in value)


# common sets


def standard_set(n: int) -> RelationSet:
    relations = []
    for k in range(2, n + 1):
        for i in range(1, k):
            relations.append(ge((k, i), (k - 1, i)))
            relations.append(gt((k - 1, i), (k, i + 1)))
    return RelationSet(n, relations)


def standard_top_chain(n: int) -> RelationSet:
    return RelationSet(n, [ge((n, i), (n, i + 1)) for i in range(1, n)])


def relation_universe(n: int) -> RelationSet:
    relations = []
    for k in range(2, n + 1):
        for j in range(1, k + 1):
            for j_lower in range(1, k):
                relations.append(ge((k, j), (k - 1, j_lower)))
                relations.append(gt((k - 1, j_lower), (k, j)))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                relations.append(ge((n, i), (n, j)))
    return RelationSet(n, relations)


_RELATION_PATTERN = re.compile(
    r"\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*(>=|≥|>|<=|≤|<)\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)"
)


def parse_relations(text: str, n: int) -> RelationSet:
    """Parse "(2,1)>=(1,1), (1,1)>(2,2)"; "<" and "<=" are read right to left."""
    relations = []
    leftover = _RELATION_PATTERN.sub("", text)
    if leftover.strip(" \t\n,;{}[]"):
        raise InvalidRelation(f"Cannot read relations from {text!r}")

    for match in _RELATION_PATTERN.finditer(text):
        a, b, symbol, c, d = match.groups()
        p, q = Position(int(a), int(b)), Position(int(c), int(d))
        if symbol in ("<", "<=", "≤"):
            p, q = q, p
        relations.append(Relation(p, q, symbol in (">", "<")))
    return RelationSet(n, relations)


def validate_set(C: RelationSet) -> bool:
    for r in C:
        adjacent = abs(r.high.row - r.low.row) == 1
        top = r.high.row == r.low.row == C.n and not r.strict
        if not (adjacent or top):
            return False
    return True


def relabel(sigma: Permutation, r: Relation) -> Relation:
    def move(p):
        return Position(p.row, sigma[p.row - 1][p.col - 1])

    return Relation(move(r.high), move(r.low), r.strict)


def sigma_action(sigma: Permutation, C: RelationSet) -> RelationSet:
    _check_permutation(sigma, C.n)
    return RelationSet(C.n, (relabel(sigma, r) for r in C))


def decompose(C: RelationSet) -> list[RelationSet]:
    return list(C.components)


# closure of a set under its difference constraints


Pin = tuple  # (p, q, c) fixes x_p - x_q == c


class Closure:
    """Difference bounds implied by a relation set and optional pins."""

    __slots__ = ("system", "component", "groups")

    def __init__(self, C: RelationSet, pins: Sequence[Pin] = ()):
        system = DifferenceSystem(C.positions())
        graph = nx.Graph()
        graph.add_nodes_from(C.positions())
        for r in C.relations:
            system.add_constraint(r.high, r.low, r.slack)
            graph.add_edge(r.high, r.low)
        for p, q, c in pins:
            system.add_equality(p, q, c)
            graph.add_edge(p, q)

        self.system = system
        self.groups = sorted(sorted(nodes) for nodes in nx.connected_components(graph))
        self.component = {p: index for index, nodes in enumerate(self.groups) for p in nodes}

    @property
    def feasible(self) -> bool:
        return self.system.is_feasible()

    def connected(self, p: Position, q: Position) -> bool:
        return p in self.component and self.component.get(q) == self.component[p]

    def lower(self, p: Position, q: Position):
        if not self.connected(p, q):
            return -inf
        return self.system.lower(p, q)

    def implies(self, r: Relation) -> bool:
        return self.lower(r.high, r.low) >= r.slack

    def can_equal(self, p: Position, q: Position) -> bool:
        if not self.connected(p, q):
            return True
        return self.system.can_equal(p, q)


@lru_cache(maxsize=8192)
def closure(C: RelationSet, pins: tuple = ()) -> Closure:
    return Closure(C, pins)


def row_pins(n: int, top: Sequence) -> tuple:
    """Equalities between top-row entries that share an anchor."""
    pins = []
    for i in range(len(top)):
        for j in range(i + 1, len(top)):
            if top[i].anchor == top[j].anchor:
                pins.append((Position(n, i + 1), Position(n, j + 1), top[i].offset - top[j].offset))
    return tuple(pins)


def top_pins(T: Tableau) -> tuple:
    return row_pins(T.n, T.top_row)


# satisfiability and criticality


def is_satisfiable(C: RelationSet, pins: Sequence[Pin] = ()) -> bool:
    return closure(C, tuple(pins)).feasible


def _satisfiable_closure(C: RelationSet, pins: Sequence[Pin] = ()) -> Closure:
    cl = closure(C, tuple(pins))
    if not cl.feasible:
        raise UnsatisfiableSet(f"No tableau satisfies {C}")
    return cl


def critical_pairs_of(C: RelationSet, pins: Sequence[Pin] = ()) -> list[tuple[Position, Position]]:
    """Same-row pairs below the top that some satisfying tableau makes equal."""
    cl = _satisfiable_closure(C, pins)
    pairs = []
    for nodes in cl.groups:
        for a, p in enumerate(nodes):
            for q in nodes[a + 1 :]:
                if p.row == q.row < C.n and cl.can_equal(p, q):
                    pairs.append((p, q))
    return pairs


def is_noncritical_set(C: RelationSet, pins: Sequence[Pin] = ()) -> bool:
    return not critical_pairs_of(C, pins)


def _linear_order(cl: Closure, nodes: list[Position], slack: int) -> list[Position]:
    # implied order, ties broken by column
    graph = nx.DiGraph()
    graph.add_nodes_from(nodes)
    for p in nodes:
        for q in nodes:
            if p == q or cl.lower(p, q) < slack:
                continue
            if cl.lower(q, p) >= slack and q.col < p.col:
                continue
            graph.add_edge(p, q)
    return list(nx.lexicographical_topological_sort(graph, key=lambda p: p.col))


def forced_order(C: RelationSet, k: int, pins: Sequence[Pin] = ()) -> list[list[Position]]:
    """
    For every component, its row-k positions from largest to smallest entry.
    Rows below the top are strictly ordered, the top row weakly.
    """
    cl = _satisfiable_closure(C, pins)
    slack = 1 if k < C.n else 0
    orders = []
    for nodes in cl.groups:
        row = [p for p in nodes if p.row == k]
        if not row:
            continue
        order = _linear_order(cl, row, slack)
        for p, q in zip(order, order[1:]):
            if cl.lower(p, q) < slack:
                raise OrderUndetermined(f"{C} orders neither {p} above {q} nor the reverse")
        orders.append(order)
    return orders


# implication and reduction


def implies(C1: RelationSet, C2: RelationSet, pins: Sequence[Pin] = ()) -> bool:
    cl = _satisfiable_closure(C1, pins)
    _satisfiable_closure(C2, pins)
    return all(cl.implies(r) for r in C2)


def equivalent(C1: RelationSet, C2: RelationSet, pins: Sequence[Pin] = ()) -> bool:
    return implies(C1, C2, pins) and implies(C2, C1, pins)


def implied_relations(C: RelationSet, universe: Iterable[Relation] | None = None) -> frozenset[Relation]:
    """
    The members of `universe` (default: the module-defining relations) that C
    implies. Two sets drawn from the universe are equivalent exactly when these agree.
    """
    cl = _satisfiable_closure(C)
    universe = relation_universe(C.n) if universe is None else universe
    return frozenset(r for r in universe if cl.implies(r))


def reduce(C: RelationSet) -> RelationSet:
    """The unique reduced set equivalent to C."""
    if not is_noncritical_set(C):
        raise CriticalSet(f"{C} is critical")

    current = set(C.relations)
    changed = True
    while changed:
        changed = False
        for r in sorted(current):
            if closure(RelationSet(C.n, current - {r})).implies(r):
                current.remove(r)
                changed = True
                break
    return RelationSet(C.n, current)


def is_reduced(C: RelationSet) -> bool:
    """Every position has at most one bound of each of the four adjacent-row kinds."""
    counts = Counter()
    for r in C:
        if r.strict and r.low.row == r.high.row + 1:
            counts[">", "up", r.high] += 1
            counts[">", "down", r.low] += 1
        elif not r.strict and r.high.row == r.low.row + 1:
            counts[">=", "down", r.high] += 1
            counts[">=", "up", r.low] += 1
    return all(count <= 1 for count in counts.values())


# crosses


class Cross(NamedTuple):
    """The pair {(k,i) > (k+1,t), (k+1,s) >= (k,j)} with i < j and s < t."""

    k: int
    i: int
    s: int
    j: int
    t: int

    def relations(self) -> tuple[Relation, Relation]:
        k, i, s, j, t = self
        return gt((k, i), (k + 1, t)), ge((k + 1, s), (k, j))


def detect_crosses(C: RelationSet) -> list[Cross]:
    strict = [r for r in C if r.strict and r.low.row == r.high.row + 1]
    weak = [r for r in C if not r.strict and r.high.row == r.low.row + 1]

    crosses = []
    for a in strict:
        k, i, t = a.high.row, a.high.col, a.low.col
        for b in weak:
            if b.high.row != k + 1:
                continue
            s, j = b.high.col, b.low.col
            if i < j and s < t:
                crosses.append(Cross(k, i, s, j, t))
    return sorted(crosses)


# admissibility


def is_pre_admissible(C: RelationSet) -> bool:
    if not validate_set(C) or not all(is_r_form(r, C.n) for r in C):
        return False
    if not is_satisfiable(C) or not is_noncritical_set(C):
        return False
    cl = closure(C)
    # a top-row tie may be written in either direction
    if any(r.high.col > r.low.col and cl.lower(r.low, r.high) < 0 for r in C if r.high.row == r.low.row):
        return False

    for part in C.components:
        if detect_crosses(part):
            return False
        for k in range(1, C.n):
            for order in forced_order(part, k):
                cols = [p.col for p in order]
                if cols != sorted(cols):
                    return False
    return True


def orient(C: RelationSet) -> Permutation:
    """Relabel columns so every component lists its row positions in decreasing order."""
    cl = _satisfiable_closure(C)
    sigma = [list(range(1, k + 1)) for k in range(1, C.n + 1)]
    for nodes in cl.groups:
        for k in range(1, C.n + 1):
            row = [p for p in nodes if p.row == k]
            order = _linear_order(cl, row, 1 if k < C.n else 0)
            for p, col in zip(order, sorted(p.col for p in row)):
                sigma[k - 1][p.col - 1] = col
    return tuple(tuple(images) for images in sigma)


def sandwiched(C: RelationSet, p: Position, q: Position) -> tuple[list[Position], list[Position]]:
    """
    For a row-k pair p > q: the row k+1 positions u with p > u >= q, and the
    row k-1 positions w with p >= w > q, all as implied by C.
    """
    cl = closure(C)
    k = p.row
    above = [
        Position(k + 1, col)
        for col in range(1, k + 2)
        if cl.lower(p, Position(k + 1, col)) >= 1 and cl.lower(Position(k + 1, col), q) >= 0
    ]
    below = [
        Position(k - 1, col)
        for col in range(1, k)
        if cl.lower(p, Position(k - 1, col)) >= 0 and cl.lower(Position(k - 1, col), q) >= 1
    ]
    return above, below


def admissibility_defects(C: RelationSet) -> list[tuple[Position, Position]]:
    """Adjacent pairs of the forced orders that are not held apart by their neighbours."""
    defects = []
    for part in C.components:
        for k in range(1, C.n):
            for order in forced_order(part, k):
                for p, q in zip(order, order[1:]):
                    above, below = sandwiched(part, p, q)
                    if not ((above and below) or len(above) >= 2):
                        defects.append((p, q))
    return defects


def is_admissible(C: RelationSet) -> bool:
    if not validate_set(C) or not all(is_r_form(r, C.n) for r in C):
        return False
    if not is_satisfiable(C) or not is_noncritical_set(C):
        return False
    oriented = sigma_action(orient(C), C)
    return is_pre_admissible(oriented) and not admissibility_defects(oriented)


def matching_neighbors(T: Tableau, p: Position, q: Position) -> int:
    """Entries of row k+1 equal to T[q] plus entries of row k-1 equal to T[p]."""
    k = p.row
    count = 0
    if k < T.n:
        count += sum(entry == T[q] for entry in T.row(k + 1))
    if k > 1:
        count += sum(entry == T[p] for entry in T.row(k - 1))
    return count


# relations removal


def releasable_positions(C: RelationSet) -> list[Position]:
    found = []
    for p in C.positions():
        touching = C.involving(p)
        if all(r.high == p for r in touching) or all(r.low == p for r in touching):
            found.append(p)
    return found


def rr_step(C: RelationSet, p: Position) -> RelationSet:
    """Drop every relation at p; p must be bounded from one side only."""
    p = Position(*p)
    touching = C.involving(p)
    if not touching:
        raise NotReleasable(f"No relation of {C} involves {p}")
    if not (all(r.high == p for r in touching) or all(r.low == p for r in touching)):
        raise NotReleasable(f"{p} is bounded from both sides in {C}")
    return C - touching


def rr_reachable(n: int, limit: int, progress: bool = False) -> set[RelationSet]:
    start = reduce(standard_set(n))
    seen = {start}
    queue = deque([start])

    with tqdm(total=limit, desc="relations removal", disable=not progress) as bar:
        bar.update(1)
        while queue and len(seen) < limit:
            C = queue.popleft()
            for p in releasable_positions(C):
                released = reduce(rr_step(C, p))
                if released in seen:
                    continue
                seen.add(released)
                queue.append(released)
                bar.update(1)
                if len(seen) >= limit:
                    break
    return seen
