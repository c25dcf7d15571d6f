"""
Integer difference constraints x_p - x_q >= c over tableau positions.

A constraint is stored as the edge p -> q with weight -c, so shortest path
lengths bound the differences: dist[p][q] is the largest possible x_q - x_p.
A negative cycle means the system has no solution.
"""

from __future__ import annotations

from math import inf
from typing import Hashable, Iterable

import networkx as nx

_SOURCE = "__source__"


class DifferenceSystem:
    def __init__(self, nodes: Iterable[Hashable] = ()):
        self.graph = nx.DiGraph()
        self.graph.add_nodes_from(nodes)
        self._dist = None

    def copy(self) -> DifferenceSystem:
        system = DifferenceSystem()
        system.graph = self.graph.copy()
        return system

    @property
    def nodes(self):
        return list(self.graph.nodes)

    def add_node(self, p):
        self.graph.add_node(p)
        self._dist = None

    def add_constraint(self, p, q, c: int):
        # x_p - x_q >= c
        weight = -c
        if self.graph.has_edge(p, q):
            weight = min(weight, self.graph[p][q]["weight"])
        self.graph.add_edge(p, q, weight=weight)
        self._dist = None

    def add_equality(self, p, q, c: int):
        # x_p - x_q == c
        self.add_constraint(p, q, c)
        self.add_constraint(q, p, -c)

    def with_constraint(self, p, q, c: int) -> DifferenceSystem:
        system = self.copy()
        system.add_constraint(p, q, c)
        return system

    # bounds

    @property
    def dist(self):
        if self._dist is None:
            self._dist = nx.floyd_warshall(self.graph, weight="weight")
        return self._dist

    def is_feasible(self) -> bool:
        dist = self.dist
        return all(dist[p][p] >= 0 for p in self.graph.nodes)

    def lower(self, p, q):
        """Greatest lower bound of x_p - x_q, or -inf."""
        if p not in self.graph or q not in self.graph:
            return 0 if p == q else -inf
        return -self.dist[p][q]

    def upper(self, p, q):
        """Least upper bound of x_p - x_q, or inf."""
        if p not in self.graph or q not in self.graph:
            return 0 if p == q else inf
        return self.dist[q][p]

    def implies(self, p, q, c: int) -> bool:
        return self.lower(p, q) >= c

    def can_equal(self, p, q) -> bool:
        return self.lower(p, q) <= 0 <= self.upper(p, q)

    # solutions

    def solution(self) -> dict:
        """An integer solution, or None when the system is infeasible."""
        if not self.is_feasible():
            return None
        graph = self.graph.copy()
        graph.add_weighted_edges_from((_SOURCE, p, 0) for p in self.graph.nodes)
        lengths = nx.single_source_bellman_ford_path_length(graph, _SOURCE, weight="weight")
        return {p: int(lengths[p]) for p in self.graph.nodes}
