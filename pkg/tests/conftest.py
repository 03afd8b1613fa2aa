"""Shared graph fixtures and independent test oracles.

The oracles here never reuse the library's recursion or factorization
paths: matching counts come from enumerating edge subsets, expectations
from Gauss-Hermite quadrature, and odd cycles from adjacency powers.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from matchbound.graphs import (
    WeightedGraph,
    complete_bipartite_graph,
    complete_graph,
    path_graph,
)

# irregular weighted 6-vertex graph, frozen once (contains a triangle and
# both odd and even degrees)
RANDOM6_EDGES = (
    (0, 1, 1.7),
    (0, 2, 0.6),
    (1, 2, 2.2),
    (1, 4, 0.9),
    (2, 3, 1.3),
    (3, 4, 2.0),
    (3, 5, 0.8),
    (4, 5, 1.1),
    (0, 5, 1.4),
)


@pytest.fixture(scope="session")
def k2_w4() -> WeightedGraph:
    return WeightedGraph(2, ((0, 1, 4.0),))


@pytest.fixture(scope="session")
def k2_unit() -> WeightedGraph:
    return WeightedGraph(2, ((0, 1, 1.0),))


@pytest.fixture(scope="session")
def p3() -> WeightedGraph:
    return path_graph(3)


@pytest.fixture(scope="session")
def triangle() -> WeightedGraph:
    return WeightedGraph(3, ((0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)))


@pytest.fixture(scope="session")
def k4() -> WeightedGraph:
    return complete_graph(4)


@pytest.fixture(scope="session")
def k22() -> WeightedGraph:
    return complete_bipartite_graph(2, 2)


@pytest.fixture(scope="session")
def k23() -> WeightedGraph:
    return complete_bipartite_graph(2, 3)


@pytest.fixture(scope="session")
def random6() -> WeightedGraph:
    return WeightedGraph(6, RANDOM6_EDGES)


def brute_matching_counts(g: WeightedGraph) -> list[float]:
    """phi(0..floor(N/2)) by enumerating edge subsets. Independent oracle."""
    n = g.n_vertices // 2
    counts = [0.0] * (n + 1)
    counts[0] = 1.0
    for k in range(1, n + 1):
        total = 0.0
        for combo in itertools.combinations(g.edges, k):
            used = set()
            ok = True
            for u, v, _ in combo:
                if u in used or v in used:
                    ok = False
                    break
                used.add(u)
                used.add(v)
            if ok:
                prod = 1.0
                for _, _, w in combo:
                    prod *= w
                total += prod
        counts[k] = total
    return counts


def delete_edge(g: WeightedGraph, index: int) -> WeightedGraph:
    edges = g.edges[:index] + g.edges[index + 1 :]
    return WeightedGraph(g.n_vertices, edges)


def delete_vertices(g: WeightedGraph, dead: set[int]) -> WeightedGraph:
    """Remove vertices and relabel the survivors, keeping edge order."""
    remap = {}
    for v in range(g.n_vertices):
        if v not in dead:
            remap[v] = len(remap)
    edges = tuple(
        (remap[u], remap[v], w) for u, v, w in g.edges if u not in dead and v not in dead
    )
    return WeightedGraph(max(len(remap), 1), edges)


def has_odd_cycle(g: WeightedGraph) -> bool:
    """Odd closed walk detection via odd powers of the 0/1 adjacency matrix."""
    a = np.zeros((g.n_vertices, g.n_vertices), dtype=np.int64)
    for u, v, _ in g.edges:
        a[u, v] = 1
        a[v, u] = 1
    power = a.copy()
    for _ in range(1, g.n_vertices + 1, 2):
        if np.trace(power) > 0:
            return True
        power = np.clip(power @ a @ a, 0, 1)  # clip keeps entries from overflowing
    return False


def random_weighted_graph(rng: np.random.Generator, n: int, p: float) -> WeightedGraph:
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v, float(rng.uniform(0.25, 4.0))))
    return WeightedGraph(n, tuple(edges))


def gauss_hermite_expect(f, nodes: int = 201) -> float:
    """E f(X) for standard normal X by Gauss-Hermite quadrature."""
    x, w = np.polynomial.hermite_e.hermegauss(nodes)
    return float((w * f(x)).sum() / math.sqrt(2.0 * math.pi))
