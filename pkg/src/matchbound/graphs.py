"""Weighted graphs, file parsing, skew-symmetric edge templates, bipartition.

Vertex ids are 1-based in files and 0-based everywhere else. All containers
are immutable after construction and safe to share between threads.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np


class GraphFormatError(ValueError):
    """A graph file or edge list violates the input contract."""


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with strictly positive edge weights.

    edges holds (u, v, weight) triples with 0-based endpoints, in the order
    they were supplied (file order survives a parse/serialize round trip).
    """

    n_vertices: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.n_vertices < 1:
            raise GraphFormatError("vertex count must be at least 1")
        seen = set()
        for u, v, w in self.edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise GraphFormatError(
                    f"vertex id out of range: edge ({u + 1}, {v + 1}) on "
                    f"{self.n_vertices} vertices"
                )
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u + 1}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphFormatError(f"duplicate edge ({key[0] + 1}, {key[1] + 1})")
            seen.add(key)
            if not (w > 0.0):
                raise GraphFormatError(
                    f"non-positive weight {w!r} on edge ({u + 1}, {v + 1})"
                )

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def max_weight(self) -> float:
        return max((w for _, _, w in self.edges), default=0.0)

    def adjacency(self) -> list[list[tuple[int, float]]]:
        """Neighbor lists (neighbor, weight), ascending vertex order."""
        nbrs: list[list[tuple[int, float]]] = [[] for _ in range(self.n_vertices)]
        for u, v, w in self.edges:
            nbrs[u].append((v, w))
            nbrs[v].append((u, w))
        for lst in nbrs:
            lst.sort()
        return nbrs


@dataclass(frozen=True, eq=False)
class SkewAdjacency:
    """Dense antisymmetric edge template: entry (i, j) = sqrt(weight) for i < j."""

    dimension: int
    matrix: np.ndarray
    amplitude: float  # max |entry|; 0 for an edgeless graph

    def __post_init__(self):
        self.matrix.setflags(write=False)


@dataclass(frozen=True, eq=False)
class Bipartition:
    """Two-coloring of a bipartite graph with its rectangular weight matrix.

    left (size m) is never larger than right (size n); weight_matrix is the
    m-by-n array with sqrt(weight) at coordinates of edges, 0 elsewhere.
    """

    left: tuple[int, ...]
    right: tuple[int, ...]
    weight_matrix: np.ndarray

    def __post_init__(self):
        self.weight_matrix.setflags(write=False)

    @property
    def m(self) -> int:
        return len(self.left)

    @property
    def n(self) -> int:
        return len(self.right)


def parse_graph(text: str) -> WeightedGraph:
    """Parse the plain-text graph format.

    First non-comment line is "N M"; then exactly M lines "u v w" with
    1-based vertex ids and a positive decimal weight. Lines starting with
    '#' are comments. Raises GraphFormatError with the offending line number.
    """
    lines = text.splitlines()
    header = None
    header_no = 0
    edge_lines: list[tuple[int, str]] = []
    for no, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if header is None:
            header = stripped
            header_no = no
        else:
            edge_lines.append((no, stripped))

    if header is None:
        raise GraphFormatError("empty graph file: missing 'N M' header")
    parts = header.split()
    if len(parts) != 2:
        raise GraphFormatError(f"line {header_no}: malformed header {header!r}, expected 'N M'")
    try:
        n_vertices, n_edges = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphFormatError(
            f"line {header_no}: malformed header {header!r}, expected two integers"
        ) from None
    if n_vertices < 1 or n_edges < 0:
        raise GraphFormatError(f"line {header_no}: malformed header counts {header!r}")
    if len(edge_lines) != n_edges:
        raise GraphFormatError(
            f"header promises {n_edges} edges but file has {len(edge_lines)} edge lines"
        )

    edges: list[tuple[int, int, float]] = []
    for no, line in edge_lines:
        fields = line.split()
        if len(fields) != 3:
            raise GraphFormatError(f"line {no}: expected 'u v w', got {line!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
            w = float(fields[2])
        except ValueError:
            raise GraphFormatError(f"line {no}: expected 'u v w', got {line!r}") from None
        if not (1 <= u <= n_vertices) or not (1 <= v <= n_vertices):
            raise GraphFormatError(
                f"line {no}: vertex id out of range: edge ({u}, {v}) on {n_vertices} vertices"
            )
        if u == v:
            raise GraphFormatError(f"line {no}: self-loop at vertex {u}")
        if not (w > 0.0):
            raise GraphFormatError(f"line {no}: non-positive weight {fields[2]!r}")
        edges.append((u - 1, v - 1, w))

    # duplicate-pair detection happens in the constructor
    return WeightedGraph(n_vertices, tuple(edges))


def serialize_graph(g: WeightedGraph) -> str:
    """Canonical text form; parse(serialize(g)) reproduces g exactly."""
    out = [f"{g.n_vertices} {g.n_edges}"]
    for u, v, w in g.edges:
        out.append(f"{u + 1} {v + 1} {w:.17g}")
    return "\n".join(out) + "\n"


def skew_adjacency(g: WeightedGraph) -> SkewAdjacency:
    """Antisymmetric template: sqrt(weight) above the diagonal on edges."""
    a = np.zeros((g.n_vertices, g.n_vertices))
    for u, v, w in g.edges:
        i, j = (u, v) if u < v else (v, u)
        root = np.sqrt(w)
        a[i, j] = root
        a[j, i] = -root
    amplitude = float(np.sqrt(g.max_weight)) if g.edges else 0.0
    return SkewAdjacency(g.n_vertices, a, amplitude)


def bipartition(g: WeightedGraph) -> Bipartition | None:
    """Two-color the graph by BFS, or return None when an odd cycle exists.

    Isolated vertices go to the larger side; sides are swapped if needed so
    that len(left) <= len(right).
    """
    color = [-1] * g.n_vertices
    nbrs = g.adjacency()
    for start in range(g.n_vertices):
        if color[start] != -1 or not nbrs[start]:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v, _ in nbrs[u]:
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None

    side0 = [v for v in range(g.n_vertices) if color[v] == 0]
    side1 = [v for v in range(g.n_vertices) if color[v] == 1]
    isolated = [v for v in range(g.n_vertices) if color[v] == -1]
    if len(side0) >= len(side1):
        side0.extend(isolated)
    else:
        side1.extend(isolated)
    side0.sort()
    side1.sort()
    if len(side0) > len(side1):
        side0, side1 = side1, side0

    row = {v: i for i, v in enumerate(side0)}
    col = {v: j for j, v in enumerate(side1)}
    c = np.zeros((len(side0), len(side1)))
    for u, v, w in g.edges:
        if u in row:
            c[row[u], col[v]] = np.sqrt(w)
        else:
            c[row[v], col[u]] = np.sqrt(w)
    return Bipartition(tuple(side0), tuple(side1), c)


def complete_graph(n: int, weight: float = 1.0) -> WeightedGraph:
    edges = tuple(
        (u, v, float(weight)) for u in range(n) for v in range(u + 1, n)
    )
    return WeightedGraph(n, edges)


def complete_bipartite_graph(m: int, n: int, weight: float = 1.0) -> WeightedGraph:
    edges = tuple(
        (u, m + v, float(weight)) for u in range(m) for v in range(n)
    )
    return WeightedGraph(m + n, edges)


def path_graph(n: int, weight: float = 1.0) -> WeightedGraph:
    edges = tuple((i, i + 1, float(weight)) for i in range(n - 1))
    return WeightedGraph(n, edges)
