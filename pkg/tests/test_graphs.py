import itertools

import numpy as np
import pytest

from matchbound.graphs import (
    GraphFormatError,
    WeightedGraph,
    bipartition,
    complete_bipartite_graph,
    complete_graph,
    parse_graph,
    path_graph,
    serialize_graph,
    skew_adjacency,
)

from conftest import has_odd_cycle, random_weighted_graph


class TestParse:
    def test_smallest_legal_graph(self):
        g = parse_graph("2 1\n1 2 4.0")
        assert g.n_vertices == 2
        assert g.edges == ((0, 1, 4.0),)

    def test_unweighted_triangle(self):
        g = parse_graph("3 3\n1 2 1\n2 3 1\n1 3 1")
        assert g.n_vertices == 3
        assert g.edges == ((0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0))

    def test_comments_blank_lines_crlf(self):
        text = "# a comment\r\n\r\n3 2\r\n1 2 0.5\r\n# mid comment\r\n2 3 2.5\r\n"
        g = parse_graph(text)
        assert g.n_edges == 2
        assert g.edges[1] == (1, 2, 2.5)

    def test_self_loop_rejected(self):
        with pytest.raises(GraphFormatError, match="self-loop"):
            parse_graph("2 1\n1 1 1.0")

    def test_duplicate_edge_rejected(self):
        with pytest.raises(GraphFormatError, match="duplicate"):
            parse_graph("3 2\n1 2 1.0\n2 1 2.0")

    def test_non_positive_weight_rejected(self):
        with pytest.raises(GraphFormatError, match="non-positive"):
            parse_graph("2 1\n1 2 0.0")
        with pytest.raises(GraphFormatError, match="non-positive"):
            parse_graph("2 1\n1 2 -3")

    def test_vertex_out_of_range_rejected(self):
        with pytest.raises(GraphFormatError, match="out of range"):
            parse_graph("2 1\n1 3 1.0")
        with pytest.raises(GraphFormatError, match="out of range"):
            parse_graph("2 1\n0 2 1.0")

    def test_malformed_header_rejected(self):
        with pytest.raises(GraphFormatError, match="header"):
            parse_graph("two one\n1 2 1.0")
        with pytest.raises(GraphFormatError, match="header"):
            parse_graph("2\n1 2 1.0")
        with pytest.raises(GraphFormatError, match="header"):
            parse_graph("")

    def test_edge_count_mismatch_rejected(self):
        with pytest.raises(GraphFormatError, match="edges"):
            parse_graph("3 2\n1 2 1.0")

    def test_malformed_edge_line(self):
        with pytest.raises(GraphFormatError, match="expected 'u v w'"):
            parse_graph("2 1\n1 2")

    @pytest.mark.parametrize("seed", range(5))
    def test_round_trip_identity(self, seed):
        rng = np.random.default_rng(seed)
        g = random_weighted_graph(rng, int(rng.integers(2, 9)), 0.5)
        assert parse_graph(serialize_graph(g)) == g

    def test_round_trip_preserves_awkward_weights(self):
        g = WeightedGraph(3, ((0, 1, 0.1), (1, 2, 1e-7)))
        assert parse_graph(serialize_graph(g)) == g


class TestSkewAdjacency:
    def test_k2_weight_four(self, k2_w4):
        adj = skew_adjacency(k2_w4)
        assert np.array_equal(adj.matrix, [[0.0, 2.0], [-2.0, 0.0]])
        assert adj.amplitude == 2.0

    def test_edgeless_graph(self):
        adj = skew_adjacency(WeightedGraph(3, ()))
        assert np.array_equal(adj.matrix, np.zeros((3, 3)))
        assert adj.amplitude == 0.0

    def test_triangle_upper_entries(self, triangle):
        adj = skew_adjacency(triangle)
        assert adj.matrix[0, 1] == adj.matrix[0, 2] == adj.matrix[1, 2] == 1.0
        assert adj.amplitude == 1.0

    @pytest.mark.parametrize("seed", range(5))
    def test_squared_entries_reproduce_weights(self, seed):
        rng = np.random.default_rng(100 + seed)
        g = random_weighted_graph(rng, 7, 0.5)
        adj = skew_adjacency(g)
        assert np.array_equal(adj.matrix, -adj.matrix.T)
        squared = adj.matrix**2
        expected = np.zeros_like(squared)
        for u, v, w in g.edges:
            expected[u, v] = expected[v, u] = w
        assert np.allclose(squared, expected, rtol=1e-15, atol=0)


class TestBipartition:
    def test_triangle_has_none(self, triangle):
        assert bipartition(triangle) is None

    def test_k2(self, k2_w4):
        bip = bipartition(k2_w4)
        assert bip.m == bip.n == 1
        assert np.array_equal(bip.weight_matrix, [[2.0]])

    def test_path3(self, p3):
        bip = bipartition(p3)
        assert bip.left == (1,)
        assert bip.right == (0, 2)
        assert np.array_equal(bip.weight_matrix, [[1.0, 1.0]])

    def test_isolated_vertices_join_larger_side(self):
        g = WeightedGraph(5, ((0, 1, 1.0), (0, 2, 1.0)))
        bip = bipartition(g)
        assert bip.left == (0,)
        assert set(bip.right) == {1, 2, 3, 4}

    def test_sides_ordered_m_le_n(self):
        g = complete_bipartite_graph(4, 2)
        bip = bipartition(g)
        assert bip.m <= bip.n

    def test_every_edge_crosses(self, k23):
        bip = bipartition(k23)
        left = set(bip.left)
        for u, v, _ in k23.edges:
            assert (u in left) != (v in left)

    def test_exhaustive_small_graphs_match_odd_cycle_oracle(self):
        for n in range(1, 6):
            pairs = list(itertools.combinations(range(n), 2))
            for mask in range(1 << len(pairs)):
                edges = tuple(
                    (u, v, 1.0) for i, (u, v) in enumerate(pairs) if mask >> i & 1
                )
                g = WeightedGraph(n, edges)
                assert (bipartition(g) is None) == has_odd_cycle(g)

    @pytest.mark.parametrize("seed", range(20))
    def test_random_graphs_match_odd_cycle_oracle(self, seed):
        rng = np.random.default_rng(200 + seed)
        g = random_weighted_graph(rng, int(rng.integers(6, 11)), float(rng.uniform(0.1, 0.6)))
        assert (bipartition(g) is None) == has_odd_cycle(g)


class TestBuilders:
    def test_complete_graph(self):
        g = complete_graph(4, 2.0)
        assert g.n_edges == 6
        assert all(w == 2.0 for _, _, w in g.edges)

    def test_complete_bipartite(self):
        g = complete_bipartite_graph(2, 3)
        assert g.n_edges == 6
        assert bipartition(g) is not None

    def test_path(self):
        g = path_graph(5)
        assert g.n_edges == 4

    def test_constructor_validation(self):
        with pytest.raises(GraphFormatError):
            WeightedGraph(0, ())
        with pytest.raises(GraphFormatError):
            WeightedGraph(2, ((0, 0, 1.0),))
        with pytest.raises(GraphFormatError):
            WeightedGraph(2, ((0, 1, 1.0), (1, 0, 2.0)))
        with pytest.raises(GraphFormatError):
            WeightedGraph(3, ((0, 3, 1.0),))
