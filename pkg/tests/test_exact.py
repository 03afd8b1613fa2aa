import math

import numpy as np
import pytest

from matchbound.exact import (
    GraphTooLargeError,
    MatchingCounts,
    complete_bipartite_counts,
    complete_graph_counts,
    matching_counts,
    matching_poly_eval,
    matching_poly_log_eval,
)
from matchbound.graphs import (
    WeightedGraph,
    complete_bipartite_graph,
    complete_graph,
    path_graph,
)

from conftest import brute_matching_counts, delete_edge, delete_vertices, random_weighted_graph


class TestMatchingCounts:
    def test_single_edge(self, k2_w4):
        assert matching_counts(k2_w4).counts == (1.0, 4.0)

    def test_triangle(self, triangle):
        assert matching_counts(triangle).counts == (1.0, 3.0)

    def test_k4(self, k4):
        assert matching_counts(k4).counts == (1.0, 6.0, 3.0)

    def test_star_has_zero_tail(self):
        star = WeightedGraph(4, ((0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)))
        assert matching_counts(star).counts == (1.0, 3.0, 0.0)

    def test_edgeless(self):
        assert matching_counts(WeightedGraph(5, ())).counts == (1.0, 0.0, 0.0)

    def test_path_total_matchings_are_fibonacci(self):
        # the number of matchings of a path on n vertices is Fibonacci(n+1)
        fib = [1, 1]
        while len(fib) < 22:
            fib.append(fib[-1] + fib[-2])
        for n in (2, 5, 10, 20):
            total = sum(matching_counts(path_graph(n)).counts)
            assert total == fib[n]

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(300 + seed)
        g = random_weighted_graph(rng, int(rng.integers(2, 8)), float(rng.uniform(0.3, 0.9)))
        got = matching_counts(g).counts
        want = brute_matching_counts(g)
        assert np.allclose(got, want, rtol=1e-12, atol=0)

    @pytest.mark.parametrize("seed", range(10))
    def test_deletion_contraction(self, seed):
        rng = np.random.default_rng(400 + seed)
        weighted = seed % 2 == 0
        g = random_weighted_graph(rng, int(rng.integers(3, 8)), 0.6)
        if not weighted:
            g = WeightedGraph(g.n_vertices, tuple((u, v, 1.0) for u, v, _ in g.edges))
        if not g.edges:
            return
        whole = matching_counts(g).counts
        for idx, (u, v, w) in enumerate(g.edges):
            without_edge = matching_counts(delete_edge(g, idx)).counts
            without_ends = matching_counts(delete_vertices(g, {u, v})).counts
            for k in range(len(whole)):
                rhs = without_edge[k] if k < len(without_edge) else 0.0
                if k >= 1 and k - 1 < len(without_ends):
                    rhs += w * without_ends[k - 1]
                if weighted:
                    assert whole[k] == pytest.approx(rhs, rel=1e-12)
                else:
                    assert whole[k] == rhs  # integer counts are exact in doubles

    def test_first_two_invariants(self, random6):
        counts = matching_counts(random6)
        assert counts.counts[0] == 1.0
        assert counts.counts[1] == pytest.approx(
            sum(w for _, _, w in random6.edges), rel=1e-15
        )

    def test_vertex_cap(self):
        with pytest.raises(GraphTooLargeError):
            matching_counts(WeightedGraph(25, ()))

    def test_sparse_graph_at_cap(self):
        # a 24-vertex path finishes fast even though 2^24 memo keys exist
        counts = matching_counts(path_graph(24))
        assert counts.counts[0] == 1.0
        assert counts.counts[1] == 23.0


class TestPolynomialEval:
    def test_k2_at_one(self, k2_w4):
        assert matching_poly_eval(k2_w4, 1.0) == 5.0

    def test_k4_at_one(self, k4):
        assert matching_poly_eval(k4, 1.0) == 10.0

    def test_triangle_at_two(self, triangle):
        assert matching_poly_eval(triangle, 2.0) == 5.0

    def test_log_eval_matches_linear(self, random6):
        for t in (0.25, 1.0, 3.0):
            assert matching_poly_log_eval(random6, t) == pytest.approx(
                math.log(matching_poly_eval(random6, t)), rel=1e-13
            )

    def test_log_eval_survives_huge_t(self):
        counts = complete_bipartite_counts(32, 32)
        big_t = 1e300
        v = counts.log_eval(big_t)  # t^32 alone would overflow
        assert v == pytest.approx(32 * math.log(big_t), rel=1e-12)

    def test_strictly_increasing_in_t(self, k4, triangle, random6):
        for g in (k4, triangle, random6):
            values = [matching_poly_eval(g, t) for t in (0.5, 1.0, 2.0, 4.0)]
            assert all(a < b for a, b in zip(values, values[1:]))

    def test_negative_t_rejected(self, k4):
        with pytest.raises(ValueError):
            matching_poly_eval(k4, -1.0)
        with pytest.raises(ValueError):
            matching_counts(k4).log_eval(0.0)


class TestClosedForms:
    def test_bipartite_examples(self):
        assert complete_bipartite_counts(2, 2, 1.0).counts == (1.0, 4.0, 2.0)
        assert complete_bipartite_counts(1, 3, 2.0).counts == (1.0, 6.0, 0.0)
        assert complete_bipartite_counts(1, 1, 1.0).counts == (1.0, 1.0)

    def test_complete_examples(self):
        assert complete_graph_counts(4, 1.0).counts == (1.0, 6.0, 3.0)
        assert complete_graph_counts(2, 5.0).counts == (1.0, 5.0)
        assert complete_graph_counts(6, 1.0).counts == (1.0, 15.0, 45.0, 15.0)

    def test_complete_matches_recursion_and_brute_force(self):
        for n in range(1, 9):
            closed = complete_graph_counts(n, 1.0).counts
            assert closed == matching_counts(complete_graph(n)).counts
            assert list(closed) == brute_matching_counts(complete_graph(n))

    def test_complete_weighted_matches_recursion(self):
        for n in (3, 5, 7):
            closed = complete_graph_counts(n, 1.5).counts
            recursed = matching_counts(complete_graph(n, 1.5)).counts
            assert np.allclose(closed, recursed, rtol=1e-12, atol=0)

    def test_bipartite_matches_recursion_and_brute_force(self):
        for m in range(1, 5):
            for n in range(m, 5):
                closed = complete_bipartite_counts(m, n, 1.0).counts
                g = complete_bipartite_graph(m, n)
                assert closed == matching_counts(g).counts
                assert list(closed) == brute_matching_counts(g)

    def test_bipartite_weighted_matches_recursion(self):
        closed = complete_bipartite_counts(3, 4, 0.7).counts
        recursed = matching_counts(complete_bipartite_graph(3, 4, 0.7)).counts
        assert np.allclose(closed, recursed, rtol=1e-12, atol=0)

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            complete_graph_counts(0)
        with pytest.raises(ValueError):
            complete_graph_counts(3, 0.0)
        with pytest.raises(ValueError):
            complete_bipartite_counts(3, 2)
        with pytest.raises(ValueError):
            complete_bipartite_counts(0, 2)


class TestRoots:
    @pytest.mark.parametrize("seed", range(8))
    def test_roots_real_and_negative(self, seed):
        rng = np.random.default_rng(500 + seed)
        g = random_weighted_graph(rng, int(rng.integers(3, 8)), 0.6)
        coeffs = matching_counts(g).counts
        roots = np.roots(coeffs)
        if len(roots) == 0:
            return
        assert np.abs(roots.imag).max() < 1e-8
        nonzero = roots[np.abs(roots) > 1e-12]
        assert (nonzero.real < 0).all()


def test_counts_length_contract():
    with pytest.raises(ValueError):
        MatchingCounts(4, (1.0, 2.0))
