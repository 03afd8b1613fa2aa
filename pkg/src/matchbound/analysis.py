"""Gaussian log-moment constants and the per-vertex gap sweep.

The worst-case per-vertex gap constant is -E log(X^2) for standard normal
X. Both it and the shifted variant log(1+a^2) - E log((X+a)^2) are
integrals with an integrable logarithmic singularity; the quadrature
splits off the singular neighborhood, substitutes u = y^2 there (the
residual integrand then vanishes at the origin while the pure singular
part integrates to -4 in closed form), and handles the rest with adaptive
Simpson on a truncated range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .estimator import RngStream, derive_seed, estimate_log_phi_tilde
from .exact import complete_bipartite_counts, matching_counts
from .graphs import WeightedGraph, complete_bipartite_graph


def _adaptive_simpson(f, a: float, b: float, tol: float, max_depth: int = 60) -> float:
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_step(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    flm = f(0.5 * (a + m))
    frm = f(0.5 * (m + b))
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return _simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + _simpson_step(
        f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1
    )


def _mean_log_square_shifted(a: float, tol: float) -> float:
    """E log((X+a)^2) for standard normal X, absolute error about tol."""
    # fold the +-y halves of the density around the singular point
    def folded(y: float) -> float:
        return math.exp(-0.5 * (y - a) ** 2) + math.exp(-0.5 * (y + a) ** 2)

    s0 = folded(0.0)

    def desingularized(u: float) -> float:
        if u <= 0.0:
            return 0.0
        return math.log(u) / math.sqrt(u) * (folded(math.sqrt(u)) - s0)

    central = 0.5 * (_adaptive_simpson(desingularized, 0.0, 1.0, tol / 4.0) - 4.0 * s0)

    def outer_part(y: float) -> float:
        return 2.0 * math.log(y) * folded(y)

    # unit-width panels: the density bump is O(1) wide and would slip
    # between the probe points of a single adaptive call on [1, hi]
    hi = math.ceil(a + 40.0)
    panel_tol = tol / (4.0 * (hi - 1))
    outer = math.fsum(
        _adaptive_simpson(outer_part, float(lo), float(lo + 1), panel_tol)
        for lo in range(1, hi)
    )
    return (central + outer) / math.sqrt(2.0 * math.pi)


def c1_constant(tol: float = 1e-10) -> float:
    """-E log(X^2) = 1.270362845...; also Euler-Mascheroni + log 2."""
    return -_mean_log_square_shifted(0.0, tol)


def gaussian_log_gap(a: float, tol: float = 1e-10) -> float:
    """log(1 + a^2) - E log((X+a)^2): the log-moment gap of a shifted normal.

    Decreasing in a >= 0, from c1_constant() at a = 0 toward 0 (it behaves
    like 2/a^2 for large a).
    """
    if a < 0:
        raise ValueError("a must be nonnegative")
    return math.log1p(a * a) - _mean_log_square_shifted(a, tol)


@dataclass(frozen=True)
class GapSweepRow:
    """One complete-bipartite benchmark point: estimate vs exact per vertex."""

    m: int
    n: int
    t: float
    amplitude_lo: float  # sqrt of smallest edge weight
    amplitude_hi: float  # sqrt of largest edge weight
    samples: int
    estimate_per_vertex: float
    exact_per_vertex: float
    gap_per_vertex: float
    std_err_per_vertex: float
    gap_bound: float  # min(a^2 / 2t, c1)


def optimality_sweep(
    sides: list[int | tuple[int, int]],
    t: float,
    weight_lo: float,
    weight_hi: float,
    seed: int,
    samples_per_point: int,
    *,
    threads: int | None = None,
) -> list[GapSweepRow]:
    """Per-vertex gap between exact and estimated log-values on K_{m,n}.

    A bare integer side means the square graph K_{n,n}. Equal weight bounds
    use the uniform closed-form count; distinct bounds draw each edge
    weight uniformly from [weight_lo, weight_hi] and require sides small
    enough for exact enumeration (m, n <= 4). Gaps trend to zero as the
    sides grow.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    if not (0 < weight_lo <= weight_hi):
        raise ValueError("need 0 < weight_lo <= weight_hi")
    c1 = c1_constant()
    rows = []
    for index, side in enumerate(sides):
        m, n = (side, side) if isinstance(side, int) else side
        if m > n:
            m, n = n, m
        if m < 1:
            raise ValueError("sides must be at least 1")
        row_seed = derive_seed(seed, index)
        if weight_lo == weight_hi:
            g = complete_bipartite_graph(m, n, weight_hi)
            exact_log = complete_bipartite_counts(m, n, weight_hi).log_eval(t)
        else:
            if n > 4:
                raise ValueError("random-weight sweep points need m, n <= 4")
            span = weight_hi - weight_lo
            picks = _weight_draws(row_seed, m * n)
            edges = tuple(
                (i, m + j, weight_lo + span * picks[i * n + j])
                for i in range(m)
                for j in range(n)
            )
            g = WeightedGraph(m + n, edges)
            exact_log = matching_counts(g).log_eval(t)
        est = estimate_log_phi_tilde(g, t, samples_per_point, row_seed, threads=threads)
        n_vertices = m + n
        estimate_pv = est.mean_log / n_vertices
        exact_pv = exact_log / n_vertices
        rows.append(
            GapSweepRow(
                m=m,
                n=n,
                t=t,
                amplitude_lo=math.sqrt(weight_lo),
                amplitude_hi=math.sqrt(weight_hi),
                samples=samples_per_point,
                estimate_per_vertex=estimate_pv,
                exact_per_vertex=exact_pv,
                gap_per_vertex=exact_pv - estimate_pv,
                std_err_per_vertex=est.std_err / n_vertices,
                gap_bound=min(weight_hi / (2.0 * t), c1),
            )
        )
    return rows


def _weight_draws(seed: int, count: int) -> list[float]:
    return RngStream(seed, 0).uniforms(count).tolist()
