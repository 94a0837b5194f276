"""Shared test utilities: random instances and independent reference oracles."""

from __future__ import annotations

import numpy as np

from motifris import Motif, MotifSet, build_graph, estimate_sigma, motif_profit_samples
from motifris.graph import Graph
from motifris.rng import RngStream


def random_digraph(gen: np.random.Generator, n_lo=3, n_hi=8, m_hi=12,
                   p_lo=0.05, p_hi=0.95, cost_lo=0.5, cost_hi=2.0,
                   benefit_hi=3.0) -> Graph:
    """Small random digraph with probabilities, costs and benefits assigned."""
    n = int(gen.integers(n_lo, n_hi + 1))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    m = int(gen.integers(1, min(m_hi, len(pairs)) + 1))
    picked = gen.choice(len(pairs), size=m, replace=False)
    edges = [(pairs[i][0], pairs[i][1], float(gen.uniform(p_lo, p_hi))) for i in picked]
    costs = gen.uniform(cost_lo, cost_hi, n)
    benefits = gen.uniform(0.0, benefit_hi, n)
    return build_graph(n, edges, costs=costs, benefits=benefits)


def random_motifs(gen: np.random.Generator, g: Graph, count_hi=3,
                  tau_mode="random", benefit_hi=20.0) -> list[Motif]:
    """1..count_hi random motifs over g's nodes (not necessarily connected)."""
    motifs = []
    for j in range(int(gen.integers(1, count_hi + 1))):
        size = int(gen.integers(1, min(4, g.n) + 1))
        vs = frozenset(int(x) for x in gen.choice(g.n, size=size, replace=False))
        if tau_mode == "one":
            tau = 1
        else:
            tau = int(gen.integers(1, len(vs) + 1))
        motifs.append(Motif(j, vs, tau, float(gen.uniform(1.0, benefit_hi))))
    return motifs


def bfs_reachable(edges: list[tuple[int, int]], seeds) -> set[int]:
    """Plain set-based BFS; the tests' independent reachability oracle."""
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
    reached = set(seeds)
    frontier = list(seeds)
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj.get(u, ()):
                if v not in reached:
                    reached.add(v)
                    nxt.append(v)
        frontier = nxt
    return reached


def mc_motif_profit(g: Graph, seeds, motifs: MotifSet, trials: int, stream: RngStream,
                    threshold=None) -> tuple[float, float]:
    """(mean profit, estimated standard error) from fresh cascades."""
    seeds = list(seeds)
    _, outcomes = estimate_sigma(g, seeds, trials, stream)
    seed_cost = float(g.node_cost[seeds].sum()) if seeds else 0.0
    samples = motif_profit_samples(outcomes, motifs, threshold, seed_cost, g.node_benefit)
    se = float(samples.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    return float(samples.mean()), se
