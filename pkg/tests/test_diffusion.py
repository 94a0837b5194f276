import math

import numpy as np
import pytest

from motifris import (
    MOTIF_LEVEL,
    Motif,
    MotifSet,
    build_graph,
    estimate_sigma,
    exact_activation_probabilities,
    exact_profit_oracle,
    reachable_in_live_graph,
    simulate_ic,
)
from motifris.diffusion import ORACLE_EDGE_LIMIT
from motifris.rng import RngStream

from helpers import bfs_reachable, random_digraph


def chain(p=1.0):
    return build_graph(3, [(0, 1, p), (1, 2, p)], costs=[1, 1, 1], benefits=[1, 1, 1])


def test_certain_chain_fully_cascades():
    out = simulate_ic(chain(), [0], RngStream(0))
    assert out.activated == {0, 1, 2}
    assert out.seed_set == {0}


def test_empty_seed_set_activates_nothing():
    out = simulate_ic(chain(), [], RngStream(0))
    assert out.activated == frozenset()
    sigma, _ = estimate_sigma(chain(), [], 50, RngStream(0))
    assert sigma == 0.0


def test_single_coin_activation_frequency():
    g = build_graph(2, [(0, 1, 0.5)], costs=[1, 1], benefits=[1, 1])
    _, outcomes = estimate_sigma(g, [0], 100_000, RngStream(7))
    frac = (outcomes.spreads() == 2).mean()
    assert abs(frac - 0.5) < 0.01
    # the one-shot entry point draws from the same distribution
    hits = sum(
        1 for i in range(1000) if len(simulate_ic(g, [0], RngStream(8).child(i)).activated) == 2
    )
    assert abs(hits / 1000 - 0.5) < 0.05


def test_sigma_deterministic_chain():
    sigma, outcomes = estimate_sigma(chain(), [0], 10, RngStream(1))
    assert sigma == 3.0
    assert len(outcomes) == 10
    assert outcomes[3].activated == {0, 1, 2}


def test_sigma_single_coin_mean():
    g = build_graph(2, [(0, 1, 0.5)], costs=[1, 1], benefits=[1, 1])
    sigma, _ = estimate_sigma(g, [0], 100_000, RngStream(2))
    assert abs(sigma - 1.5) < 0.01


def test_simulation_determinism():
    g = random_digraph(np.random.default_rng(10))
    a = simulate_ic(g, [0], RngStream(5, (1, 2)))
    b = simulate_ic(g, [0], RngStream(5, (1, 2)))
    assert a == b
    _, o1 = estimate_sigma(g, [0], 200, RngStream(5, (3,)))
    _, o2 = estimate_sigma(g, [0], 200, RngStream(5, (3,)))
    assert np.array_equal(o1.matrix, o2.matrix)


def test_all_certain_edges_equal_bfs():
    gen = np.random.default_rng(42)
    for _ in range(30):
        g = random_digraph(gen, p_lo=1.0, p_hi=1.0)
        edges = [(u, v) for u, v, _ in g.edges()]
        seeds = [int(s) for s in gen.choice(g.n, size=gen.integers(1, g.n + 1), replace=False)]
        out = simulate_ic(g, seeds, RngStream(int(gen.integers(2**31))))
        assert out.activated == bfs_reachable(edges, seeds)


def test_nonseed_activation_needs_active_in_neighbor():
    gen = np.random.default_rng(11)
    for _ in range(20):
        g = random_digraph(gen)
        seeds = {int(gen.integers(g.n))}
        out = simulate_ic(g, seeds, RngStream(int(gen.integers(2**31))))
        assert seeds <= out.activated
        for v in out.activated - seeds:
            sources, _ = g.in_edges(v)
            assert any(int(u) in out.activated for u in sources)


def test_coupled_live_edge_monotonicity():
    gen = np.random.default_rng(12)
    for _ in range(25):
        g = random_digraph(gen)
        live = gen.random(g.m) < gen.random()
        small = sorted(gen.choice(g.n, size=max(1, g.n // 2), replace=False).tolist())
        big = sorted(set(small) | {int(gen.integers(g.n))})
        assert reachable_in_live_graph(g, small, live) <= reachable_in_live_graph(g, big, live)


def test_oracle_certain_edge():
    g = build_graph(2, [(0, 1, 1.0)], costs=[3, 1], benefits=[0, 0])
    ms = MotifSet([Motif(0, frozenset({0, 1}), 2, 10.0)], benefit_mode=MOTIF_LEVEL)
    assert exact_profit_oracle(g, [0], ms) == pytest.approx(7.0)


def test_oracle_two_live_graphs():
    g = build_graph(2, [(0, 1, 0.5)], costs=[1, 1], benefits=[0, 0])
    ms = MotifSet([Motif(0, frozenset({1}), 1, 4.0)], benefit_mode=MOTIF_LEVEL)
    assert exact_profit_oracle(g, [0], ms) == pytest.approx(0.5 * 4 - 1)


def test_oracle_empty_seed_set():
    g = build_graph(3, [(0, 1, 0.7), (1, 2, 0.4)], costs=[1, 1, 1], benefits=[1, 1, 1])
    ms = MotifSet([Motif(0, frozenset({0, 1}), 1, 5.0)], benefit_mode=MOTIF_LEVEL)
    assert exact_profit_oracle(g, [], ms) == 0.0


def test_oracle_guard():
    edges = [(u, v, 0.5) for u in range(6) for v in range(6) if u != v][: ORACLE_EDGE_LIMIT + 1]
    g = build_graph(6, edges, costs=[1] * 6, benefits=[1] * 6)
    ms = MotifSet([Motif(0, frozenset({0, 1}), 1, 1.0)], benefit_mode=MOTIF_LEVEL)
    with pytest.raises(ValueError, match="2\\^m"):
        exact_profit_oracle(g, [0], ms)


def test_oracle_matches_hand_computed_distribution():
    # 0->1 (p), 0->2 (q): P(both) = pq, exactly one = p(1-q)+q(1-p)
    p, q = 0.3, 0.8
    g = build_graph(3, [(0, 1, p), (0, 2, q)], costs=[2, 1, 1], benefits=[0, 5, 7])
    probs = exact_activation_probabilities(g, [0])
    assert probs[0] == pytest.approx(1.0)
    assert probs[1] == pytest.approx(p)
    assert probs[2] == pytest.approx(q)
    ms = MotifSet([Motif(0, frozenset({1, 2}), 2, 6.0)], benefit_mode=MOTIF_LEVEL)
    assert exact_profit_oracle(g, [0], ms) == pytest.approx(p * q * 6.0 - 2.0)


def test_oracle_node_union_mode():
    p = 0.25
    g = build_graph(3, [(0, 1, p), (0, 2, p)], costs=[1, 1, 1], benefits=[10, 3, 4])
    motifs = [Motif(0, frozenset({0, 1}), 2, 0.0), Motif(1, frozenset({0, 2}), 2, 0.0)]
    ms = MotifSet(motifs, benefit_mode="node-union")
    # union de-duplicates node 0: E = p^2(10+3+4) + p(1-p)(13) + (1-p)p(14) + 0
    expect = p * p * 17 + p * (1 - p) * 13 + (1 - p) * p * 14 - 1.0
    assert exact_profit_oracle(g, [0], ms) == pytest.approx(expect)


def test_mc_estimator_approaches_oracle():
    gen = np.random.default_rng(20)
    g = random_digraph(gen, n_lo=4, n_hi=6, m_hi=8)
    ms = MotifSet([Motif(0, frozenset({0, 1}), 1, 9.0)], benefit_mode=MOTIF_LEVEL)
    exact = exact_profit_oracle(g, [2], ms)
    from helpers import mc_motif_profit

    est, se = mc_motif_profit(g, [2], ms, 60_000, RngStream(21))
    assert abs(est - exact) <= 3 * max(se, 1e-12)
