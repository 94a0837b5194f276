"""Comparison seed-selection strategies under the same budget semantics."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .diffusion import estimate_sigma, exact_profit_oracle
from .graph import Graph
from .motifs import MotifSet, motif_profit
from .ris import SeedSelection
from .rng import RngStream

RANDOM = "Random"
HIGH_DEGREE = "HighDegree"
CELF = "CELF"
SIMPLE_GREEDY = "SimpleGreedy"


@dataclass(frozen=True)
class Strategy:
    """Configuration for one baseline run."""

    kind: str
    mc_trials: int = 100  # per-candidate simulations for the two greedy strategies
    rng_seed: int = 0

    def __post_init__(self):
        if self.kind in (CELF, SIMPLE_GREEDY) and self.mc_trials < 1:
            raise ValueError("mc_trials must be >= 1 for simulation-based strategies")


class MonteCarloProfitObjective:
    """Motif-profit estimator used as the greedy baselines' objective.

    Calling it with (seeds, rng, trials) runs fresh cascades and scores them;
    the passed stream enables common random numbers across the candidates of
    one greedy round.
    """

    def __init__(self, g: Graph, motifs: MotifSet, threshold: int | None = None):
        self.g = g
        self.motifs = motifs
        self.threshold = threshold

    def __call__(self, seeds: Sequence[int], rng: RngStream, trials: int) -> float:
        if not seeds:
            return 0.0
        _, outcomes = estimate_sigma(self.g, seeds, trials, rng)
        seed_cost = float(self.g.node_cost[np.asarray(list(seeds), dtype=np.int64)].sum())
        return motif_profit(
            outcomes, self.motifs, self.threshold, seed_cost, self.g.node_benefit
        )


class ExactProfitObjective:
    """Exact live-edge profit; only valid under the enumeration guard."""

    def __init__(self, g: Graph, motifs: MotifSet, threshold: int | None = None):
        self.g = g
        self.motifs = motifs
        if threshold is not None:
            clamped = [
                m.__class__(m.id, m.vertices, m.effective_threshold(threshold), m.benefit)
                for m in motifs
            ]
            self.motifs = MotifSet(clamped, benefit_mode=motifs.benefit_mode)

    def __call__(self, seeds: Sequence[int], rng: RngStream, trials: int) -> float:
        return exact_profit_oracle(self.g, seeds, self.motifs)


def random_seeds(g: Graph, budget: float, rng: RngStream) -> SeedSelection:
    """Scan a uniformly random node order, taking every node still affordable."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    order = rng.generator().permutation(g.n)
    chosen: list[int] = []
    remaining = float(budget)
    for v in order:
        c = float(g.node_cost[v])
        if c <= remaining:
            chosen.append(int(v))
            remaining -= c
    total = float(budget) - remaining
    return SeedSelection(seeds=chosen, total_cost=total, remaining_budget=remaining)


def high_degree_seeds(g: Graph, budget: float, degree: str = "out") -> SeedSelection:
    """Take nodes by descending degree (ties to lower id) while affordable."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    if degree == "out":
        deg = g.out_degrees
    elif degree == "total":
        deg = g.out_degrees + g.in_degrees
    else:
        raise ValueError("degree must be 'out' or 'total'")
    order = np.lexsort((np.arange(g.n), -deg))
    chosen: list[int] = []
    remaining = float(budget)
    for v in order:
        c = float(g.node_cost[v])
        if c <= remaining:
            chosen.append(int(v))
            remaining -= c
    total = float(budget) - remaining
    return SeedSelection(seeds=chosen, total_cost=total, remaining_budget=remaining)


def simple_greedy_seeds(
    g: Graph, budget: float, objective, trials: int, rng: RngStream
) -> SeedSelection:
    """Plain greedy on cost-normalized marginal profit gain.

    Every round re-evaluates each affordable candidate with fresh estimates,
    all candidates of a round sharing one random stream so their comparison
    sees common noise. Stops when nothing affordable has positive gain.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    chosen: list[int] = []
    remaining = float(budget)
    round_no = 0
    while True:
        stream = rng.child(round_no)
        base = objective(chosen, stream, trials)
        best_node, best_score = -1, 0.0
        for v in range(g.n):
            if v in chosen:
                continue
            c = float(g.node_cost[v])
            if c > remaining:
                continue
            gain = objective(chosen + [v], stream, trials) - base
            score = gain / c
            if score > best_score:
                best_node, best_score = v, score
        if best_node < 0:
            break
        chosen.append(best_node)
        remaining -= float(g.node_cost[best_node])
        round_no += 1
    total = float(budget) - remaining
    return SeedSelection(seeds=chosen, total_cost=total, remaining_budget=remaining)


def celf_seeds(
    g: Graph, budget: float, objective, trials: int, rng: RngStream
) -> SeedSelection:
    """Lazy greedy: stale cost-normalized gains kept in a max-heap.

    A popped node whose gain is stale is re-evaluated against the current
    selection and pushed back; a fresh top is selected if its gain is
    positive and affordable. Unaffordable nodes are dropped for good, since
    the remaining budget only shrinks.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    chosen: list[int] = []
    remaining = float(budget)
    round_no = 0
    stream = rng.child(round_no)
    base = objective(chosen, stream, trials)
    heap: list[tuple[float, int, int]] = []
    for v in range(g.n):
        c = float(g.node_cost[v])
        if c > remaining:
            continue
        gain = objective([v], stream, trials) - base
        heap.append((-gain / c, v, round_no))
    heapq.heapify(heap)
    while heap:
        neg_score, v, evaluated_at = heapq.heappop(heap)
        c = float(g.node_cost[v])
        if c > remaining:
            continue
        if evaluated_at == round_no:
            if -neg_score <= 0:
                break
            chosen.append(v)
            remaining -= c
            round_no += 1
            stream = rng.child(round_no)
            base = objective(chosen, stream, trials)
        else:
            gain = objective(chosen + [v], stream, trials) - base
            heapq.heappush(heap, (-gain / c, v, round_no))
    total = float(budget) - remaining
    return SeedSelection(seeds=chosen, total_cost=total, remaining_budget=remaining)
