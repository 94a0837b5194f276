"""Independent-cascade simulation and an exact live-edge profit oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .graph import Graph
from .rng import RngStream

# 2^m live graphs are enumerated; beyond this the oracle refuses.
ORACLE_EDGE_LIMIT = 24


@dataclass(frozen=True)
class ActivationOutcome:
    """Final activation set of one cascade, with the seeds that started it."""

    activated: frozenset[int]
    seed_set: frozenset[int]


class CascadeOutcomes(Sequence):
    """T cascade results stored as a (T, n) boolean activation matrix.

    Acts as a sequence of ActivationOutcome for callers that want sets;
    the matrix form is what spread and motif-profit evaluation consume.
    """

    def __init__(self, matrix: np.ndarray, seed_set: Iterable[int]):
        self.matrix = matrix
        self.seed_set = frozenset(int(s) for s in seed_set)

    def __len__(self) -> int:
        return self.matrix.shape[0]

    def __getitem__(self, i: int) -> ActivationOutcome:
        row = self.matrix[i]
        return ActivationOutcome(frozenset(np.flatnonzero(row).tolist()), self.seed_set)

    def spreads(self) -> np.ndarray:
        return self.matrix.sum(axis=1)


def _seed_array(g: Graph, seeds: Iterable[int]) -> np.ndarray:
    arr = np.asarray(sorted({int(s) for s in seeds}), dtype=np.int64)
    if arr.size and (arr[0] < 0 or arr[-1] >= g.n):
        raise ValueError("seed id out of range")
    return arr


def _require_probabilities(g: Graph):
    if not g.probabilities_assigned:
        raise ValueError("graph has unassigned edge probabilities; apply a probability model first")


def simulate_ic(g: Graph, seeds: Iterable[int], rng: RngStream) -> ActivationOutcome:
    """Run one cascade; empty seed sets are valid and activate nothing."""
    _require_probabilities(g)
    arr = _seed_array(g, seeds)
    mat = _kernels.ic_trials(*g.forward_view(), arr, 1, rng.kernel_seed())
    return ActivationOutcome(frozenset(np.flatnonzero(mat[0]).tolist()), frozenset(arr.tolist()))


def estimate_sigma(
    g: Graph, seeds: Iterable[int], trials: int, rng: RngStream
) -> tuple[float, CascadeOutcomes]:
    """Monte Carlo expected spread over `trials` cascades.

    Returns (mean activated count, outcomes); the outcomes are retained so
    downstream motif scoring can reuse the very same simulations.
    """
    _require_probabilities(g)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    arr = _seed_array(g, seeds)
    mat = _kernels.ic_trials(*g.forward_view(), arr, trials, rng.kernel_seed())
    outcomes = CascadeOutcomes(mat, arr.tolist())
    return float(mat.sum(axis=1).mean()), outcomes


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def reachable_in_live_graph(g: Graph, seeds: Iterable[int], live: np.ndarray) -> frozenset[int]:
    """Nodes reachable from `seeds` using only edges flagged in `live`.

    `live` is a boolean array over canonical edge order. This is the
    deterministic reachability that one coin-flip realization induces.
    """
    live = np.asarray(live, dtype=bool)
    if live.shape != (g.m,):
        raise ValueError(f"expected {g.m} live-edge flags")
    src = g.edge_sources()
    adj: list[int] = [0] * g.n
    for j in np.flatnonzero(live):
        adj[src[j]] |= 1 << int(g.out_indices[j])
    reach = 0
    for s in _seed_array(g, seeds):
        reach |= 1 << int(s)
    frontier = reach
    while frontier:
        grown = 0
        for u in _iter_bits(frontier):
            grown |= adj[u]
        frontier = grown & ~reach
        reach |= frontier
    return frozenset(_iter_bits(reach))


def _live_weight(mask: int, probs: np.ndarray) -> float:
    w = 1.0
    for j in range(probs.shape[0]):
        if mask >> j & 1:
            w *= probs[j]
        else:
            w *= 1.0 - probs[j]
    return w


def _enumerate_reachability(g: Graph, seeds: Iterable[int]):
    """Yield (weight, reached_bitmask) over all 2^m live-edge realizations."""
    src = g.edge_sources()
    dst = g.out_indices
    probs = g.out_probs
    seed_mask = 0
    for s in _seed_array(g, seeds):
        seed_mask |= 1 << int(s)
    for mask in range(1 << g.m):
        adj = [0] * g.n
        for j in range(g.m):
            if mask >> j & 1:
                adj[src[j]] |= 1 << int(dst[j])
        reach = seed_mask
        frontier = reach
        while frontier:
            grown = 0
            for u in _iter_bits(frontier):
                grown |= adj[u]
            frontier = grown & ~reach
            reach |= frontier
        yield _live_weight(mask, probs), reach


def exact_activation_probabilities(g: Graph, seeds: Iterable[int]) -> np.ndarray:
    """Per-node activation probability from `seeds`, by full live-graph enumeration."""
    _require_probabilities(g)
    _check_oracle_guard(g)
    out = np.zeros(g.n)
    for w, reach in _enumerate_reachability(g, seeds):
        for v in _iter_bits(reach):
            out[v] += w
    return out


def _check_oracle_guard(g: Graph):
    if g.m > ORACLE_EDGE_LIMIT:
        raise ValueError(
            f"exact enumeration needs 2^m live graphs; m={g.m} exceeds the "
            f"limit of {ORACLE_EDGE_LIMIT} edges"
        )


def exact_profit_oracle(g: Graph, seeds, motifs, benefit_mode: str | None = None) -> float:
    """Exact expected motif profit of `seeds` by enumerating all live graphs.

    Each of the 2^m edge subsets is weighted by its realization probability;
    the benefit of motifs whose activation threshold is met is accumulated
    (motif-level benefits, or the node-benefit sum over the union of active
    motifs' vertices) and the seed cost is subtracted. Exact up to float
    accumulation.
    """
    from .motifs import MOTIF_LEVEL, MotifSet

    _require_probabilities(g)
    _check_oracle_guard(g)
    if isinstance(motifs, MotifSet):
        mode = benefit_mode or motifs.benefit_mode
        motif_list = list(motifs)
    else:
        mode = benefit_mode or MOTIF_LEVEL
        motif_list = list(motifs)

    masks = []
    for mo in motif_list:
        vm = 0
        for v in mo.vertices:
            if not (0 <= v < g.n):
                raise ValueError(f"motif vertex {v} not in graph")
            vm |= 1 << v
        masks.append((vm, mo.threshold, mo.benefit, mo.vertices))

    seed_list = _seed_array(g, seeds)
    expected_benefit = 0.0
    motif_level = mode == MOTIF_LEVEL
    for w, reach in _enumerate_reachability(g, seed_list):
        if motif_level:
            gain = 0.0
            for vm, tau, ben, _ in masks:
                if (reach & vm).bit_count() >= tau:
                    gain += ben
        else:
            union = 0
            for vm, tau, _, _ in masks:
                if (reach & vm).bit_count() >= tau:
                    union |= vm
            gain = float(sum(g.node_benefit[v] for v in _iter_bits(union)))
        expected_benefit += w * gain
    return expected_benefit - float(g.node_cost[seed_list].sum())
