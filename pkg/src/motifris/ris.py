"""Reverse-reachable sampling core: collection sizing, generation, greedy coverage."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .graph import Graph
from .rng import RngStream

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RRSample:
    """One sampled reverse-reachable set: every member reaches the root."""

    root: int
    members: frozenset[int]


class _SampleView(Sequence):
    def __init__(self, coll: "RRCollection"):
        self._coll = coll

    def __len__(self) -> int:
        return self._coll.theta

    def __getitem__(self, i: int) -> RRSample:
        return self._coll.sample(i)


class RRCollection:
    """θ reverse-reachable samples in flat CSR storage plus a node→samples index.

    `members_flat[offsets[s]:offsets[s+1]]` holds sample s (root first).
    The inverted index is exact: node v appears in sample s iff s is listed
    under v.
    """

    def __init__(
        self,
        members_flat: np.ndarray,
        offsets: np.ndarray,
        roots: np.ndarray,
        n: int,
        kpt: float = float("nan"),
    ):
        if offsets.shape[0] - 1 != roots.shape[0]:
            raise ValueError("offsets and roots disagree on sample count")
        self.members_flat = members_flat
        self.offsets = offsets
        self.roots = roots
        self.n = n
        self.kpt = kpt

        order = np.argsort(members_flat, kind="stable")
        sample_of_entry = np.repeat(
            np.arange(self.theta, dtype=np.int64), np.diff(offsets)
        )
        self._inv_samples = sample_of_entry[order]
        counts = np.bincount(members_flat, minlength=n)
        self._inv_offsets = np.concatenate(([0], np.cumsum(counts)))

    @property
    def theta(self) -> int:
        return self.roots.shape[0]

    @property
    def samples(self) -> Sequence[RRSample]:
        return _SampleView(self)

    def __len__(self) -> int:
        return self.theta

    def sample(self, i: int) -> RRSample:
        s, e = self.offsets[i], self.offsets[i + 1]
        return RRSample(int(self.roots[i]), frozenset(self.members_flat[s:e].tolist()))

    def samples_containing(self, v: int) -> np.ndarray:
        s, e = self._inv_offsets[v], self._inv_offsets[v + 1]
        return self._inv_samples[s:e]

    def coverage_counts(self) -> np.ndarray:
        """Per-node count of samples containing the node."""
        return np.bincount(self.members_flat, minlength=self.n).astype(np.int64)


@dataclass
class SeedSelection:
    """Result of a budgeted selection: picked order, spend, and leftovers."""

    seeds: list[int]
    total_cost: float
    remaining_budget: float


def importance_distribution(g: Graph) -> np.ndarray:
    """Root-sampling weights proportional to benefit/cost, uniform if all zero."""
    w = g.node_benefit / g.node_cost if g.node_cost.min() > 0 else np.ones(g.n)
    total = w.sum()
    if total <= 0:
        return np.full(g.n, 1.0 / g.n)
    return w / total


def select_k_max(g: Graph, budget: float) -> int:
    """Largest seed count the budget admits: floor(budget / min cost).

    Clamped to [1, n]: downstream sizing needs k >= 1, and more seeds than
    nodes is meaningless.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    if g.node_cost.min() <= 0:
        raise ValueError("node costs must be assigned and positive")
    k = int(budget // float(g.node_cost.min()))
    if k < 1:
        log.warning("budget %.4g affords no node (min cost %.4g); using k=1", budget, g.node_cost.min())
        return 1
    return min(k, g.n)


def kpt_sample_value(rr_size: int, m: int, k: int) -> float:
    """Single-sample contribution 1 - (1 - |RR|/m)^k, ratio clamped into [0, 1].

    The clamp guards sparse graphs where a sample can hold more nodes than
    the graph has edges.
    """
    ratio = min(rr_size / m, 1.0)
    return 1.0 - (1.0 - ratio) ** k


def default_round_samples(n: int, i: int, ell: float) -> int:
    """Sample budget for sizing round i; doubles per round."""
    lg = math.log2(n)
    return math.ceil((6 * ell * math.log(n) + 6 * math.log(lg)) * 2**i)


def estimate_kpt(
    g: Graph,
    k: int,
    rng: RngStream,
    ell: float = 1.0,
    size_mode: str = "members",
    round_schedule=None,
) -> float:
    """Lower-bound estimate of the best achievable spread for k seeds.

    Runs rounds i = 1 .. floor(log2 n) - 1. Each round draws its sample
    count of roots (by the benefit/cost importance distribution), builds one
    reverse-reachable set per root, and averages the per-sample values
    1 - (1 - |RR|/m)^k. The first round whose average exceeds 1/2^i returns
    n * sum / (2 * c_i); if none does, the floor value 1 is returned.

    `size_mode` "members" counts sample nodes; "width" counts the in-edges
    of sample nodes (never exceeds m, so it needs no clamp).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if size_mode not in ("members", "width"):
        raise ValueError("size_mode must be 'members' or 'width'")
    n, m = g.n, g.m
    if n <= 2 or m == 0:
        return 1.0
    schedule = round_schedule or default_round_samples
    pv = importance_distribution(g)
    indeg = g.in_degrees
    rounds = int(math.floor(math.log2(n)))  # iterate i = 1 .. rounds-1
    for i in range(1, rounds):
        c_i = int(schedule(n, i, ell))
        stream = rng.child(i)
        roots = stream.generator().choice(n, size=c_i, p=pv).astype(np.int32)
        flat, offsets = _kernels.rr_samples(
            *g.reverse_view(), roots, stream.child(1).kernel_seed()
        )
        if size_mode == "members":
            sizes = np.diff(offsets).astype(np.float64)
        else:
            width = np.add.reduceat(indeg[flat].astype(np.float64), offsets[:-1])
            sizes = np.where(np.diff(offsets) > 0, width, 0.0)
        ratios = np.minimum(sizes / m, 1.0)
        values = 1.0 - (1.0 - ratios) ** k
        if values.mean() > 1.0 / 2**i:
            return float(n * values.sum() / (2.0 * c_i))
    return 1.0


def theta_requirement(
    kpt: float, n: int, k: int, epsilon: float = 0.3, ell: float = 1.0
) -> float:
    """Required sample count before ceiling: (8+2ε)·n·(ℓ·ln n + ln C(n,k) + ln 2)/(KPT·ε²)."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if kpt < 1:
        raise ValueError("kpt must be >= 1")
    if k > n:
        raise ValueError("k cannot exceed the node count")
    if k < 1 or n < 1:
        raise ValueError("n and k must be >= 1")
    log_choose = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    numerator = (8 + 2 * epsilon) * n * (ell * math.log(n) + log_choose + math.log(2))
    return numerator / (kpt * epsilon**2)


def compute_theta(kpt: float, n: int, k: int, epsilon: float = 0.3, ell: float = 1.0) -> int:
    """Number of reverse-reachable samples to draw (at least 1)."""
    return max(1, math.ceil(theta_requirement(kpt, n, k, epsilon, ell)))


def generate_rr_sets(
    g: Graph,
    theta: int,
    rng: RngStream,
    root_distribution: str = "importance",
    kpt: float = float("nan"),
) -> RRCollection:
    """Draw θ reverse-reachable samples and index them.

    Roots come from the benefit/cost importance distribution by default;
    "uniform" draws them equiprobably. Each sample's members are exactly the
    nodes that reached the root in its probabilistic reverse BFS.
    """
    if theta < 1:
        raise ValueError("theta must be >= 1")
    if not g.probabilities_assigned:
        raise ValueError("graph has unassigned edge probabilities")
    gen = rng.generator()
    if root_distribution == "importance":
        roots = gen.choice(g.n, size=theta, p=importance_distribution(g)).astype(np.int32)
    elif root_distribution == "uniform":
        roots = gen.integers(0, g.n, size=theta).astype(np.int32)
    else:
        raise ValueError("root_distribution must be 'importance' or 'uniform'")
    flat, offsets = _kernels.rr_samples(*g.reverse_view(), roots, rng.child(1).kernel_seed())
    return RRCollection(flat, offsets, roots, g.n, kpt=kpt)


def rr_membership_frequencies(g: Graph, root: int, count: int, rng: RngStream) -> np.ndarray:
    """Per-node frequency of appearing in `count` samples rooted at `root`.

    By reverse-reachability duality this estimates, for each node u, the
    probability that a cascade seeded at u activates `root`.
    """
    if not 0 <= root < g.n:
        raise ValueError("root out of range")
    if count < 1:
        raise ValueError("count must be >= 1")
    roots = np.full(count, root, dtype=np.int32)
    flat, _ = _kernels.rr_samples(*g.reverse_view(), roots, rng.kernel_seed())
    return np.bincount(flat, minlength=g.n) / count


def _concat_ranges(starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Flat index array covering [starts[i], ends[i]) for every i."""
    lens = ends - starts
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    shifts = np.repeat(starts - (np.cumsum(lens) - lens), lens)
    return np.arange(total, dtype=np.int64) + shifts


def greedy_seed_selection(rr: RRCollection, g: Graph, budget: float) -> SeedSelection:
    """Budgeted greedy coverage over the sample collection.

    Repeatedly picks the affordable node maximizing (uncovered samples
    containing it) / cost, ties broken by lower id, then marks its samples
    as covered. Nodes covering nothing are never picked; selection stops
    when no affordable node with positive coverage remains.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    if g.node_cost.min() <= 0:
        raise ValueError("node costs must be assigned and positive")
    cost = g.node_cost
    coverage = rr.coverage_counts().astype(np.float64)
    marked = np.zeros(rr.theta, dtype=bool)
    chosen: list[int] = []
    remaining = float(budget)
    while True:
        score = coverage / cost
        score[coverage == 0] = -np.inf
        score[cost > remaining] = -np.inf
        if chosen:
            score[np.asarray(chosen)] = -np.inf
        best = int(np.argmax(score))
        if not np.isfinite(score[best]):
            break
        chosen.append(best)
        remaining -= float(cost[best])
        hit = rr.samples_containing(best)
        fresh = hit[~marked[hit]]
        if fresh.size:
            marked[fresh] = True
            entries = _concat_ranges(rr.offsets[fresh], rr.offsets[fresh + 1])
            coverage -= np.bincount(rr.members_flat[entries], minlength=rr.n)
    # budget - remaining keeps total <= budget exactly, even under fp rounding
    total = float(budget) - remaining
    return SeedSelection(seeds=chosen, total_cost=total, remaining_budget=remaining)
