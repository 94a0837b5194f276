"""Motif sets: file loading, random sampling, threshold activation, profit scoring."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graph import EdgeListParseError, Graph
from .rng import RngStream

log = logging.getLogger(__name__)

MOTIF_LEVEL = "motif"  # benefit attached to each motif as a whole
NODE_UNION = "node-union"  # node benefits summed over the union of active motifs

_MODE_ALIASES = {
    "motif": MOTIF_LEVEL,
    "motif-level": MOTIF_LEVEL,
    "node-union": NODE_UNION,
    "node_union": NODE_UNION,
    "union": NODE_UNION,
}


def normalize_benefit_mode(mode: str) -> str:
    canon = _MODE_ALIASES.get(mode.lower())
    if canon is None:
        raise ValueError(f"unknown benefit mode {mode!r}")
    return canon


@dataclass(frozen=True)
class Motif:
    """A small node group that pays off once `threshold` of its nodes are influenced."""

    id: int
    vertices: frozenset[int]
    threshold: int
    benefit: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(int(v) for v in self.vertices))
        if not self.vertices:
            raise ValueError("motif needs at least one vertex")
        if not 1 <= self.threshold <= len(self.vertices):
            raise ValueError(
                f"threshold {self.threshold} outside [1, {len(self.vertices)}]"
            )
        if self.benefit < 0:
            raise ValueError("motif benefit must be non-negative")

    def effective_threshold(self, override: int | None) -> int:
        """Uniform override clamped to the motif size; None keeps the motif's own."""
        if override is None:
            return self.threshold
        if override < 1:
            raise ValueError("threshold override must be >= 1")
        return min(override, len(self.vertices))


@dataclass
class MotifSet:
    """A list of motifs plus the rule for turning activations into benefit.

    Treat as immutable once built: scoring caches flat vertex arrays on
    first use.
    """

    motifs: list[Motif]
    benefit_mode: str = NODE_UNION
    truncated: bool = False  # sampler could not reach the requested count

    def __post_init__(self):
        self.benefit_mode = normalize_benefit_mode(self.benefit_mode)
        self._scoring = None

    def __len__(self) -> int:
        return len(self.motifs)

    def __iter__(self):
        return iter(self.motifs)

    def __getitem__(self, i: int) -> Motif:
        return self.motifs[i]

    def scoring_arrays(self, n: int):
        """(vs_flat, starts, sizes, taus, benefits, membership) for vectorized scoring.

        membership is an (len(motifs), n) float32 0/1 matrix used to take
        per-trial unions of active motifs' vertices with one matmul.
        """
        if self._scoring is None or self._scoring[-1].shape[1] != n:
            vs_lists = [np.fromiter(sorted(m.vertices), dtype=np.int64) for m in self.motifs]
            sizes = np.asarray([len(v) for v in vs_lists], dtype=np.int64)
            starts = np.concatenate(([0], np.cumsum(sizes)[:-1])).astype(np.int64)
            vs_flat = (
                np.concatenate(vs_lists) if vs_lists else np.empty(0, dtype=np.int64)
            )
            taus = np.asarray([m.threshold for m in self.motifs], dtype=np.int64)
            benefits = np.asarray([m.benefit for m in self.motifs], dtype=np.float64)
            membership = np.zeros((len(self.motifs), n), dtype=np.float32)
            for j, vs in enumerate(vs_lists):
                membership[j, vs] = 1.0
            self._scoring = (vs_flat, starts, sizes, taus, benefits, membership)
        return self._scoring


def motif_indicator(motif: Motif, activated: Iterable[int]) -> bool:
    """True iff at least `threshold` of the motif's vertices are activated."""
    activated = activated if isinstance(activated, (set, frozenset)) else set(activated)
    return len(motif.vertices & activated) >= motif.threshold


def _is_connected(g: Graph, vertices: Sequence[int]) -> bool:
    """Connectivity of the vertex set in the underlying undirected graph."""
    vs = set(int(v) for v in vertices)
    if len(vs) <= 1:
        return True
    start = next(iter(vs))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.undirected_neighbors(u):
            w = int(w)
            if w in vs and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vs


def load_motifs(path, g: Graph, benefit_mode: str = NODE_UNION) -> MotifSet:
    """Parse a motif file: one "threshold benefit v1 v2 ... vk" line per motif.

    Vertices are original node labels and are mapped through the graph's
    id mapping. '#' lines are comments. Rejected with the line number:
    unknown labels, duplicate vertices, fewer than two vertices, thresholds
    outside [1, k], negative benefits, and disconnected vertex sets.
    """
    motifs: list[Motif] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) < 3:
                raise EdgeListParseError(path, line_no, "expected 'threshold benefit v1 ...'")
            try:
                tau = int(tokens[0])
                benefit = float(tokens[1])
            except ValueError as exc:
                raise EdgeListParseError(path, line_no, f"bad threshold/benefit: {exc}") from None
            ids = []
            for lab in tokens[2:]:
                node = g.label_to_id.get(lab)
                if node is None:
                    raise EdgeListParseError(path, line_no, f"unknown node label {lab!r}")
                ids.append(node)
            if len(set(ids)) != len(ids):
                raise EdgeListParseError(path, line_no, "duplicate vertex in motif")
            if len(ids) < 2:
                raise EdgeListParseError(path, line_no, "motif needs at least two vertices")
            if not 1 <= tau <= len(ids):
                raise EdgeListParseError(
                    path, line_no, f"threshold {tau} outside [1, {len(ids)}]"
                )
            if benefit < 0:
                raise EdgeListParseError(path, line_no, "benefit must be non-negative")
            if not _is_connected(g, ids):
                raise EdgeListParseError(path, line_no, "motif vertices are not connected")
            motifs.append(Motif(id=len(motifs), vertices=frozenset(ids), threshold=tau, benefit=benefit))
    return MotifSet(motifs, benefit_mode=benefit_mode)


def sample_motifs(
    g: Graph,
    size: int,
    count: int,
    rng: RngStream,
    benefit_mode: str = NODE_UNION,
    threshold: int | None = None,
    max_attempts: int | None = None,
) -> MotifSet:
    """Sample `count` distinct connected vertex sets of the given size.

    Each attempt seeds from a uniformly random edge and grows by uniformly
    random neighbors (undirected sense) until `size` nodes are reached.
    If the retry budget runs out before `count` distinct motifs are found,
    the shorter set is returned with its `truncated` flag raised.

    Motif benefits default to the sum of member-node benefits; thresholds
    default to the motif size (the whole group must be influenced).
    """
    if size < 2:
        raise ValueError("motif size must be >= 2")
    if count < 1:
        raise ValueError("motif count must be >= 1")
    if g.m == 0:
        raise ValueError("graph has no edges to seed motifs from")
    gen = rng.generator()
    src = g.edge_sources()
    budget = max_attempts if max_attempts is not None else max(100 * count, 1000)
    seen: set[frozenset[int]] = set()
    motifs: list[Motif] = []
    attempts = 0
    while len(motifs) < count and attempts < budget:
        attempts += 1
        j = int(gen.integers(g.m))
        group = {int(src[j]), int(g.out_indices[j])}
        while len(group) < size:
            candidates = sorted(
                {int(w) for u in group for w in g.undirected_neighbors(u)} - group
            )
            if not candidates:
                break
            group.add(candidates[int(gen.integers(len(candidates)))])
        if len(group) != size:
            continue
        key = frozenset(group)
        if key in seen:
            continue
        seen.add(key)
        tau = min(threshold, size) if threshold is not None else size
        benefit = float(g.node_benefit[sorted(group)].sum())
        motifs.append(Motif(id=len(motifs), vertices=key, threshold=tau, benefit=benefit))
    truncated = len(motifs) < count
    if truncated:
        log.warning(
            "motif sampling exhausted %d attempts: %d/%d distinct size-%d motifs",
            budget, len(motifs), count, size,
        )
    return MotifSet(motifs, benefit_mode=benefit_mode, truncated=truncated)


def motif_profit_samples(
    outcomes,
    motifs: MotifSet,
    threshold: int | None = None,
    seed_cost: float = 0.0,
    node_benefit: np.ndarray | None = None,
) -> np.ndarray:
    """Per-outcome profit values (benefit of activated motifs minus seed cost).

    `threshold` uniformly overrides per-motif thresholds, clamped per motif
    to its size. Node-union mode sums node benefits over the union of active
    motifs' vertices, so shared nodes count once; it requires `node_benefit`.
    """
    mode = motifs.benefit_mode
    if mode == NODE_UNION and node_benefit is None:
        raise ValueError("node-union scoring needs the node benefit array")

    matrix = getattr(outcomes, "matrix", None)
    if matrix is not None:
        trials = matrix.shape[0]
        if len(motifs) == 0:
            return np.full(trials, -seed_cost)
        vs_flat, starts, sizes, taus, benefits, membership = motifs.scoring_arrays(
            matrix.shape[1]
        )
        if threshold is not None:
            if threshold < 1:
                raise ValueError("threshold override must be >= 1")
            taus = np.minimum(threshold, sizes)
        overlap = np.add.reduceat(
            matrix[:, vs_flat].astype(np.int64), starts, axis=1
        )
        active = overlap >= taus[None, :]
        if mode == MOTIF_LEVEL:
            benefit = active @ benefits
        else:
            union = (active.astype(np.float32) @ membership) > 0
            benefit = union @ np.asarray(node_benefit, dtype=np.float64)
        return benefit - seed_cost

    values = []
    for outcome in outcomes:
        activated = outcome.activated
        if mode == MOTIF_LEVEL:
            gain = sum(
                mo.benefit
                for mo in motifs
                if len(mo.vertices & activated) >= mo.effective_threshold(threshold)
            )
        else:
            union: set[int] = set()
            for mo in motifs:
                if len(mo.vertices & activated) >= mo.effective_threshold(threshold):
                    union |= mo.vertices
            gain = float(sum(node_benefit[v] for v in union))
        values.append(gain - seed_cost)
    return np.asarray(values, dtype=np.float64)


def motif_profit(
    outcomes,
    motifs: MotifSet,
    threshold: int | None = None,
    seed_cost: float = 0.0,
    node_benefit: np.ndarray | None = None,
) -> float:
    """Average motif profit over the given cascade outcomes."""
    samples = motif_profit_samples(outcomes, motifs, threshold, seed_cost, node_benefit)
    if samples.size == 0:
        raise ValueError("outcomes must be nonempty")
    return float(samples.mean())
