"""Directed influence graphs: edge-list loading, probability models, costs and benefits.

Graphs are stored in CSR form (forward and reverse adjacency over the same
edge set) with contiguous 0-based node ids; original labels are kept for
output. A loaded graph carries zero-filled probabilities, costs and benefits
until the respective models are applied.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Sequence

import numpy as np

from .rng import RngStream

TRIVALENCY = "trivalency"
WEIGHTED_CASCADE = "weighted_cascade"

TRIVALENCY_VALUES = (0.1, 0.01, 0.001)

_PROB_ALIASES = {
    "trivalency": TRIVALENCY,
    "tv": TRIVALENCY,
    "wc": WEIGHTED_CASCADE,
    "weighted_cascade": WEIGHTED_CASCADE,
    "weighted-cascade": WEIGHTED_CASCADE,
}


class EdgeListParseError(ValueError):
    """Malformed input line; message carries the offending line number."""

    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class ProbabilityModel:
    """Edge-probability assignment rule.

    ``trivalency`` draws each edge's probability independently and uniformly
    from {0.1, 0.01, 0.001}, reproducibly from ``rng_seed``.
    ``weighted_cascade`` deterministically assigns edge (u, v) the value
    1/deg_in(v).
    """

    kind: str
    rng_seed: int = 0

    def __post_init__(self):
        kind = _PROB_ALIASES.get(self.kind.lower())
        if kind is None:
            raise ValueError(f"unknown probability model {self.kind!r}")
        object.__setattr__(self, "kind", kind)


@dataclass(frozen=True)
class CostBenefitModel:
    """Degree-proportional cost with scaled benefit.

    C(v) = base_cost + cost_slope * deg_out(v), b(v) = benefit_scale * C(v).
    base_cost must be positive so every node has a strictly positive cost.
    """

    base_cost: float = 1.0
    cost_slope: float = 1.0
    benefit_scale: float = 1.0

    def __post_init__(self):
        if self.base_cost <= 0:
            raise ValueError("base_cost must be positive")
        if self.cost_slope < 0 or self.benefit_scale < 0:
            raise ValueError("cost_slope and benefit_scale must be non-negative")


def _build_run_view(indptr, indices, probs, n):
    """Per-node edges resorted by descending probability, with equal-p runs marked.

    Returns (sorted_indices, run_ends, run_probs, runs_indptr). The sampling
    kernels skip over a run's failures geometrically instead of flipping one
    coin per edge, which needs edges of equal probability to be contiguous.
    """
    group = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    order = np.lexsort((-probs, group))
    sorted_idx = indices[order].astype(np.int32)
    sorted_p = probs[order]
    m = sorted_p.shape[0]
    if m == 0:
        return (
            sorted_idx,
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.float64),
            np.zeros(n + 1, dtype=np.int64),
        )
    sorted_group = group[order]
    new_run = np.empty(m, dtype=bool)
    new_run[0] = True
    new_run[1:] = (sorted_group[1:] != sorted_group[:-1]) | (sorted_p[1:] != sorted_p[:-1])
    starts = np.flatnonzero(new_run)
    run_ends = np.concatenate((starts[1:], [m])).astype(np.int64)
    run_probs = sorted_p[starts]
    runs_per_node = np.bincount(sorted_group[starts], minlength=n)
    runs_indptr = np.concatenate(([0], np.cumsum(runs_per_node))).astype(np.int64)
    return sorted_idx, run_ends, run_probs, runs_indptr


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable directed graph with per-edge probabilities and node economics.

    ``out_indices``/``out_probs`` hold edges in canonical (src, dst) order;
    ``in_*`` mirror the same edge set grouped by target. ``_in_perm`` maps
    each reverse slot to its canonical edge index so both views stay
    consistent when probabilities are (re)assigned.
    """

    n: int
    m: int
    out_indptr: np.ndarray
    out_indices: np.ndarray
    out_probs: np.ndarray
    in_indptr: np.ndarray
    in_indices: np.ndarray
    in_probs: np.ndarray
    node_cost: np.ndarray
    node_benefit: np.ndarray
    labels: tuple[str, ...]
    label_to_id: dict[str, int]
    _in_perm: np.ndarray

    @property
    def out_degrees(self) -> np.ndarray:
        return np.diff(self.out_indptr)

    @property
    def in_degrees(self) -> np.ndarray:
        return np.diff(self.in_indptr)

    @property
    def probabilities_assigned(self) -> bool:
        return self.m == 0 or bool((self.out_probs > 0).all())

    def edge_sources(self) -> np.ndarray:
        """Canonical per-edge source array (parallel to out_indices)."""
        return np.repeat(np.arange(self.n, dtype=np.int32), self.out_degrees)

    def out_edges(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        s, e = self.out_indptr[u], self.out_indptr[u + 1]
        return self.out_indices[s:e], self.out_probs[s:e]

    def in_edges(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        s, e = self.in_indptr[v], self.in_indptr[v + 1]
        return self.in_indices[s:e], self.in_probs[s:e]

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Yield (src, dst, probability) in canonical order."""
        src = self.edge_sources()
        for j in range(self.m):
            yield int(src[j]), int(self.out_indices[j]), float(self.out_probs[j])

    def undirected_neighbors(self, u: int) -> np.ndarray:
        """Distinct neighbors of u ignoring edge direction, ascending."""
        return np.unique(np.concatenate([self.out_edges(u)[0], self.in_edges(u)[0]]))

    def with_probabilities(self, edge_probs: np.ndarray) -> "Graph":
        """New graph with per-canonical-edge probabilities scattered to both views."""
        p = np.asarray(edge_probs, dtype=np.float64)
        if p.shape != (self.m,):
            raise ValueError(f"expected {self.m} edge probabilities")
        if self.m and (p.min() <= 0 or p.max() > 1):
            raise ValueError("edge probabilities must lie in (0, 1]")
        return replace(self, out_probs=p, in_probs=p[self._in_perm])

    def forward_view(self):
        """Run-structured out-adjacency for the cascade kernel (cached)."""
        view = getattr(self, "_forward_runs", None)
        if view is None:
            view = (self.out_indptr,) + _build_run_view(
                self.out_indptr, self.out_indices, self.out_probs, self.n
            )
            object.__setattr__(self, "_forward_runs", view)
        return view

    def reverse_view(self):
        """Run-structured in-adjacency for the reverse-sampling kernel (cached)."""
        view = getattr(self, "_reverse_runs", None)
        if view is None:
            view = (self.in_indptr,) + _build_run_view(
                self.in_indptr, self.in_indices, self.in_probs, self.n
            )
            object.__setattr__(self, "_reverse_runs", view)
        return view


def build_graph(
    n: int,
    edges: Iterable[tuple],
    probs: Sequence[float] | None = None,
    costs: Sequence[float] | None = None,
    benefits: Sequence[float] | None = None,
    labels: Sequence[str] | None = None,
) -> Graph:
    """Construct a Graph from an explicit edge list.

    Edges may be (u, v) or (u, v, p) tuples; a separate ``probs`` sequence
    (parallel to ``edges``) is also accepted. Self-loops and duplicate edges
    are dropped, keeping the first probability seen for a duplicate.
    """
    if n <= 0:
        raise ValueError("graph needs at least one node")
    edge_prob: dict[tuple[int, int], float] = {}
    for j, edge in enumerate(edges):
        if len(edge) == 3:
            u, v, p = edge
        else:
            u, v = edge
            p = probs[j] if probs is not None else 0.0
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v or (u, v) in edge_prob:
            continue
        edge_prob[(u, v)] = float(p)

    m = len(edge_prob)
    keys = sorted(edge_prob)
    src = np.asarray([k[0] for k in keys], dtype=np.int32)
    dst = np.asarray([k[1] for k in keys], dtype=np.int32)
    p = np.asarray([edge_prob[k] for k in keys], dtype=np.float64)

    out_indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(out_indptr, src + 1, 1)
    out_indptr = np.cumsum(out_indptr)

    in_perm = np.lexsort((src, dst)).astype(np.int64)
    in_indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(in_indptr, dst + 1, 1)
    in_indptr = np.cumsum(in_indptr)

    if labels is None:
        labels = tuple(str(i) for i in range(n))
    else:
        labels = tuple(labels)
        if len(labels) != n:
            raise ValueError("labels length must equal n")

    cost = np.zeros(n) if costs is None else np.asarray(costs, dtype=np.float64).copy()
    benefit = np.zeros(n) if benefits is None else np.asarray(benefits, dtype=np.float64).copy()

    return Graph(
        n=n,
        m=m,
        out_indptr=out_indptr,
        out_indices=dst,
        out_probs=p,
        in_indptr=in_indptr,
        in_indices=src[in_perm],
        in_probs=p[in_perm],
        node_cost=cost,
        node_benefit=benefit,
        labels=labels,
        label_to_id={lab: i for i, lab in enumerate(labels)},
        _in_perm=in_perm,
    )


def load_edge_list(path, directed: bool = True) -> Graph:
    """Load a whitespace-delimited edge list ("src dst" per line).

    Lines starting with '#' are comments; trailing columns are ignored.
    Node labels are compacted to dense 0..n-1 ids in order of first
    appearance (mapping retained). Duplicate edges and self-loops are
    dropped; undirected inputs expand each line to both directions.
    """
    label_ids: dict[str, int] = {}
    raw_edges: list[tuple[int, int]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) < 2:
                raise EdgeListParseError(path, line_no, "expected two node identifiers")
            a, b = tokens[0], tokens[1]
            for lab in (a, b):
                if lab not in label_ids:
                    label_ids[lab] = len(label_ids)
            u, v = label_ids[a], label_ids[b]
            raw_edges.append((u, v))
            if not directed:
                raw_edges.append((v, u))

    if not label_ids:
        raise ValueError(f"{path}: no nodes found (empty graph)")
    labels = tuple(sorted(label_ids, key=label_ids.get))
    return build_graph(len(labels), raw_edges, labels=labels)


def apply_probability_model(g: Graph, model: ProbabilityModel) -> Graph:
    """Assign every edge an influence probability according to ``model``."""
    if model.kind == TRIVALENCY:
        gen = RngStream(model.rng_seed).generator()
        p = gen.choice(np.asarray(TRIVALENCY_VALUES), size=g.m)
    else:
        # each edge (u, v) gets 1/deg_in(v); targets always have deg_in >= 1
        p = 1.0 / g.in_degrees[g.out_indices]
    return g.with_probabilities(p)


def apply_cost_benefit(g: Graph, model: CostBenefitModel) -> Graph:
    """Assign C(v) = base_cost + cost_slope * deg_out(v) and b(v) = benefit_scale * C(v)."""
    cost = model.base_cost + model.cost_slope * g.out_degrees.astype(np.float64)
    benefit = model.benefit_scale * cost
    return replace(g, node_cost=cost, node_benefit=benefit)
