"""Experiment orchestration: the budget x algorithm x threshold grid, CSV output."""

from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass, field, fields

import numpy as np

from . import baselines
from .diffusion import estimate_sigma
from .graph import (
    CostBenefitModel,
    Graph,
    ProbabilityModel,
    apply_cost_benefit,
    apply_probability_model,
    load_edge_list,
)
from .motifs import NODE_UNION, MotifSet, load_motifs, motif_profit, normalize_benefit_mode, sample_motifs
from .ris import compute_theta, estimate_kpt, generate_rr_sets, greedy_seed_selection, select_k_max
from .rng import RngStream

log = logging.getLogger(__name__)

RIS = "RIS"
ALGORITHMS = (RIS, baselines.RANDOM, baselines.HIGH_DEGREE, baselines.CELF, baselines.SIMPLE_GREEDY)

_ALGO_ALIASES = {a.lower(): a for a in ALGORITHMS}
_ALGO_ALIASES.update({"high-degree": baselines.HIGH_DEGREE, "high_degree": baselines.HIGH_DEGREE,
                      "simple-greedy": baselines.SIMPLE_GREEDY, "simple_greedy": baselines.SIMPLE_GREEDY})

# stream-index tags so every phase of every grid cell gets its own stream
_STREAM_PROB, _STREAM_MOTIF, _STREAM_CELL = 0, 1, 2
_PHASE_KPT, _PHASE_RR, _PHASE_SELECT, _PHASE_SIM = 0, 1, 2, 3

CSV_COLUMNS = [
    "budget", "algorithm", "threshold", "motif_size", "seed_cost", "pi",
    "motif_profit", "theta", "kpt", "seeds", "master_seed",
    "time_kpt_ms", "time_rr_ms", "time_greedy_ms", "time_sim_ms",
]
TIMING_COLUMNS = ["time_kpt_ms", "time_rr_ms", "time_greedy_ms", "time_sim_ms"]


def canonical_algorithms(names) -> list[str]:
    out = []
    for name in names:
        canon = _ALGO_ALIASES.get(name.strip().lower())
        if canon is None:
            raise ValueError(f"unknown algorithm {name!r}")
        if canon not in out:
            out.append(canon)
    return out


@dataclass
class ExperimentConfig:
    """Everything one grid run needs; mirrors the CLI flags."""

    graph_path: str
    probability_model: str = "trivalency"
    budgets: list[float] = field(default_factory=lambda: [10.0])
    thresholds: list[int] = field(default_factory=lambda: [2])
    motif_size: int = 3
    motif_count: int = 100
    motifs_file: str | None = None
    algorithms: list[str] = field(default_factory=lambda: list(ALGORITHMS))
    sim_count: int = 10000
    greedy_trials: int = 100
    epsilon: float = 0.3
    ell: float = 1.0
    master_seed: int = 0
    benefit_mode: str = NODE_UNION
    base_cost: float = 1.0
    cost_slope: float = 1.0
    benefit_scale: float = 1.0
    root_distribution: str = "importance"

    def __post_init__(self):
        self.algorithms = canonical_algorithms(self.algorithms)
        self.benefit_mode = normalize_benefit_mode(self.benefit_mode)
        if not self.budgets or min(self.budgets) <= 0:
            raise ValueError("budgets must be positive")
        if not self.thresholds or min(self.thresholds) < 1:
            raise ValueError("thresholds must be >= 1")
        if self.sim_count < 1 or self.greedy_trials < 1:
            raise ValueError("simulation counts must be >= 1")


@dataclass
class ExperimentRecord:
    """One grid cell: a (budget, algorithm, threshold) result."""

    budget: float
    algorithm: str
    threshold: int
    motif_size: int
    seed_cost: float
    pi: float
    motif_profit: float
    theta: int
    kpt: float
    seeds: list[str]
    master_seed: int
    time_kpt_ms: float = 0.0
    time_rr_ms: float = 0.0
    time_greedy_ms: float = 0.0
    time_sim_ms: float = 0.0


def load_config(path) -> dict:
    """Parse a flat key=value config file ('#' comments allowed)."""
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{line_no}: expected key=value")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


def _select_seeds(g, algo, budget, config, motifs, cell_stream):
    """Run one algorithm's selection; returns (selection, theta, kpt, timings)."""
    timings = {"kpt": 0.0, "rr": 0.0, "greedy": 0.0}
    theta, kpt = 0, 0.0
    if algo == RIS:
        t0 = time.perf_counter()
        k = select_k_max(g, budget)
        kpt = estimate_kpt(g, k, cell_stream.child(_PHASE_KPT), ell=config.ell)
        t1 = time.perf_counter()
        theta = compute_theta(kpt, g.n, k, config.epsilon, config.ell)
        rr = generate_rr_sets(
            g, theta, cell_stream.child(_PHASE_RR), config.root_distribution, kpt=kpt
        )
        t2 = time.perf_counter()
        selection = greedy_seed_selection(rr, g, budget)
        t3 = time.perf_counter()
        timings = {"kpt": (t1 - t0) * 1e3, "rr": (t2 - t1) * 1e3, "greedy": (t3 - t2) * 1e3}
    elif algo == baselines.RANDOM:
        t0 = time.perf_counter()
        selection = baselines.random_seeds(g, budget, cell_stream.child(_PHASE_SELECT))
        timings["greedy"] = (time.perf_counter() - t0) * 1e3
    elif algo == baselines.HIGH_DEGREE:
        t0 = time.perf_counter()
        selection = baselines.high_degree_seeds(g, budget)
        timings["greedy"] = (time.perf_counter() - t0) * 1e3
    else:
        # greedy baselines optimize the same motif profit the grid scores,
        # at the first configured threshold (selection is threshold-shared)
        objective = baselines.MonteCarloProfitObjective(g, motifs, config.thresholds[0])
        fn = baselines.celf_seeds if algo == baselines.CELF else baselines.simple_greedy_seeds
        t0 = time.perf_counter()
        selection = fn(g, budget, objective, config.greedy_trials, cell_stream.child(_PHASE_SELECT))
        timings["greedy"] = (time.perf_counter() - t0) * 1e3
    return selection, theta, kpt, timings


def _motif_set_size(motifs: MotifSet) -> int:
    sizes = {len(m.vertices) for m in motifs}
    if len(sizes) == 1:
        return sizes.pop()
    return 0  # mixed sizes (file input)


def prepare_graph(config: ExperimentConfig) -> Graph:
    master = RngStream(config.master_seed)
    g = load_edge_list(config.graph_path)
    prob = ProbabilityModel(
        config.probability_model, rng_seed=master.child(_STREAM_PROB).kernel_seed()
    )
    g = apply_probability_model(g, prob)
    cb = CostBenefitModel(config.base_cost, config.cost_slope, config.benefit_scale)
    return apply_cost_benefit(g, cb)


def prepare_motifs(config: ExperimentConfig, g: Graph) -> MotifSet:
    if config.motifs_file:
        return load_motifs(config.motifs_file, g, benefit_mode=config.benefit_mode)
    master = RngStream(config.master_seed)
    return sample_motifs(
        g, config.motif_size, config.motif_count, master.child(_STREAM_MOTIF),
        benefit_mode=config.benefit_mode,
    )


def run_experiment(config: ExperimentConfig) -> list[ExperimentRecord]:
    """Run the full grid: every budget, every algorithm, every threshold.

    Per (budget, algorithm) cell the seed set is selected once, the cascade
    simulations run once, and each threshold is scored against those same
    outcomes. A failing cell is logged and skipped; the grid continues.
    """
    g = prepare_graph(config)
    motifs = prepare_motifs(config, g)
    motif_size = _motif_set_size(motifs)
    master = RngStream(config.master_seed)

    records: list[ExperimentRecord] = []
    for bi, budget in enumerate(config.budgets):
        for ai, algo in enumerate(config.algorithms):
            cell_stream = master.child(_STREAM_CELL, bi, ai)
            try:
                selection, theta, kpt, timings = _select_seeds(
                    g, algo, budget, config, motifs, cell_stream
                )
                t0 = time.perf_counter()
                _, outcomes = estimate_sigma(
                    g, selection.seeds, config.sim_count, cell_stream.child(_PHASE_SIM)
                )
                time_sim = (time.perf_counter() - t0) * 1e3
                pi = float((outcomes.matrix @ g.node_benefit).mean())
                seed_labels = [g.labels[v] for v in selection.seeds]
                for tau in config.thresholds:
                    profit = motif_profit(
                        outcomes, motifs, tau, selection.total_cost, g.node_benefit
                    )
                    records.append(ExperimentRecord(
                        budget=budget,
                        algorithm=algo,
                        threshold=tau,
                        motif_size=motif_size,
                        seed_cost=selection.total_cost,
                        pi=pi,
                        motif_profit=profit,
                        theta=theta,
                        kpt=kpt,
                        seeds=seed_labels,
                        master_seed=config.master_seed,
                        time_kpt_ms=timings["kpt"],
                        time_rr_ms=timings["rr"],
                        time_greedy_ms=timings["greedy"],
                        time_sim_ms=time_sim,
                    ))
            except Exception:
                log.exception("grid cell failed (budget=%s, algorithm=%s); continuing", budget, algo)
    return records


def _label_sort_key(label: str):
    try:
        return (0, int(label), label)
    except ValueError:
        return (1, 0, label)


def _format_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def write_csv(records: list[ExperimentRecord], path) -> None:
    """Write records in the fixed column order, floats at 6 significant digits."""
    if not records:
        raise ValueError("no records to write")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            seeds = ";".join(sorted(rec.seeds, key=_label_sort_key))
            row = {
                "budget": _format_value(rec.budget),
                "algorithm": rec.algorithm,
                "threshold": rec.threshold,
                "motif_size": rec.motif_size,
                "seed_cost": _format_value(rec.seed_cost),
                "pi": _format_value(rec.pi),
                "motif_profit": _format_value(rec.motif_profit),
                "theta": rec.theta,
                "kpt": _format_value(rec.kpt),
                "seeds": seeds,
                "master_seed": rec.master_seed,
                "time_kpt_ms": _format_value(rec.time_kpt_ms),
                "time_rr_ms": _format_value(rec.time_rr_ms),
                "time_greedy_ms": _format_value(rec.time_greedy_ms),
                "time_sim_ms": _format_value(rec.time_sim_ms),
            }
            writer.writerow([row[c] for c in CSV_COLUMNS])
