"""Command-line front end: grid runs, the exact oracle, motif sampling, RR benchmarks."""

from __future__ import annotations

import argparse
import logging
import sys
import time

from .diffusion import exact_profit_oracle
from .graph import CostBenefitModel, ProbabilityModel, apply_cost_benefit, apply_probability_model, load_edge_list
from .harness import ALGORITHMS, ExperimentConfig, load_config, run_experiment, write_csv
from .motifs import NODE_UNION, load_motifs, sample_motifs
from .ris import generate_rr_sets
from .rng import RngStream


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems instead of exiting the process."""

    def error(self, message):
        raise UsageError(message)


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def build_parser() -> _Parser:
    parser = _Parser(prog="motifris", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the budget/threshold/algorithm grid and write a CSV")
    run.add_argument("--config", help="key=value config file; explicit flags override it")
    run.add_argument("--graph", help="edge-list path")
    run.add_argument("--prob", choices=["trivalency", "wc"], help="edge probability model")
    run.add_argument("--budgets", help="comma-separated budgets")
    run.add_argument("--thresholds", help="comma-separated activation thresholds")
    run.add_argument("--motif-size", type=int, help="sampled motif size")
    run.add_argument("--motif-count", type=int, help="number of motifs to sample")
    run.add_argument("--motifs-file", help="load motifs from file instead of sampling")
    run.add_argument("--algos", help="comma-separated subset of: " + ",".join(a.lower() for a in ALGORITHMS))
    run.add_argument("--sims", type=int, help="cascade simulations per cell")
    run.add_argument("--greedy-sims", type=int, help="simulations per candidate in greedy baselines")
    run.add_argument("--epsilon", type=float, help="sampling accuracy parameter")
    run.add_argument("--ell", type=float, help="confidence parameter")
    run.add_argument("--seed", type=int, help="master seed")
    run.add_argument("--benefit-mode", choices=["motif", "node-union"], help="benefit accounting")
    run.add_argument("--base-cost", type=float)
    run.add_argument("--cost-slope", type=float)
    run.add_argument("--benefit-scale", type=float)
    run.add_argument("--out", help="output CSV path")

    oracle = sub.add_parser("oracle", help="exact motif profit on a small instance")
    oracle.add_argument("--graph", required=True)
    oracle.add_argument("--prob", choices=["trivalency", "wc"], default="trivalency")
    oracle.add_argument("--motifs-file", required=True)
    oracle.add_argument("--seeds", required=True, help="comma-separated node labels")
    oracle.add_argument("--benefit-mode", choices=["motif", "node-union"], default="motif")
    oracle.add_argument("--seed", type=int, default=0)
    oracle.add_argument("--base-cost", type=float, default=1.0)
    oracle.add_argument("--cost-slope", type=float, default=1.0)
    oracle.add_argument("--benefit-scale", type=float, default=1.0)

    sample = sub.add_parser("sample-motifs", help="sample connected motifs and write a motif file")
    sample.add_argument("--graph", required=True)
    sample.add_argument("--motif-size", type=int, default=3)
    sample.add_argument("--motif-count", type=int, default=100)
    sample.add_argument("--seed", type=int, default=0)
    sample.add_argument("--base-cost", type=float, default=1.0)
    sample.add_argument("--cost-slope", type=float, default=1.0)
    sample.add_argument("--benefit-scale", type=float, default=1.0)
    sample.add_argument("--out", required=True)

    rrgen = sub.add_parser("rrgen", help="micro-benchmark reverse-reachable sampling")
    rrgen.add_argument("--graph", required=True)
    rrgen.add_argument("--prob", choices=["trivalency", "wc"], default="trivalency")
    rrgen.add_argument("--theta", type=int, default=100000)
    rrgen.add_argument("--seed", type=int, default=0)
    rrgen.add_argument("--root-dist", choices=["importance", "uniform"], default="importance")
    rrgen.add_argument("--base-cost", type=float, default=1.0)
    rrgen.add_argument("--cost-slope", type=float, default=1.0)
    rrgen.add_argument("--benefit-scale", type=float, default=1.0)

    return parser


_CONFIG_PARSERS = {
    "graph": ("graph_path", str),
    "prob": ("probability_model", str),
    "budgets": ("budgets", _floats),
    "thresholds": ("thresholds", _ints),
    "motif_size": ("motif_size", int),
    "motif_count": ("motif_count", int),
    "motifs_file": ("motifs_file", str),
    "algos": ("algorithms", lambda s: [t for t in s.split(",") if t.strip()]),
    "sims": ("sim_count", int),
    "greedy_sims": ("greedy_trials", int),
    "epsilon": ("epsilon", float),
    "ell": ("ell", float),
    "seed": ("master_seed", int),
    "benefit_mode": ("benefit_mode", str),
    "base_cost": ("base_cost", float),
    "cost_slope": ("cost_slope", float),
    "benefit_scale": ("benefit_scale", float),
    "out": ("out", str),
}


def _build_run_config(args) -> tuple[ExperimentConfig, str]:
    values: dict = {}
    out_path = None
    if args.config:
        for key, raw in load_config(args.config).items():
            entry = _CONFIG_PARSERS.get(key)
            if entry is None:
                raise UsageError(f"unknown config key {key!r}")
            name, parse = entry
            if name == "out":
                out_path = raw
            else:
                values[name] = parse(raw)

    overrides = {
        "graph_path": args.graph,
        "probability_model": args.prob,
        "budgets": _floats(args.budgets) if args.budgets else None,
        "thresholds": _ints(args.thresholds) if args.thresholds else None,
        "motif_size": args.motif_size,
        "motif_count": args.motif_count,
        "motifs_file": args.motifs_file,
        "algorithms": [t for t in args.algos.split(",") if t.strip()] if args.algos else None,
        "sim_count": args.sims,
        "greedy_trials": args.greedy_sims,
        "epsilon": args.epsilon,
        "ell": args.ell,
        "master_seed": args.seed,
        "benefit_mode": args.benefit_mode,
        "base_cost": args.base_cost,
        "cost_slope": args.cost_slope,
        "benefit_scale": args.benefit_scale,
    }
    for name, value in overrides.items():
        if value is not None:
            values[name] = value
    if args.out:
        out_path = args.out

    if "graph_path" not in values:
        raise UsageError("a graph is required (--graph or config graph=)")
    if out_path is None:
        raise UsageError("an output path is required (--out or config out=)")
    try:
        return ExperimentConfig(**values), out_path
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _prepared_graph(args):
    g = load_edge_list(args.graph)
    prob = ProbabilityModel(args.prob, rng_seed=args.seed)
    g = apply_probability_model(g, prob)
    return apply_cost_benefit(g, CostBenefitModel(args.base_cost, args.cost_slope, args.benefit_scale))


def _cmd_run(args) -> int:
    config, out_path = _build_run_config(args)
    records = run_experiment(config)
    if not records:
        print("no grid cell produced a record", file=sys.stderr)
        return 2
    write_csv(records, out_path)
    print(f"wrote {len(records)} records to {out_path}")
    return 0


def _cmd_oracle(args) -> int:
    g = _prepared_graph(args)
    motifs = load_motifs(args.motifs_file, g, benefit_mode=args.benefit_mode)
    seeds = []
    for label in args.seeds.split(","):
        label = label.strip()
        if label not in g.label_to_id:
            raise UsageError(f"unknown seed label {label!r}")
        seeds.append(g.label_to_id[label])
    profit = exact_profit_oracle(g, seeds, motifs)
    print(f"{profit:.10g}")
    return 0


def _cmd_sample_motifs(args) -> int:
    g = load_edge_list(args.graph)
    g = apply_cost_benefit(g, CostBenefitModel(args.base_cost, args.cost_slope, args.benefit_scale))
    motifs = sample_motifs(g, args.motif_size, args.motif_count, RngStream(args.seed))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("# threshold benefit vertices...\n")
        for m in motifs:
            labels = " ".join(g.labels[v] for v in sorted(m.vertices))
            fh.write(f"{m.threshold} {m.benefit:.6g} {labels}\n")
    note = " (truncated)" if motifs.truncated else ""
    print(f"wrote {len(motifs)} motifs to {args.out}{note}")
    return 0


def _cmd_rrgen(args) -> int:
    g = _prepared_graph(args)
    start = time.perf_counter()
    rr = generate_rr_sets(g, args.theta, RngStream(args.seed), args.root_dist)
    elapsed = time.perf_counter() - start
    sizes = rr.members_flat.shape[0] / rr.theta
    print(f"generated {rr.theta} samples in {elapsed:.3f}s "
          f"({rr.theta / elapsed:.0f}/s, mean size {sizes:.2f})")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "oracle": _cmd_oracle,
    "sample-motifs": _cmd_sample_motifs,
    "rrgen": _cmd_rrgen,
}


def cli_main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
