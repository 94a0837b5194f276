"""Budgeted seed selection for motif-oriented profit in social networks.

Pipeline: load a directed graph, assign edge probabilities and node
costs/benefits, sample reverse-reachable sets sized by a spread lower
bound, pick seeds by budgeted greedy coverage, then score the selection's
motif profit with Monte Carlo cascades. Four baseline selectors and an
exact small-instance oracle ship alongside for comparison.
"""

from .baselines import (
    ExactProfitObjective,
    MonteCarloProfitObjective,
    Strategy,
    celf_seeds,
    high_degree_seeds,
    random_seeds,
    simple_greedy_seeds,
)
from .diffusion import (
    ActivationOutcome,
    CascadeOutcomes,
    estimate_sigma,
    exact_activation_probabilities,
    exact_profit_oracle,
    reachable_in_live_graph,
    simulate_ic,
)
from .graph import (
    CostBenefitModel,
    EdgeListParseError,
    Graph,
    ProbabilityModel,
    apply_cost_benefit,
    apply_probability_model,
    build_graph,
    load_edge_list,
)
from .harness import ExperimentConfig, ExperimentRecord, run_experiment, write_csv
from .motifs import (
    MOTIF_LEVEL,
    NODE_UNION,
    Motif,
    MotifSet,
    load_motifs,
    motif_indicator,
    motif_profit,
    motif_profit_samples,
    sample_motifs,
)
from .ris import (
    RRCollection,
    RRSample,
    SeedSelection,
    compute_theta,
    estimate_kpt,
    generate_rr_sets,
    greedy_seed_selection,
    importance_distribution,
    kpt_sample_value,
    rr_membership_frequencies,
    select_k_max,
    theta_requirement,
)
from .rng import RngStream

__version__ = "0.1.0"
