"""Self-maintenance of social-choice functions under replacement votes."""

from constlab.stability.anonymous import (
    anonymous_iid_stable,
    threshold_edges,
    threshold_utilities,
    threshold_utility,
)
from constlab.stability.core import (
    ChoiceProfileSet,
    StabilityVerdict,
    TieBreak,
    Universe,
    Witness,
    all_universe,
    check_witness,
    choice_profiles,
    explicit_universe,
    is_self_maintaining,
    nash_welfare,
    threshold_rules,
    thresholds_universe,
    utilities,
    utility,
    welfare,
)
from constlab.stability.equilibrium import best_response_equilibrium, dominant_strategy_profile
from constlab.stability.graph import TransitionGraph, dictatorship_nodes, transition_graph
from constlab.stability.iid import (
    check_main_structural_lemma,
    classify_iid,
    partition_S123,
    thresholds,
)
from constlab.stability.optimistic import (
    lexicographic_weights,
    optimistic_classify,
    optimistic_search,
)
from constlab.stability.pessimistic import pessimistic_refute, pessimistic_survivors
from constlab.stability.report import stability_report

__all__ = [
    "ChoiceProfileSet", "StabilityVerdict", "TieBreak", "TransitionGraph", "Universe", "Witness",
    "all_universe", "anonymous_iid_stable", "best_response_equilibrium", "check_main_structural_lemma",
    "check_witness", "choice_profiles", "classify_iid", "dictatorship_nodes",
    "dominant_strategy_profile", "explicit_universe", "is_self_maintaining",
    "lexicographic_weights", "nash_welfare", "optimistic_classify", "optimistic_search",
    "partition_S123", "pessimistic_refute", "pessimistic_survivors", "stability_report",
    "threshold_edges", "threshold_rules", "threshold_utilities", "threshold_utility",
    "thresholds", "thresholds_universe", "transition_graph", "utilities", "utility", "welfare",
]
