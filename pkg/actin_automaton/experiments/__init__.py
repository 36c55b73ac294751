from actin_automaton.experiments.compare import (
    Comparison,
    compare_to_reference,
    graph_matches_reference,
    render_comparisons,
)
from actin_automaton.experiments.fit import FitResult, fit_power_law, points_from_csv
from actin_automaton.experiments.paths import longest_path
from actin_automaton.experiments.profile import ProfileWindow, excitation_profile
from actin_automaton.experiments.single import SingleSweepSummary, sweep_single_node
from actin_automaton.experiments.sweep import SweepConfig, SweepSummary, summarize, sweep_ratio

__all__ = [
    "Comparison",
    "FitResult",
    "ProfileWindow",
    "SingleSweepSummary",
    "SweepConfig",
    "SweepSummary",
    "compare_to_reference",
    "excitation_profile",
    "fit_power_law",
    "graph_matches_reference",
    "longest_path",
    "points_from_csv",
    "render_comparisons",
    "summarize",
    "sweep_ratio",
    "sweep_single_node",
]
