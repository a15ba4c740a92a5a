__all__ = [
    "Applicability",
    "BoundName",
    "BoundReport",
    "DynamicsTrajectory",
    "MixingReport",
    "MixingStep",
    "check_all_bounds",
    "check_degree_bound",
    "check_lichnerowicz_edge",
    "check_lichnerowicz_node",
    "check_lly_comparison",
    "check_resistance_bracket",
    "check_two_sided_bound",
    "mixing_rate_check",
    "predicted_dynamics_rate",
    "simulate_repelling_dynamics",
]

from .dynamics import (
    DynamicsTrajectory,
    MixingReport,
    MixingStep,
    mixing_rate_check,
    predicted_dynamics_rate,
    simulate_repelling_dynamics,
)
from .spectral_bounds import (
    Applicability,
    BoundName,
    BoundReport,
    check_all_bounds,
    check_degree_bound,
    check_lichnerowicz_edge,
    check_lichnerowicz_node,
    check_lly_comparison,
    check_resistance_bracket,
    check_two_sided_bound,
)
