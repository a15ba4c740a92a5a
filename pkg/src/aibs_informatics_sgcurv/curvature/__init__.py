__all__ = [
    "CurvatureReport",
    "CurvatureVariant",
    "ExtremalCosts",
    "HeatLimitEstimate",
    "HeatLimitRow",
    "LLYCurvature",
    "NodeCurvature",
    "TransportPlan",
    "curvature_report",
    "edge_curvature",
    "edge_lambda",
    "extremal_costs",
    "heat_expansion_rate",
    "heat_limit_estimate",
    "is_vertex_transitive_constant",
    "lazy_walk_measure",
    "lly_curvature",
    "node_curvature",
    "product_plan_cost",
    "semigroup_edge_curvature",
    "w1_brute_force",
    "w1_exact",
]

from .core import (
    CurvatureVariant,
    ExtremalCosts,
    HeatLimitEstimate,
    HeatLimitRow,
    NodeCurvature,
    edge_curvature,
    edge_lambda,
    extremal_costs,
    heat_expansion_rate,
    heat_limit_estimate,
    is_vertex_transitive_constant,
    node_curvature,
    semigroup_edge_curvature,
)
from .lly import LLYCurvature, lazy_walk_measure, lly_curvature
from .report import CurvatureReport, curvature_report
from .transport import TransportPlan, product_plan_cost, w1_brute_force, w1_exact
