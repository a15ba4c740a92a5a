__all__ = [
    "CurvatureReport",
    "curvature_report",
]

from dataclasses import dataclass, field
from multiprocessing.pool import ThreadPool
from typing import Dict, List, Optional

import numpy as np
from aibs_informatics_core.utils.logging import get_logger
from aibs_informatics_core.utils.multiprocessing import parallel_starmap

from aibs_informatics_sgcurv.constants.numerics import LLY_COMPARISON_TOL
from aibs_informatics_sgcurv.curvature.core import (
    ExtremalCosts,
    NodeCurvature,
    edge_curvature,
    edge_lambda,
    extremal_costs,
    node_curvature,
    semigroup_edge_curvature,
)
from aibs_informatics_sgcurv.curvature.lly import LLYCurvature, lly_curvature
from aibs_informatics_sgcurv.repelling import RepellingAnalysis
from aibs_informatics_sgcurv.signed_graph import Edge

logger = get_logger(__name__)


@dataclass(frozen=True)
class CurvatureReport:
    """Node and edge curvatures of a repelling analysis.

    Attributes:
        epsilon: ε of the analysis.
        tau: Node curvature τ.
        phi: φ = Σ τ.
        lambda_corr: Λ per edge.
        theta: ϑ per edge, τ-weighted.
        theta_semigroup: ϑ per edge with τ replaced by ``τ/φ``.
        kappa_lly: Lin-Lu-Yau curvature per edge (empty when not computed).
        lly_converged: Stabilization flag per edge.
        extremal: Largest and smallest off-diagonal cost with their bounds.
    """

    epsilon: float
    tau: np.ndarray
    phi: float
    lambda_corr: Dict[Edge, float]
    theta: Dict[Edge, float]
    theta_semigroup: Dict[Edge, float]
    extremal: ExtremalCosts
    kappa_lly: Dict[Edge, float] = field(default_factory=dict)
    lly_converged: Dict[Edge, bool] = field(default_factory=dict)

    @property
    def x_eps(self) -> float:
        return self.extremal.x_cost

    @property
    def n_eps(self) -> float:
        return self.extremal.n_cost

    def lly_violations(self, tol: float = LLY_COMPARISON_TOL) -> List[Edge]:
        """Edges where the semigroup curvature exceeds the Lin-Lu-Yau curvature."""
        return [
            edge
            for edge, kappa in self.kappa_lly.items()
            if self.theta_semigroup[edge] > kappa + tol
        ]


def curvature_report(
    analysis: RepellingAnalysis,
    node: Optional[NodeCurvature] = None,
    with_lly: bool = True,
) -> CurvatureReport:
    """Evaluate every curvature of ``analysis``; LLY edges are solved concurrently."""
    node = node or node_curvature(analysis)
    edges = analysis.graph.edge_keys
    lambda_corr = {e: edge_lambda(analysis, *e) for e in edges}
    theta = {e: edge_curvature(analysis, node.tau, *e) for e in edges}
    theta_semigroup = {e: semigroup_edge_curvature(analysis, node, *e) for e in edges}

    kappa_lly: Dict[Edge, float] = {}
    lly_converged: Dict[Edge, bool] = {}
    if with_lly and edges:
        results: List[LLYCurvature] = parallel_starmap(
            lly_curvature, [(analysis, i, j) for i, j in edges], {}, ThreadPool
        )
        for edge, result in zip(edges, results):
            kappa_lly[edge] = result.value
            lly_converged[edge] = result.converged

    report = CurvatureReport(
        epsilon=analysis.epsilon,
        tau=node.tau,
        phi=node.phi,
        lambda_corr=lambda_corr,
        theta=theta,
        theta_semigroup=theta_semigroup,
        extremal=extremal_costs(analysis, node),
        kappa_lly=kappa_lly,
        lly_converged=lly_converged,
    )
    violations = report.lly_violations()
    if violations:
        logger.warning(f"Semigroup curvature exceeds Lin-Lu-Yau curvature on {violations}")
    return report
