"""Verifiers for the spectral inequalities of the repelling Laplacian.

Each check returns a :class:`BoundReport` oriented so that the inequality reads
``lhs <= rhs``. A check whose hypotheses are not met returns a report with
``applicability = hypothesis-unmet`` and ``holds = None`` instead of raising.
"""

from __future__ import annotations

__all__ = [
    "Applicability",
    "BoundName",
    "BoundReport",
    "check_degree_bound",
    "check_two_sided_bound",
    "check_lichnerowicz_node",
    "check_lichnerowicz_edge",
    "check_resistance_bracket",
    "check_lly_comparison",
    "check_all_bounds",
]

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from aibs_informatics_core.collections import StrEnum
from aibs_informatics_core.utils.logging import get_logger

from aibs_informatics_sgcurv.constants.numerics import BOUND_TOL, LLY_COMPARISON_TOL
from aibs_informatics_sgcurv.curvature import (
    CurvatureReport,
    CurvatureVariant,
    NodeCurvature,
    curvature_report,
    edge_curvature,
    node_curvature,
    semigroup_edge_curvature,
)
from aibs_informatics_sgcurv.exceptions import HypothesisError
from aibs_informatics_sgcurv.repelling import (
    ConsensusIndex,
    RepellingAnalysis,
    consensus_index,
    repelling_cost_matrix,
    repelling_lambda2,
    resistance_bracket,
)
from aibs_informatics_sgcurv.signed_graph import (
    SignedGraph,
    SignKind,
    degrees,
    hop_diameter,
    is_complete,
    is_negative_connected,
    is_positive_connected,
)
from aibs_informatics_sgcurv.spectral import algebraic_connectivity, laplacian

logger = get_logger(__name__)


class Applicability(StrEnum):
    OK = "ok"
    HYPOTHESIS_UNMET = "hypothesis-unmet"


class BoundName(StrEnum):
    DEGREE = "degree-bound"
    TWO_SIDED = "two-sided-bound"
    NODE_LICHNEROWICZ = "node-lichnerowicz"
    EDGE_LICHNEROWICZ = "edge-lichnerowicz"
    RESISTANCE_LOWER = "resistance-lower"
    RESISTANCE_UPPER = "resistance-upper"
    LLY_COMPARISON = "lly-comparison"


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one inequality check ``lhs <= rhs`` (``lhs < rhs`` when strict).

    Attributes:
        name: Which inequality was checked.
        lhs: Left-hand side, None when the hypotheses are unmet.
        rhs: Right-hand side, None when the hypotheses are unmet.
        holds: Verdict, None when the hypotheses are unmet.
        slack: ``rhs − lhs``.
        applicability: Whether the hypotheses were met.
        reason: Machine-readable reason for ``hypothesis-unmet``.
        strict: Whether the inequality is strict.
        subject: Optional label (an edge) the report refers to.
    """

    name: BoundName
    lhs: Optional[float]
    rhs: Optional[float]
    holds: Optional[bool]
    slack: Optional[float]
    applicability: Applicability
    reason: Optional[str] = None
    strict: bool = False
    subject: Optional[str] = None

    @classmethod
    def evaluate(
        cls,
        name: BoundName,
        lhs: float,
        rhs: float,
        tol: float = BOUND_TOL,
        strict: bool = False,
        subject: Optional[str] = None,
    ) -> "BoundReport":
        holds = lhs < rhs if strict else lhs <= rhs + tol
        if not holds:
            logger.warning(f"{name} fails{f' on {subject}' if subject else ''}: {lhs} > {rhs}")
        return cls(
            name=name,
            lhs=float(lhs),
            rhs=float(rhs),
            holds=bool(holds),
            slack=float(rhs - lhs),
            applicability=Applicability.OK,
            strict=strict,
            subject=subject,
        )

    @classmethod
    def unmet(cls, name: BoundName, reason: str, subject: Optional[str] = None) -> "BoundReport":
        logger.info(f"{name} not applicable: {reason}")
        return cls(
            name=name,
            lhs=None,
            rhs=None,
            holds=None,
            slack=None,
            applicability=Applicability.HYPOTHESIS_UNMET,
            reason=reason,
            subject=subject,
        )

    @property
    def applicable(self) -> bool:
        return self.applicability == Applicability.OK


def _range_issue(
    g: SignedGraph, eps: float, consensus: Optional[ConsensusIndex]
) -> Tuple[Optional[str], Optional[ConsensusIndex]]:
    if not is_positive_connected(g):
        return "not-positive-connected", consensus
    consensus = consensus or consensus_index(g)
    if not consensus.admits(eps):
        return "epsilon-out-of-range", consensus
    return None, consensus


def _analysis(
    g: SignedGraph, eps: float, consensus: Optional[ConsensusIndex]
) -> Tuple[Optional[str], Optional[RepellingAnalysis]]:
    reason, consensus = _range_issue(g, eps, consensus)
    if reason is not None:
        return reason, None
    try:
        return None, repelling_cost_matrix(g, eps, consensus=consensus)
    except HypothesisError as e:
        return e.reason, None


def check_degree_bound(
    g: SignedGraph, eps: float, consensus: Optional[ConsensusIndex] = None
) -> BoundReport:
    """``λ₂(L_ε) <= max_x (d⁺_x − ε·d⁻_x)`` on non-complete positive-connected graphs."""
    name = BoundName.DEGREE
    reason, consensus = _range_issue(g, eps, consensus)
    if reason is not None:
        return BoundReport.unmet(name, reason)
    if is_complete(g):
        return BoundReport.unmet(name, "complete-graph")
    d_plus, d_minus = degrees(g)
    rhs = float(np.max(d_plus - eps * d_minus))
    lhs = repelling_lambda2(g, eps)
    return BoundReport.evaluate(name, lhs, rhs)


def check_two_sided_bound(
    g: SignedGraph, eps: float, consensus: Optional[ConsensusIndex] = None
) -> BoundReport:
    """``λ₂(L_ε) <= 2·d⁺_max − ε·μ⁻₀/(D·|V|)`` when both sign classes are connected.

    μ⁻₀ is the smallest negative weight and D the hop diameter of the underlying graph.
    """
    name = BoundName.TWO_SIDED
    if g.n < 2:
        return BoundReport.unmet(name, "too-small")
    reason, consensus = _range_issue(g, eps, consensus)
    if reason is not None:
        return BoundReport.unmet(name, reason)
    if not g.negative_edges:
        return BoundReport.unmet(name, "no-negative-edges")
    if not is_negative_connected(g):
        return BoundReport.unmet(name, "not-negative-connected")
    d_plus, _ = degrees(g)
    mu_minus = min(e.weight for e in g.negative_edges)
    diameter = hop_diameter(g)
    rhs = 2.0 * float(np.max(d_plus)) - eps * mu_minus / (diameter * g.n)
    lhs = repelling_lambda2(g, eps)
    return BoundReport.evaluate(name, lhs, rhs)


def check_lichnerowicz_node(
    g: SignedGraph,
    eps: float,
    consensus: Optional[ConsensusIndex] = None,
    analysis: Optional[RepellingAnalysis] = None,
    node: Optional[NodeCurvature] = None,
) -> BoundReport:
    """``2·min τ / |V| <= λ₂(L_ε)`` when the node curvature is positive."""
    name = BoundName.NODE_LICHNEROWICZ
    if analysis is None:
        reason, analysis = _analysis(g, eps, consensus)
        if analysis is None:
            return BoundReport.unmet(name, reason or "hypothesis-unmet")
    node = node or node_curvature(analysis)
    if node.min_tau <= 0:
        return BoundReport.unmet(name, "nonpositive-node-curvature")
    return BoundReport.evaluate(name, 2.0 * node.min_tau / g.n, analysis.lambda2)


def check_lichnerowicz_edge(
    g: SignedGraph,
    eps: float,
    variant: CurvatureVariant = CurvatureVariant.SEMIGROUP,
    consensus: Optional[ConsensusIndex] = None,
    analysis: Optional[RepellingAnalysis] = None,
    node: Optional[NodeCurvature] = None,
) -> BoundReport:
    """``min_edge ϑ <= μ₂(Q)`` when every edge curvature is positive.

    The semigroup-normalized curvature is the one the inequality holds for; the
    τ-weighted variant is available for comparison.
    """
    name = BoundName.EDGE_LICHNEROWICZ
    if analysis is None:
        reason, analysis = _analysis(g, eps, consensus)
        if analysis is None:
            return BoundReport.unmet(name, reason or "hypothesis-unmet")
    if not g.edges:
        return BoundReport.unmet(name, "no-edges")
    node = node or node_curvature(analysis)
    if variant == CurvatureVariant.SEMIGROUP:
        values = [semigroup_edge_curvature(analysis, node, *e) for e in g.edge_keys]
    else:
        values = [edge_curvature(analysis, node.tau, *e) for e in g.edge_keys]
    k = min(values)
    if k <= 0:
        return BoundReport.unmet(name, "nonpositive-edge-curvature")
    mu2 = algebraic_connectivity(laplacian(g, SignKind.UNDERLYING))
    return BoundReport.evaluate(name, k, mu2, subject=str(variant))


def check_resistance_bracket(analysis: RepellingAnalysis) -> Tuple[BoundReport, BoundReport]:
    """``|V|/λ₂ < W_ε`` (strict from three vertices on) and ``W_ε <= |V|(|V|−1)/λ₂``."""
    lower, W, upper = resistance_bracket(analysis)
    strict = analysis.n >= 3
    return (
        BoundReport.evaluate(BoundName.RESISTANCE_LOWER, lower, W, strict=strict),
        BoundReport.evaluate(BoundName.RESISTANCE_UPPER, W, upper, tol=BOUND_TOL * max(1.0, W)),
    )


def check_lly_comparison(
    analysis: RepellingAnalysis,
    report: Optional[CurvatureReport] = None,
    tol: float = LLY_COMPARISON_TOL,
) -> List[BoundReport]:
    """Per edge, the semigroup curvature is at most the Lin-Lu-Yau curvature."""
    if report is None or not report.kappa_lly:
        report = curvature_report(analysis, with_lly=True)
    return [
        BoundReport.evaluate(
            BoundName.LLY_COMPARISON,
            report.theta_semigroup[edge],
            report.kappa_lly[edge],
            tol=tol,
            subject=f"{edge[0]}-{edge[1]}",
        )
        for edge in analysis.graph.edge_keys
    ]


def check_all_bounds(
    g: SignedGraph,
    eps: float,
    consensus: Optional[ConsensusIndex] = None,
    with_lly: bool = True,
) -> List[BoundReport]:
    """Every spectral inequality at ``eps``, hypothesis-unmet where not applicable."""
    reason, consensus = _range_issue(g, eps, consensus)
    reports = [
        check_degree_bound(g, eps, consensus=consensus),
        check_two_sided_bound(g, eps, consensus=consensus),
    ]
    analysis = None
    if reason is None:
        reason, analysis = _analysis(g, eps, consensus)
    if analysis is None or g.n < 2:
        unmet = reason or "too-small"
        reports.extend(
            BoundReport.unmet(name, unmet)
            for name in (
                BoundName.NODE_LICHNEROWICZ,
                BoundName.EDGE_LICHNEROWICZ,
                BoundName.RESISTANCE_LOWER,
                BoundName.RESISTANCE_UPPER,
            )
        )
        return reports

    node = node_curvature(analysis)
    reports.append(check_lichnerowicz_node(g, eps, analysis=analysis, node=node))
    reports.append(check_lichnerowicz_edge(g, eps, analysis=analysis, node=node))
    reports.extend(check_resistance_bracket(analysis))
    if with_lly:
        reports.extend(check_lly_comparison(analysis, curvature_report(analysis, node=node)))
    return reports
