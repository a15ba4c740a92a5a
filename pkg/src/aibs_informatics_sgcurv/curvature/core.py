"""Node and edge ε-repelling curvatures built on the cost matrix Ω.

The node curvature τ solves ``Ω·τ = |V|·1`` and ``φ = Σ τ``; ``r = τ/φ`` is the barycentric
circumcenter of the simplex. Edge curvatures combine τ (or r) with the negative-edge
correction Λ.
"""

from __future__ import annotations

__all__ = [
    "CurvatureVariant",
    "NodeCurvature",
    "HeatLimitRow",
    "HeatLimitEstimate",
    "ExtremalCosts",
    "node_curvature",
    "edge_lambda",
    "edge_curvature",
    "semigroup_edge_curvature",
    "heat_expansion_rate",
    "heat_limit_estimate",
    "extremal_costs",
    "is_vertex_transitive_constant",
]

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from aibs_informatics_core.collections import StrEnum
from aibs_informatics_core.utils.logging import get_logger

from aibs_informatics_sgcurv.constants.numerics import (
    BOUND_TOL,
    HEAT_T_SEQUENCE,
    TAU_ROUTE_TOL,
)
from aibs_informatics_sgcurv.exceptions import (
    GraphValidationError,
    HypothesisError,
    NumericalError,
)
from aibs_informatics_sgcurv.repelling import RepellingAnalysis
from aibs_informatics_sgcurv.signed_graph import SignKind, degrees
from aibs_informatics_sgcurv.spectral import laplacian, matrix_exp

logger = get_logger(__name__)


class CurvatureVariant(StrEnum):
    DISPLAY = "display"
    SEMIGROUP = "semigroup"


# --------------------------------------------------------------------------
# Node curvature
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NodeCurvature:
    """Node ε-repelling curvature.

    Attributes:
        tau: τ with ``Ω·τ = |V|·1``.
        phi: φ = |V|·1ᵀΩ⁻¹1 = Σ τ.
        route_residual: max difference between the linear-solve and closed-form τ.
    """

    tau: np.ndarray
    phi: float
    route_residual: float = 0.0

    @property
    def barycentric(self) -> np.ndarray:
        return self.tau / self.phi

    @property
    def min_tau(self) -> float:
        return float(np.min(self.tau))

    @property
    def is_nonnegative(self) -> bool:
        return bool(np.all(self.tau >= 0))


def _signed_weights(analysis: RepellingAnalysis) -> np.ndarray:
    g = analysis.graph
    return g.weight_matrix(SignKind.POSITIVE) - analysis.epsilon * g.weight_matrix(
        SignKind.NEGATIVE
    )


def node_curvature(analysis: RepellingAnalysis, route_tol: float = TAU_ROUTE_TOL) -> NodeCurvature:
    """Solve ``Ω·τ = |V|·1`` and cross-check against the closed form.

    The closed form ``τ(i) = φ·(1 − ½·Σ_j (w⁺ − ε·w⁻)_ij·Ω(i,j))`` follows from
    ``L_ε·Ω = 2·r·1ᵀ − 2I``.

    Raises:
        HypothesisError: if the graph has fewer than two vertices.
        NumericalError: if Ω is singular or the two routes disagree.
    """
    n = analysis.n
    if n < 2:
        raise HypothesisError("Node curvature needs at least two vertices", reason="too-small")
    try:
        tau = np.linalg.solve(analysis.omega, np.full(n, float(n)))
    except np.linalg.LinAlgError as e:
        msg = f"Ω is singular at ε = {analysis.epsilon}: {e}"
        logger.error(msg)
        raise NumericalError(msg) from e
    phi = float(np.sum(tau))

    closed_form = phi * (1.0 - 0.5 * np.sum(_signed_weights(analysis) * analysis.omega, axis=1))
    residual = float(np.max(np.abs(tau - closed_form)))
    if residual > route_tol * max(1.0, float(np.max(np.abs(tau)))):
        msg = f"τ routes disagree by {residual:.3e} at ε = {analysis.epsilon}"
        logger.error(msg)
        raise NumericalError(msg, residual=residual)
    return NodeCurvature(tau=tau, phi=phi, route_residual=residual)


def is_vertex_transitive_constant(node: NodeCurvature, tol: float = TAU_ROUTE_TOL) -> bool:
    return float(np.max(node.tau) - np.min(node.tau)) <= tol


# --------------------------------------------------------------------------
# Edge curvature
# --------------------------------------------------------------------------


def _edge_cost(analysis: RepellingAnalysis, i: int, j: int) -> float:
    if not analysis.graph.has_edge(i, j):
        raise GraphValidationError(f"({i}, {j}) is not an edge")
    cost = float(analysis.omega[i, j])
    if cost <= 0:
        msg = f"Ω({i}, {j}) = {cost:.3e} is not positive"
        logger.error(msg)
        raise NumericalError(msg)
    return cost


def edge_lambda(analysis: RepellingAnalysis, i: int, j: int) -> float:
    """Negative-edge correction ``Λ(i,j)``.

    ``(d⁻_i + d⁻_j) − [Σ_k Ω(j,k)·w⁻_ik + Σ_k Ω(i,k)·w⁻_jk] / Ω(i,j)``; vertices without
    negative edges contribute nothing.
    """
    cost = _edge_cost(analysis, i, j)
    W_minus = analysis.graph.weight_matrix(SignKind.NEGATIVE)
    _, d_minus = degrees(analysis.graph)
    omega = analysis.omega
    cross = float(omega[j] @ W_minus[i] + omega[i] @ W_minus[j])
    return float(d_minus[i] + d_minus[j]) - cross / cost


def edge_curvature(analysis: RepellingAnalysis, tau: np.ndarray, i: int, j: int) -> float:
    """``ϑ(i,j) = 2(τ(i)+τ(j))/Ω(i,j) + (1+ε)·Λ(i,j)``."""
    cost = _edge_cost(analysis, i, j)
    return 2.0 * float(tau[i] + tau[j]) / cost + (1.0 + analysis.epsilon) * edge_lambda(
        analysis, i, j
    )


def semigroup_edge_curvature(
    analysis: RepellingAnalysis, node: NodeCurvature, i: int, j: int
) -> float:
    """Edge curvature with τ replaced by the barycentric circumcenter ``r = τ/φ``.

    This is the first-order contraction rate of Ω under the heat semigroup ``exp(−Qt)``.
    """
    return edge_curvature(analysis, node.barycentric, i, j)


# --------------------------------------------------------------------------
# Heat semigroup limit
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class HeatLimitRow:
    t: float
    rate: float
    error: float


@dataclass(frozen=True)
class HeatLimitEstimate:
    """Richardson-extrapolated ``t → 0`` limit of the heat contraction rate.

    Attributes:
        estimate: Extrapolated limit.
        expected: First-order coefficient from the truncated expansion.
        rows: ``(t, q(t), |q(t) − expected|)`` per step.
        ratios: Error ratios of consecutive rows.
        constant: Fitted C in ``|q(t) − expected| <= C·t``.
    """

    estimate: float
    expected: float
    rows: Tuple[HeatLimitRow, ...]
    ratios: Tuple[float, ...]
    constant: float

    @property
    def first_order(self) -> bool:
        """True when every error ratio lies in [1.5, 2.5] (halving steps)."""
        return all(1.5 <= ratio <= 2.5 for ratio in self.ratios)


def heat_expansion_rate(analysis: RepellingAnalysis, i: int, j: int) -> float:
    """First-order coefficient ``(QΩ + ΩQ)(i,j)/Ω(i,j)`` of the heat contraction."""
    cost = _edge_cost(analysis, i, j)
    Q = laplacian(analysis.graph, SignKind.UNDERLYING)
    return float((Q[i] @ analysis.omega[:, j] + analysis.omega[i] @ Q[:, j]) / cost)


def heat_limit_estimate(
    analysis: RepellingAnalysis,
    i: int,
    j: int,
    t_seq: Sequence[float] = HEAT_T_SEQUENCE,
) -> HeatLimitEstimate:
    """Estimate ``lim_{t→0} (1/t)(1 − E[Ω(N_t, M_t)]/Ω(i,j))`` for random walkers.

    ``E[Ω(N_t, M_t)] = e_iᵀ·exp(−Qt)·Ω·exp(−Qt)·e_j`` with Q the underlying Laplacian.
    The limit is extrapolated by fitting a polynomial in t through all samples.

    Raises:
        HypothesisError: if ``t_seq`` is empty, not strictly descending or leaves (0, 1].
    """
    ts = [float(t) for t in t_seq]
    if not ts or any(not 0 < t <= 1 for t in ts) or any(b >= a for a, b in zip(ts, ts[1:])):
        raise HypothesisError(
            f"t_seq must be strictly descending in (0, 1]: {ts}", reason="bad-time-grid"
        )
    cost = _edge_cost(analysis, i, j)
    Q = laplacian(analysis.graph, SignKind.UNDERLYING)
    expected = heat_expansion_rate(analysis, i, j)

    rates = []
    for t in ts:
        P = matrix_exp(Q, t)
        expected_cost = float(P[:, i] @ analysis.omega @ P[:, j])
        rates.append((1.0 - expected_cost / cost) / t)

    errors = [abs(q - expected) for q in rates]
    rows = tuple(HeatLimitRow(t, q, err) for t, q, err in zip(ts, rates, errors))
    ratios = tuple(
        a / b if b > 0 else float("inf") for a, b in zip(errors, errors[1:])
    )
    coefficients = np.polynomial.polynomial.polyfit(ts, rates, len(ts) - 1)
    estimate = float(coefficients[0])
    constant = max(err / t for t, err in zip(ts, errors))
    logger.debug(f"Heat limit on ({i}, {j}): {estimate:.12g} (expansion {expected:.12g})")
    return HeatLimitEstimate(
        estimate=estimate, expected=expected, rows=rows, ratios=ratios, constant=constant
    )


# --------------------------------------------------------------------------
# Extremal costs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtremalCosts:
    """Largest and smallest off-diagonal Ω against ``2|V|/φ`` and ``|V|/φ``.

    ``bounds_ok`` is None when τ has a negative entry and follows the X bound otherwise;
    the N comparison is reported alongside.
    """

    x_cost: float
    n_cost: float
    x_bound: float
    n_bound: float
    applicable: bool
    x_bound_holds: Optional[bool]
    n_bound_holds: Optional[bool]

    @property
    def bounds_ok(self) -> Optional[bool]:
        return self.x_bound_holds if self.applicable else None


def extremal_costs(
    analysis: RepellingAnalysis, node: NodeCurvature, tol: float = BOUND_TOL
) -> ExtremalCosts:
    n = analysis.n
    off_diagonal = analysis.omega[~np.eye(n, dtype=bool)]
    x_cost, n_cost = float(np.max(off_diagonal)), float(np.min(off_diagonal))
    x_bound, n_bound = 2.0 * n / node.phi, n / node.phi
    applicable = node.is_nonnegative
    if not applicable:
        logger.info(f"τ has a negative entry ({node.min_tau:.6g}); extremal bounds do not apply")
    return ExtremalCosts(
        x_cost=x_cost,
        n_cost=n_cost,
        x_bound=x_bound,
        n_bound=n_bound,
        applicable=applicable,
        x_bound_holds=(x_cost <= x_bound + tol) if applicable else None,
        n_bound_holds=(n_cost <= n_bound + tol) if applicable else None,
    )
