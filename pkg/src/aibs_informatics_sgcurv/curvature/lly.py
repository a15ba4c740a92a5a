"""Lin-Lu-Yau curvature with the ε-repelling cost as ground metric."""

from __future__ import annotations

__all__ = [
    "LLYCurvature",
    "lazy_walk_measure",
    "lly_kappa",
    "lly_curvature",
]

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from aibs_informatics_core.utils.logging import get_logger

from aibs_informatics_sgcurv.constants.numerics import LLY_ALPHA_MIN, LLY_STABILIZATION_TOL
from aibs_informatics_sgcurv.curvature.transport import w1_exact
from aibs_informatics_sgcurv.exceptions import (
    ConvergenceError,
    GraphValidationError,
    HypothesisError,
)
from aibs_informatics_sgcurv.repelling import RepellingAnalysis
from aibs_informatics_sgcurv.signed_graph import SignKind
from aibs_informatics_sgcurv.spectral import SymMatrix, laplacian

logger = get_logger(__name__)


@dataclass(frozen=True)
class LLYCurvature:
    """Stabilized ``α → 0`` limit of ``κ(α) = (1/α)(1 − W1(m_i^α, m_j^α)/Ω(i,j))``.

    Attributes:
        edge: Endpoints ``(i, j)``.
        value: κ at the finest evaluated α.
        alpha: Finest evaluated α.
        converged: True when two consecutive halvings agreed.
        last_pair: ``(κ(2α), κ(α))`` of the final comparison.
        evaluations: Number of transport problems solved.
    """

    edge: Tuple[int, int]
    value: float
    alpha: float
    converged: bool
    last_pair: Tuple[float, float]
    evaluations: int


def lazy_walk_measure(Q: SymMatrix, i: int, alpha: float) -> np.ndarray:
    """``m_i^α = (I − α·Q)·e_i``: stay with mass ``1 − α·d_i``, move ``α·w_ik`` to k."""
    m = -alpha * Q[:, i]
    m[i] += 1.0
    return np.clip(m, 0.0, None)


def lly_kappa(analysis: RepellingAnalysis, Q: SymMatrix, i: int, j: int, alpha: float) -> float:
    plan = w1_exact(
        analysis.omega, lazy_walk_measure(Q, i, alpha), lazy_walk_measure(Q, j, alpha)
    )
    return (1.0 - plan.value / float(analysis.omega[i, j])) / alpha


def lly_curvature(
    analysis: RepellingAnalysis,
    i: int,
    j: int,
    alpha0: Optional[float] = None,
    alpha_min: float = LLY_ALPHA_MIN,
    tol: float = LLY_STABILIZATION_TOL,
    raise_if_unstable: bool = False,
) -> LLYCurvature:
    """Lin-Lu-Yau curvature of edge ``(i, j)`` with Ω as ground cost.

    ``W1(α)`` is convex and piecewise linear in α with ``W1(0) = Ω(i,j)``, so κ(α) is a
    secant slope from 0: ``κ(α) = κ(α/2)`` holds exactly when α lies in the first linear
    piece, the one starting at α = 0.
    α is halved from ``alpha0`` (default ``1/(2·d_max)``) until two values agree.

    Args:
        analysis: Repelling analysis supplying Ω.
        i: First endpoint.
        j: Second endpoint.
        alpha0: Initial laziness; must satisfy ``α·d_max <= 1``.
        alpha_min: Smallest α evaluated.
        tol: Agreement tolerance, relative to ``max(1, |κ|)``.
        raise_if_unstable: Raise instead of returning an unconverged result.

    Raises:
        GraphValidationError: if ``(i, j)`` is not an edge.
        HypothesisError: if ``alpha0`` is too large for the walk to be a distribution.
        ConvergenceError: if no agreement is reached and ``raise_if_unstable`` is set.
    """
    g = analysis.graph
    if not g.has_edge(i, j):
        raise GraphValidationError(f"({i}, {j}) is not an edge")
    Q = laplacian(g, SignKind.UNDERLYING)
    d_max = float(np.max(np.diag(Q)))
    alpha = alpha0 if alpha0 is not None else 1.0 / (2.0 * d_max)
    if not 0 < alpha * d_max <= 1:
        raise HypothesisError(
            f"alpha {alpha} must lie in (0, 1/d_max] with d_max = {d_max}",
            reason="alpha-out-of-range",
        )

    previous = lly_kappa(analysis, Q, i, j, alpha)
    last_pair = (previous, previous)
    evaluations = 1
    while alpha / 2.0 >= alpha_min:
        current = lly_kappa(analysis, Q, i, j, alpha / 2.0)
        evaluations += 1
        alpha /= 2.0
        logger.debug(f"κ({i}, {j}) at α = {alpha:.3e}: {current:.12g}")
        if abs(current - previous) <= tol * max(1.0, abs(current)):
            return LLYCurvature((i, j), current, alpha, True, (previous, current), evaluations)
        last_pair = (previous, current)
        previous = current

    msg = f"κ({i}, {j}) did not stabilize down to α = {alpha:.3e} (last {previous:.12g})"
    if raise_if_unstable:
        logger.error(msg)
        raise ConvergenceError(msg)
    logger.warning(msg)
    return LLYCurvature((i, j), previous, alpha, False, last_pair, evaluations)
