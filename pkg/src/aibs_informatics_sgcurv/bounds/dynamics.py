"""Lazy random walk mixing and repelling consensus dynamics."""

from __future__ import annotations

__all__ = [
    "MixingStep",
    "MixingReport",
    "DynamicsTrajectory",
    "mixing_rate_check",
    "predicted_dynamics_rate",
    "simulate_repelling_dynamics",
]

from dataclasses import dataclass
from typing import Tuple

import numpy as np
import numpy.typing as npt
from aibs_informatics_core.utils.logging import get_logger

from aibs_informatics_sgcurv.constants.numerics import BOUND_TOL
from aibs_informatics_sgcurv.exceptions import HypothesisError
from aibs_informatics_sgcurv.signed_graph import SignedGraph, SignKind
from aibs_informatics_sgcurv.spectral import algebraic_connectivity, laplacian, restricted_spectrum

logger = get_logger(__name__)


# --------------------------------------------------------------------------
# Lazy random walk mixing
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MixingStep:
    step: int
    distance: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.distance <= self.bound + BOUND_TOL * max(1.0, self.bound)


@dataclass(frozen=True)
class MixingReport:
    """``‖P_tⁿf − f̄·1‖ <= (1 − t·μ₂)ⁿ·‖f‖`` for ``n = 1..steps`` with ``P_t = I − tQ``."""

    t: float
    mu2: float
    contraction: float
    steps: Tuple[MixingStep, ...]

    @property
    def holds(self) -> bool:
        return all(step.holds for step in self.steps)


def mixing_rate_check(
    g: SignedGraph, t: float, f: npt.ArrayLike, steps: int = 20
) -> MixingReport:
    """Iterate the lazy walk on ``f`` and compare against the spectral contraction.

    Raises:
        HypothesisError: if ``t`` is outside ``(0, 1/(2·d_max))`` or ``f`` has the wrong size.
    """
    Q = laplacian(g, SignKind.UNDERLYING)
    d_max = float(np.max(np.diag(Q))) if g.n else 0.0
    if d_max <= 0:
        raise HypothesisError("The lazy walk needs at least one edge", reason="no-edges")
    if not 0 < t < 1.0 / (2.0 * d_max):
        raise HypothesisError(
            f"t = {t} must lie in (0, {1.0 / (2.0 * d_max):.6g})", reason="t-out-of-range"
        )
    x = np.asarray(f, dtype=float)
    if x.shape != (g.n,):
        raise HypothesisError(f"f has shape {x.shape}, expected ({g.n},)", reason="bad-shape")

    mu2 = algebraic_connectivity(Q)
    contraction = 1.0 - t * mu2
    P = np.eye(g.n) - t * Q
    norm = float(np.linalg.norm(x))
    mean = float(np.mean(x))
    rows = []
    for step in range(1, steps + 1):
        x = P @ x
        rows.append(
            MixingStep(step, float(np.linalg.norm(x - mean)), contraction**step * norm)
        )
    return MixingReport(t=t, mu2=mu2, contraction=contraction, steps=tuple(rows))


# --------------------------------------------------------------------------
# Repelling consensus dynamics
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DynamicsTrajectory:
    """States of ``X(t+1) = (I − (α·L₊ − β·L₋))·X(t)``, negative edges repelling.

    Attributes:
        states: Row t is X(t).
        disagreement: ``‖X(t) − mean(X(t))·1‖`` per step.
        fitted_rate: Ratio of the last two disagreements (0 when consensus is exact).
        predicted_rate: ``max |1 − α·λ_k|`` over the restricted spectrum of ``L₊ − (β/α)·L₋``.
    """

    alpha: float
    beta: float
    states: np.ndarray
    disagreement: np.ndarray
    fitted_rate: float
    predicted_rate: float

    @property
    def diverges(self) -> bool:
        return self.fitted_rate > 1.0

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.disagreement) <= BOUND_TOL))


def predicted_dynamics_rate(g: SignedGraph, alpha: float, beta: float) -> float:
    L = laplacian(g, SignKind.POSITIVE) - (beta / alpha) * laplacian(g, SignKind.NEGATIVE)
    spectrum = restricted_spectrum(L)
    if spectrum.size == 0:
        return 0.0
    return float(np.max(np.abs(1.0 - alpha * spectrum)))


def simulate_repelling_dynamics(
    g: SignedGraph, alpha: float, beta: float, x0: npt.ArrayLike, steps: int
) -> DynamicsTrajectory:
    """Iterate the repelling consensus update and fit its geometric rate.

    The mean of X is invariant; the disagreement decays (or grows) at the rate of the
    dominant non-constant mode.

    Raises:
        HypothesisError: if ``alpha`` is not positive or ``x0`` has the wrong size.
    """
    if alpha <= 0:
        raise HypothesisError(f"alpha must be positive, got {alpha}", reason="alpha-nonpositive")
    x = np.asarray(x0, dtype=float)
    if x.shape != (g.n,):
        raise HypothesisError(f"x0 has shape {x.shape}, expected ({g.n},)", reason="bad-shape")

    update = (
        np.eye(g.n)
        - alpha * laplacian(g, SignKind.POSITIVE)
        + beta * laplacian(g, SignKind.NEGATIVE)
    )
    states = np.empty((steps + 1, g.n))
    states[0] = x
    for step in range(steps):
        states[step + 1] = update @ states[step]
    disagreement = np.linalg.norm(states - states.mean(axis=1, keepdims=True), axis=1)

    fitted = 0.0
    if steps >= 1 and disagreement[-2] > 0:
        fitted = float(disagreement[-1] / disagreement[-2])
    predicted = predicted_dynamics_rate(g, alpha, beta)
    logger.info(f"Repelling dynamics rate: fitted {fitted:.9g}, predicted {predicted:.9g}")
    return DynamicsTrajectory(
        alpha=alpha,
        beta=beta,
        states=states,
        disagreement=disagreement,
        fitted_rate=fitted,
        predicted_rate=predicted,
    )
