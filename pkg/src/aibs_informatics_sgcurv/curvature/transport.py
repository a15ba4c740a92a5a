"""Exact Wasserstein-1 transport on small supports."""

from __future__ import annotations

__all__ = [
    "TransportPlan",
    "w1_exact",
    "w1_brute_force",
    "product_plan_cost",
]

import itertools
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import numpy.typing as npt
import ot
from aibs_informatics_core.utils.logging import get_logger

from aibs_informatics_sgcurv.constants.numerics import (
    DISTRIBUTION_SUM_TOL,
    DUALITY_GAP_TOL,
    MARGINAL_TOL,
)
from aibs_informatics_sgcurv.exceptions import TransportError

logger = get_logger(__name__)

# brute-force vertex enumeration is limited to supports of this size
BRUTE_FORCE_MAX_SUPPORT = 4


@dataclass(frozen=True)
class TransportPlan:
    """Optimal coupling between two distributions.

    Attributes:
        plan: Nonnegative matrix Π with row sums ``source`` and column sums ``target``.
        value: ``Σ Π(k,l)·cost(k,l)``.
        source: Source marginal.
        target: Target marginal.
        cost: Ground cost matrix.
        dual_potentials: ``(φ, ψ)`` with ``φ(x) + ψ(y) <= cost(x,y)``, or None.
    """

    plan: np.ndarray
    value: float
    source: np.ndarray
    target: np.ndarray
    cost: np.ndarray
    dual_potentials: Optional[Tuple[np.ndarray, np.ndarray]] = None

    @property
    def marginal_error(self) -> float:
        return max(
            float(np.max(np.abs(self.plan.sum(axis=1) - self.source))),
            float(np.max(np.abs(self.plan.sum(axis=0) - self.target))),
        )

    @property
    def dual_infeasibility(self) -> Optional[float]:
        if self.dual_potentials is None:
            return None
        phi, psi = self.dual_potentials
        return max(0.0, float(np.max(phi[:, None] + psi[None, :] - self.cost)))

    @property
    def duality_gap(self) -> Optional[float]:
        if self.dual_potentials is None:
            return None
        phi, psi = self.dual_potentials
        return abs(self.value - float(self.source @ phi + self.target @ psi))


def _as_distribution(x: npt.ArrayLike, name: str, size: int) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.shape != (size,):
        raise TransportError(f"{name} has shape {arr.shape}, expected ({size},)")
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise TransportError(f"{name} must be finite and nonnegative")
    if abs(float(arr.sum()) - 1.0) > DISTRIBUTION_SUM_TOL:
        raise TransportError(f"{name} sums to {arr.sum():.17g}, not 1")
    return arr


def _validate(
    cost: npt.ArrayLike, mu: npt.ArrayLike, nu: npt.ArrayLike
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    C = np.asarray(cost, dtype=float)
    if C.ndim != 2 or not np.all(np.isfinite(C)):
        raise TransportError(f"Cost must be a finite matrix, got shape {C.shape}")
    return C, _as_distribution(mu, "mu", C.shape[0]), _as_distribution(nu, "nu", C.shape[1])


def _extend_duals(
    C: np.ndarray, rows: np.ndarray, cols: np.ndarray, u: np.ndarray, v: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    # c-transforms keep feasibility off the supports without changing the dual objective
    phi = np.zeros(C.shape[0])
    psi = np.zeros(C.shape[1])
    phi[rows] = u
    psi[cols] = v
    off_rows = np.setdiff1d(np.arange(C.shape[0]), rows)
    off_cols = np.setdiff1d(np.arange(C.shape[1]), cols)
    if off_rows.size:
        phi[off_rows] = np.min(C[np.ix_(off_rows, cols)] - v[None, :], axis=1)
    if off_cols.size:
        psi[off_cols] = np.min(C[:, off_cols] - phi[:, None], axis=0)
    return phi, psi


def w1_exact(cost: npt.ArrayLike, mu: npt.ArrayLike, nu: npt.ArrayLike) -> TransportPlan:
    """Solve the transportation problem exactly with the network simplex.

    The problem is restricted to the supports of ``mu`` and ``nu``; the dual potentials
    returned by the solver are extended to all points by c-transforms and checked.

    Raises:
        TransportError: if the marginals are not distributions of matching size or the
            solver does not return an optimal basis.
    """
    C, a, b = _validate(cost, mu, nu)
    rows = np.flatnonzero(a > 0)
    cols = np.flatnonzero(b > 0)
    sub_cost = np.ascontiguousarray(C[np.ix_(rows, cols)])

    sub_plan, log = ot.emd(a[rows], b[cols], sub_cost, log=True)
    if log.get("warning") is not None:
        msg = f"Network simplex did not reach optimality: {log['warning']}"
        logger.error(msg)
        raise TransportError(msg)

    plan = np.zeros_like(C)
    plan[np.ix_(rows, cols)] = sub_plan
    duals = _extend_duals(C, rows, cols, np.asarray(log["u"]), np.asarray(log["v"]))
    result = TransportPlan(
        plan=plan,
        value=float(np.sum(sub_plan * sub_cost)),
        source=a,
        target=b,
        cost=C,
        dual_potentials=duals,
    )

    if result.marginal_error > MARGINAL_TOL:
        msg = f"Transport plan misses its marginals by {result.marginal_error:.3e}"
        logger.error(msg)
        raise TransportError(msg)
    gap = result.duality_gap or 0.0
    infeasibility = result.dual_infeasibility or 0.0
    if gap > DUALITY_GAP_TOL * max(1.0, result.value) or infeasibility > MARGINAL_TOL:
        logger.warning(
            f"Transport optimality not certified: gap {gap:.3e}, "
            f"dual infeasibility {infeasibility:.3e}"
        )
    return result


def w1_brute_force(cost: npt.ArrayLike, mu: npt.ArrayLike, nu: npt.ArrayLike) -> float:
    """Minimum cost over the vertices of the transport polytope.

    Every vertex is a basic solution supported on ``m + n − 1`` cells; all such cell sets are
    enumerated and the nonnegative solutions kept.

    Raises:
        TransportError: if a support exceeds ``BRUTE_FORCE_MAX_SUPPORT`` points.
    """
    C, a, b = _validate(cost, mu, nu)
    rows = np.flatnonzero(a > 0)
    cols = np.flatnonzero(b > 0)
    m, n = rows.size, cols.size
    if max(m, n) > BRUTE_FORCE_MAX_SUPPORT:
        raise TransportError(
            f"Supports of size ({m}, {n}) exceed the brute-force limit {BRUTE_FORCE_MAX_SUPPORT}"
        )
    sub_cost = C[np.ix_(rows, cols)].ravel()
    constraints = np.zeros((m + n, m * n))
    for k in range(m):
        constraints[k, k * n : (k + 1) * n] = 1.0
    for col in range(n):
        constraints[m + col, col::n] = 1.0
    rhs = np.concatenate([a[rows], b[cols]])

    best = np.inf
    for cells in itertools.combinations(range(m * n), m + n - 1):
        basis = constraints[:, list(cells)]
        x, *_ = np.linalg.lstsq(basis, rhs, rcond=None)
        if np.max(np.abs(basis @ x - rhs)) > MARGINAL_TOL or np.min(x) < -MARGINAL_TOL:
            continue
        best = min(best, float(sub_cost[list(cells)] @ x))
    return float(best)


def product_plan_cost(cost: npt.ArrayLike, mu: npt.ArrayLike, nu: npt.ArrayLike) -> float:
    """Cost of the independent coupling ``Π(k,l) = mu(k)·nu(l)``, an upper bound on W1."""
    C, a, b = _validate(cost, mu, nu)
    return float(a @ C @ b)
