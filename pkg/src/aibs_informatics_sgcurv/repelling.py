"""The ε-repelling Laplacian and everything derived from it at a fixed ε.

``L_ε = L₊ − ε·L₋`` is the Laplacian of the graph reweighted by ``w⁺ − ε·w⁻``. Below the
consensus index ε₀ it is positive semidefinite with null space span{1}, its pseudoinverse
defines the ε-repelling cost ``Ω(i,j) = (e_i − e_j)ᵀ L_ε† (e_i − e_j)`` and the vertices
embed as a simplex whose squared edge lengths are Ω.
"""

from __future__ import annotations

__all__ = [
    "ConsensusIndex",
    "EdgeConsensusBound",
    "ConsensusUpperBound",
    "SimplexData",
    "RepellingAnalysis",
    "TriangleViolation",
    "TriangleReport",
    "AltitudeComparison",
    "MonotonicityViolation",
    "MonotonicityReport",
    "repelling_laplacian",
    "repelling_lambda2",
    "consensus_index",
    "effective_resistance",
    "consensus_upper_bound",
    "balanced_not_psd_witness",
    "balanced_lemma_applies",
    "cost_matrix_from_pinv",
    "repelling_cost_matrix",
    "sqrt_cost_metric_check",
    "simplex_embedding",
    "block_identity_residual",
    "altitude_check",
    "graph_resistance",
    "resistance_bracket",
    "monotonicity_check",
    "weighted_trace_residual",
    "trace_identity_residual",
    "omega_definiteness",
]

from dataclasses import dataclass, field, replace
from multiprocessing.pool import ThreadPool
from typing import List, Optional, Sequence, Tuple

import numpy as np
from aibs_informatics_core.utils.logging import get_logger
from aibs_informatics_core.utils.multiprocessing import parallel_starmap

from aibs_informatics_sgcurv.constants.numerics import (
    BLOCK_IDENTITY_TOL,
    BOUND_TOL,
    CONSENSUS_BISECTION_TOL,
    CONSENSUS_CURVE_SAMPLES,
    CONSENSUS_MAX_DOUBLINGS,
    METRIC_SLACK_TOL,
    MONOTONICITY_TOL,
    OMEGA_ROUTE_TOL,
    SIMPLEX_TOL,
)
from aibs_informatics_sgcurv.exceptions import (
    HypothesisError,
    NegativeCycleAssumptionError,
    NumericalError,
    RepellingRangeError,
    SignedGraphError,
)
from aibs_informatics_sgcurv.signed_graph import (
    Edge,
    SignedGraph,
    SignKind,
    balance_check,
    degrees,
    find_negative_edges_sharing_cycle,
    is_connected,
    is_positive_connected,
)
from aibs_informatics_sgcurv.spectral import (
    SpectralDecomposition,
    SymMatrix,
    algebraic_connectivity,
    eigen_sym,
    laplacian,
    laplacian_from_weights,
    pseudoinverse_laplacian,
)

logger = get_logger(__name__)

# λ₂ counts as positive above this fraction of the spectral scale
ROOT_SIGN_TOL = 1e-12


# --------------------------------------------------------------------------
# Consensus index
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ConsensusIndex:
    """Sign-change point ε₀ of ε ↦ λ₂(L₊ − ε·L₋).

    Attributes:
        value: ε₀, or None when unbounded (no negative edges, or no sign change found).
        bracket: final bisection interval ``(lo, hi)``.
        lambda2_at: sampled ``(ε, λ₂(ε))`` pairs for reporting.
        tol: bisection tolerance.
        capped: True when the doubling cap was hit without a sign change.
    """

    value: Optional[float]
    bracket: Optional[Tuple[float, float]] = None
    lambda2_at: Tuple[Tuple[float, float], ...] = ()
    tol: float = CONSENSUS_BISECTION_TOL
    capped: bool = False

    @property
    def unbounded(self) -> bool:
        return self.value is None

    def as_float(self) -> float:
        return float("inf") if self.value is None else self.value

    def admits(self, eps: float) -> bool:
        """True iff ``eps`` lies strictly below ε₀."""
        return self.value is None or eps < self.value


def repelling_laplacian(g: SignedGraph, eps: float) -> SymMatrix:
    """``L₊ − eps·L₋``; ``eps = −1`` gives the underlying Laplacian."""
    weights = g.weight_matrix(SignKind.POSITIVE) - eps * g.weight_matrix(SignKind.NEGATIVE)
    return laplacian_from_weights(weights)


def repelling_lambda2(g: SignedGraph, eps: float) -> float:
    """Smallest eigenvalue of ``L_ε`` on the complement of constants."""
    return algebraic_connectivity(repelling_laplacian(g, eps))


def _require_positive_connected(g: SignedGraph) -> None:
    if not is_positive_connected(g):
        msg = "The positive subgraph does not span a connected graph"
        logger.error(msg)
        raise HypothesisError(msg, reason="not-positive-connected")


def consensus_index(
    g: SignedGraph,
    tol: float = CONSENSUS_BISECTION_TOL,
    max_doublings: int = CONSENSUS_MAX_DOUBLINGS,
    curve_samples: int = CONSENSUS_CURVE_SAMPLES,
) -> ConsensusIndex:
    """Bisect the root of ε ↦ λ₂(L₊ − ε·L₋).

    λ₂ is concave and nonincreasing for ε >= 0 (an infimum of affine functions), so the
    sign change is unique. The bracket is seeded with ``λ₂(L₊)/λ_max(L₋)`` (Weyl) and
    doubled until λ₂ turns nonpositive.

    Args:
        g: Positive-connected signed graph.
        tol: Width of the final bisection interval.
        max_doublings: Cap on bracket doublings.
        curve_samples: Number of ``(ε, λ₂)`` samples reported on ``[0, ε₀]``.

    Raises:
        HypothesisError: if ``g`` is not positive-connected.

    Returns:
        The consensus index (unbounded when E₋ is empty).
    """
    _require_positive_connected(g)
    if not g.has_negative_edges:
        logger.info("No negative edges; consensus index is unbounded")
        return ConsensusIndex(value=None, tol=tol)

    L_plus = laplacian(g, SignKind.POSITIVE)
    L_minus = laplacian(g, SignKind.NEGATIVE)
    lambda2_plus = algebraic_connectivity(L_plus)
    lambda_max_minus = float(eigen_sym(L_minus).eigenvalues[-1])
    threshold = ROOT_SIGN_TOL * max(1.0, float(eigen_sym(L_plus).eigenvalues[-1]))

    def is_positive(eps: float) -> bool:
        return algebraic_connectivity(L_plus - eps * L_minus) > threshold

    lo = lambda2_plus / lambda_max_minus
    if not is_positive(lo):
        lo, hi = 0.0, lo
    else:
        hi = 2.0 * lo
        doublings = 0
        while is_positive(hi):
            doublings += 1
            if doublings >= max_doublings:
                logger.warning(
                    f"No sign change of λ₂ found after {max_doublings} doublings "
                    f"(ε up to {hi:.3e}); reporting an unbounded consensus index"
                )
                return ConsensusIndex(value=None, bracket=(lo, hi), tol=tol, capped=True)
            lo, hi = hi, 2.0 * hi

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if is_positive(mid):
            lo = mid
        else:
            hi = mid
        logger.debug(f"Consensus bisection bracket [{lo:.12g}, {hi:.12g}]")

    value = 0.5 * (lo + hi)
    samples = tuple(
        (float(eps), algebraic_connectivity(L_plus - eps * L_minus))
        for eps in np.linspace(0.0, value, max(curve_samples, 2))
    )
    logger.info(f"Consensus index ε₀ = {value:.12g}")
    return ConsensusIndex(value=value, bracket=(lo, hi), lambda2_at=samples, tol=tol)


# --------------------------------------------------------------------------
# Classical resistance and the consensus upper bound
# --------------------------------------------------------------------------


def cost_matrix_from_pinv(pinv: SymMatrix) -> SymMatrix:
    """``ζ1ᵀ + 1ζᵀ − 2·L†`` with ζ the diagonal of the pseudoinverse."""
    zeta = np.diag(pinv)
    omega = zeta[:, None] + zeta[None, :] - 2.0 * pinv
    np.fill_diagonal(omega, 0.0)
    return (omega + omega.T) / 2.0


def effective_resistance(g: SignedGraph, which: SignKind = SignKind.UNDERLYING) -> SymMatrix:
    """Classical effective resistance of a sign class (or of the underlying graph).

    Raises:
        HypothesisError: if the selected subgraph is not connected.
    """
    if not is_connected(g, which):
        msg = f"Effective resistance needs a connected {which} subgraph"
        logger.error(msg)
        raise HypothesisError(msg, reason=f"{which}-disconnected")
    return cost_matrix_from_pinv(pseudoinverse_laplacian(laplacian(g, which)))


@dataclass(frozen=True)
class EdgeConsensusBound:
    edge: Edge
    weight: float
    resistance: float
    bound: float


@dataclass(frozen=True)
class ConsensusUpperBound:
    edges: Tuple[EdgeConsensusBound, ...]

    @property
    def value(self) -> Optional[float]:
        return min((e.bound for e in self.edges), default=None)


def consensus_upper_bound(
    g: SignedGraph, require_no_negative_cycle: bool = True
) -> ConsensusUpperBound:
    """Per negative edge, the bound ``ε₀ <= 1/(w_ij·r_ij)``.

    ``r_ij`` is the effective resistance between the endpoints in the positive subgraph.

    Args:
        g: Positive-connected signed graph.
        require_no_negative_cycle: Enforce that no two distinct negative edges lie on a
            common cycle.

    Raises:
        HypothesisError: if ``g`` is not positive-connected.
        NegativeCycleAssumptionError: if two negative edges share a cycle.
    """
    _require_positive_connected(g)
    if require_no_negative_cycle:
        pair = find_negative_edges_sharing_cycle(g)
        if pair is not None:
            msg = f"Negative edges {pair[0]} and {pair[1]} lie on a common cycle"
            logger.error(msg)
            raise NegativeCycleAssumptionError(msg, edge_pair=pair)

    resistance = effective_resistance(g, SignKind.POSITIVE)
    bounds = tuple(
        EdgeConsensusBound(
            edge=e.key,
            weight=e.weight,
            resistance=float(resistance[e.u, e.v]),
            bound=1.0 / (e.weight * float(resistance[e.u, e.v])),
        )
        for e in g.negative_edges
    )
    return ConsensusUpperBound(edges=bounds)


# --------------------------------------------------------------------------
# Balanced graphs
# --------------------------------------------------------------------------


def balanced_not_psd_witness(
    g: SignedGraph, eps: float, a: float = 0.0
) -> Optional[np.ndarray]:
    """Test vector with ``fᵀ L_ε f < 0`` on a balanced graph with negative edges.

    ``f`` is 1 on the Harary side of vertex 0 and ``a`` on the other side, so only the
    negative edges across contribute: ``fᵀ L_ε f = −ε·Σ w⁻ (1 − a)²``.

    Returns:
        The witness, or None when E₋ is empty.

    Raises:
        HypothesisError: if the graph is unbalanced, ``eps <= 0`` or ``a == 1``.
    """
    if eps <= 0:
        raise HypothesisError(f"epsilon must be positive, got {eps}", reason="epsilon-nonpositive")
    if a == 1.0:
        raise HypothesisError("a must differ from 1", reason="degenerate-witness")
    verdict = balance_check(g)
    if not verdict.balanced or verdict.bipartition is None:
        msg = "Signed graph is not balanced"
        logger.error(msg)
        raise HypothesisError(msg, reason="unbalanced")
    if not g.has_negative_edges:
        return None

    f = np.full(g.n, a, dtype=float)
    f[sorted(verdict.bipartition)] = 1.0
    value = float(f @ repelling_laplacian(g, eps) @ f)
    if value >= 0:
        raise NumericalError(f"Witness quadratic form is {value:.3e}, expected < 0")
    return f


def balanced_lemma_applies(g: SignedGraph) -> bool:
    """Whether ``g`` is balanced, positive-connected and has negative edges.

    A spanning connected positive subgraph puts every vertex on one Harary side, so a
    balanced graph satisfying it has no negative edges: this is always False.
    """
    if not g.has_negative_edges or not is_positive_connected(g):
        return False
    return balance_check(g).balanced


# --------------------------------------------------------------------------
# Repelling analysis
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SimplexData:
    """Simplex whose vertex Gram matrix is ``L_ε†``.

    Attributes:
        vertex_matrix: n×(n−1) matrix S whose rows are the vertices (centroid at 0).
        circumradius: R.
        barycentric_circumcenter: r with ``1ᵀr = 1`` and ``Ω·r = 2R²·1``.
        altitudes: ``l_i = 1/√L_ε(i,i)``.
    """

    vertex_matrix: np.ndarray
    circumradius: float
    barycentric_circumcenter: np.ndarray
    altitudes: np.ndarray


@dataclass(frozen=True)
class RepellingAnalysis:
    graph: SignedGraph
    epsilon: float
    laplacian: SymMatrix
    pinv: SymMatrix
    omega: SymMatrix
    spectrum: SpectralDecomposition
    graph_resistance: float
    consensus: Optional[ConsensusIndex] = None
    simplex: Optional[SimplexData] = None

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def zeta(self) -> np.ndarray:
        return np.diag(self.pinv).copy()

    @property
    def lambda2(self) -> float:
        return float(self.spectrum.eigenvalues[1]) if self.n > 1 else 0.0


def _omega_by_shift(L: SymMatrix) -> SymMatrix:
    n = L.shape[0]
    J = np.full((n, n), 1.0 / n)
    return cost_matrix_from_pinv(np.linalg.inv(L + J))


def repelling_cost_matrix(
    g: SignedGraph,
    eps: float,
    consensus: Optional[ConsensusIndex] = None,
    with_simplex: bool = False,
) -> RepellingAnalysis:
    """Build the ε-repelling cost matrix Ω and the spectral data around it.

    Ω is computed from the pseudoinverse as ``ζ1ᵀ + 1ζᵀ − 2L†`` and cross-checked against
    the quadratic forms of ``(L_ε + 11ᵀ/n)⁻¹``.

    Args:
        g: Positive-connected signed graph.
        eps: Repelling parameter, strictly below ε₀ (negative values allowed).
        consensus: Optionally precomputed consensus index, attached to the result.
        with_simplex: Attach the simplex embedding (needs at least two vertices).

    Raises:
        HypothesisError: if ``g`` is not positive-connected.
        RepellingRangeError: if ``L_ε`` is not positive semidefinite of rank n−1.
        NumericalError: if the two Ω routes disagree.
    """
    _require_positive_connected(g)
    L = repelling_laplacian(g, eps)
    spectrum = eigen_sym(L)
    if g.n > 1:
        lambda2 = algebraic_connectivity(L)
        threshold = ROOT_SIGN_TOL * max(1.0, float(np.max(np.abs(spectrum.eigenvalues))))
        if lambda2 <= threshold:
            bound = consensus.value if consensus is not None else None
            msg = f"epsilon {eps:.12g} is not below the consensus index" + (
                f" {bound:.12g}" if bound is not None else ""
            )
            logger.error(msg)
            raise RepellingRangeError(msg, epsilon=eps, consensus_index=bound)

    pinv = pseudoinverse_laplacian(L)
    omega = cost_matrix_from_pinv(pinv)
    if g.n > 1:
        disagreement = float(np.max(np.abs(omega - _omega_by_shift(L))))
        if disagreement > OMEGA_ROUTE_TOL * max(1.0, float(np.max(omega))):
            msg = f"Ω routes disagree by {disagreement:.3e}"
            logger.error(msg)
            raise NumericalError(msg, residual=disagreement)

    analysis = RepellingAnalysis(
        graph=g,
        epsilon=float(eps),
        laplacian=L,
        pinv=pinv,
        omega=omega,
        spectrum=spectrum,
        graph_resistance=float(np.triu(omega, 1).sum()),
        consensus=consensus,
    )
    if with_simplex and g.n > 1:
        analysis = replace(analysis, simplex=simplex_embedding(analysis))
    logger.info(f"Built repelling analysis at ε = {eps:.12g}, W = {analysis.graph_resistance:.6g}")
    return analysis


# --------------------------------------------------------------------------
# Metric structure of Ω
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TriangleViolation:
    """``d(i,j) > d(i,k) + d(k,j)`` by ``-slack``."""

    i: int
    k: int
    j: int
    slack: float


@dataclass(frozen=True)
class TriangleReport:
    violations: Tuple[TriangleViolation, ...]
    omega_violations: Tuple[TriangleViolation, ...]

    @property
    def sqrt_is_metric(self) -> bool:
        return not self.violations

    @property
    def omega_is_metric(self) -> bool:
        return not self.omega_violations


def _triangle_violations(distance: np.ndarray, tol: float) -> Tuple[TriangleViolation, ...]:
    # slack[i, k, j] = d(i,k) + d(k,j) − d(i,j)
    slack = distance[:, :, None] + distance[None, :, :] - distance[:, None, :]
    violations = []
    for i, k, j in zip(*np.nonzero(slack < -tol)):
        if i < j and k != i and k != j:
            violations.append(TriangleViolation(int(i), int(k), int(j), float(slack[i, k, j])))
    return tuple(violations)


def sqrt_cost_metric_check(omega: SymMatrix, tol: float = METRIC_SLACK_TOL) -> TriangleReport:
    """Triangle inequality of √Ω (violations) and, informationally, of Ω itself."""
    omega = np.asarray(omega, dtype=float)
    return TriangleReport(
        violations=_triangle_violations(np.sqrt(np.clip(omega, 0.0, None)), tol),
        omega_violations=_triangle_violations(omega, tol),
    )


# --------------------------------------------------------------------------
# Simplex geometry
# --------------------------------------------------------------------------


def block_identity_residual(analysis: RepellingAnalysis, simplex: SimplexData) -> float:
    """Max deviation from identity of ``−½[[0, 1ᵀ], [1, Ω]] · [[4R², −2rᵀ], [−2r, L_ε]]``."""
    n = analysis.n
    ones = np.ones(n)
    r = simplex.barycentric_circumcenter
    left = np.zeros((n + 1, n + 1))
    left[0, 1:] = ones
    left[1:, 0] = ones
    left[1:, 1:] = analysis.omega
    right = np.zeros((n + 1, n + 1))
    right[0, 0] = 4.0 * simplex.circumradius**2
    right[0, 1:] = -2.0 * r
    right[1:, 0] = -2.0 * r
    right[1:, 1:] = analysis.laplacian
    product = -0.5 * left @ right
    return float(np.max(np.abs(product - np.eye(n + 1))))


def simplex_embedding(analysis: RepellingAnalysis) -> SimplexData:
    """Vertex coordinates, circumsphere and altitudes of the simplex of ``L_ε``.

    Raises:
        NumericalError: if Ω is singular or the geometric identities fail.
    """
    n = analysis.n
    if n < 2:
        raise HypothesisError("A simplex needs at least two vertices", reason="too-small")
    spectrum = analysis.spectrum
    U = spectrum.eigenvectors[:, 1:]
    S = U / np.sqrt(spectrum.eigenvalues[1:])

    gram_error = float(np.max(np.abs(S @ S.T - analysis.pinv)))
    if gram_error > SIMPLEX_TOL * max(1.0, float(np.max(np.abs(analysis.pinv)))):
        raise NumericalError(f"S·Sᵀ deviates from L_ε† by {gram_error:.3e}", residual=gram_error)

    bordered = np.zeros((n + 1, n + 1))
    bordered[:n, :n] = analysis.omega
    bordered[:n, n] = -1.0
    bordered[n, :n] = 1.0
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0
    try:
        solution = np.linalg.solve(bordered, rhs)
    except np.linalg.LinAlgError as e:
        msg = f"Ω is singular at ε = {analysis.epsilon}: {e}"
        logger.error(msg)
        raise NumericalError(msg) from e
    r, two_r_squared = solution[:n], float(solution[n])
    if two_r_squared <= 0:
        raise NumericalError(f"Non-positive squared circumradius {two_r_squared / 2:.3e}")

    simplex = SimplexData(
        vertex_matrix=S,
        circumradius=float(np.sqrt(two_r_squared / 2.0)),
        barycentric_circumcenter=r,
        altitudes=1.0 / np.sqrt(np.diag(analysis.laplacian)),
    )
    residual = block_identity_residual(analysis, simplex)
    scale = max(1.0, float(np.max(analysis.omega)) * float(np.max(np.abs(analysis.laplacian))))
    if residual > BLOCK_IDENTITY_TOL * scale:
        msg = f"Bordered Ω/L_ε block product deviates from identity by {residual:.3e}"
        logger.error(msg)
        raise NumericalError(msg, residual=residual)
    return simplex


@dataclass(frozen=True)
class AltitudeComparison:
    vertex: int
    repelling: float
    underlying: float

    @property
    def holds(self) -> bool:
        return self.repelling >= self.underlying - BOUND_TOL

    @property
    def equal(self) -> bool:
        return abs(self.repelling - self.underlying) <= BOUND_TOL


def altitude_check(g: SignedGraph, eps: float) -> List[AltitudeComparison]:
    """Altitudes of the ε-simplex against those of the underlying (ε = −1) simplex.

    For ε > −1 each altitude can only grow, with equality exactly at vertices without
    negative edges.
    """
    d_plus, d_minus = degrees(g)
    if np.any(d_plus - eps * d_minus <= 0):
        raise HypothesisError(
            f"L_ε has a nonpositive diagonal entry at ε = {eps}", reason="epsilon-out-of-range"
        )
    repelling = 1.0 / np.sqrt(d_plus - eps * d_minus)
    underlying = 1.0 / np.sqrt(d_plus + d_minus)
    return [
        AltitudeComparison(i, float(repelling[i]), float(underlying[i]))
        for i in range(g.n)
    ]


# --------------------------------------------------------------------------
# Graph resistance and monotonicity
# --------------------------------------------------------------------------


def resistance_bracket(analysis: RepellingAnalysis) -> Tuple[float, float, float]:
    """``(|V|/λ₂, W_ε, |V|(|V|−1)/λ₂)``."""
    n = analysis.n
    lambda2 = analysis.lambda2
    return n / lambda2, analysis.graph_resistance, n * (n - 1) / lambda2


def graph_resistance(analysis: RepellingAnalysis, tol: float = 1e-8) -> float:
    """``W_ε = Σ_{i<j} Ω(i,j)``, checked against ``|V|·Σ_{k>=2} 1/λ_k``.

    Raises:
        NumericalError: if the spectral identity or the λ₂ bracket fails.
    """
    W = analysis.graph_resistance
    if analysis.n < 2:
        return W
    spectral = analysis.n * float(np.sum(1.0 / analysis.spectrum.eigenvalues[1:]))
    if abs(W - spectral) > tol * max(1.0, abs(W)):
        msg = f"W_ε = {W} but |V|·tr(L_ε†) = {spectral}"
        logger.error(msg)
        raise NumericalError(msg, residual=abs(W - spectral))

    lower, _, upper = resistance_bracket(analysis)
    slack = tol * max(1.0, W)
    strict_lower = analysis.n >= 3
    if (strict_lower and not W > lower) or W < lower - slack or W > upper + slack:
        raise NumericalError(f"W_ε = {W} outside [{lower}, {upper}]")
    return W


@dataclass(frozen=True)
class MonotonicityViolation:
    i: int
    j: int
    eps_low: float
    eps_high: float
    decrease: float


@dataclass(frozen=True)
class MonotonicityReport:
    grid: Tuple[float, ...]
    graph_resistance: Tuple[float, ...]
    violations: Tuple[MonotonicityViolation, ...] = field(default_factory=tuple)

    @property
    def holds(self) -> bool:
        return not self.violations


def monotonicity_check(
    g: SignedGraph,
    eps_grid: Sequence[float],
    consensus: Optional[ConsensusIndex] = None,
    tol: float = MONOTONICITY_TOL,
) -> MonotonicityReport:
    """Verify that every Ω entry is nondecreasing along an ascending ε grid.

    Raises:
        SignedGraphError: if the grid is empty or not ascending.
        RepellingRangeError: if a grid point is not below ε₀.
    """
    grid = [float(e) for e in eps_grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise SignedGraphError(f"eps_grid must be nonempty and strictly ascending: {grid}")
    consensus = consensus or consensus_index(g)
    if not consensus.admits(grid[-1]):
        msg = f"Grid point {grid[-1]} is not below the consensus index {consensus.value}"
        logger.error(msg)
        raise RepellingRangeError(msg, epsilon=grid[-1], consensus_index=consensus.value)

    analyses: List[RepellingAnalysis] = parallel_starmap(
        repelling_cost_matrix, [(g, eps) for eps in grid], {"consensus": consensus}, ThreadPool
    )

    violations = []
    iu = np.triu_indices(g.n, 1)
    for low, high in zip(analyses, analyses[1:]):
        diff = (high.omega - low.omega)[iu]
        for idx in np.nonzero(diff < -tol)[0]:
            violations.append(
                MonotonicityViolation(
                    int(iu[0][idx]), int(iu[1][idx]), low.epsilon, high.epsilon, float(-diff[idx])
                )
            )
    return MonotonicityReport(
        grid=tuple(grid),
        graph_resistance=tuple(a.graph_resistance for a in analyses),
        violations=tuple(violations),
    )


# --------------------------------------------------------------------------
# Identities
# --------------------------------------------------------------------------


def weighted_trace_residual(analysis: RepellingAnalysis) -> float:
    """``|Σ_{i,j} (w⁺ − ε·w⁻)_{ij} Ω(i,j) − 2(|V| − 1)|``."""
    g = analysis.graph
    weights = g.weight_matrix(SignKind.POSITIVE) - analysis.epsilon * g.weight_matrix(
        SignKind.NEGATIVE
    )
    return abs(float(np.sum(weights * analysis.omega)) - 2.0 * (analysis.n - 1))


def trace_identity_residual(analysis: RepellingAnalysis, B: np.ndarray) -> float:
    """``|Σ_{i,j} (L B L)_{ij} Ω(i,j) + 2·tr(L B)|`` for a symmetric B."""
    L = analysis.laplacian
    return abs(float(np.sum((L @ B @ L) * analysis.omega)) + 2.0 * float(np.trace(L @ B)))


def omega_definiteness(
    analysis: RepellingAnalysis, samples: int = 32, seed: int = 0
) -> Tuple[float, float]:
    """``(1ᵀΩ1, max xᵀΩx)`` over sampled unit vectors x ⊥ 1.

    Ω is invertible because the first value is positive and the second negative.
    """
    n = analysis.n
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((samples, n))
    x -= x.mean(axis=1, keepdims=True)
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    forms = np.einsum("si,ij,sj->s", x, analysis.omega, x)
    return float(np.sum(analysis.omega)), float(np.max(forms))

