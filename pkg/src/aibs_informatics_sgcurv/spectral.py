"""Dense real symmetric linear algebra for graph Laplacians."""

from __future__ import annotations

__all__ = [
    "SymMatrix",
    "EigenMethod",
    "SpectralDecomposition",
    "as_sym_matrix",
    "laplacian",
    "laplacian_from_weights",
    "eigen_sym",
    "psd_rank",
    "restricted_spectrum",
    "algebraic_connectivity",
    "pseudoinverse_laplacian",
    "matrix_exp",
]

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import numpy.typing as npt
import scipy.linalg
from aibs_informatics_core.collections import StrEnum
from aibs_informatics_core.utils.logging import get_logger

from aibs_informatics_sgcurv.constants.numerics import (
    JACOBI_MAX_SWEEPS,
    LAPLACIAN_ROW_SUM_TOL,
    PINV_ROUTE_TOL,
    RELATIVE_ZERO_TOL,
    SYMMETRY_TOL,
)
from aibs_informatics_sgcurv.exceptions import ConvergenceError, NotSymmetricError, NumericalError
from aibs_informatics_sgcurv.signed_graph import SignedGraph, SignKind

logger = get_logger(__name__)

SymMatrix = npt.NDArray[np.float64]

JACOBI_OFF_DIAGONAL_TOL = 1e-14


class EigenMethod(StrEnum):
    LAPACK = "lapack"
    JACOBI = "jacobi"


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenpairs of a symmetric matrix.

    Attributes:
        eigenvalues: ascending eigenvalues.
        eigenvectors: orthonormal eigenvectors as columns, canonical signs.
        residual: max |Mv - λv| over all pairs.
        method: solver that produced the decomposition.
        sweeps: Jacobi sweeps used (None for LAPACK).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float
    method: EigenMethod = EigenMethod.LAPACK
    sweeps: Optional[int] = None

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> SymMatrix:
        U = self.eigenvectors
        return (U * self.eigenvalues) @ U.T

    def reconstruction_error(self, M: SymMatrix) -> float:
        return float(np.max(np.abs(M - self.reconstruct()), initial=0.0))

    def orthonormality_error(self) -> float:
        U = self.eigenvectors
        return float(np.max(np.abs(U.T @ U - np.eye(len(self))), initial=0.0))


# --------------------------------------------------------------------------
# Construction
# --------------------------------------------------------------------------


def as_sym_matrix(M: npt.ArrayLike, tol: float = SYMMETRY_TOL) -> SymMatrix:
    """Validate and symmetrize a square matrix.

    The symmetry tolerance is absolute for matrices with entries of magnitude <= 1 and
    relative to the largest entry otherwise.

    Raises:
        NotSymmetricError: if the input is not square, not finite or not symmetric.
    """
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotSymmetricError(f"Expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NotSymmetricError("Matrix has non-finite entries")
    asymmetry = float(np.max(np.abs(A - A.T), initial=0.0))
    scale = max(1.0, float(np.max(np.abs(A), initial=0.0)))
    if asymmetry > tol * scale:
        raise NotSymmetricError(f"Matrix is not symmetric (max |M - Mᵀ| = {asymmetry:.3e})")
    return (A + A.T) / 2.0


def laplacian_from_weights(weights: npt.ArrayLike) -> SymMatrix:
    """Laplacian ``diag(W·1) − W`` of a symmetric (possibly signed) weight matrix."""
    W = as_sym_matrix(weights)
    np.fill_diagonal(W, 0.0)
    return np.diag(W.sum(axis=1)) - W


def laplacian(g: SignedGraph, which: SignKind = SignKind.UNDERLYING) -> SymMatrix:
    """Laplacian of the positive subgraph, negative subgraph or underlying graph."""
    return laplacian_from_weights(g.weight_matrix(SignKind(which)))


# --------------------------------------------------------------------------
# Eigensolvers
# --------------------------------------------------------------------------


def _canonicalize_signs(U: np.ndarray) -> np.ndarray:
    # largest-magnitude component nonnegative, first index wins ties
    U = U.copy()
    for k in range(U.shape[1]):
        idx = int(np.argmax(np.abs(U[:, k])))
        if U[idx, k] < 0:
            U[:, k] = -U[:, k]
    return U


def _jacobi_eigh(
    M: SymMatrix, off_tol: float, max_sweeps: int
) -> Tuple[np.ndarray, np.ndarray, int]:
    n = M.shape[0]
    A = M.copy()
    V = np.eye(n)
    scale = max(1.0, float(np.linalg.norm(M)))

    for sweep in range(max_sweeps + 1):
        off = float(np.sqrt(np.sum(np.triu(A, 1) ** 2)))
        if off <= off_tol * scale:
            return np.diag(A).copy(), V, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                col_p, col_q = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p, row_q = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q

                vec_p, vec_q = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vec_p - s * vec_q
                V[:, q] = s * vec_p + c * vec_q

    residual = float(np.max(np.abs(M @ V - V * np.diag(A)), initial=0.0))
    msg = (
        f"Jacobi eigensolver did not converge after {max_sweeps} sweeps "
        f"(residual {residual:.3e})"
    )
    logger.error(msg)
    raise ConvergenceError(msg, residual=residual)


def eigen_sym(
    M: npt.ArrayLike,
    tol: Optional[float] = None,
    method: EigenMethod = EigenMethod.LAPACK,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> SpectralDecomposition:
    """Eigendecomposition of a symmetric matrix with ascending eigenvalues.

    Args:
        M: Symmetric matrix.
        tol: Relative off-diagonal threshold for the Jacobi sweeps. The ``lapack`` route
            runs to machine precision and ignores it.
        method: ``lapack`` (``numpy.linalg.eigh``) or ``jacobi`` (cyclic rotations).
        max_sweeps: Jacobi sweep cap.

    Raises:
        NotSymmetricError: if ``M`` is not symmetric.
        ConvergenceError: if the Jacobi sweeps hit the cap.

    Returns:
        Decomposition with canonical eigenvector signs.
    """
    A = as_sym_matrix(M)
    method = EigenMethod(method)
    sweeps: Optional[int] = None
    if A.shape[0] == 0:
        return SpectralDecomposition(np.zeros(0), np.zeros((0, 0)), 0.0, method)

    if method == EigenMethod.JACOBI:
        eigenvalues, eigenvectors, sweeps = _jacobi_eigh(
            A, tol if tol is not None else JACOBI_OFF_DIAGONAL_TOL, max_sweeps
        )
    else:
        eigenvalues, eigenvectors = np.linalg.eigh(A)

    order = np.argsort(eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    eigenvectors = _canonicalize_signs(eigenvectors[:, order])
    residual = float(np.max(np.abs(A @ eigenvectors - eigenvectors * eigenvalues), initial=0.0))
    return SpectralDecomposition(eigenvalues, eigenvectors, residual, method, sweeps)


def _default_zero_tol(eigenvalues: np.ndarray) -> float:
    return RELATIVE_ZERO_TOL * max(1.0, float(np.max(np.abs(eigenvalues), initial=0.0)))


def psd_rank(M: npt.ArrayLike, zero_tol: Optional[float] = None) -> Tuple[bool, int]:
    """Positive semidefiniteness and numerical rank.

    Returns:
        ``(is_psd, rank)`` where ``is_psd`` iff ``λ₁ >= -zero_tol`` and ``rank`` counts
        eigenvalues with ``|λ| > zero_tol``.
    """
    eigenvalues = eigen_sym(M).eigenvalues
    if zero_tol is None:
        zero_tol = _default_zero_tol(eigenvalues)
    if len(eigenvalues) == 0:
        return True, 0
    is_psd = bool(eigenvalues[0] >= -zero_tol)
    rank = int(np.count_nonzero(np.abs(eigenvalues) > zero_tol))
    return is_psd, rank


def restricted_spectrum(M: npt.ArrayLike) -> np.ndarray:
    """Ascending eigenvalues of ``M`` restricted to the complement of constants."""
    A = as_sym_matrix(M)
    n = A.shape[0]
    if n <= 1:
        return np.zeros(0)
    basis = scipy.linalg.null_space(np.ones((1, n)))
    return np.linalg.eigvalsh(basis.T @ A @ basis)


def algebraic_connectivity(M: npt.ArrayLike) -> float:
    """Smallest eigenvalue on the complement of constants (0 for a single vertex)."""
    spectrum = restricted_spectrum(M)
    return float(spectrum[0]) if len(spectrum) else 0.0


# --------------------------------------------------------------------------
# Pseudoinverse and exponential
# --------------------------------------------------------------------------


def pseudoinverse_laplacian(
    M: npt.ArrayLike,
    zero_tol: Optional[float] = None,
    route_tol: float = PINV_ROUTE_TOL,
) -> SymMatrix:
    """Moore–Penrose pseudoinverse of a matrix whose null space is exactly span{1}.

    Computed by the eigen route ``U·diag(1/λ)·Uᵀ`` over nonzero eigenpairs and
    cross-checked against the shift route ``(M + J)⁻¹ − J`` with ``J = 11ᵀ/n``.

    Raises:
        NumericalError: if the null space is not span{1} or the routes disagree.
    """
    A = as_sym_matrix(M)
    n = A.shape[0]
    decomposition = eigen_sym(A)
    eigenvalues = decomposition.eigenvalues
    if zero_tol is None:
        zero_tol = _default_zero_tol(eigenvalues)

    scale = max(1.0, float(np.max(np.abs(A), initial=0.0)))
    ones_residual = float(np.max(np.abs(A.sum(axis=1)), initial=0.0))
    nonzero = np.abs(eigenvalues) > zero_tol
    if int(nonzero.sum()) != n - 1 or ones_residual > LAPLACIAN_ROW_SUM_TOL * scale:
        msg = (
            f"Null space is not span{{1}}: rank {int(nonzero.sum())} (expected {n - 1}), "
            f"|M·1| = {ones_residual:.3e}"
        )
        logger.error(msg)
        raise NumericalError(msg, residual=ones_residual)

    U = decomposition.eigenvectors[:, nonzero]
    eigen_route = (U / eigenvalues[nonzero]) @ U.T

    J = np.full((n, n), 1.0 / n)
    try:
        shift_route = np.linalg.inv(A + J) - J
    except np.linalg.LinAlgError as e:
        msg = f"Shifted Laplacian is singular: {e}"
        logger.error(msg)
        raise NumericalError(msg) from e

    disagreement = float(np.max(np.abs(eigen_route - shift_route), initial=0.0))
    pinv_scale = max(1.0, float(np.max(np.abs(eigen_route), initial=0.0)))
    if disagreement > route_tol * pinv_scale:
        msg = f"Pseudoinverse routes disagree by {disagreement:.3e}"
        logger.error(msg)
        raise NumericalError(msg, residual=disagreement)
    return (eigen_route + eigen_route.T) / 2.0


def matrix_exp(M: npt.ArrayLike, t: float) -> SymMatrix:
    """The semigroup ``exp(−M·t)`` of a symmetric matrix."""
    decomposition = eigen_sym(M)
    U = decomposition.eigenvectors
    return (U * np.exp(-decomposition.eigenvalues * t)) @ U.T
