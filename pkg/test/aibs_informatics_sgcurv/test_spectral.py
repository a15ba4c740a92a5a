import numpy as np
import scipy.linalg
from aibs_informatics_test_resources import does_not_raise
from pytest import mark, param, raises

from aibs_informatics_sgcurv.exceptions import ConvergenceError, NotSymmetricError, NumericalError
from aibs_informatics_sgcurv.signed_graph import SignedGraph, SignKind
from aibs_informatics_sgcurv.spectral import (
    EigenMethod,
    algebraic_connectivity,
    as_sym_matrix,
    eigen_sym,
    laplacian,
    laplacian_from_weights,
    matrix_exp,
    pseudoinverse_laplacian,
    psd_rank,
    restricted_spectrum,
)


def _random_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    A = rng.standard_normal((n, n))
    return (A + A.T) / 2.0


@mark.parametrize(
    "matrix, raises_error",
    [
        param([[1.0, 2.0], [2.0, 1.0]], does_not_raise(), id="symmetric"),
        param([[1.0, 2.0], [2.0 + 1e-14, 1.0]], does_not_raise(), id="within tolerance"),
        param([[1.0, 2.0], [2.1, 1.0]], raises(NotSymmetricError), id="asymmetric"),
        param([[1.0, 2.0, 3.0]], raises(NotSymmetricError), id="not square"),
        param([[np.inf, 0.0], [0.0, 1.0]], raises(NotSymmetricError), id="not finite"),
    ],
)
def test__as_sym_matrix__validates_input(matrix, raises_error):
    with raises_error:
        as_sym_matrix(matrix)


def test__laplacian__signed_split_adds_up():
    graph = SignedGraph.from_edges(3, [(0, 1, 2.0, 1), (1, 2, 1.0, -1), (0, 2, 0.5, 1)])
    L = laplacian(graph)
    np.testing.assert_allclose(
        L, laplacian(graph, SignKind.POSITIVE) + laplacian(graph, SignKind.NEGATIVE)
    )
    np.testing.assert_allclose(L.sum(axis=1), 0.0, atol=1e-14)
    np.testing.assert_allclose(np.diag(L), [2.5, 3.0, 1.5])


def test__laplacian_from_weights__ignores_diagonal():
    L = laplacian_from_weights([[5.0, 1.0], [1.0, 7.0]])
    np.testing.assert_allclose(L, [[1.0, -1.0], [-1.0, 1.0]])


@mark.parametrize("method", [param(m, id=str(m)) for m in EigenMethod])
def test__eigen_sym__reconstructs_random_matrices(rng, method):
    for n in (1, 2, 5, 9):
        M = _random_symmetric(rng, n)
        decomposition = eigen_sym(M, method=method)
        assert np.all(np.diff(decomposition.eigenvalues) >= 0)
        assert decomposition.reconstruction_error(M) < 1e-10
        assert decomposition.orthonormality_error() < 1e-10
        assert decomposition.residual < 1e-10


def test__eigen_sym__jacobi_matches_lapack(rng):
    for n in (3, 6, 10):
        M = _random_symmetric(rng, n)
        jacobi = eigen_sym(M, method=EigenMethod.JACOBI)
        lapack = eigen_sym(M, method=EigenMethod.LAPACK)
        np.testing.assert_allclose(jacobi.eigenvalues, lapack.eigenvalues, atol=1e-10)
        # canonical signs make simple eigenvectors comparable
        np.testing.assert_allclose(jacobi.eigenvectors, lapack.eigenvectors, atol=1e-8)
        assert jacobi.sweeps is not None and lapack.sweeps is None


def test__eigen_sym__tol_only_loosens_jacobi(rng):
    M = _random_symmetric(rng, 6)
    loose = eigen_sym(M, tol=1e-2, method=EigenMethod.LAPACK)
    np.testing.assert_array_equal(loose.eigenvalues, eigen_sym(M).eigenvalues)
    assert loose.residual < 1e-10

    coarse = eigen_sym(M, tol=1e-2, method=EigenMethod.JACOBI)
    fine = eigen_sym(M, method=EigenMethod.JACOBI)
    assert coarse.sweeps <= fine.sweeps


def test__eigen_sym__jacobi_sweep_cap_raises(rng):
    M = _random_symmetric(rng, 6)
    with raises(ConvergenceError) as exc_info:
        eigen_sym(M, method=EigenMethod.JACOBI, max_sweeps=1)
    assert exc_info.value.residual is not None


def test__eigen_sym__canonical_sign_convention():
    decomposition = eigen_sym([[2.0, 1.0], [1.0, 2.0]])
    for k in range(2):
        column = decomposition.eigenvectors[:, k]
        assert column[np.argmax(np.abs(column))] > 0


@mark.parametrize(
    "matrix, expected",
    [
        param(np.diag([0.0, 1.0, 2.0]), (True, 2), id="psd rank deficient"),
        param(np.diag([-1.0, 0.0, 2.0]), (False, 2), id="indefinite"),
        param(np.eye(3), (True, 3), id="identity"),
    ],
)
def test__psd_rank__counts_nonzero_magnitudes(matrix, expected):
    assert psd_rank(matrix) == expected


def test__restricted_spectrum__removes_constant_mode():
    # K_3 Laplacian: eigenvalues 0, 3, 3
    L = 3 * np.eye(3) - np.ones((3, 3))
    np.testing.assert_allclose(restricted_spectrum(L), [3.0, 3.0])
    assert np.isclose(algebraic_connectivity(L), 3.0)
    assert restricted_spectrum(np.zeros((1, 1))).size == 0
    assert algebraic_connectivity(np.zeros((1, 1))) == 0.0


def test__restricted_spectrum__sees_negative_mode_beyond_threshold():
    # signed triangle with negative edge weight 1 at ε = 0.6 > ε₀ = 0.5
    L = laplacian_from_weights([[0, 1, -0.6], [1, 0, 1], [-0.6, 1, 0]])
    assert algebraic_connectivity(L) < 0
    assert psd_rank(L)[0] is False


def test__pseudoinverse_laplacian__moore_penrose_conditions(rng):
    weights = rng.uniform(0.5, 2.0, (6, 6))
    L = laplacian_from_weights((weights + weights.T) / 2.0)
    P = pseudoinverse_laplacian(L)

    np.testing.assert_allclose(L @ P @ L, L, atol=1e-10)
    np.testing.assert_allclose(P @ L @ P, P, atol=1e-10)
    np.testing.assert_allclose(P.sum(axis=1), 0.0, atol=1e-12)
    np.testing.assert_allclose(P, np.linalg.pinv(L), atol=1e-10)


def test__pseudoinverse_laplacian__disconnected_raises():
    L = laplacian_from_weights([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    with raises(NumericalError):
        pseudoinverse_laplacian(L)


def test__matrix_exp__matches_scipy_and_semigroup(rng):
    weights = rng.uniform(0.5, 2.0, (5, 5))
    L = laplacian_from_weights((weights + weights.T) / 2.0)
    np.testing.assert_allclose(matrix_exp(L, 0.3), scipy.linalg.expm(-0.3 * L), atol=1e-12)
    np.testing.assert_allclose(
        matrix_exp(L, 0.1) @ matrix_exp(L, 0.2), matrix_exp(L, 0.3), atol=1e-12
    )
    np.testing.assert_allclose(matrix_exp(L, 0.0), np.eye(5), atol=1e-14)
