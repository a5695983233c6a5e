import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from metalin.core.exceptions import (
    InvalidDimensionError,
    NotPositiveDefiniteError,
    NotSymmetricError,
)
from metalin.utils.numerics.linalg import cholesky, spd_solve, spectral_map, symmetrize
from metalin.utils.numerics.sampling import (
    gaussian_matrix,
    gaussian_stack,
    make_rng,
    random_orthogonal,
)


def _spd(rng, d, log_cond):
    V = random_orthogonal(rng, d)
    A = (V * np.logspace(0.0, log_cond, d)) @ V.T
    return symmetrize(A)


@seed(7)
@settings(max_examples=60, deadline=None)
@given(
    draw=st.integers(min_value=0, max_value=2**32 - 1),
    d=st.integers(min_value=1, max_value=8),
    log_cond=st.floats(min_value=0.0, max_value=6.0),
)
def test_spd_solve_recovers_solution(draw, d, log_cond):
    rng = np.random.default_rng(draw)
    A = _spd(rng, d, log_cond)
    X0 = rng.standard_normal((d, 2))
    X = spd_solve(A, A @ X0)
    assert np.max(np.abs(X - X0)) <= 1e-8 * np.max(np.abs(X0))


@seed(11)
@settings(max_examples=40, deadline=None)
@given(
    draw=st.integers(min_value=0, max_value=2**32 - 1),
    d=st.integers(min_value=1, max_value=12),
)
def test_random_orthogonal_is_a_rotation(draw, d):
    V = random_orthogonal(np.random.default_rng(draw), d)
    assert np.allclose(V.T @ V, np.eye(d), atol=1e-10)
    assert np.linalg.det(V) == pytest.approx(1.0, abs=1e-8)


def test_batched_solve_matches_single(rng):
    A = np.stack([_spd(rng, 4, 3.0) for _ in range(6)])
    vectors = rng.standard_normal((6, 4))
    matrices = rng.standard_normal((6, 4, 3))
    for t in range(6):
        assert np.allclose(spd_solve(A, vectors)[t], spd_solve(A[t], vectors[t]))
        assert np.allclose(spd_solve(A, matrices)[t], spd_solve(A[t], matrices[t]))


def test_cholesky_rejects_indefinite_and_asymmetric():
    with pytest.raises(NotPositiveDefiniteError):
        cholesky(np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(NotPositiveDefiniteError):
        cholesky(np.zeros((2, 2)))
    with pytest.raises(NotSymmetricError):
        cholesky(np.array([[2.0, 1.0], [0.0, 2.0]]))
    with pytest.raises(InvalidDimensionError):
        cholesky(np.ones((2, 3)))


def test_spectral_map_identity_and_square(rng):
    A = _spd(rng, 5, 2.0)
    assert np.allclose(spectral_map(A, lambda lam: lam), A)
    assert np.allclose(spectral_map(A, lambda lam: lam**2), A @ A)


def test_gaussian_matrix_covariance(rng):
    cov = np.array([[2.0, 0.5], [0.5, 1.0]])
    X = gaussian_matrix(rng, 200_000, 2, cov)
    assert np.allclose(X.T @ X / X.shape[0], cov, atol=0.03)
    with pytest.raises(InvalidDimensionError):
        gaussian_matrix(rng, 10, 3, cov)


def test_gaussian_stack_shape(rng):
    chol = np.stack([np.eye(3), 2.0 * np.eye(3)])
    X = gaussian_stack(rng, 50_000, chol)
    assert X.shape == (2, 50_000, 3)
    assert np.var(X[1]) == pytest.approx(4.0, rel=0.05)


def test_make_rng_is_keyed():
    assert make_rng(5, 1).random() == make_rng(5, 1).random()
    assert make_rng(5, 1).random() != make_rng(5, 2).random()
    assert make_rng(5).random() != make_rng(6).random()


def test_random_orthogonal_rejects_empty_dimension(rng):
    with pytest.raises(InvalidDimensionError):
        random_orthogonal(rng, 0)
