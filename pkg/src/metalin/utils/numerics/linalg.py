from typing import Callable

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from ...core.exceptions import (
    InvalidDimensionError,
    NotPositiveDefiniteError,
    NotSymmetricError,
)

SYMMETRY_RTOL = 1e-12
PIVOT_RTOL = 1e-12


def symmetrize(A: NDArray) -> NDArray:
    return 0.5 * (A + np.swapaxes(A, -1, -2))


def check_symmetric(A: NDArray) -> None:
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise InvalidDimensionError(f"expected square matrices, got shape {A.shape}")
    scale = max(float(np.max(np.abs(A), initial=0.0)), np.finfo(float).tiny)
    asymmetry = float(np.max(np.abs(A - np.swapaxes(A, -1, -2)), initial=0.0))
    if asymmetry > SYMMETRY_RTOL * scale:
        raise NotSymmetricError(
            f"matrix asymmetry {asymmetry:.3e} exceeds {SYMMETRY_RTOL:g} relative"
        )


def _check_pivots(L: NDArray, A: NDArray) -> None:
    pivots = np.diagonal(L, axis1=-2, axis2=-1) ** 2
    scale = np.max(np.abs(np.diagonal(A, axis1=-2, axis2=-1)), axis=-1, keepdims=True)
    if np.any(pivots <= PIVOT_RTOL * scale):
        raise NotPositiveDefiniteError(
            f"non-positive pivot (min {float(np.min(pivots)):.3e})"
        )


def cholesky(A: NDArray) -> NDArray:
    """Lower Cholesky factor of a symmetric positive definite matrix or stack."""
    A = np.asarray(A, dtype=np.float64)
    check_symmetric(A)
    try:
        if A.ndim == 2:
            L = linalg.cholesky(A, lower=True, check_finite=True)
        else:
            L = np.linalg.cholesky(A)
    except (linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        raise NotPositiveDefiniteError(f"Cholesky factorization failed: {exc}") from exc
    _check_pivots(L, A)
    return L


def spd_solve(A: NDArray, B: NDArray) -> NDArray:
    """Solve ``A X = B`` for SPD ``A`` through its Cholesky factor.

    ``A`` may be a single ``d x d`` matrix or a stack ``(..., d, d)``; ``B`` is
    either matching vectors ``(..., d)`` or matrices ``(..., d, k)``.
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    L = cholesky(A)
    if A.ndim == 2:
        return linalg.cho_solve((L, True), B, check_finite=False)

    vector = B.ndim == A.ndim - 1
    rhs = B[..., None] if vector else B
    Z = np.linalg.solve(L, rhs)
    X = np.linalg.solve(np.swapaxes(L, -1, -2), Z)
    return X[..., 0] if vector else X


def spectral_map(A: NDArray, fn: Callable[[NDArray], NDArray]) -> NDArray:
    """Apply ``fn`` to the eigenvalues of symmetric ``A`` (or a stack of them)."""
    lam, U = np.linalg.eigh(A)
    values = fn(lam)
    return symmetrize((U * values[..., None, :]) @ np.swapaxes(U, -1, -2))
