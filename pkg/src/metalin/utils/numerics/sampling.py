import numpy as np
from numpy.typing import NDArray

from ...core.exceptions import InvalidDimensionError
from .linalg import cholesky


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for ``seed`` and an optional spawn key, e.g. ``(cell_index,)``."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=key))


def random_orthogonal(rng: np.random.Generator, d: int) -> NDArray:
    """Haar-distributed rotation in SO(d) from the QR of a Gaussian matrix."""
    if d < 1:
        raise InvalidDimensionError(f"dimension must be >= 1, got {d}")
    Z = rng.standard_normal((d, d))
    V, R = np.linalg.qr(Z)
    V = V * np.sign(np.diag(R))
    if np.linalg.det(V) < 0:
        V[:, 0] = -V[:, 0]
    return V


def gaussian_matrix(rng: np.random.Generator, n: int, d: int, cov: NDArray) -> NDArray:
    if n < 1 or d < 1:
        raise InvalidDimensionError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    cov = np.atleast_2d(np.asarray(cov, dtype=np.float64))
    if cov.shape != (d, d):
        raise InvalidDimensionError(f"covariance has shape {cov.shape}, expected {(d, d)}")
    L = cholesky(cov)
    return rng.standard_normal((n, d)) @ L.T


def gaussian_stack(rng: np.random.Generator, n: int, chol: NDArray) -> NDArray:
    """``(T, n, d)`` rows where slice ``t`` has covariance ``chol[t] @ chol[t].T``."""
    T, d, _ = chol.shape
    return rng.standard_normal((T, n, d)) @ np.swapaxes(chol, -1, -2)
