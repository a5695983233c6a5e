import math
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from ..utils.numerics.linalg import cholesky
from ..utils.numerics.sampling import (
    gaussian_matrix,
    gaussian_stack,
    random_orthogonal,
)
from .constants.enums import Regime
from .exceptions import InvalidSplitError
from .models.tasks import TaskBatch, TaskDataset, TaskDistribution, TaskSpec


def general_distribution(
    rng: np.random.Generator,
    d: int,
    theta_low: float = 0.0,
    theta_high: float = 2.0,
    lambda_low: float = 0.1,
    lambda_high: float = 2.0,
) -> TaskDistribution:
    """Uniform parameters and eigenvalues around one Haar rotation drawn here."""
    return TaskDistribution(
        d=d,
        regime=Regime.GENERAL,
        theta_low=theta_low,
        theta_high=theta_high,
        lambda_low=lambda_low,
        lambda_high=lambda_high,
        shared_V=random_orthogonal(rng, d),
    )


def linear_centroid_distribution(
    d: int, centroid: Optional[NDArray] = None, spread: float = 1.0
) -> TaskDistribution:
    return TaskDistribution(
        d=d,
        regime=Regime.LINEAR_CENTROID,
        lambda_low=1.0,
        lambda_high=1.0,
        centroid=None if centroid is None else np.asarray(centroid, dtype=np.float64),
        spread=spread,
    )


def sample_task(rng: np.random.Generator, dist: TaskDistribution) -> TaskSpec:
    d = dist.d
    if dist.regime == Regime.LINEAR_CENTROID:
        theta = dist.centroid + rng.normal(0.0, dist.spread / math.sqrt(d), size=d)
        return TaskSpec(theta_gt=theta, Q=np.eye(d))

    theta = rng.uniform(dist.theta_low, dist.theta_high, size=d)
    lam = rng.uniform(dist.lambda_low, dist.lambda_high, size=d)
    V = dist.shared_V
    Q = (V * lam) @ V.T
    return TaskSpec(theta_gt=theta, Q=0.5 * (Q + Q.T))


def sample_tasks(
    rng: np.random.Generator, dist: TaskDistribution, count: int
) -> list[TaskSpec]:
    return [sample_task(rng, dist) for _ in range(count)]


def split_sizes(N: int, s: float) -> tuple[int, int]:
    """Train/validation sizes with N1 = round(s * N), ties away from zero."""
    n_train = int(math.floor(s * N + 0.5))
    if not 0 < s < 1 or n_train < 1 or n_train > N - 1:
        raise InvalidSplitError(N, s, n_train)
    return n_train, N - n_train


def sample_dataset(
    rng: np.random.Generator,
    task: TaskSpec,
    N: int,
    s: float,
    noiseless: bool = False,
) -> TaskDataset:
    n_train, _ = split_sizes(N, s)
    X = gaussian_matrix(rng, N, task.d, task.Q)
    noise = rng.standard_normal(N) * task.noise_sigma
    y = X @ task.theta_gt + (0.0 if noiseless else noise)
    return TaskDataset(
        X_trn=X[:n_train], y_trn=y[:n_train], X_val=X[n_train:], y_val=y[n_train:]
    )


def sample_batch(
    rng: np.random.Generator,
    tasks: Sequence[TaskSpec],
    N: int,
    s: float,
    noiseless: bool = False,
) -> TaskBatch:
    """One dataset per task, generated in a single vectorized draw."""
    n_train, _ = split_sizes(N, s)
    chol = cholesky(np.stack([task.Q for task in tasks]))
    thetas = np.stack([task.theta_gt for task in tasks])
    X = gaussian_stack(rng, N, chol)
    noise = rng.standard_normal((len(tasks), N))
    y = np.einsum("tnd,td->tn", X, thetas) + (0.0 if noiseless else noise)
    return TaskBatch(
        X_trn=X[:, :n_train],
        y_trn=y[:, :n_train],
        X_val=X[:, n_train:],
        y_val=y[:, n_train:],
    )


def empirical_Q(X: NDArray) -> NDArray:
    """``X^T X / n`` for one ``(n, d)`` matrix or a ``(T, n, d)`` stack."""
    n = X.shape[-2]
    return np.swapaxes(X, -1, -2) @ X / n
