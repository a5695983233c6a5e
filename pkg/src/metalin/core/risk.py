import math
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from ..utils.numerics.sampling import gaussian_matrix
from .constants.enums import LossKind, MethodKind
from .estimators import (
    Datasets,
    adapt,
    bamaml_posterior,
    fit_theta0,
    population_weights,
    weighted_centroid,
)
from .exceptions import UnsupportedMethodError
from .models.methods import MethodConfig
from .models.reports import RiskReport
from .models.tasks import TaskBatch, TaskSpec
from .taskgen import split_sizes

NOISE_FLOOR = 1.0


def _pool(tasks: Sequence[TaskSpec]) -> tuple[NDArray, NDArray]:
    if len(tasks) == 0:
        raise ValueError("task list must be non-empty")
    return np.stack([task.Q for task in tasks]), np.stack([task.theta_gt for task in tasks])


def _mean_quadratic(W: NDArray, thetas: NDArray, theta0: NDArray) -> float:
    delta = theta0[None, :] - thetas
    return float(np.mean(np.einsum("ti,tij,tj->t", delta, W, delta)))


def population_risk(
    cfg: MethodConfig, theta0: NDArray, tasks: Sequence[TaskSpec], s: float
) -> float:
    Qs, thetas = _pool(tasks)
    return _mean_quadratic(population_weights(cfg, Qs, s), thetas, theta0) + NOISE_FLOOR


def statistical_error(
    cfg: MethodConfig,
    theta0_hat: NDArray,
    theta0_star: NDArray,
    tasks: Sequence[TaskSpec],
    s: float,
) -> float:
    Qs, _ = _pool(tasks)
    W_bar = population_weights(cfg, Qs, s).mean(axis=0)
    delta = np.asarray(theta0_hat) - np.asarray(theta0_star)
    return float(delta @ W_bar @ delta)


def decompose(
    cfg: MethodConfig, datasets: Datasets, tasks: Sequence[TaskSpec], s: float
) -> RiskReport:
    """Fit on ``datasets`` and split the meta-test risk over the ``tasks`` pool.

    ``s`` is the split the datasets were drawn with. The population weights use
    the realised ratio ``N1 / N`` of the datasets, which is the one the fitted
    initialization sees when ``s * N`` is not an integer.
    """
    batch = TaskBatch.from_datasets(datasets)
    if split_sizes(batch.n, s)[0] != batch.n_train:
        raise ValueError(
            f"datasets have N1={batch.n_train} of N={batch.n}, which split s={s} does not give"
        )
    Qs, thetas = _pool(tasks)
    W = population_weights(cfg, Qs, batch.s)
    theta0_hat = fit_theta0(cfg, batch)
    theta0_star = weighted_centroid(W, thetas)
    delta = theta0_hat - theta0_star
    return RiskReport(
        method=cfg,
        theta0_hat=theta0_hat,
        theta0_star=theta0_star,
        optimal_population_risk=_mean_quadratic(W, thetas, theta0_star) + NOISE_FLOOR,
        statistical_error=float(delta @ W.mean(axis=0) @ delta),
        total_risk=_mean_quadratic(W, thetas, theta0_hat) + NOISE_FLOOR,
    )


def _labels(
    rng: np.random.Generator, X: NDArray, task: TaskSpec, noiseless: bool
) -> NDArray:
    noise = rng.standard_normal(X.shape[0]) * task.noise_sigma
    return X @ task.theta_gt + (0.0 if noiseless else noise)


def adapted_test_loss(
    cfg: MethodConfig,
    theta0: NDArray,
    task: TaskSpec,
    rng: np.random.Generator,
    n_adapt: int,
    n_test: int,
    loss: LossKind = LossKind.SQUARED,
    noiseless: bool = False,
) -> float:
    """Adapt on fresh task data and score on a fresh test set."""
    if n_adapt < 1 or n_test < 1:
        raise ValueError("n_adapt and n_test must be >= 1")
    X_a = gaussian_matrix(rng, n_adapt, task.d, task.Q)
    y_a = _labels(rng, X_a, task, noiseless)
    X_t = gaussian_matrix(rng, n_test, task.d, task.Q)
    y_t = _labels(rng, X_t, task, noiseless)

    if LossKind(loss) == LossKind.SQUARED:
        theta = adapt(cfg, theta0, X_a, y_a)
        return float(np.mean((y_t - X_t @ theta) ** 2))

    if cfg.kind == MethodKind.BAMAML:
        posterior = bamaml_posterior(theta0, X_a, y_a, cfg.gamma_b(n_adapt))
        mean = X_t @ posterior.mean
        var = task.noise_sigma**2 + np.einsum("ni,ij,nj->n", X_t, posterior.cov, X_t)
    else:
        mean = X_t @ adapt(cfg, theta0, X_a, y_a)
        var = np.full(n_test, task.noise_sigma**2)
    nll = 0.5 * np.log(2.0 * math.pi * var) + (y_t - mean) ** 2 / (2.0 * var)
    return float(np.mean(nll))


def finite_adaptation_risk(
    cfg: MethodConfig, theta0: NDArray, tasks: Sequence[TaskSpec], n_adapt: int
) -> float:
    """Exact meta-test risk with ``n_adapt`` Gaussian adaptation samples."""
    if n_adapt < 1:
        raise ValueError("n_adapt must be >= 1")
    Qs, thetas = _pool(tasks)
    if cfg.kind == MethodKind.ERM:
        return _mean_quadratic(Qs, thetas, theta0) + NOISE_FLOOR
    if cfg.kind != MethodKind.MAML:
        raise UnsupportedMethodError(
            f"finite-sample adaptation risk is only available for ERM and MAML, not {cfg}"
        )

    Q2 = Qs @ Qs
    tr_Q2 = np.trace(Q2, axis1=-2, axis2=-1)
    scale = cfg.alpha**2 / n_adapt
    W = population_weights(cfg, Qs, 1.0) + scale * (Q2 @ Qs + tr_Q2[:, None, None] * Qs)
    return _mean_quadratic(W, thetas, theta0) + NOISE_FLOOR + scale * float(np.mean(tr_Q2))


def bamaml_wins(bamaml_risk: float, maml_risk: float) -> bool:
    """Strict comparison; ties go to MAML."""
    return bamaml_risk < maml_risk
