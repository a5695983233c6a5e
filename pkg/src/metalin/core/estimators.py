"""Closed-form adaptation rules, weight matrices and meta-level solvers.

Every meta-training objective here is a quadratic in ``theta0``. Each task
contributes a symmetric weight ``W_t`` and a right-hand side ``b_t``, and the
fitted initialization solves ``(sum_t W_t) theta0 = sum_t b_t``.
"""

from typing import Sequence, Union

import numpy as np
from numpy.typing import NDArray

from ..utils.numerics.linalg import spd_solve, spectral_map, symmetrize
from .constants.enums import MethodKind
from .exceptions import (
    DegenerateDistributionError,
    NotPositiveDefiniteError,
    UnderDeterminedError,
)
from .models.methods import GaussianPosterior, MethodConfig
from .models.tasks import TaskBatch, TaskDataset, TaskSpec
from .taskgen import empirical_Q

Datasets = Union[TaskBatch, Sequence[TaskDataset]]


def weight_spectrum(cfg: MethodConfig, lam: NDArray, s: float) -> NDArray:
    """Eigenvalues of the population weight for covariance eigenvalues ``lam``."""
    match cfg.kind:
        case MethodKind.ERM:
            return lam
        case MethodKind.MAML:
            return (1.0 - cfg.alpha * lam) ** 2 * lam
        case MethodKind.IMAML:
            return lam / (1.0 + lam / cfg.gamma) ** 2
        case MethodKind.BAMAML:
            if not 0 < s <= 1:
                raise ValueError(f"split ratio must lie in (0, 1], got {s}")
            return lam / ((1.0 + lam / (s * cfg.gamma)) * (1.0 + lam / cfg.gamma))
    raise ValueError(f"unknown method {cfg.kind}")


def population_weights(cfg: MethodConfig, Qs: NDArray, s: float) -> NDArray:
    return spectral_map(np.asarray(Qs, dtype=np.float64), lambda lam: weight_spectrum(cfg, lam, s))


def population_weight(cfg: MethodConfig, Q: NDArray, s: float) -> NDArray:
    return population_weights(cfg, np.atleast_2d(Q), s)


def _cross(X: NDArray, y: NDArray) -> NDArray:
    return np.einsum("tnd,tn->td", X, y)


def _right_solve(A: NDArray, P: NDArray) -> NDArray:
    """``P A^{-1}`` for SPD ``A``."""
    return np.swapaxes(spd_solve(A, np.swapaxes(P, -1, -2)), -1, -2)


def normal_equations(cfg: MethodConfig, datasets: Datasets) -> tuple[NDArray, NDArray]:
    """Per-task ``(W_t, b_t)`` stacks of shape ``(T, d, d)`` and ``(T, d)``."""
    batch = TaskBatch.from_datasets(datasets)
    n1, n2, n = batch.n_train, batch.n_val, batch.n
    eye = np.eye(batch.d)
    Q_trn = empirical_Q(batch.X_trn)
    Q_val = empirical_Q(batch.X_val)
    b_trn = _cross(batch.X_trn, batch.y_trn) / n1
    b_val = _cross(batch.X_val, batch.y_val) / n2

    match cfg.kind:
        case MethodKind.ERM:
            W = (n1 * Q_trn + n2 * Q_val) / n
            b = (n1 * b_trn + n2 * b_val) / n
        case MethodKind.MAML:
            M = eye - cfg.alpha * Q_trn
            W = M @ Q_val @ M
            inner = b_val - cfg.alpha * np.einsum("tij,tj->ti", Q_val, b_trn)
            b = np.einsum("tij,tj->ti", M, inner)
        case MethodKind.IMAML:
            A = Q_trn + cfg.gamma * eye
            W = cfg.gamma**2 * _right_solve(A, spd_solve(A, Q_val))
            inner = b_val - np.einsum("tij,tj->ti", Q_val, spd_solve(A, b_trn))
            b = cfg.gamma * spd_solve(A, inner)
        case MethodKind.BAMAML:
            Q_all = (n1 * Q_trn + n2 * Q_val) / n
            Q_rest = (n * Q_all - n1 * Q_trn) / n2
            A_all = eye + Q_all / (cfg.gamma * n1 / n)
            A_trn = eye + Q_trn / cfg.gamma
            W = _right_solve(A_trn, spd_solve(A_all, Q_rest))
            b = (
                spd_solve(A_all, n1 * b_trn + n2 * b_val) - spd_solve(A_trn, n1 * b_trn)
            ) / n2
        case _:
            raise ValueError(f"unknown method {cfg.kind}")
    return symmetrize(W), b


def empirical_weight(cfg: MethodConfig, ds: TaskDataset) -> NDArray:
    W, _ = normal_equations(cfg, [ds])
    return W[0]


def _solve_aggregate(cfg: MethodConfig, batch: TaskBatch, W: NDArray, rhs: NDArray) -> NDArray:
    try:
        return spd_solve(symmetrize(W.sum(axis=0)), rhs)
    except NotPositiveDefiniteError as exc:
        raise UnderDeterminedError(
            str(cfg), len(batch), batch.n_train, batch.n_val, batch.d
        ) from exc


def fit_theta0(cfg: MethodConfig, datasets: Datasets) -> NDArray:
    batch = TaskBatch.from_datasets(datasets)
    W, b = normal_equations(cfg, batch)
    return _solve_aggregate(cfg, batch, W, b.sum(axis=0))


def estimation_offset(
    cfg: MethodConfig, datasets: Datasets, tasks: Sequence[TaskSpec]
) -> NDArray:
    """Noise-driven part of the fitted initialization, ``theta0_hat - (sum W)^{-1} sum W theta``."""
    batch = TaskBatch.from_datasets(datasets)
    W, b = normal_equations(cfg, batch)
    thetas = np.stack([task.theta_gt for task in tasks])
    noiseless = _solve_aggregate(cfg, batch, W, np.einsum("tij,tj->i", W, thetas))
    return _solve_aggregate(cfg, batch, W, b.sum(axis=0)) - noiseless


def bamaml_posterior(
    theta0: NDArray, X_trn: NDArray, y_trn: NDArray, gamma_b: float
) -> GaussianPosterior:
    if not gamma_b > 0:
        raise ValueError(f"gamma_b must be positive, got {gamma_b}")
    precision = X_trn.T @ X_trn + gamma_b * np.eye(X_trn.shape[1])
    cov = symmetrize(spd_solve(precision, np.eye(X_trn.shape[1])))
    mean = spd_solve(precision, X_trn.T @ y_trn + gamma_b * theta0)
    return GaussianPosterior(mean=mean, cov=cov)


def adapt(cfg: MethodConfig, theta0: NDArray, X_trn: NDArray, y_trn: NDArray) -> NDArray:
    n1, d = X_trn.shape
    if n1 < 1:
        raise ValueError("adaptation needs at least one sample")
    Q = X_trn.T @ X_trn / n1
    b = X_trn.T @ y_trn / n1
    match cfg.kind:
        case MethodKind.ERM:
            return np.array(theta0, dtype=np.float64, copy=True)
        case MethodKind.MAML:
            # gradient step of size alpha/2 on the mean squared error
            return theta0 - cfg.alpha * (Q @ theta0 - b)
        case MethodKind.IMAML:
            return spd_solve(Q + cfg.gamma * np.eye(d), b + cfg.gamma * theta0)
        case MethodKind.BAMAML:
            return bamaml_posterior(theta0, X_trn, y_trn, cfg.gamma_b(n1)).mean
    raise ValueError(f"unknown method {cfg.kind}")


def weighted_centroid(W: NDArray, thetas: NDArray) -> NDArray:
    """``mean(W)^{-1} mean(W theta)`` over a stack of task weights."""
    T = W.shape[0]
    try:
        return spd_solve(symmetrize(W.mean(axis=0)), np.einsum("tij,tj->i", W, thetas) / T)
    except NotPositiveDefiniteError as exc:
        raise DegenerateDistributionError(
            f"mean population weight over {T} tasks is singular"
        ) from exc


def optimal_theta0(cfg: MethodConfig, tasks: Sequence[TaskSpec], s: float) -> NDArray:
    if len(tasks) == 0:
        raise ValueError("task list must be non-empty")
    W = population_weights(cfg, np.stack([task.Q for task in tasks]), s)
    return weighted_centroid(W, np.stack([task.theta_gt for task in tasks]))


def _ridge_quadratic(X: NDArray, r: NDArray, gamma_b: float) -> NDArray:
    """``r^T (I + X X^T / gamma_b)^{-1} r`` per task, via the d x d dual system."""
    g = _cross(X, r)
    A = np.swapaxes(X, -1, -2) @ X + gamma_b * np.eye(X.shape[-1])
    return np.sum(r**2, axis=-1) - np.einsum("td,td->t", g, spd_solve(A, g))


def empirical_loss(cfg: MethodConfig, theta0: NDArray, datasets: Datasets) -> float:
    """Meta-training objective whose minimizer ``fit_theta0`` returns."""
    batch = TaskBatch.from_datasets(datasets)
    if cfg.kind == MethodKind.ERM:
        residual = batch.y_all - batch.X_all @ theta0
        return float(np.mean(np.sum(residual**2, axis=-1) / batch.n))

    if cfg.kind == MethodKind.BAMAML:
        gamma_b = cfg.gamma_b(batch.n_train)
        r_all = batch.y_all - batch.X_all @ theta0
        r_trn = batch.y_trn - batch.X_trn @ theta0
        per_task = _ridge_quadratic(batch.X_all, r_all, gamma_b) - _ridge_quadratic(
            batch.X_trn, r_trn, gamma_b
        )
        return float(np.mean(0.5 * per_task / batch.n_val))

    losses = []
    for ds in batch:
        theta = adapt(cfg, theta0, ds.X_trn, ds.y_trn)
        losses.append(np.mean((ds.y_val - ds.X_val @ theta) ** 2))
    return float(np.mean(losses))
