"""Dominating statistical-error constants and their high-dimensional limits.

Under isotropic Gaussian features every expected weight is a multiple of the
identity, so the constant reduces to a ratio of normalized traces,
``(1/d) E tr(W^2) / ((1/d) E tr W)^2``, estimated here by Monte Carlo.
"""

import math
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from ..utils.numerics.sampling import make_rng
from .constants.enums import MethodKind, Regime
from .estimators import normal_equations, weight_spectrum
from .exceptions import UnsupportedMethodError, UnsupportedRegimeError
from .models.methods import MethodConfig
from .models.reports import (
    AsymptoticConstant,
    ConstantEstimate,
    OrderingReport,
    WeightScale,
)
from .models.tasks import TaskBatch
from .taskgen import empirical_Q, split_sizes

MIN_SAMPLES = 100
CHUNK = 512


def weight_scale(cfg: MethodConfig, s: float = 0.5) -> WeightScale:
    """Scalar ``w`` with ``W = w I`` when ``Q = I``."""
    return WeightScale(method=cfg, s=s, w=float(weight_spectrum(cfg, np.float64(1.0), s)))


def erm_constant_exact(d: int, N: int) -> float:
    if d < 1 or N < 1:
        raise ValueError("d and N must be >= 1")
    return (d + N + 1) / N


def _ratio_estimate(numer: NDArray, denom: NDArray) -> tuple[float, float]:
    """``mean(numer) / mean(denom)^2`` with a delta-method standard error."""
    n = numer.shape[0]
    A = math.fsum(denom) / n
    B = math.fsum(numer) / n
    value = B / A**2
    cov = np.cov(np.vstack([denom, numer]), ddof=1)
    grad = np.array([-2.0 * B / A**3, 1.0 / A**2])
    return value, math.sqrt(max(float(grad @ cov @ grad), 0.0) / n)


def dominating_constant_mc(
    cfg: MethodConfig,
    d: int,
    N: int,
    s: float,
    rng: np.random.Generator,
    n_samples: int,
    regime: Regime = Regime.LINEAR_CENTROID,
) -> ConstantEstimate:
    if Regime(regime) != Regime.LINEAR_CENTROID:
        raise UnsupportedRegimeError(
            "the trace-ratio constant needs isotropic features (linear-centroid regime); "
            "with a general covariance the expected weight is not a multiple of I"
        )
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be >= {MIN_SAMPLES}, got {n_samples}")
    n_train, n_val = split_sizes(N, s)

    first, second = [], []
    remaining = n_samples
    while remaining > 0:
        size = min(CHUNK, remaining)
        X = rng.standard_normal((size, N, d))
        batch = TaskBatch(
            X_trn=X[:, :n_train],
            y_trn=np.zeros((size, n_train)),
            X_val=X[:, n_train:],
            y_val=np.zeros((size, n_val)),
        )
        W, _ = normal_equations(cfg, batch)
        first.append(np.trace(W, axis1=-2, axis2=-1) / d)
        second.append(np.sum(W * W, axis=(-2, -1)) / d)
        remaining -= size

    value, err = _ratio_estimate(np.concatenate(second), np.concatenate(first))
    return ConstantEstimate(
        value=value, mc_std_error=err, n_samples=n_samples, method=cfg, d=d, N=N, s=s
    )


def maml_constant_conditional_mc(
    alpha: float, d: int, N: int, s: float, rng: np.random.Generator, n_samples: int
) -> ConstantEstimate:
    """MAML constant with the validation covariance integrated out exactly.

    Only the train covariance is sampled; for ``M = I - alpha Q_trn`` the
    estimand is ``E[tr(M^2)^2 + (N2 + 1) tr(M^4)] / (d N2)`` over
    ``(E tr(M^2) / d)^2``.
    """
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be >= {MIN_SAMPLES}, got {n_samples}")
    n_train, n_val = split_sizes(N, s)
    eye = np.eye(d)
    first, second = [], []
    remaining = n_samples
    while remaining > 0:
        size = min(CHUNK, remaining)
        M = eye - alpha * empirical_Q(rng.standard_normal((size, n_train, d)))
        M2 = M @ M
        tr2 = np.trace(M2, axis1=-2, axis2=-1)
        tr4 = np.sum(M2 * M2, axis=(-2, -1))
        first.append(tr2 / d)
        second.append((tr2**2 + (n_val + 1) * tr4) / (d * n_val))
        remaining -= size

    value, err = _ratio_estimate(np.concatenate(second), np.concatenate(first))
    return ConstantEstimate(
        value=value,
        mc_std_error=err,
        n_samples=n_samples,
        method=MethodConfig.maml(alpha),
        d=d,
        N=N,
        s=s,
    )


def _check_positive(**values: float) -> None:
    for name, value in values.items():
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value}")


def stieltjes(omega1: float, omega2: float, eta: float) -> float:
    """Limit of ``(1/d) tr((omega1 I + omega2 Q)^{-1})`` for Wishart ``Q`` with ``d/N -> eta``."""
    _check_positive(omega1=omega1, omega2=omega2, eta=eta)
    t = omega1 / omega2 + 1.0 + eta
    root = math.sqrt((t - 2.0 * math.sqrt(eta)) * (t + 2.0 * math.sqrt(eta)))
    # rationalized form of (eta - 1 - w + root) / (2 eta omega1), w = omega1 / omega2
    return (1.0 - 2.0 / (t + root)) / omega1


def stieltjes_second_moment(omega1: float, omega2: float, eta: float) -> float:
    """Limit of ``(1/d) tr((omega1 I + omega2 Q)^{-2})``, i.e. minus the omega1-derivative."""
    _check_positive(omega1=omega1, omega2=omega2, eta=eta)
    t = omega1 / omega2 + 1.0 + eta
    root = math.sqrt((t - 2.0 * math.sqrt(eta)) * (t + 2.0 * math.sqrt(eta)))
    u = t + root
    return (1.0 - 2.0 / u) / omega1**2 - 2.0 / (u * root * omega2 * omega1)


def stieltjes_mc(
    omega1: float,
    omega2: float,
    d: int,
    N: int,
    rng: np.random.Generator,
    n_samples: int = 20,
    power: int = 1,
) -> float:
    _check_positive(omega1=omega1, omega2=omega2)
    traces = []
    for _ in range(n_samples):
        X = rng.standard_normal((N, d))
        lam = np.linalg.eigvalsh(empirical_Q(X))
        traces.append(math.fsum((omega1 + omega2 * lam) ** (-power)) / d)
    return math.fsum(traces) / n_samples


def asymptotic_constant(kind: MethodKind, eta: float) -> AsymptoticConstant:
    """Infimum over hyperparameters of the limiting constant at ``d/N = eta``."""
    _check_positive(eta=eta)
    kind = MethodKind(kind)
    if kind != MethodKind.BAMAML:
        return AsymptoticConstant(kind=kind, eta=eta, value=1.0 + eta)
    if eta <= 1.0:
        return AsymptoticConstant(kind=kind, eta=eta, value=1.0)
    return AsymptoticConstant(kind=kind, eta=eta, value=eta, is_bound=True)


def error_bound_constants(
    cfg: MethodConfig, lambda_low: float, lambda_high: float, s: float
) -> tuple[float, float]:
    """``(C0, C1)`` of the finite-sample statistical error bounds."""
    _check_positive(lambda_low=lambda_low, lambda_high=lambda_high)
    if not 0 < s < 1:
        raise ValueError(f"split ratio must lie in (0, 1), got {s}")
    lo, hi = lambda_low, lambda_high
    match cfg.kind:
        case MethodKind.MAML:
            a = cfg.alpha
            if not a * hi < 1:
                raise ValueError("MAML bound needs alpha * lambda_high < 1")
            c0 = (1 - a * lo) ** 4 * (1 - a * hi) ** -2 * hi**2 / lo
            c1 = 1 / s + (1 - a * hi) ** -2 * a**2 * hi**3 / (lo * (1 - s))
            return c0, c1
        case MethodKind.BAMAML:
            g = cfg.gamma
            c0 = (1 + lo / g) ** -4 * (1 + hi / (g * s)) ** 2 * hi**2 / lo
            return c0, 1.0
    raise UnsupportedMethodError(f"no statistical error bound constants for {cfg}")


def bound_ordering_gamma(
    alpha: float, lambda_low: float, lambda_high: float, s: float
) -> float:
    """Largest gamma for which BaMAML's bound constants stay below MAML's."""
    lo, hi = lambda_low, lambda_high
    if not alpha * hi < 1:
        raise ValueError("needs alpha * lambda_high < 1")
    return min(hi, 0.5 * lo**2 * s * (1 - alpha * hi) ** 2 / (hi * (1 - alpha * lo)))


def grid_minimum(
    grid: Sequence[tuple[MethodConfig, float]],
    d: int,
    N: int,
    n_samples: int,
    seed: int,
) -> tuple[ConstantEstimate, list[ConstantEstimate]]:
    """Smallest MC constant over ``(method, s)`` pairs, one RNG stream per entry."""
    if len(grid) == 0:
        raise ValueError("grid must be non-empty")
    estimates = [
        dominating_constant_mc(cfg, d, N, s, make_rng(seed, index), n_samples)
        for index, (cfg, s) in enumerate(grid)
    ]
    return min(estimates, key=lambda est: est.value), estimates


def compare_constant_grids(
    first: Sequence[tuple[MethodConfig, float]],
    second: Sequence[tuple[MethodConfig, float]],
    d: int,
    N: int,
    n_samples: int,
    seed: int,
    sigmas: float = 3.0,
    tolerance: float = 0.05,
) -> OrderingReport:
    """Is the first grid's minimal constant strictly above the second's?"""
    first_min, _ = grid_minimum(first, d, N, n_samples, seed)
    second_min, _ = grid_minimum(second, d, N, n_samples, seed)
    return ordering_report(first_min, second_min, sigmas, tolerance)


def ordering_report(
    first_min: ConstantEstimate,
    second_min: ConstantEstimate,
    sigmas: float = 3.0,
    tolerance: float = 0.05,
) -> OrderingReport:
    eta = first_min.d / first_min.N
    first_target = asymptotic_constant(first_min.method.kind, eta)
    second_target = asymptotic_constant(second_min.method.kind, eta)

    diff = first_min.value - second_min.value
    noise = sigmas * math.hypot(first_min.mc_std_error, second_min.mc_std_error)
    indistinguishable = abs(diff) <= max(noise, tolerance)
    return OrderingReport(
        first_min=first_min,
        second_min=second_min,
        first_target=first_target.value,
        second_target=second_target.value,
        second_target_is_bound=second_target.is_bound,
        strictly_ordered=diff > noise and not indistinguishable,
        indistinguishable=indistinguishable,
    )


def constant_ordering_check(
    d: int,
    N: int,
    n_samples: int,
    alpha_grid: Sequence[float],
    gamma_grid: Sequence[float],
    s_grid: Sequence[float],
    seed: int,
) -> OrderingReport:
    """MAML grid minimum against BaMAML grid minimum at aspect ratio ``d/N``."""
    maml = [(MethodConfig.maml(a), s) for a in alpha_grid for s in s_grid]
    bamaml = [(MethodConfig.bamaml(g), s) for g in gamma_grid for s in s_grid]
    return compare_constant_grids(maml, bamaml, d, N, n_samples, seed)
