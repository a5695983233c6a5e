import math
from typing import Callable, Optional, Sequence

import numpy as np

from ....settings.config import settings
from ....utils.common.logger import logger
from ....utils.helper import loglog_slope
from ....utils.numerics.linalg import spd_solve, spectral_map
from ....utils.numerics.sampling import gaussian_matrix, make_rng, random_orthogonal
from ....workers import CellPool
from ...constants.enums import MethodKind, VerifySubset
from ...dominating_constants import (
    dominating_constant_mc,
    erm_constant_exact,
    grid_minimum,
    ordering_report,
    stieltjes,
    stieltjes_mc,
    stieltjes_second_moment,
)
from ...estimators import (
    adapt,
    bamaml_posterior,
    empirical_loss,
    estimation_offset,
    fit_theta0,
    normal_equations,
    optimal_theta0,
    population_weight,
    weighted_centroid,
)
from ...models.methods import MethodConfig
from ...models.tasks import TaskSpec
from ...risk import (
    adapted_test_loss,
    bamaml_wins,
    decompose,
    finite_adaptation_risk,
    population_risk,
    statistical_error,
)
from ...schemas.verification import CheckResult, VerificationReport
from ...taskgen import (
    empirical_Q,
    general_distribution,
    linear_centroid_distribution,
    sample_batch,
    sample_task,
    sample_tasks,
)
from ..dependencies import draw_tasks

FAULT_MAML_WEIGHT_SIGN = "maml-weight-sign"
FAULTS = (FAULT_MAML_WEIGHT_SIGN,)

DECAY_REPETITIONS = 200

Check = Callable[[np.random.Generator], CheckResult]


def _default_methods() -> list[MethodConfig]:
    return [
        MethodConfig.erm(),
        MethodConfig.maml(0.3),
        MethodConfig.imaml(0.5),
        MethodConfig.bamaml(0.5),
    ]


def _random_spd(rng: np.random.Generator, d: int, low: float = 0.1, high: float = 2.0) -> np.ndarray:
    V = random_orthogonal(rng, d)
    Q = (V * rng.uniform(low, high, size=d)) @ V.T
    return 0.5 * (Q + Q.T)


class VerificationController:
    """Fixed-seed invariant checks for every module, collected into one report."""

    def __init__(
        self,
        seed: Optional[int] = None,
        threads: int = 1,
        subset: Optional[VerifySubset] = None,
        fault: Optional[str] = None,
    ) -> None:
        if fault is not None and fault not in FAULTS:
            raise ValueError(f"unknown fault {fault!r}; expected one of {FAULTS}")
        self.seed = settings.get("SEED") if seed is None else seed
        self.subset = None if subset is None else VerifySubset(subset)
        self.fault = fault
        self.pool = CellPool(threads=threads, description="verify")
        self.constant_samples = int(settings.get("CONSTANT_SAMPLES"))

    def registry(self) -> list[tuple[VerifySubset, Check]]:
        numerics, taskgen = VerifySubset.NUMERICS, VerifySubset.TASKGEN
        estimators, risk, constants = (
            VerifySubset.ESTIMATORS,
            VerifySubset.RISK,
            VerifySubset.CONSTANTS,
        )
        return [
            (numerics, self.check_orthogonal),
            (numerics, self.check_spd_recovery),
            (numerics, self.check_gaussian_rate),
            (numerics, self.check_rotation_invariance),
            (taskgen, self.check_eigenvalue_bounds),
            (taskgen, self.check_empirical_covariance_unbiased),
            (taskgen, self.check_covariance_concentration),
            (taskgen, self.check_centroid_spread),
            (estimators, self.check_collapse_identities),
            (estimators, self.check_erm_weight_unbiased),
            (estimators, self.check_posterior_ridge_identity),
            (estimators, self.check_convexity_certificate),
            (estimators, self.check_noiseless_consistency),
            (risk, self.check_decomposition_identity),
            (risk, self.check_optimal_risk_ordering),
            (risk, self.check_gamma_limits),
            (risk, self.check_split_insensitivity),
            (risk, self.check_error_decay),
            (risk, self.check_finite_adaptation_risk),
            (risk, self.check_population_vs_adapted),
            (constants, self.check_erm_constant),
            (constants, self.check_stieltjes_consistency),
            (constants, self.check_stieltjes_limits),
            (constants, self.check_stieltjes_derivative),
            (constants, self.check_constant_convergence),
            (constants, self.check_constant_ordering),
            (risk, self.check_win_probability),
        ]

    def run(self) -> VerificationReport:
        selected = [
            (index, module, check)
            for index, (module, check) in enumerate(self.registry())
            if self.subset is None or module == self.subset
        ]
        logger.info(f"verify: running {len(selected)} checks (seed={self.seed})")
        results = self.pool.map(self._run_one, selected)
        report = VerificationReport(checks=results)
        for failure in report.failures:
            logger.error(f"verify: {failure.name} failed: {failure.detail}")
        return report

    def _run_one(self, _: int, item: tuple[int, VerifySubset, Check]) -> CheckResult:
        index, module, check = item
        name = check.__name__.removeprefix("check_").replace("_", "-")
        try:
            return check(make_rng(self.seed, index))
        except Exception as exc:
            logger.error(f"verify: {name} raised {type(exc).__name__}: {exc}")
            return CheckResult(
                name=name,
                module=module,
                passed=False,
                measured=math.nan,
                detail=f"raised {type(exc).__name__}: {exc}",
            )

    # numerics

    def check_orthogonal(self, rng: np.random.Generator) -> CheckResult:
        orth, det = 0.0, 0.0
        for d in (1, 3, 4, 10):
            for _ in range(20):
                V = random_orthogonal(rng, d)
                orth = max(orth, float(np.max(np.abs(V.T @ V - np.eye(d)))))
                det = max(det, abs(float(np.linalg.det(V)) - 1.0))
        return CheckResult(
            name="orthogonal",
            module=VerifySubset.NUMERICS,
            passed=orth < 1e-10 and det < 1e-8,
            measured=orth,
            tolerance=1e-10,
            detail=f"max |V^T V - I| = {orth:.2e}, max |det V - 1| = {det:.2e}",
        )

    def check_spd_recovery(self, rng: np.random.Generator) -> CheckResult:
        worst = 0.0
        for d in (2, 5, 10, 20):
            for _ in range(5):
                V = random_orthogonal(rng, d)
                A = (V * np.logspace(0.0, 5.0, d)) @ V.T
                A = 0.5 * (A + A.T)
                X0 = rng.standard_normal((d, 3))
                X = spd_solve(A, A @ X0)
                worst = max(worst, float(np.max(np.abs(X - X0)) / np.max(np.abs(X0))))
        return CheckResult(
            name="spd-recovery",
            module=VerifySubset.NUMERICS,
            passed=worst <= 1e-8,
            measured=worst,
            tolerance=1e-8,
            detail="relative error of spd_solve(A, A X0) with cond(A) = 1e5",
        )

    def check_gaussian_rate(self, rng: np.random.Generator) -> CheckResult:
        cov = np.array([[2.0, 0.5], [0.5, 1.0]])
        sizes = [100, 1_000, 10_000, 100_000]
        errors = []
        for n in sizes:
            reps = [
                np.max(np.abs(empirical_Q(gaussian_matrix(rng, n, 2, cov)) - cov))
                for _ in range(20)
            ]
            errors.append(float(np.mean(reps)))
        slope = loglog_slope(sizes, errors)
        return CheckResult(
            name="gaussian-rate",
            module=VerifySubset.NUMERICS,
            passed=abs(slope + 0.5) <= 0.15,
            measured=slope,
            tolerance=0.15,
            reference=-0.5,
            detail="log-log slope of covariance error against n",
        )

    def check_rotation_invariance(self, rng: np.random.Generator) -> CheckResult:
        columns = np.stack([random_orthogonal(rng, 3)[:, 0] for _ in range(10_000)])
        norm = float(np.linalg.norm(columns.mean(axis=0)))
        return CheckResult(
            name="rotation-invariance",
            module=VerifySubset.NUMERICS,
            passed=norm < 0.05,
            measured=norm,
            tolerance=0.05,
            detail="norm of the mean first column over 1e4 rotations",
        )

    # taskgen

    def check_eigenvalue_bounds(self, rng: np.random.Generator) -> CheckResult:
        dist = general_distribution(rng, 4)
        lam = np.concatenate(
            [np.linalg.eigvalsh(task.Q) for task in sample_tasks(rng, dist, 500)]
        )
        outside = float(
            max(dist.lambda_low - lam.min(), lam.max() - dist.lambda_high, 0.0)
        )
        return CheckResult(
            name="eigenvalue-bounds",
            module=VerifySubset.TASKGEN,
            passed=outside <= 1e-12,
            measured=outside,
            tolerance=1e-12,
            detail="largest excursion of task eigenvalues outside [lambda_low, lambda_high]",
        )

    def _covariance_z_score(self, stack: np.ndarray, Q: np.ndarray) -> float:
        mean = stack.mean(axis=0)
        se = stack.std(axis=0, ddof=1) / math.sqrt(stack.shape[0])
        return float(np.max(np.abs(mean - Q) / se))

    def check_empirical_covariance_unbiased(self, rng: np.random.Generator) -> CheckResult:
        task = sample_task(rng, general_distribution(rng, 2))
        batch = sample_batch(rng, [task] * 10_000, 10, 0.5)
        z = self._covariance_z_score(empirical_Q(batch.X_all), task.Q)
        return CheckResult(
            name="empirical-covariance-unbiased",
            module=VerifySubset.TASKGEN,
            passed=z <= 3.0,
            measured=z,
            tolerance=3.0,
            detail="max |mean Q_hat - Q| in Monte-Carlo standard errors over 1e4 datasets",
        )

    def check_covariance_concentration(self, rng: np.random.Generator) -> CheckResult:
        task = sample_task(rng, general_distribution(rng, 3))
        medians = []
        for N in (10, 100, 1_000):
            batch = sample_batch(rng, [task] * 200, N, 0.5)
            gaps = np.linalg.norm(empirical_Q(batch.X_all) - task.Q, ord=2, axis=(-2, -1))
            medians.append(float(np.median(gaps)))
        decreasing = all(a > b for a, b in zip(medians, medians[1:]))
        return CheckResult(
            name="covariance-concentration",
            module=VerifySubset.TASKGEN,
            passed=decreasing,
            measured=medians[-1],
            detail=f"median operator-norm gaps for N=10,100,1000: {medians}",
        )

    def check_centroid_spread(self, rng: np.random.Generator) -> CheckResult:
        dist = linear_centroid_distribution(2, centroid=np.array([1.0, -1.0]), spread=1.0)
        thetas = np.stack([sample_task(rng, dist).theta_gt for _ in range(100_000)])
        cov = np.cov((thetas - dist.centroid).T)
        target = dist.spread**2 / dist.d
        rel = float(np.max(np.abs(cov - target * np.eye(2))) / target)
        return CheckResult(
            name="centroid-spread",
            module=VerifySubset.TASKGEN,
            passed=rel <= 0.05,
            measured=rel,
            tolerance=0.05,
            reference=target,
            detail="relative error of the parameter covariance against R^2/d I",
        )

    # estimators

    def check_collapse_identities(self, rng: np.random.Generator) -> CheckResult:
        worst = 0.0
        for _ in range(20):
            Q = _random_spd(rng, 3)
            scale = float(np.max(np.abs(Q)))
            s = float(rng.uniform(0.1, 0.9))
            gamma = float(rng.uniform(0.1, 10.0))
            gaps = [
                np.abs(
                    population_weight(MethodConfig.maml(0.0), Q, s)
                    - population_weight(MethodConfig.erm(), Q, s)
                ).max()
                / (1e-12 * scale),
                np.abs(
                    population_weight(MethodConfig.bamaml(gamma), Q, 1.0 - 1e-12)
                    - population_weight(MethodConfig.imaml(gamma), Q, s)
                ).max()
                / (1e-10 * scale),
                np.abs(population_weight(MethodConfig.bamaml(1e6), Q, s) - Q).max()
                / (1e-4 * scale),
                np.abs(population_weight(MethodConfig.bamaml(1e-6), Q, s)).max()
                / (1e-4 * scale),
            ]
            worst = max(worst, float(max(gaps)))
        return CheckResult(
            name="collapse-identities",
            module=VerifySubset.ESTIMATORS,
            passed=worst <= 1.0,
            measured=worst,
            tolerance=1.0,
            detail="worst method-collapse gap in units of its tolerance",
        )

    def check_erm_weight_unbiased(self, rng: np.random.Generator) -> CheckResult:
        task = sample_task(rng, general_distribution(rng, 2))
        batch = sample_batch(rng, [task] * 10_000, 8, 0.5)
        W, _ = normal_equations(MethodConfig.erm(), batch)
        z = self._covariance_z_score(W, task.Q)
        return CheckResult(
            name="erm-weight-unbiased",
            module=VerifySubset.ESTIMATORS,
            passed=z <= 3.0,
            measured=z,
            tolerance=3.0,
            detail="max |mean W_erm - Q| in Monte-Carlo standard errors",
        )

    def check_posterior_ridge_identity(self, rng: np.random.Generator) -> CheckResult:
        worst = 0.0
        for _ in range(100):
            d = int(rng.integers(1, 4))
            n1 = int(rng.integers(2, 11))
            gamma = float(rng.uniform(0.1, 10.0))
            task = sample_task(rng, general_distribution(rng, d))
            X = gaussian_matrix(rng, n1, d, task.Q)
            y = X @ task.theta_gt + rng.standard_normal(n1)
            theta0 = rng.uniform(0.0, 2.0, size=d)
            ridge = adapt(MethodConfig.imaml(gamma), theta0, X, y)
            posterior = bamaml_posterior(theta0, X, y, gamma * n1)
            gap = np.max(np.abs(ridge - posterior.mean)) / max(1.0, np.max(np.abs(ridge)))
            worst = max(worst, float(gap))
        return CheckResult(
            name="posterior-ridge-identity",
            module=VerifySubset.ESTIMATORS,
            passed=worst <= 1e-12,
            measured=worst,
            tolerance=1e-12,
            detail="posterior mean with gamma_b = gamma N1 against the ridge adaptation",
        )

    def _small_problem(self, rng: np.random.Generator, d: int, T: int, N: int, noiseless: bool = False):
        tasks = sample_tasks(rng, general_distribution(rng, d), T)
        return tasks, sample_batch(rng, tasks, N, 0.5, noiseless=noiseless)

    def check_convexity_certificate(self, rng: np.random.Generator) -> CheckResult:
        worst = math.inf
        for cfg in _default_methods():
            _, batch = self._small_problem(rng, 2, 5, 8)
            theta = fit_theta0(cfg, batch)
            base = empirical_loss(cfg, theta, batch)
            for axis in range(theta.shape[0]):
                for step in (1e-4, -1e-4):
                    moved = theta.copy()
                    moved[axis] += step
                    rise = empirical_loss(cfg, moved, batch) - base
                    worst = min(worst, rise / max(abs(base), 1.0))
        return CheckResult(
            name="convexity-certificate",
            module=VerifySubset.ESTIMATORS,
            passed=worst >= -1e-13,
            measured=worst,
            tolerance=1e-13,
            detail="smallest relative loss change under +-1e-4 axis perturbations",
        )

    def check_noiseless_consistency(self, rng: np.random.Generator) -> CheckResult:
        worst = 0.0
        for cfg in _default_methods():
            tasks, batch = self._small_problem(rng, 3, 10, 12, noiseless=True)
            worst = max(worst, float(np.max(np.abs(estimation_offset(cfg, batch, tasks)))))
        return CheckResult(
            name="noiseless-consistency",
            module=VerifySubset.ESTIMATORS,
            passed=worst <= 1e-8,
            measured=worst,
            tolerance=1e-8,
            detail="fitted minus weighted ground-truth centroid on noiseless data",
        )

    # risk

    def _decomposition_gap(
        self, cfg: MethodConfig, batch, pool: Sequence[TaskSpec], s: float
    ) -> float:
        report = decompose(cfg, batch, pool, s)
        if self.fault == FAULT_MAML_WEIGHT_SIGN and cfg.kind == MethodKind.MAML:
            Qs = np.stack([task.Q for task in pool])
            thetas = np.stack([task.theta_gt for task in pool])
            wrong = spectral_map(Qs, lambda lam: (1.0 + cfg.alpha * lam) ** 2 * lam)
            star = weighted_centroid(wrong, thetas)
            optimal = population_risk(cfg, star, pool, s)
            error = statistical_error(cfg, report.theta0_hat, star, pool, s)
            return abs(report.total_risk - optimal - error) / report.total_risk
        return report.decomposition_gap

    def check_decomposition_identity(self, rng: np.random.Generator) -> CheckResult:
        worst, cases = 0.0, 0
        for d in (1, 2, 5):
            for _ in range(5):
                pool = sample_tasks(rng, general_distribution(rng, d), 200)
                batch = sample_batch(rng, draw_tasks(rng, pool, 20), 10, 0.5)
                for cfg in _default_methods():
                    worst = max(worst, self._decomposition_gap(cfg, batch, pool, 0.5))
                    cases += 1
        return CheckResult(
            name="risk-decomposition-identity",
            module=VerifySubset.RISK,
            passed=worst < 1e-8,
            measured=worst,
            tolerance=1e-8,
            detail=f"total = optimal + statistical over {cases} configurations",
        )

    def _pool_1d(self, rng: np.random.Generator, size: int = 10_000) -> list[TaskSpec]:
        return sample_tasks(rng, general_distribution(rng, 1), size)

    def _optimal_risk(self, cfg: MethodConfig, pool: Sequence[TaskSpec], s: float = 0.5) -> float:
        return population_risk(cfg, optimal_theta0(cfg, pool, s), pool, s)

    def check_optimal_risk_ordering(self, rng: np.random.Generator) -> CheckResult:
        pool = self._pool_1d(rng)
        best_maml = min(
            self._optimal_risk(MethodConfig.maml(a), pool) for a in settings.get("ALPHA_GRID")
        )
        best_bamaml = min(
            self._optimal_risk(MethodConfig.bamaml(g), pool) for g in np.logspace(-3, 1, 9)
        )
        return CheckResult(
            name="optimal-risk-ordering",
            module=VerifySubset.RISK,
            passed=best_bamaml < best_maml,
            measured=best_bamaml,
            reference=best_maml,
            detail="best BaMAML optimal population risk against best MAML",
        )

    def check_gamma_limits(self, rng: np.random.Generator) -> CheckResult:
        pool = self._pool_1d(rng)
        small = self._optimal_risk(MethodConfig.bamaml(1e-6), pool)
        large = self._optimal_risk(MethodConfig.bamaml(1e6), pool)
        erm = self._optimal_risk(MethodConfig.erm(), pool)
        return CheckResult(
            name="gamma-limits",
            module=VerifySubset.RISK,
            passed=1.0 <= small <= 1.0 + 1e-3 and abs(large - erm) < 1e-3,
            measured=max(small - 1.0, abs(large - erm)),
            tolerance=1e-3,
            detail=f"R(gamma=1e-6) = {small:.6f}, R(gamma=1e6) = {large:.6f}, R_erm = {erm:.6f}",
        )

    def check_split_insensitivity(self, rng: np.random.Generator) -> CheckResult:
        pool = self._pool_1d(rng, 2_000)
        methods = [MethodConfig.maml(0.7), MethodConfig.bamaml(0.1)]
        medians: dict[str, list[float]] = {str(cfg): [] for cfg in methods}
        for s in (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8):
            totals: dict[str, list[float]] = {str(cfg): [] for cfg in methods}
            for _ in range(20):
                batch = sample_batch(rng, draw_tasks(rng, pool, 100), 10, s)
                for cfg in methods:
                    totals[str(cfg)].append(decompose(cfg, batch, pool, s).total_risk)
            for key, values in totals.items():
                medians[key].append(float(np.median(values)))
        spread = {key: max(v) - min(v) for key, v in medians.items()}
        maml, bamaml = (spread[str(cfg)] for cfg in methods)
        return CheckResult(
            name="split-insensitivity",
            module=VerifySubset.RISK,
            passed=bamaml < maml,
            measured=bamaml,
            reference=maml,
            detail="spread over s of the median total risk, BaMAML against MAML",
        )

    def check_error_decay(self, rng: np.random.Generator) -> CheckResult:
        pool = self._pool_1d(rng, 2_000)
        methods = [
            MethodConfig.erm(),
            MethodConfig.maml(0.7),
            MethodConfig.imaml(0.1),
            MethodConfig.bamaml(0.1),
        ]
        sizes = [100, 1_000, 10_000]
        medians: dict[str, list[float]] = {str(cfg): [] for cfg in methods}
        for T in sizes:
            errors: dict[str, list[float]] = {str(cfg): [] for cfg in methods}
            for _ in range(DECAY_REPETITIONS):
                batch = sample_batch(rng, draw_tasks(rng, pool, T), 100, 0.5)
                for cfg in methods:
                    errors[str(cfg)].append(decompose(cfg, batch, pool, 0.5).statistical_error)
            for key, values in errors.items():
                medians[key].append(float(np.median(values)))
        slopes = {key: loglog_slope(sizes, values) for key, values in medians.items()}
        worst = max(abs(slope + 1.0) for slope in slopes.values())
        return CheckResult(
            name="error-decay",
            module=VerifySubset.RISK,
            passed=worst <= 0.15,
            measured=worst,
            tolerance=0.15,
            reference=-1.0,
            detail=f"log-log slopes of median statistical error vs T: {slopes}",
        )

    def check_finite_adaptation_risk(self, rng: np.random.Generator) -> CheckResult:
        cfg = MethodConfig.maml(0.5)
        task = TaskSpec(theta_gt=np.array([1.0]), Q=np.eye(1))
        theta0 = np.zeros(1)
        n_adapt = 10_000
        losses = np.array(
            [adapted_test_loss(cfg, theta0, task, rng, n_adapt, 100) for _ in range(1_000)]
        )
        expected = finite_adaptation_risk(cfg, theta0, [task], n_adapt)
        z = abs(losses.mean() - expected) / (losses.std(ddof=1) / math.sqrt(losses.size))
        return CheckResult(
            name="finite-adaptation-risk",
            module=VerifySubset.RISK,
            passed=z <= 3.0,
            measured=float(losses.mean()),
            tolerance=3.0,
            reference=expected,
            detail=f"Monte-Carlo adapted loss is {z:.2f} standard errors from the closed form",
        )

    def check_population_vs_adapted(self, rng: np.random.Generator) -> CheckResult:
        cfg = MethodConfig.maml(0.7)
        pool = self._pool_1d(rng)
        theta0 = optimal_theta0(cfg, pool, 0.5)
        expected = population_risk(cfg, theta0, pool, 0.5)
        picks = rng.integers(0, len(pool), size=2_000)
        estimate = float(
            np.mean(
                [adapted_test_loss(cfg, theta0, pool[i], rng, 10_000, 100) for i in picks]
            )
        )
        rel = abs(estimate - expected) / expected
        return CheckResult(
            name="population-vs-adapted",
            module=VerifySubset.RISK,
            passed=rel <= 0.02,
            measured=estimate,
            tolerance=0.02,
            reference=expected,
            detail="closed-form population risk against simulated adapted test loss",
        )

    def check_win_probability(self, rng: np.random.Generator) -> CheckResult:
        bamaml, maml = MethodConfig.bamaml(0.1), MethodConfig.maml(0.7)
        pool = self._pool_1d(rng)
        trials, wins = 100, 0
        for _ in range(trials):
            batch = sample_batch(rng, draw_tasks(rng, pool, 10_000), 1_000, 0.5)
            risks = [
                population_risk(cfg, fit_theta0(cfg, batch), pool, 0.5) for cfg in (bamaml, maml)
            ]
            wins += bamaml_wins(*risks)
        fraction = wins / trials
        return CheckResult(
            name="win-probability",
            module=VerifySubset.RISK,
            passed=fraction > 0.5,
            measured=fraction,
            reference=0.5,
            detail=f"BaMAML beats MAML in {wins} of {trials} fits at T=1e4, N=1e3",
        )

    # constants

    def check_erm_constant(self, rng: np.random.Generator) -> CheckResult:
        worst = 0.0
        estimates = []
        for d, N in ((2, 4), (20, 40)):
            est = dominating_constant_mc(MethodConfig.erm(), d, N, 0.5, rng, 100_000)
            estimates.append(est)
            worst = max(worst, abs(est.value - erm_constant_exact(d, N)) / est.mc_std_error)
        return CheckResult(
            name="erm-constant",
            module=VerifySubset.CONSTANTS,
            passed=worst <= 3.0 and all(e.satisfies_lower_bound() for e in estimates),
            measured=worst,
            tolerance=3.0,
            detail="distance of the MC ERM constant from (d+N+1)/N in standard errors",
        )

    def check_stieltjes_consistency(self, rng: np.random.Generator) -> CheckResult:
        worst = 0.0
        for omega1, omega2 in ((1.0, 1.0), (1.0, 0.1), (2.0, 1.0)):
            mc = stieltjes_mc(omega1, omega2, 400, 400, rng, n_samples=4)
            worst = max(worst, abs(mc - stieltjes(omega1, omega2, 1.0)))
        return CheckResult(
            name="stieltjes-consistency",
            module=VerifySubset.CONSTANTS,
            passed=worst <= 0.01,
            measured=worst,
            tolerance=0.01,
            detail="closed form against MC normalized traces at d = N = 400",
        )

    def check_stieltjes_limits(self, rng: np.random.Generator) -> CheckResult:
        large = abs(stieltjes(1.0, 1e-6, 0.5) - 1.0)
        small = abs(stieltjes(1.0, 1e8, 2.0) - 0.5)
        return CheckResult(
            name="stieltjes-limits",
            module=VerifySubset.CONSTANTS,
            passed=large <= 1e-5 and small <= 1e-5,
            measured=max(large, small),
            tolerance=1e-5,
            detail="gamma -> infinity gives 1; gamma -> 0 with eta = 2 gives 1 - 1/eta",
        )

    def check_stieltjes_derivative(self, rng: np.random.Generator) -> CheckResult:
        h = 1e-5
        analytic = stieltjes_second_moment(1.0, 1.0, 1.0)
        finite_diff = -(stieltjes(1.0 + h, 1.0, 1.0) - stieltjes(1.0 - h, 1.0, 1.0)) / (2 * h)
        mc = stieltjes_mc(1.0, 1.0, 400, 400, rng, n_samples=4, power=2)
        fd_gap, mc_gap = abs(analytic - finite_diff), abs(analytic - mc)
        return CheckResult(
            name="stieltjes-derivative",
            module=VerifySubset.CONSTANTS,
            passed=fd_gap <= 1e-3 and mc_gap <= 0.01,
            measured=analytic,
            reference=finite_diff,
            detail=f"finite-difference gap {fd_gap:.2e}, MC gap {mc_gap:.2e}",
        )

    def check_constant_convergence(self, rng: np.random.Generator) -> CheckResult:
        gaps = []
        for d in (10, 40, 160):
            est = dominating_constant_mc(MethodConfig.erm(), d, 2 * d, 0.5, rng, 2_000)
            gaps.append(abs(est.value - 1.5))
        decreasing = all(a > b for a, b in zip(gaps, gaps[1:]))
        return CheckResult(
            name="constant-convergence",
            module=VerifySubset.CONSTANTS,
            passed=decreasing,
            measured=gaps[-1],
            reference=1.5,
            detail=f"|C_erm - (1 + eta)| for d = 10, 40, 160: {gaps}",
        )

    def check_constant_ordering(self, rng: np.random.Generator) -> CheckResult:
        d, N = 40, 80
        s_grid = settings.get("CONSTANT_S_GRID")
        maml_grid = [
            (MethodConfig.maml(a), s) for a in settings.get("CONSTANT_ALPHA_GRID") for s in s_grid
        ]
        bamaml_grid = [
            (MethodConfig.bamaml(g), s) for g in settings.get("CONSTANT_GAMMA_GRID") for s in s_grid
        ]
        seed = int(rng.integers(0, 2**32))
        maml_min, maml_all = grid_minimum(maml_grid, d, N, self.constant_samples, seed)
        bamaml_min, bamaml_all = grid_minimum(bamaml_grid, d, N, self.constant_samples, seed)
        report = ordering_report(maml_min, bamaml_min)
        bounded = all(est.satisfies_lower_bound() for est in maml_all + bamaml_all)
        in_band = 1.35 <= maml_min.value <= 1.65 and 0.95 <= bamaml_min.value <= 1.25
        return CheckResult(
            name="constant-ordering",
            module=VerifySubset.CONSTANTS,
            passed=report.strictly_ordered and in_band and bounded,
            measured=maml_min.value - bamaml_min.value,
            detail=(
                f"MAML min {maml_min.value:.4f} +- {maml_min.mc_std_error:.4f} "
                f"(target {report.first_target}), BaMAML min {bamaml_min.value:.4f} "
                f"+- {bamaml_min.mc_std_error:.4f} (target {report.second_target}), "
                f"all estimates >= 1 - 3 sigma: {bounded}"
            ),
        )
