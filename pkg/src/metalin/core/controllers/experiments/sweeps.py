from collections import defaultdict

from ....utils.helper import summarize
from ...constants.enums import Experiment, MethodKind
from ...estimators import optimal_theta0
from ...models.methods import MethodConfig
from ...risk import decompose, population_risk
from ...schemas.experiment import ResultRow
from ...taskgen import sample_batch
from ..dependencies import cell_rng, draw_tasks, method_configs
from .base import ExperimentController

RISK_METRICS = ("total_risk", "optimal_population_risk", "statistical_error")


class SweepHyperController(ExperimentController):
    """Optimal population risk along the alpha and gamma grids."""

    experiment = Experiment.SWEEP_HYPER

    def cells(self) -> list[tuple[MethodConfig, int]]:
        config = self.config
        methods: list[MethodConfig] = []
        if MethodKind.ERM in config.methods:
            methods.append(MethodConfig.erm())
        if MethodKind.MAML in config.methods:
            methods += [MethodConfig.maml(a) for a in config.alpha_grid]
        if MethodKind.IMAML in config.methods:
            methods += [MethodConfig.imaml(g) for g in config.gamma_grid]
        if MethodKind.BAMAML in config.methods:
            methods += [MethodConfig.bamaml(g) for g in config.gamma_grid]
        return [(cfg, seed) for cfg in methods for seed in config.seeds]

    def run_cell(self, index: int, cell: tuple[MethodConfig, int]) -> list[ResultRow]:
        cfg, seed = cell
        tasks = self.population(seed)
        theta0 = optimal_theta0(cfg, tasks, self.config.s)
        risk = population_risk(cfg, theta0, tasks, self.config.s)
        return [
            self.row(cfg, "optimal_population_risk", risk, seed=seed, N=None, T=None)
        ]


class SweepSplitController(ExperimentController):
    """Risk decomposition per method as the train/validation split varies."""

    experiment = Experiment.SWEEP_SPLIT

    def cells(self) -> list[float]:
        return list(self.config.s_grid)

    def run_cell(self, index: int, s: float) -> list[ResultRow]:
        config = self.config
        methods = method_configs(config)
        values: dict[tuple[int, str], list[float]] = defaultdict(list)
        rows = []
        for seed in config.seeds:
            rng = cell_rng(seed, index)
            population = self.population(seed)
            tasks = draw_tasks(rng, population, config.T)
            batch = sample_batch(rng, tasks, config.N, s, noiseless=config.noiseless)
            for position, cfg in enumerate(methods):
                report = decompose(cfg, batch, population, s)
                for metric in RISK_METRICS:
                    value = getattr(report, metric)
                    values[(position, metric)].append(value)
                    rows.append(self.row(cfg, metric, value, seed=seed, s=s))

        for position, cfg in enumerate(methods):
            for metric in RISK_METRICS:
                for stat, value in summarize(values[(position, metric)]).items():
                    rows.append(self.row(cfg, f"{metric}_{stat}", value, s=s))
        return rows
