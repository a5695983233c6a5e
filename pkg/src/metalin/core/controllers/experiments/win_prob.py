from typing import Any, Optional, Sequence

import numpy as np

from ....utils.helper import powers_of_ten
from ...constants.enums import Experiment, RiskMode
from ...estimators import fit_theta0
from ...models.methods import MethodConfig
from ...models.tasks import TaskBatch, TaskSpec
from ...risk import adapted_test_loss, bamaml_wins, population_risk
from ...schemas.experiment import ExperimentConfig, ResultRow
from ...taskgen import sample_batch
from ..dependencies import cell_rng, draw_tasks
from .base import ExperimentController

ADAPTED_EVAL_TASKS = 100


class WinProbController(ExperimentController):
    """How often the challenger's fitted initialization has lower risk than the incumbent's."""

    experiment = Experiment.WIN_PROB

    def __init__(
        self,
        config: ExperimentConfig,
        threads: int = 1,
        challenger: Optional[MethodConfig] = None,
        incumbent: Optional[MethodConfig] = None,
    ) -> None:
        super().__init__(config, threads)
        self.challenger = challenger or MethodConfig.bamaml(config.gamma)
        self.incumbent = incumbent or MethodConfig.maml(config.alpha)

    def cells(self) -> list[tuple[int, int, int]]:
        return [
            (T, N, seed)
            for T in powers_of_ten(self.config.logT_grid)
            for N in powers_of_ten(self.config.logN_grid)
            for seed in self.config.seeds
        ]

    def metadata(self) -> dict[str, Any]:
        return {
            "risk_mode": str(self.config.risk_mode),
            "challenger": str(self.challenger),
            "incumbent": str(self.incumbent),
            "tie_rule": "strict '<', ties count for the incumbent",
        }

    def _risk(
        self,
        cfg: MethodConfig,
        theta0: np.ndarray,
        population: Sequence[TaskSpec],
        eval_seed: np.random.SeedSequence,
    ) -> float:
        config = self.config
        if config.risk_mode == RiskMode.POPULATION:
            return population_risk(cfg, theta0, population, config.s)
        # both methods see the same fresh tasks and samples
        rng = np.random.default_rng(eval_seed)
        picks = rng.integers(0, len(population), size=ADAPTED_EVAL_TASKS)
        losses = [
            adapted_test_loss(
                cfg, theta0, population[i], rng, config.n_adapt, config.n_test
            )
            for i in picks
        ]
        return float(np.mean(losses))

    def trial(
        self, batch: TaskBatch, population: Sequence[TaskSpec], eval_seed: np.random.SeedSequence
    ) -> tuple[float, float]:
        risks = []
        for cfg in (self.challenger, self.incumbent):
            theta0 = fit_theta0(cfg, batch)
            risks.append(self._risk(cfg, theta0, population, eval_seed))
        return risks[0], risks[1]

    def run_cell(self, index: int, cell: tuple[int, int, int]) -> list[ResultRow]:
        T, N, seed = cell
        config = self.config
        rng = cell_rng(seed, index)
        population = self.population(seed)
        wins = 0
        gaps = []
        for repetition in range(config.repetitions):
            tasks = draw_tasks(rng, population, T)
            batch = sample_batch(rng, tasks, N, config.s, noiseless=config.noiseless)
            eval_seed = np.random.SeedSequence(seed, spawn_key=(index + 1, repetition))
            challenger_risk, incumbent_risk = self.trial(batch, population, eval_seed)
            wins += bamaml_wins(challenger_risk, incumbent_risk)
            gaps.append(incumbent_risk - challenger_risk)

        label = f"{self.challenger.kind}_vs_{self.incumbent.kind}"
        hyper = ";".join(
            h for h in (self.challenger.hyperparameters, self.incumbent.hyperparameters) if h
        )
        common = {"seed": seed, "T": T, "N": N, "hyperparameters": hyper}
        return [
            self.row(label, "win_fraction", wins / config.repetitions, **common),
            self.row(label, "mean_risk_gap", float(np.mean(gaps)), **common),
        ]
