from typing import Sequence

import numpy as np

from ...utils.numerics.sampling import make_rng
from ..constants.enums import MethodKind
from ..models.methods import MethodConfig
from ..models.tasks import TaskSpec
from ..schemas.experiment import ExperimentConfig
from ..taskgen import general_distribution, sample_tasks

POPULATION_KEY = 0


def method_config(kind: MethodKind, config: ExperimentConfig) -> MethodConfig:
    match kind:
        case MethodKind.ERM:
            return MethodConfig.erm()
        case MethodKind.MAML:
            return MethodConfig.maml(config.alpha)
        case MethodKind.IMAML:
            return MethodConfig.imaml(config.gamma)
    return MethodConfig.bamaml(config.gamma)


def method_configs(config: ExperimentConfig) -> list[MethodConfig]:
    return [method_config(kind, config) for kind in config.methods]


def build_population(config: ExperimentConfig, seed: int) -> list[TaskSpec]:
    """Finite task pool standing in for the task distribution of ``seed``."""
    rng = make_rng(seed, POPULATION_KEY)
    dist = general_distribution(rng, config.d)
    return sample_tasks(rng, dist, config.task_pool)


def cell_rng(seed: int, cell_index: int, *key: int) -> np.random.Generator:
    return make_rng(seed, POPULATION_KEY + 1 + cell_index, *key)


def draw_tasks(
    rng: np.random.Generator, population: Sequence[TaskSpec], count: int
) -> list[TaskSpec]:
    """Training tasks drawn uniformly, with replacement, from the pool."""
    picks = rng.integers(0, len(population), size=count)
    return [population[i] for i in picks]
