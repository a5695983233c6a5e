from typing import Any, Optional, Sequence

from ....utils.common.logger import logger
from ....workers import CellPool
from ...constants.enums import Experiment
from ...models.methods import MethodConfig
from ...models.tasks import TaskSpec
from ...schemas.experiment import ExperimentConfig, ResultRow
from ..dependencies import build_population


class ExperimentController:
    experiment: Experiment

    def __init__(self, config: ExperimentConfig, threads: int = 1) -> None:
        self.config = config
        self.pool = CellPool(threads=threads, description=str(self.experiment))
        self._populations: dict[int, list[TaskSpec]] = {}

    def population(self, seed: int) -> list[TaskSpec]:
        if seed not in self._populations:
            self._populations[seed] = build_population(self.config, seed)
        return self._populations[seed]

    def cells(self) -> Sequence[Any]:
        raise NotImplementedError

    def run_cell(self, index: int, cell: Any) -> list[ResultRow]:
        raise NotImplementedError

    def finalize(self, rows: list[ResultRow]) -> list[ResultRow]:
        return rows

    def metadata(self) -> dict[str, Any]:
        return {}

    def run(self) -> list[ResultRow]:
        # populations are built before fan-out so worker threads only read them
        for seed in self.config.seeds:
            self.population(seed)
        cells = list(self.cells())
        logger.info(
            f"{self.experiment}: {len(cells)} cells, seeds={self.config.seeds}, "
            f"threads={self.pool.threads}"
        )
        rows = [row for chunk in self.pool.map(self.run_cell, cells) for row in chunk]
        rows = self.finalize(rows)
        logger.info(f"{self.experiment}: produced {len(rows)} rows")
        return rows

    def row(
        self,
        method: MethodConfig | str,
        metric: str,
        value: float,
        seed: Optional[int] = None,
        mc_std_error: Optional[float] = None,
        **fields: Any,
    ) -> ResultRow:
        if isinstance(method, MethodConfig):
            name, hyper = method.kind.value, method.hyperparameters
        else:
            name, hyper = method, fields.pop("hyperparameters", "")
        base = {"d": self.config.d, "N": self.config.N, "T": self.config.T, "s": self.config.s}
        base.update(fields)
        return ResultRow(
            experiment=str(self.experiment),
            method=name,
            hyperparameters=hyper,
            seed=seed,
            metric=metric,
            value=float(value),
            mc_std_error=mc_std_error,
            **base,
        )
