from pathlib import Path
from typing import Annotated, Optional

import typer

from ..config.experiment_config import ExperimentConfigLoader
from ..core.constants.enums import Experiment
from ..core.controllers import CONTROLLERS
from ..utils.common.decorator import exit_on_error
from ..utils.common.logger import logger
from ..utils.common.result_writer import ResultWriter

ConfigOption = Annotated[
    Optional[Path],
    typer.Option("--config", help="JSON experiment config; missing keys use the defaults."),
]
OutOption = Annotated[Path, typer.Option("--out", help="CSV file to write.")]
ThreadsOption = Annotated[
    Optional[int],
    typer.Option("--threads", min=1, help="Worker threads (METALIN_THREADS wins)."),
]
SeedOption = Annotated[
    Optional[int], typer.Option("--seed", min=0, help="Replace the seed list with this seed.")
]


def run_experiment(
    experiment: Experiment,
    config_path: Optional[Path],
    out: Path,
    threads: Optional[int] = None,
    seed: Optional[int] = None,
) -> None:
    loader = ExperimentConfigLoader()
    config = loader.load(config_path, experiment=experiment, seed=seed)
    controller = CONTROLLERS[experiment](config, threads=loader.resolve_threads(threads))
    rows = controller.run()
    metadata = {
        "experiment": str(experiment),
        "config": config.model_dump(mode="json"),
        **controller.metadata(),
    }
    ResultWriter(out).write(rows, metadata)
    logger.info(f"{experiment}: done")


def _command(experiment: Experiment):
    @exit_on_error
    def command(
        out: OutOption,
        config: ConfigOption = None,
        threads: ThreadsOption = None,
        seed: SeedOption = None,
    ) -> None:
        run_experiment(experiment, config, out, threads, seed)

    command.__doc__ = CONTROLLERS[experiment].__doc__
    return command


def register_experiments(app: typer.Typer) -> None:
    for experiment in CONTROLLERS:
        app.command(str(experiment))(_command(experiment))
