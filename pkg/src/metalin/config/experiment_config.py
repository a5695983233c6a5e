import json
import os
from pathlib import Path
from typing import Any, Optional

from pydantic import ValidationError

from ..core.constants.enums import Experiment
from ..core.exceptions import ConfigError
from ..core.schemas.experiment import ExperimentConfig
from ..settings.config import settings


class ExperimentConfigLoader:
    """Builds a validated ``ExperimentConfig`` from a JSON document.

    Keys missing from the document fall back to the dynaconf defaults of the
    active environment; unknown keys are rejected.
    """

    threads: int

    def __init__(self, conf: Optional[dict] = None) -> None:
        conf_src = conf or settings
        self.threads = int(conf_src.get("THREADS", 1))

    def read(self, path: Path) -> dict[str, Any]:
        try:
            document = json.loads(Path(path).read_text())
        except FileNotFoundError as exc:
            raise ConfigError(f"config file {path} does not exist") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(document, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        return document

    def build(
        self,
        document: dict[str, Any],
        experiment: Optional[Experiment] = None,
        seed: Optional[int] = None,
    ) -> ExperimentConfig:
        document = dict(document)
        if experiment is not None:
            declared = document.setdefault("experiment", str(experiment))
            if declared != str(experiment):
                raise ConfigError(
                    f"config declares experiment {declared!r} but {experiment} was run",
                    fields=["experiment"],
                )
        if seed is not None:
            document["seeds"] = [seed]
        try:
            return ExperimentConfig.model_validate(document)
        except ValidationError as exc:
            fields = []
            messages = []
            for error in exc.errors():
                loc = ".".join(str(part) for part in error["loc"])
                if not loc:
                    loc = error["msg"].split(":", 1)[0].removeprefix("Value error, ")
                fields.append(loc)
                messages.append(f"{loc}: {error['msg']}")
            raise ConfigError("; ".join(messages), fields=fields) from exc

    def load(
        self,
        path: Optional[Path],
        experiment: Optional[Experiment] = None,
        seed: Optional[int] = None,
    ) -> ExperimentConfig:
        document = self.read(path) if path is not None else {}
        return self.build(document, experiment=experiment, seed=seed)

    def resolve_threads(self, requested: Optional[int]) -> int:
        """``METALIN_THREADS`` wins over ``--threads``, which wins over the default."""
        from_env = os.environ.get("METALIN_THREADS")
        try:
            threads = int(from_env) if from_env else (requested or self.threads)
        except ValueError as exc:
            raise ConfigError(
                f"METALIN_THREADS must be an integer, got {from_env!r}", fields=["threads"]
            ) from exc
        if threads < 1:
            raise ConfigError("threads must be >= 1", fields=["threads"])
        return threads
