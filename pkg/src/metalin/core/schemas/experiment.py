from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ...settings.config import settings
from ...utils.helper import powers_of_ten
from ..constants.enums import Experiment, MethodKind, RiskMode
from ..exceptions import InvalidSplitError
from ..taskgen import split_sizes

MAX_SEED = 2**64 - 1

REQUIRED_GRIDS: dict[Experiment, tuple[str, ...]] = {
    Experiment.SWEEP_HYPER: ("alpha_grid", "gamma_grid"),
    Experiment.SWEEP_SPLIT: ("s_grid",),
    Experiment.WIN_PROB: ("logT_grid", "logN_grid"),
    Experiment.CONSTANTS: (
        "constant_alpha_grid",
        "constant_gamma_grid",
        "constant_s_grid",
    ),
}


def _default(name: str) -> Any:
    return lambda: settings.get(name)


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    experiment: Experiment
    d: int = Field(default_factory=_default("DIMENSION"), ge=1)
    N: int = Field(default_factory=_default("SAMPLES_PER_TASK"), ge=2)
    T: int = Field(default_factory=_default("TASKS"), ge=1)
    s: float = Field(default_factory=_default("SPLIT"), gt=0, lt=1)
    seeds: list[int] = Field(
        default_factory=lambda: [settings.get("SEED")], min_length=1
    )
    alpha: float = Field(default_factory=_default("ALPHA"), gt=0)
    gamma: float = Field(default_factory=_default("GAMMA"), gt=0)
    alpha_grid: list[float] = Field(default_factory=_default("ALPHA_GRID"))
    gamma_grid: list[float] = Field(default_factory=_default("GAMMA_GRID"))
    s_grid: list[float] = Field(default_factory=_default("S_GRID"))
    logT_grid: list[float] = Field(default_factory=_default("LOGT_GRID"))
    logN_grid: list[float] = Field(default_factory=_default("LOGN_GRID"))
    constant_alpha_grid: list[float] = Field(
        default_factory=_default("CONSTANT_ALPHA_GRID")
    )
    constant_gamma_grid: list[float] = Field(
        default_factory=_default("CONSTANT_GAMMA_GRID")
    )
    constant_s_grid: list[float] = Field(default_factory=_default("CONSTANT_S_GRID"))
    repetitions: int = Field(default_factory=_default("REPETITIONS"), ge=1)
    task_pool: int = Field(default_factory=_default("TASK_POOL"), ge=1)
    n_samples: int = Field(default_factory=_default("CONSTANT_SAMPLES"), ge=100)
    methods: list[MethodKind] = Field(
        default_factory=lambda: list(MethodKind), min_length=1
    )
    noiseless: bool = False
    risk_mode: RiskMode = RiskMode.POPULATION
    n_adapt: int = Field(default=1000, ge=1)
    n_test: int = Field(default=1000, ge=1)

    @model_validator(mode="after")
    def check_consistency(self) -> "ExperimentConfig":
        for seed in self.seeds:
            if not 0 <= seed <= MAX_SEED:
                raise ValueError(f"seeds: {seed} is not a 64-bit unsigned integer")
        for name in REQUIRED_GRIDS.get(self.experiment, ()):
            if not getattr(self, name):
                raise ValueError(f"{name}: must be non-empty for {self.experiment}")
        if self.experiment == Experiment.DECAY and not (
            self.logT_grid or self.logN_grid
        ):
            raise ValueError("logT_grid: decay needs logT_grid or logN_grid")

        if any(g <= 0 for g in self.gamma_grid + self.constant_gamma_grid):
            raise ValueError("gamma_grid: every gamma must be positive")
        if any(a < 0 for a in self.alpha_grid + self.constant_alpha_grid):
            raise ValueError("alpha_grid: every alpha must be non-negative")
        if any(not 0 < s < 1 for s in self.s_grid + self.constant_s_grid):
            raise ValueError("s_grid: every split ratio must lie in (0, 1)")

        for T, N, s, field in self.fit_shapes():
            try:
                n_train, n_val = split_sizes(N, s)
            except InvalidSplitError as exc:
                raise ValueError(f"{field}: {exc.detail}") from exc
            self._check_solvable(T, N, n_train, n_val, field)
        return self

    def fit_shapes(self) -> list[tuple[int, int, float, str]]:
        """Every ``(T, N, s)`` this experiment fits on, tagged with its source field."""
        match self.experiment:
            case Experiment.SWEEP_SPLIT:
                return [(self.T, self.N, s, "s_grid") for s in self.s_grid]
            case Experiment.WIN_PROB:
                return [
                    (T, N, self.s, "logT_grid")
                    for T in powers_of_ten(self.logT_grid)
                    for N in powers_of_ten(self.logN_grid)
                ]
            case Experiment.DECAY:
                return [
                    (T, self.N, self.s, "logT_grid")
                    for T in powers_of_ten(self.logT_grid)
                ] + [
                    (self.T, N, self.s, "logN_grid")
                    for N in powers_of_ten(self.logN_grid)
                ]
        return []

    def _check_solvable(
        self, T: int, N: int, n_train: int, n_val: int, field: str
    ) -> None:
        if MethodKind.ERM in self.methods and T * N < self.d:
            raise ValueError(
                f"{field}: erm normal equations are singular with T={T}, N={N}, d={self.d}"
            )
        if MethodKind.MAML in self.methods and T * min(n_train, n_val) < self.d:
            raise ValueError(
                f"{field}: maml normal equations are singular with T={T}, "
                f"N1={n_train}, N2={n_val}, d={self.d}"
            )


class ResultRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    experiment: str
    method: str
    hyperparameters: str = ""
    d: int
    N: Optional[int] = None
    T: Optional[int] = None
    s: Optional[float] = None
    seed: Optional[int] = None
    metric: str
    value: float
    mc_std_error: Optional[float] = None


RESULT_COLUMNS = list(ResultRow.model_fields)
