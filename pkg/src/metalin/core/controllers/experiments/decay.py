from collections import defaultdict

from ....utils.helper import loglog_slope, powers_of_ten, summarize
from ...constants.enums import Experiment
from ...risk import decompose
from ...schemas.experiment import ResultRow
from ...taskgen import sample_batch
from ..dependencies import cell_rng, draw_tasks, method_configs
from .base import ExperimentController

REFERENCE_SLOPE = -1.0


class DecayController(ExperimentController):
    """Statistical error against the number of tasks T and samples per task N."""

    experiment = Experiment.DECAY

    def cells(self) -> list[tuple[str, int, int]]:
        config = self.config
        return [("T", T, config.N) for T in powers_of_ten(config.logT_grid)] + [
            ("N", config.T, N) for N in powers_of_ten(config.logN_grid)
        ]

    def run_cell(self, index: int, cell: tuple[str, int, int]) -> list[ResultRow]:
        axis, T, N = cell
        config = self.config
        methods = method_configs(config)
        errors: dict[int, list[float]] = defaultdict(list)
        rows = []
        for seed in config.seeds:
            rng = cell_rng(seed, index)
            population = self.population(seed)
            batch = sample_batch(
                rng, draw_tasks(rng, population, T), N, config.s, noiseless=config.noiseless
            )
            for position, cfg in enumerate(methods):
                error = decompose(cfg, batch, population, config.s).statistical_error
                errors[position].append(error)
                rows.append(
                    self.row(cfg, "statistical_error", error, seed=seed, T=T, N=N, axis=axis)
                )

        for position, cfg in enumerate(methods):
            for stat, value in summarize(errors[position]).items():
                rows.append(
                    self.row(cfg, f"statistical_error_{stat}", value, T=T, N=N, axis=axis)
                )
        return rows

    def row(self, method, metric, value, seed=None, mc_std_error=None, **fields) -> ResultRow:
        axis = fields.pop("axis", None)
        if axis is not None:
            metric = f"{metric}_vs_{axis}"
        return super().row(method, metric, value, seed=seed, mc_std_error=mc_std_error, **fields)

    def finalize(self, rows: list[ResultRow]) -> list[ResultRow]:
        """Append the fitted log-log slope of the median error per method and axis."""
        slopes = []
        for axis in ("T", "N"):
            medians: dict[tuple[str, str], list[tuple[int, float]]] = defaultdict(list)
            for row in rows:
                if row.metric == f"statistical_error_median_vs_{axis}":
                    size = row.T if axis == "T" else row.N
                    medians[(row.method, row.hyperparameters)].append((size, row.value))
            for (method, hyper), points in medians.items():
                if len(points) < 2:
                    continue
                sizes, values = zip(*sorted(points))
                fixed = {"T": None} if axis == "T" else {"N": None}
                slopes.append(
                    super().row(
                        method,
                        f"fitted_slope_vs_{axis}",
                        loglog_slope(sizes, values),
                        hyperparameters=hyper,
                        **fixed,
                    )
                )
                slopes.append(
                    super().row(
                        method,
                        f"reference_slope_vs_{axis}",
                        REFERENCE_SLOPE,
                        hyperparameters=hyper,
                        **fixed,
                    )
                )
        return rows + slopes
