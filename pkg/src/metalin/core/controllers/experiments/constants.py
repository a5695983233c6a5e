from typing import Any

from ...constants.enums import Experiment, MethodKind
from ...dominating_constants import (
    asymptotic_constant,
    dominating_constant_mc,
    erm_constant_exact,
    maml_constant_conditional_mc,
    ordering_report,
    weight_scale,
)
from ...models.methods import MethodConfig
from ...models.reports import ConstantEstimate
from ...schemas.experiment import ResultRow
from ..dependencies import cell_rng
from .base import ExperimentController

ERM_SPLIT = 0.5


class ConstantsController(ExperimentController):
    """Monte-Carlo dominating constants over the hyperparameter grids."""

    experiment = Experiment.CONSTANTS

    def run(self) -> list[ResultRow]:
        self._estimates: dict[int, ConstantEstimate] = {}
        return super().run()

    @property
    def seed(self) -> int:
        return self.config.seeds[0]

    def cells(self) -> list[tuple[MethodConfig, float]]:
        config = self.config
        grid = [(MethodConfig.erm(), ERM_SPLIT)]
        grid += [
            (MethodConfig.maml(a), s)
            for a in config.constant_alpha_grid
            for s in config.constant_s_grid
        ]
        grid += [
            (MethodConfig.bamaml(g), s)
            for g in config.constant_gamma_grid
            for s in config.constant_s_grid
        ]
        return grid

    def metadata(self) -> dict[str, Any]:
        eta = self.config.d / self.config.N
        return {
            "eta": eta,
            "asymptotic_targets": {
                kind.value: {
                    "value": target.value,
                    "kind": "upper bound" if target.is_bound else "limit",
                }
                for kind in MethodKind
                for target in [asymptotic_constant(kind, eta)]
            },
        }

    def run_cell(self, index: int, cell: tuple[MethodConfig, float]) -> list[ResultRow]:
        cfg, s = cell
        config = self.config
        estimate = dominating_constant_mc(
            cfg, config.d, config.N, s, cell_rng(self.seed, index), config.n_samples
        )
        self._estimates[index] = estimate
        common = {"seed": self.seed, "s": s, "T": None}
        rows = [
            self.row(
                cfg,
                "dominating_constant",
                estimate.value,
                mc_std_error=estimate.mc_std_error,
                **common,
            ),
            self.row(cfg, "lower_bound_ok", float(estimate.satisfies_lower_bound()), **common),
            self.row(cfg, "weight_scale", weight_scale(cfg, s).w, **common),
        ]
        if cfg.kind == MethodKind.MAML:
            conditional = maml_constant_conditional_mc(
                cfg.alpha, config.d, config.N, s, cell_rng(self.seed, index, 1), config.n_samples
            )
            rows.append(
                self.row(
                    cfg,
                    "conditional_constant",
                    conditional.value,
                    mc_std_error=conditional.mc_std_error,
                    **common,
                )
            )
        return rows

    def _family_min(self, kind: MethodKind) -> ConstantEstimate:
        return min(
            (est for est in self._estimates.values() if est.method.kind == kind),
            key=lambda est: est.value,
        )

    def finalize(self, rows: list[ResultRow]) -> list[ResultRow]:
        config = self.config
        eta = config.d / config.N
        common = {"seed": self.seed, "T": None, "s": None}
        rows.append(
            self.row("erm", "exact_constant", erm_constant_exact(config.d, config.N), **common)
        )
        for kind in MethodKind:
            target = asymptotic_constant(kind, eta)
            rows.append(
                self.row(
                    kind.value,
                    "asymptotic_upper_bound" if target.is_bound else "asymptotic_limit",
                    target.value,
                    **common,
                )
            )

        report = ordering_report(
            self._family_min(MethodKind.MAML), self._family_min(MethodKind.BAMAML)
        )
        for best in (report.first_min, report.second_min):
            rows.append(
                self.row(
                    best.method.kind.value,
                    "grid_min_constant",
                    best.value,
                    mc_std_error=best.mc_std_error,
                    hyperparameters=f"{best.method.hyperparameters};s={best.s!r}",
                    **common,
                )
            )
        rows.append(
            self.row("maml_vs_bamaml", "strictly_ordered", float(report.strictly_ordered), **common)
        )
        rows.append(
            self.row(
                "maml_vs_bamaml", "indistinguishable", float(report.indistinguishable), **common
            )
        )
        return rows
