import json

import pandas as pd
import pytest

from metalin.config.experiment_config import ExperimentConfigLoader
from metalin.core.constants.enums import Experiment
from metalin.core.controllers import (
    CONTROLLERS,
    ConstantsController,
    DecayController,
    SweepHyperController,
    SweepSplitController,
    WinProbController,
)
from metalin.core.exceptions import MetalinError
from metalin.core.models.methods import MethodConfig
from metalin.core.schemas.experiment import RESULT_COLUMNS
from metalin.utils.common.result_writer import ResultWriter


def _config(experiment, **values):
    return ExperimentConfigLoader().build(values, experiment=experiment)


def _values(rows, metric, method=None):
    return {
        (row.method, row.hyperparameters): row.value
        for row in rows
        if row.metric == metric and (method is None or row.method == method)
    }


def test_every_experiment_has_a_controller():
    assert set(CONTROLLERS) == set(Experiment) - {Experiment.VERIFY}


def test_sweep_hyper_limits():
    config = _config(
        Experiment.SWEEP_HYPER,
        d=1,
        task_pool=1000,
        seeds=[1],
        alpha_grid=[0.1, 2.0],
        gamma_grid=[1e-6, 1e6],
    )
    rows = SweepHyperController(config).run()
    risks = _values(rows, "optimal_population_risk")
    erm = risks[("erm", "")]
    assert risks[("bamaml", "gamma=1e-06")] == pytest.approx(1.0, abs=1e-3)
    assert risks[("bamaml", "gamma=1000000.0")] == pytest.approx(erm, abs=1e-3)
    assert risks[("maml", "alpha=2.0")] > erm
    assert len(rows) == 7
    assert all(row.N is None and row.T is None for row in rows)


def test_sweep_split_is_thread_independent():
    config = _config(
        Experiment.SWEEP_SPLIT,
        d=1,
        N=10,
        T=20,
        task_pool=300,
        seeds=[1, 2],
        s_grid=[0.2, 0.5, 0.8],
    )
    single = [row.model_dump() for row in SweepSplitController(config, threads=1).run()]
    pooled = [row.model_dump() for row in SweepSplitController(config, threads=3).run()]
    assert single == pooled
    medians = [row for row in single if row["metric"] == "total_risk_median"]
    assert len(medians) == 3 * 4


def test_decay_emits_slopes():
    config = _config(
        Experiment.DECAY,
        d=1,
        N=20,
        task_pool=500,
        seeds=[1, 2, 3],
        logT_grid=[1, 2],
        logN_grid=[],
        methods=["erm", "bamaml"],
    )
    rows = DecayController(config).run()
    slopes = _values(rows, "fitted_slope_vs_T")
    assert set(slopes) == {("erm", ""), ("bamaml", "gamma=0.1")}
    references = _values(rows, "reference_slope_vs_T")
    assert set(references.values()) == {-1.0}
    per_seed = [row for row in rows if row.metric == "statistical_error_vs_T"]
    assert len(per_seed) == 2 * 3 * 2


def test_win_prob_against_itself_never_wins():
    config = _config(
        Experiment.WIN_PROB,
        d=1,
        task_pool=200,
        seeds=[4],
        logT_grid=[1],
        logN_grid=[1],
        repetitions=3,
    )
    maml = MethodConfig.maml(0.7)
    rows = WinProbController(config, challenger=maml, incumbent=maml).run()
    assert _values(rows, "win_fraction") == {("maml_vs_maml", "alpha=0.7;alpha=0.7"): 0.0}
    assert _values(rows, "mean_risk_gap") == {("maml_vs_maml", "alpha=0.7;alpha=0.7"): 0.0}


def test_win_prob_adapted_mode_records_metadata():
    config = _config(
        Experiment.WIN_PROB,
        d=1,
        task_pool=200,
        seeds=[4],
        logT_grid=[1],
        logN_grid=[1],
        repetitions=2,
        risk_mode="adapted",
        n_adapt=20,
        n_test=20,
    )
    controller = WinProbController(config)
    rows = controller.run()
    fraction = _values(rows, "win_fraction")[("bamaml_vs_maml", "gamma=0.1;alpha=0.7")]
    assert 0.0 <= fraction <= 1.0
    assert controller.metadata()["risk_mode"] == "adapted"


def test_constants_controller_rows():
    config = _config(
        Experiment.CONSTANTS,
        d=2,
        N=4,
        seeds=[3],
        n_samples=300,
        constant_alpha_grid=[0.1],
        constant_gamma_grid=[1.0],
        constant_s_grid=[0.5],
    )
    controller = ConstantsController(config)
    rows = controller.run()
    constants = _values(rows, "dominating_constant")
    assert set(constants) == {("erm", ""), ("maml", "alpha=0.1"), ("bamaml", "gamma=1.0")}
    assert all(
        row.mc_std_error is not None and row.mc_std_error > 0
        for row in rows
        if row.metric == "dominating_constant"
    )
    assert _values(rows, "exact_constant") == {("erm", ""): pytest.approx(1.75)}
    assert _values(rows, "asymptotic_limit")[("bamaml", "")] == pytest.approx(1.0)
    assert _values(rows, "weight_scale")[("maml", "alpha=0.1")] == pytest.approx(0.81)
    assert set(_values(rows, "conditional_constant")) == {("maml", "alpha=0.1")}
    assert len(_values(rows, "grid_min_constant")) == 2
    metadata = controller.metadata()
    assert metadata["eta"] == pytest.approx(0.5)
    assert metadata["asymptotic_targets"]["bamaml"]["kind"] == "limit"


def test_result_writer(tmp_path):
    config = _config(
        Experiment.SWEEP_HYPER, d=1, task_pool=100, seeds=[1], alpha_grid=[0.5], gamma_grid=[1.0]
    )
    rows = SweepHyperController(config).run()
    out = tmp_path / "nested" / "sweep.csv"
    ResultWriter(out).write(rows, {"experiment": "sweep-hyper"})

    frame = pd.read_csv(out)
    assert list(frame.columns) == RESULT_COLUMNS
    assert len(frame) == len(rows)
    assert frame["value"].tolist() == [row.value for row in rows]
    assert json.loads((tmp_path / "nested" / "sweep.csv.meta.json").read_text()) == {
        "experiment": "sweep-hyper"
    }

    with pytest.raises(MetalinError):
        ResultWriter(tmp_path / "dup.csv").write(rows + rows[:1])


@pytest.mark.slow
@pytest.mark.parametrize("gamma, bamaml_ahead", [(0.1, True), (1e6, False)])
def test_win_prob_at_large_sample(gamma, bamaml_ahead):
    config = _config(
        Experiment.WIN_PROB,
        d=1,
        alpha=0.7,
        gamma=gamma,
        task_pool=10_000,
        seeds=[2023],
        logT_grid=[4],
        logN_grid=[3],
        repetitions=100,
    )
    rows = WinProbController(config).run()
    (fraction,) = _values(rows, "win_fraction").values()
    assert (fraction > 0.5) == bamaml_ahead


@pytest.mark.slow
def test_decay_slope_matches_reference():
    config = _config(
        Experiment.DECAY,
        d=1,
        N=100,
        alpha=0.7,
        gamma=0.1,
        task_pool=500,
        seeds=list(range(200)),
        logT_grid=[2, 3, 4],
        logN_grid=[],
    )
    slopes = _values(DecayController(config).run(), "fitted_slope_vs_T")
    assert len(slopes) == 4
    for slope in slopes.values():
        assert slope == pytest.approx(-1.0, abs=0.15)
