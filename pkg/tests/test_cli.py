import json

import pandas as pd
import pytest
from typer.testing import CliRunner

from metalin.core.schemas.experiment import RESULT_COLUMNS
from metalin.main import app

runner = CliRunner()


@pytest.fixture
def split_config(tmp_path):
    path = tmp_path / "split.json"
    path.write_text(
        json.dumps(
            {
                "experiment": "sweep-split",
                "d": 1,
                "N": 10,
                "T": 20,
                "task_pool": 200,
                "seeds": [1, 2],
                "s_grid": [0.3, 0.7],
            }
        )
    )
    return path


def test_experiment_writes_csv_and_metadata(tmp_path, split_config):
    out = tmp_path / "split.csv"
    result = runner.invoke(app, ["sweep-split", "--config", str(split_config), "--out", str(out)])
    assert result.exit_code == 0, result.output
    frame = pd.read_csv(out)
    assert list(frame.columns) == RESULT_COLUMNS
    assert set(frame["experiment"]) == {"sweep-split"}
    metadata = json.loads((tmp_path / "split.csv.meta.json").read_text())
    assert metadata["config"]["s_grid"] == [0.3, 0.7]
    assert metadata["experiment"] == "sweep-split"


def test_output_is_byte_identical_across_thread_counts(tmp_path, split_config):
    outputs = []
    for threads in ("1", "2"):
        out = tmp_path / f"split-{threads}.csv"
        result = runner.invoke(
            app,
            ["sweep-split", "--config", str(split_config), "--out", str(out), "--threads", threads],
        )
        assert result.exit_code == 0, result.output
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_seed_flag_replaces_seed_list(tmp_path, split_config):
    out = tmp_path / "seeded.csv"
    result = runner.invoke(
        app, ["sweep-split", "--config", str(split_config), "--out", str(out), "--seed", "7"]
    )
    assert result.exit_code == 0, result.output
    seeds = pd.read_csv(out)["seed"].dropna().unique().tolist()
    assert seeds == [7]


def test_config_errors_exit_with_one(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"experiment": "sweep-hyper", "alpah": 0.3}))
    result = runner.invoke(app, ["sweep-hyper", "--config", str(path), "--out", str(tmp_path / "x.csv")])
    assert result.exit_code == 1
    assert not (tmp_path / "x.csv").exists()


def test_unsolvable_config_exits_with_one(tmp_path):
    path = tmp_path / "decay.json"
    path.write_text(json.dumps({"d": 5, "N": 4, "logT_grid": [0], "logN_grid": []}))
    result = runner.invoke(app, ["decay", "--config", str(path), "--out", str(tmp_path / "d.csv")])
    assert result.exit_code == 1


def test_verify_numerics_subset(tmp_path):
    report = tmp_path / "report.json"
    result = runner.invoke(app, ["verify", "--subset", "numerics", "--report", str(report)])
    assert result.exit_code == 0, result.output
    document = json.loads(report.read_text())
    assert document["passed"] is True
    assert {check["module"] for check in document["checks"]} == {"numerics"}
    assert all("measured" in check for check in document["checks"])


def test_verify_rejects_unknown_fault():
    result = runner.invoke(app, ["verify", "--subset", "numerics", "--fault", "nope"])
    assert result.exit_code != 0


def test_help_lists_commands():
    result = runner.invoke(app, ["--help"])
    assert result.exit_code == 0
    for command in ("sweep-hyper", "sweep-split", "decay", "win-prob", "constants", "verify"):
        assert command in result.output
