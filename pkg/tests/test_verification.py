import numpy as np
import pytest

from metalin.core.constants.enums import VerifySubset
from metalin.core.controllers import VerificationController
from metalin.core.controllers.experiments.verification import FAULT_MAML_WEIGHT_SIGN
from metalin.core.schemas.verification import CheckResult, VerificationReport


def _rng():
    return np.random.default_rng(2023)


def test_decomposition_check_passes_on_clean_build():
    result = VerificationController().check_decomposition_identity(_rng())
    assert result.passed
    assert result.measured < 1e-8


def test_injected_maml_fault_breaks_decomposition():
    result = VerificationController(fault=FAULT_MAML_WEIGHT_SIGN).check_decomposition_identity(
        _rng()
    )
    assert not result.passed
    assert result.name == "risk-decomposition-identity"
    assert result.measured > 1e-8


def test_unknown_fault_is_rejected():
    with pytest.raises(ValueError):
        VerificationController(fault="flip-everything")


def test_subset_selects_module_checks():
    report = VerificationController(subset=VerifySubset.NUMERICS).run()
    assert report.passed
    assert {check.module for check in report.checks} == {VerifySubset.NUMERICS}
    assert len(report.checks) == 4


def test_failing_check_is_collected(monkeypatch):
    controller = VerificationController(subset=VerifySubset.NUMERICS)

    def explode(rng):
        raise RuntimeError("boom")

    explode.__name__ = "check_orthogonal"
    monkeypatch.setattr(controller, "check_orthogonal", explode)
    report = controller.run()
    assert not report.passed
    assert [check.name for check in report.failures] == ["orthogonal"]
    assert "boom" in report.failures[0].detail
    assert len(report.checks) == 4


def test_report_passes_only_when_every_check_passes():
    ok = CheckResult(name="a", module=VerifySubset.RISK, passed=True, measured=0.0)
    bad = CheckResult(name="b", module=VerifySubset.RISK, passed=False, measured=1.0)
    assert VerificationReport(checks=[ok]).passed
    assert not VerificationReport(checks=[ok, bad]).passed
    assert VerificationReport(checks=[ok, bad]).failures == [bad]


@pytest.mark.slow
@pytest.mark.parametrize(
    "subset",
    [
        VerifySubset.TASKGEN,
        VerifySubset.ESTIMATORS,
        VerifySubset.RISK,
        VerifySubset.CONSTANTS,
    ],
)
def test_module_suites_pass(subset):
    report = VerificationController(subset=subset).run()
    assert report.passed, [check.detail for check in report.failures]
