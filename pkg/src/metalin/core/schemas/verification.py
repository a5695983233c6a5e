from typing import Optional

from pydantic import BaseModel, ConfigDict, computed_field

from ..constants.enums import VerifySubset


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    module: VerifySubset
    passed: bool
    measured: float
    tolerance: Optional[float] = None
    reference: Optional[float] = None
    detail: str = ""


class VerificationReport(BaseModel):
    checks: list[CheckResult]

    @computed_field
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]
