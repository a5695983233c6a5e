from dataclasses import dataclass
from typing import Optional

from numpy.typing import NDArray

from ..constants.enums import MethodKind
from .methods import MethodConfig


@dataclass(frozen=True, eq=False)
class RiskReport:
    method: MethodConfig
    theta0_hat: NDArray
    theta0_star: NDArray
    optimal_population_risk: float
    statistical_error: float
    total_risk: float

    @property
    def decomposition_gap(self) -> float:
        """Relative mismatch of total = optimal + statistical."""
        gap = self.total_risk - self.optimal_population_risk - self.statistical_error
        return abs(gap) / abs(self.total_risk)


@dataclass(frozen=True)
class ConstantEstimate:
    value: float
    mc_std_error: float
    n_samples: int
    method: MethodConfig
    d: int
    N: int
    s: Optional[float] = None

    def satisfies_lower_bound(self, sigmas: float = 3.0) -> bool:
        return self.value >= 1.0 - sigmas * self.mc_std_error


@dataclass(frozen=True)
class WeightScale:
    method: MethodConfig
    s: float
    w: float


@dataclass(frozen=True)
class AsymptoticConstant:
    kind: MethodKind
    eta: float
    value: float
    is_bound: bool = False


@dataclass(frozen=True)
class OrderingReport:
    first_min: ConstantEstimate
    second_min: ConstantEstimate
    first_target: float
    second_target: float
    second_target_is_bound: bool
    strictly_ordered: bool
    indistinguishable: bool

    @property
    def verdict(self) -> str:
        if self.strictly_ordered:
            return "ordered"
        if self.indistinguishable:
            return "indistinguishable"
        return "not-ordered"
