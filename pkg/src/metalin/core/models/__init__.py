from .methods import GaussianPosterior, MethodConfig
from .reports import (
    AsymptoticConstant,
    ConstantEstimate,
    OrderingReport,
    RiskReport,
    WeightScale,
)
from .tasks import TaskBatch, TaskDataset, TaskDistribution, TaskSpec

__all__ = [
    "AsymptoticConstant",
    "ConstantEstimate",
    "GaussianPosterior",
    "MethodConfig",
    "OrderingReport",
    "RiskReport",
    "TaskBatch",
    "TaskDataset",
    "TaskDistribution",
    "TaskSpec",
    "WeightScale",
]
