from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from ..constants.enums import Regime
from ..exceptions import InvalidDimensionError


@dataclass(frozen=True, eq=False)
class TaskDistribution:
    """Generator settings for one family of tasks.

    ``GENERAL`` draws eigenvalues and parameters uniformly and rotates every
    task covariance by the same ``shared_V``. ``LINEAR_CENTROID`` keeps
    ``Q = I`` and scatters parameters around ``centroid`` with total spread ``R``.
    """

    d: int
    regime: Regime = Regime.GENERAL
    theta_low: float = 0.0
    theta_high: float = 2.0
    lambda_low: float = 0.1
    lambda_high: float = 2.0
    shared_V: Optional[NDArray] = None
    centroid: Optional[NDArray] = None
    spread: float = 1.0

    def __post_init__(self) -> None:
        if self.d < 1:
            raise InvalidDimensionError(f"dimension must be >= 1, got {self.d}")
        if not 0 < self.lambda_low <= self.lambda_high:
            raise ValueError(
                f"need 0 < lambda_low <= lambda_high, got "
                f"{self.lambda_low}, {self.lambda_high}"
            )
        if self.theta_low > self.theta_high:
            raise ValueError("theta_low must not exceed theta_high")
        if self.spread < 0:
            raise ValueError("spread must be non-negative")
        if self.regime == Regime.GENERAL:
            if self.shared_V is None or np.shape(self.shared_V) != (self.d, self.d):
                raise InvalidDimensionError("general regime needs a d x d shared_V")
        if self.centroid is None:
            object.__setattr__(self, "centroid", np.zeros(self.d))
        elif np.shape(self.centroid) != (self.d,):
            raise InvalidDimensionError("centroid must be a d-vector")


@dataclass(frozen=True, eq=False)
class TaskSpec:
    theta_gt: NDArray
    Q: NDArray
    noise_sigma: float = 1.0

    def __post_init__(self) -> None:
        if self.noise_sigma != 1.0:
            raise ValueError("only unit noise is supported")
        if self.Q.shape != (self.d, self.d):
            raise InvalidDimensionError(
                f"Q has shape {self.Q.shape} for a {self.d}-dim parameter"
            )

    @property
    def d(self) -> int:
        return self.theta_gt.shape[0]


@dataclass(frozen=True, eq=False)
class TaskDataset:
    X_trn: NDArray
    y_trn: NDArray
    X_val: NDArray
    y_val: NDArray

    @property
    def n_train(self) -> int:
        return self.X_trn.shape[0]

    @property
    def n_val(self) -> int:
        return self.X_val.shape[0]

    @property
    def n(self) -> int:
        return self.n_train + self.n_val

    @property
    def s(self) -> float:
        return self.n_train / self.n

    @property
    def d(self) -> int:
        return self.X_trn.shape[1]

    @property
    def X_all(self) -> NDArray:
        return np.concatenate([self.X_trn, self.X_val], axis=0)

    @property
    def y_all(self) -> NDArray:
        return np.concatenate([self.y_trn, self.y_val], axis=0)


@dataclass(frozen=True, eq=False)
class TaskBatch:
    """``T`` datasets of identical split sizes stacked along a leading axis."""

    X_trn: NDArray
    y_trn: NDArray
    X_val: NDArray
    y_val: NDArray

    def __post_init__(self) -> None:
        if self.X_trn.ndim != 3 or self.X_val.ndim != 3:
            raise InvalidDimensionError("batched features must be (T, n, d)")
        if self.X_trn.shape[0] != self.X_val.shape[0]:
            raise InvalidDimensionError("train and validation task counts differ")

    @classmethod
    def from_datasets(cls, datasets: Sequence[TaskDataset]) -> "TaskBatch":
        if isinstance(datasets, TaskBatch):
            return datasets
        if len(datasets) == 0:
            raise ValueError("at least one dataset is required")
        sizes = {(ds.n_train, ds.n_val, ds.d) for ds in datasets}
        if len(sizes) != 1:
            raise InvalidDimensionError(
                f"datasets must share split sizes and dimension, got {sorted(sizes)}"
            )
        return cls(
            X_trn=np.stack([ds.X_trn for ds in datasets]),
            y_trn=np.stack([ds.y_trn for ds in datasets]),
            X_val=np.stack([ds.X_val for ds in datasets]),
            y_val=np.stack([ds.y_val for ds in datasets]),
        )

    def __len__(self) -> int:
        return self.X_trn.shape[0]

    def __getitem__(self, index: int) -> TaskDataset:
        return TaskDataset(
            self.X_trn[index], self.y_trn[index], self.X_val[index], self.y_val[index]
        )

    def __iter__(self) -> Iterator[TaskDataset]:
        return (self[i] for i in range(len(self)))

    @property
    def n_train(self) -> int:
        return self.X_trn.shape[1]

    @property
    def n_val(self) -> int:
        return self.X_val.shape[1]

    @property
    def n(self) -> int:
        return self.n_train + self.n_val

    @property
    def s(self) -> float:
        return self.n_train / self.n

    @property
    def d(self) -> int:
        return self.X_trn.shape[2]

    @property
    def X_all(self) -> NDArray:
        return np.concatenate([self.X_trn, self.X_val], axis=1)

    @property
    def y_all(self) -> NDArray:
        return np.concatenate([self.y_trn, self.y_val], axis=1)
