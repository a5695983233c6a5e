from dataclasses import dataclass
from typing import Optional

from numpy.typing import NDArray

from ..constants.enums import MethodKind


@dataclass(frozen=True)
class MethodConfig:
    kind: MethodKind
    alpha: Optional[float] = None
    gamma: Optional[float] = None

    def __post_init__(self) -> None:
        kind = MethodKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind == MethodKind.MAML:
            if self.alpha is None or self.alpha < 0:
                raise ValueError(f"MAML needs a non-negative alpha, got {self.alpha}")
            if self.gamma is not None:
                raise ValueError("MAML takes no gamma")
        elif kind in (MethodKind.IMAML, MethodKind.BAMAML):
            if self.gamma is None or not self.gamma > 0:
                raise ValueError(f"{kind} needs a positive gamma, got {self.gamma}")
            if self.alpha is not None:
                raise ValueError(f"{kind} takes no alpha")
        elif self.alpha is not None or self.gamma is not None:
            raise ValueError("ERM takes no hyperparameters")

    @classmethod
    def erm(cls) -> "MethodConfig":
        return cls(MethodKind.ERM)

    @classmethod
    def maml(cls, alpha: float) -> "MethodConfig":
        return cls(MethodKind.MAML, alpha=alpha)

    @classmethod
    def imaml(cls, gamma: float) -> "MethodConfig":
        return cls(MethodKind.IMAML, gamma=gamma)

    @classmethod
    def bamaml(cls, gamma: float) -> "MethodConfig":
        return cls(MethodKind.BAMAML, gamma=gamma)

    def gamma_b(self, n_train: int) -> float:
        """Prior precision of the BaMAML posterior, ``gamma * N1``."""
        if self.kind != MethodKind.BAMAML:
            raise ValueError("gamma_b is defined for BaMAML only")
        return self.gamma * n_train

    @property
    def hyperparameters(self) -> str:
        if self.alpha is not None:
            return f"alpha={self.alpha!r}"
        if self.gamma is not None:
            return f"gamma={self.gamma!r}"
        return ""

    def __str__(self) -> str:
        if self.hyperparameters:
            return f"{self.kind.value}({self.hyperparameters})"
        return self.kind.value


@dataclass(frozen=True, eq=False)
class GaussianPosterior:
    mean: NDArray
    cov: NDArray
