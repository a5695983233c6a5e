from enum import StrEnum


class MethodKind(StrEnum):
    ERM = "erm"
    MAML = "maml"
    IMAML = "imaml"
    BAMAML = "bamaml"


class Regime(StrEnum):
    GENERAL = "general"
    LINEAR_CENTROID = "linear-centroid"


class Experiment(StrEnum):
    SWEEP_HYPER = "sweep-hyper"
    SWEEP_SPLIT = "sweep-split"
    DECAY = "decay"
    WIN_PROB = "win-prob"
    CONSTANTS = "constants"
    VERIFY = "verify"


class RiskMode(StrEnum):
    POPULATION = "population"
    ADAPTED = "adapted"


class LossKind(StrEnum):
    SQUARED = "squared"
    NLL = "nll"


class VerifySubset(StrEnum):
    NUMERICS = "numerics"
    TASKGEN = "taskgen"
    ESTIMATORS = "estimators"
    RISK = "risk"
    CONSTANTS = "constants"
