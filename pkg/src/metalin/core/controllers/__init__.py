from ..constants.enums import Experiment
from .experiments.base import ExperimentController
from .experiments.constants import ConstantsController
from .experiments.decay import DecayController
from .experiments.sweeps import SweepHyperController, SweepSplitController
from .experiments.verification import VerificationController
from .experiments.win_prob import WinProbController

CONTROLLERS: dict[Experiment, type[ExperimentController]] = {
    Experiment.SWEEP_HYPER: SweepHyperController,
    Experiment.SWEEP_SPLIT: SweepSplitController,
    Experiment.DECAY: DecayController,
    Experiment.WIN_PROB: WinProbController,
    Experiment.CONSTANTS: ConstantsController,
}

__all__ = [
    "CONTROLLERS",
    "ConstantsController",
    "DecayController",
    "ExperimentController",
    "SweepHyperController",
    "SweepSplitController",
    "VerificationController",
    "WinProbController",
]
