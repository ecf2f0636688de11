from .config import TrainConfig, ZapConfig
from .episodes import Episode, EpisodeSource
from .projection import EagernessBin, conditional_cost_curve, projection_check, projection_ls
from .qfunction import NotThreshold, QFunction, greedy, q_value, threshold_grid, threshold_of
from .td import TdStep, stage_cost, td_regen
from .train import TrainResult, train

__all__ = [
    "EagernessBin",
    "Episode",
    "EpisodeSource",
    "NotThreshold",
    "QFunction",
    "TdStep",
    "TrainConfig",
    "TrainResult",
    "ZapConfig",
    "conditional_cost_curve",
    "greedy",
    "projection_check",
    "projection_ls",
    "q_value",
    "stage_cost",
    "td_regen",
    "threshold_grid",
    "threshold_of",
    "train",
]
