from .batchmeans import BatchMeansReport, batch_means
from .histogram import histogram, histogram_rows
from .policy import AlwaysStop, BoxRule, GreedyPolicy, Policy, ThresholdRule
from .region import RegionCell, decision_region
from .report import EvalReport, eval_policy
from .shiryaev import (
    ShiryaevResult,
    matched_geometric,
    posterior_from_statistic,
    shiryaev_eval,
    shiryaev_grid,
    shiryaev_path,
    shiryaev_statistic,
    shiryaev_step,
)
from .sweep import ThresholdTable, cusum_star, default_grid, threshold_sweep

__all__ = [
    "AlwaysStop",
    "BatchMeansReport",
    "BoxRule",
    "EvalReport",
    "GreedyPolicy",
    "Policy",
    "RegionCell",
    "ShiryaevResult",
    "ThresholdRule",
    "ThresholdTable",
    "batch_means",
    "cusum_star",
    "decision_region",
    "default_grid",
    "eval_policy",
    "histogram",
    "histogram_rows",
    "matched_geometric",
    "posterior_from_statistic",
    "shiryaev_eval",
    "shiryaev_grid",
    "shiryaev_path",
    "shiryaev_statistic",
    "shiryaev_step",
    "threshold_sweep",
]
