from .drift import DriftFn, IidLlr, MarkovLlr, drift_eval
from .statistic import (
    SisComponent,
    SisKind,
    SisSpec,
    SisState,
    cusum_path,
    log_sr_path,
    run_chunk,
    sis_reset,
    sis_step,
    sup_norm,
)

__all__ = [
    "DriftFn",
    "IidLlr",
    "MarkovLlr",
    "drift_eval",
    "SisComponent",
    "SisKind",
    "SisSpec",
    "SisState",
    "cusum_path",
    "log_sr_path",
    "run_chunk",
    "sis_reset",
    "sis_step",
    "sup_norm",
]
