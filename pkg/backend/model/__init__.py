from .changetime import ChangeTimeLaw, Geometric, Mixture, mean_residual, sample_change_time
from .observation import (
    CAUCHY_MATCHED_GAMMA,
    LAPLACE_MATCHED_B,
    Ar1,
    IidCauchy,
    IidGaussian,
    IidLaplace,
    ObservationLaw,
)
from .qcdmodel import HiddenStep, ObservationStream, QcdModel, simulate_path

__all__ = [
    "ChangeTimeLaw",
    "Geometric",
    "Mixture",
    "mean_residual",
    "sample_change_time",
    "ObservationLaw",
    "IidGaussian",
    "IidLaplace",
    "IidCauchy",
    "Ar1",
    "CAUCHY_MATCHED_GAMMA",
    "LAPLACE_MATCHED_B",
    "QcdModel",
    "HiddenStep",
    "ObservationStream",
    "simulate_path",
]
