from .counterexample import counterexample_instance, counterexample_parameters
from .finite import ContractionReport, FiniteInstance, contraction_check, random_instance, ratio_search
from .flow import (
    FlowEstimator,
    FlowTrajectory,
    estimate_barf,
    integrate_flow,
    qcd_flow,
    radial_growth,
    unit_directions,
)

__all__ = [
    "ContractionReport",
    "FiniteInstance",
    "FlowEstimator",
    "FlowTrajectory",
    "contraction_check",
    "counterexample_instance",
    "counterexample_parameters",
    "estimate_barf",
    "integrate_flow",
    "qcd_flow",
    "radial_growth",
    "random_instance",
    "ratio_search",
    "unit_directions",
]
