from .approx import Anchor, approx_cost, approx_opt, asymptotics_table, shifted_approx
from .mgf import MgfProfile, MomentEstimate, drift_mean, log_mgf, log_mgf_estimate
from .roots import AsymptoticSummary, find_roots, gamma2, rho_a_of, root_xtol, rstar, summarize

__all__ = [
    "Anchor",
    "AsymptoticSummary",
    "MgfProfile",
    "MomentEstimate",
    "approx_cost",
    "approx_opt",
    "asymptotics_table",
    "drift_mean",
    "find_roots",
    "gamma2",
    "log_mgf",
    "log_mgf_estimate",
    "rho_a_of",
    "root_xtol",
    "rstar",
    "shifted_approx",
    "summarize",
]
