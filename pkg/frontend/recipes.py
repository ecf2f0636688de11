"""
Canned experiment configs.

Model 1: i.i.d. Gaussian observations N(0, 1) -> N(0.5, 1), geometric change time with
p = 0.02. The CUSUM drift is a shifted LLR designed from Gaussian (1a), Laplace (1b) or
Cauchy (1c) densities, the latter two matched to the unit Gaussian.
Model 2: AR(1) observations whose coefficient drops from 0.8 to 0.5 at the change, unit
Gaussian innovations; Markov LLR drifts with Gaussian (2a), Laplace (2b) or Cauchy (2c)
innovation densities.
Model 3: two-dimensional CUSUM on Model 1 observations, pairing 1b with 1c (3a) or the
matched Gaussian LLR with a mismatched one designed for N(0.1, 1.4) (3b).
"""

from __future__ import annotations

import copy
import math
from typing import Any

from backend.model.observation import CAUCHY_MATCHED_GAMMA, LAPLACE_MATCHED_B
from utils.error import ConfigValueError

MU1 = 0.5
RHO_A = 0.02
A0, A1 = 0.8, 0.5
KAPPAS = [2.0, 27.0, 100.0]
MIXTURE = {"w": 0.25, "p_slow": 0.02, "p_fast": 0.2}
# optimal shifts for the Laplace and Cauchy designs on Gaussian data; a design that
# matches the data has r* = RHO_A
RSTAR_LAPLACE = 0.031
RSTAR_CAUCHY = 0.036


def _law(kind: str, **params: Any) -> dict[str, Any]:
    return {"kind": kind, "params": params}


def _gaussian(mu: float, var: float = 1.0) -> dict[str, Any]:
    return _law("gaussian", mu=mu, sigma=math.sqrt(var))


def _laplace(mu: float) -> dict[str, Any]:
    return _law("laplace", mu=mu, b=LAPLACE_MATCHED_B)


def _cauchy(x0: float) -> dict[str, Any]:
    return _law("cauchy", x0=x0, gamma=CAUCHY_MATCHED_GAMMA)


def _iid(breve0: dict, breve1: dict, shift: Any) -> dict[str, Any]:
    return {"kind": "cusum", "drift": {"kind": "iid_llr", "params": {"breve0": breve0, "breve1": breve1}}, "shift": shift}


def _markov(innovation: str, scale: float, shift: Any) -> dict[str, Any]:
    g = lambda a: _law("ar1", a=a, sigma_w=scale, innovation=innovation)  # noqa: E731
    return {"kind": "cusum", "drift": {"kind": "markov_llr", "params": {"g0": g(A0), "g1": g(A1)}}, "shift": shift}


SIS_1A = _iid(_gaussian(0.0), _gaussian(MU1), RHO_A)
SIS_1B = _iid(_laplace(0.0), _laplace(MU1), RSTAR_LAPLACE)
SIS_1C = _iid(_cauchy(0.0), _cauchy(MU1), RSTAR_CAUCHY)
SIS_3B_D = _iid(_gaussian(0.0), _gaussian(0.1, 1.4), "rstar")

MODEL_1 = {
    "pre": _gaussian(0.0),
    "post": _gaussian(MU1),
    "change": _law("geometric", p=RHO_A),
    "kappa": 27.0,
}

MODEL_2 = {
    "pre": _law("ar1", a=A0, sigma_w=1.0),
    "post": _law("ar1", a=A1, sigma_w=1.0),
    "change": _law("geometric", p=RHO_A),
    "kappa": 27.0,
}


def _recipe(name: str, model: dict, sis: list, K: int = 20, n_regens: int = 20_000) -> dict[str, Any]:
    return {
        "seed": 1,
        "name": name,
        "model": model,
        "sis": sis,
        "basis": {"K": K, "b": 0.4},
        "train": {"n_regens": n_regens, "eta": 30.0},
        "eval": {"n_paths": 100_000, "kappas": KAPPAS},
    }


def _model1_with_obs(pre: dict, post: dict) -> dict:
    return dict(MODEL_1, pre=pre, post=post)


RECIPES: dict[str, dict[str, Any]] = {
    "model1a": _recipe("model1a", MODEL_1, [SIS_1A]),
    "model1b": _recipe("model1b", MODEL_1, [SIS_1B]),
    "model1c": _recipe("model1c", MODEL_1, [SIS_1C]),
    "model2a": _recipe("model2a", MODEL_2, [_markov("gaussian", 1.0, RHO_A)]),
    "model2b": _recipe("model2b", MODEL_2, [_markov("laplace", LAPLACE_MATCHED_B, RSTAR_LAPLACE)]),
    "model2c": _recipe("model2c", MODEL_2, [_markov("cauchy", CAUCHY_MATCHED_GAMMA, RSTAR_CAUCHY)]),
    "model3a": _recipe("model3a", MODEL_1, [SIS_1B, SIS_1C], K=40, n_regens=50_000),
    "model3b": _recipe("model3b", MODEL_1, [SIS_1A, SIS_3B_D], K=40, n_regens=50_000),
    "model1a-mixed": _recipe(
        "model1a-mixed", dict(MODEL_1, change=_law("mixture", **MIXTURE)), [SIS_1A]
    ),
    "model1-laplace-obs": _recipe(
        "model1-laplace-obs", _model1_with_obs(_laplace(0.0), _laplace(MU1)), [dict(SIS_1B, shift=RHO_A)]
    ),
    "model1-cauchy-obs": _recipe(
        "model1-cauchy-obs", _model1_with_obs(_cauchy(0.0), _cauchy(MU1)), [dict(SIS_1C, shift=RHO_A)]
    ),
}


def recipe(name: str) -> dict[str, Any]:
    """A fresh copy of the named recipe's key tree."""
    try:
        return copy.deepcopy(RECIPES[name])
    except KeyError:
        raise ConfigValueError("recipe", "unknown recipe %r, expected one of %s" % (name, ", ".join(RECIPES))) from None
