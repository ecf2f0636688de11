"""
The builder phase: resolved config -> domain objects.

Shifts written as `rstar` are computed here through the asymptotics module, once per
component, and remembered so that every subcommand of a run sees the same values.
"""

from __future__ import annotations

import json
import logging
from typing import Any, Optional

import numpy as np

from backend.asymptotics import MgfProfile, rho_a_of, rstar
from backend.basis import RbfBasis, fit_centers, load_basis
from backend.basis.fit import collect_fit_samples
from backend.model import (
    Ar1,
    ChangeTimeLaw,
    Geometric,
    IidCauchy,
    IidGaussian,
    IidLaplace,
    Mixture,
    ObservationLaw,
    QcdModel,
)
from backend.qlearn import QFunction, TrainConfig, ZapConfig
from backend.sis import DriftFn, IidLlr, MarkovLlr, SisKind, SisSpec
from backend.evaluation import matched_geometric
from utils.error import ConfigMissingKeyError, ConfigValueError, DimensionMismatchError

_log = logging.getLogger(__name__)


def build_law(d: dict[str, Any]) -> ObservationLaw:
    p = d["params"]
    kind = d["kind"]
    if kind == "gaussian":
        return IidGaussian(p["mu"], p["sigma"])
    if kind == "laplace":
        return IidLaplace(p["mu"], p["b"])
    if kind == "cauchy":
        return IidCauchy(p["x0"], p["gamma"])
    return Ar1(p["a"], p["sigma_w"], p["innovation"])


def build_change(d: dict[str, Any]) -> ChangeTimeLaw:
    p = d["params"]
    if d["kind"] == "geometric":
        return Geometric(p["p"])
    return Mixture(p["w"], p["p_slow"], p["p_fast"])


def build_drift(d: dict[str, Any], shift: float = 0.0) -> DriftFn:
    p = d["params"]
    if d["kind"] == "iid_llr":
        return IidLlr(build_law(p["breve0"]), build_law(p["breve1"]), shift)
    g0, g1 = build_law(p["g0"]), build_law(p["g1"])
    if not (isinstance(g0, Ar1) and isinstance(g1, Ar1)):
        raise ConfigValueError("sis.drift", "markov_llr needs ar1 design laws")
    return MarkovLlr(g0, g1, shift)


class Builder:
    def __init__(self, config: dict[str, Any]) -> None:
        self.config = config
        self.seed: int = config["seed"]
        self._model: Optional[QcdModel] = None
        self._sis: Optional[SisSpec] = None
        self.shifts: list[float] = []

    def block(self, name: str) -> dict[str, Any]:
        return self.config[name]

    def model(self) -> QcdModel:
        if self._model is None:
            m = self.config.get("model")
            if m is None:
                raise ConfigMissingKeyError("model")
            self._model = QcdModel(build_law(m["pre"]), build_law(m["post"]), build_change(m["change"]), m["kappa"])
        return self._model

    def profile(self, drift: DriftFn) -> MgfProfile:
        model = self.model()
        a = self.block("asymptotics")
        return MgfProfile(drift, model.pre, model.post, rho_a_of(model.change, a["hazard"]), a["n_mc"], self.seed)

    def sis(self) -> SisSpec:
        if self._sis is None:
            comps = self.config.get("sis")
            if comps is None:
                raise ConfigMissingKeyError("sis")
            pairs = []
            for i, c in enumerate(comps):
                drift = build_drift(c["drift"])
                shift = c["shift"]
                if shift == "rstar":
                    shift = rstar(self.profile(drift))
                    _log.info("sis[%d]: shift rstar resolved to %.10g", i, shift)
                pairs.append((SisKind(c["kind"]), drift.with_shift(shift)))
                self.shifts.append(float(shift))
            self._sis = SisSpec.of(*pairs)
        return self._sis

    def kappas(self) -> list[float]:
        ks = self.block("eval")["kappas"]
        return list(ks) if ks else [self.model().kappa]

    def train_config(self, kappa: Optional[float] = None, seed: Optional[int] = None) -> TrainConfig:
        t = self.block("train")
        if kappa is None:
            kappa = t["kappa"] if t["kappa"] is not None else self.model().kappa
        return TrainConfig(
            n_regens=t["n_regens"],
            kappa=kappa,
            seed=self.seed if seed is None else seed,
            alpha0=t["alpha0"],
            rho=t["rho"],
            gamma=t["gamma"],
            eta=t["eta"],
            explore_p=t["explore_p"],
            reset_bound=t["reset_bound"],
            theta0_range=t["theta0_range"],
            zap=ZapConfig(**t["zap"]),
            averaging=t["averaging"],
            episode_cap=t["episode_cap"],
            log_points=t["log_points"],
        )

    def basis(self) -> RbfBasis:
        b = self.block("basis")
        if b["file"] is not None:
            basis = load_basis(b["file"])
        else:
            eta = self.block("train")["eta"]
            samples = collect_fit_samples(
                self.model(), self.sis(), eta, b["n_paths"], self.seed, max_samples=b["max_samples"]
            )
            basis = fit_centers(samples, b["K"], b["b"], self.seed)
        if basis.sis_dimension != self.sis().dimension:
            raise DimensionMismatchError("basis", self.sis().dimension, basis.sis_dimension)
        return basis

    def eval_grid(self) -> np.ndarray:
        g = self.block("eval")["grid"]
        if not (0 < g["lo"] < g["hi"]) or g["points"] < 2:
            raise ConfigValueError("eval.grid", "needs 0 < lo < hi and at least 2 points")
        return np.linspace(g["lo"], g["hi"], g["points"])

    def shiryaev_prior(self) -> Geometric:
        p = self.block("shiryaev")["prior_p"]
        if p is not None:
            return Geometric(p)
        change = self.model().change
        return change if isinstance(change, Geometric) else matched_geometric(change)


def load_theta(path: str, basis: RbfBasis, averaged: bool = False) -> QFunction:
    """Read theta from a train_result.json (final or averaged iterate) or a bare list."""
    with open(path) as f:
        d = json.load(f)
    if isinstance(d, dict):
        rec = d.get("result", d)
        key = "theta_pr" if averaged and rec.get("theta_pr") is not None else "theta_final"
        theta = rec[key]
    else:
        theta = d
    return QFunction(basis, np.asarray(theta, dtype=float))
