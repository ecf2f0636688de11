from __future__ import annotations

import logging
from dataclasses import asdict, dataclass

from backend.model.qcdmodel import QcdModel
from backend.sis.statistic import SisSpec
from utils.error import PolicyFailsToStopError, QcdValidationError
from utils.parallel import blocks, map_blocks

from .paths import STEP_CAP, reduce_tallies, stopping_block
from .policy import Policy

_log = logging.getLogger(__name__)

MAX_CAPPED_FRACTION = 0.01


@dataclass(frozen=True)
class EvalReport:
    mdd: float
    mde: float
    cost: float
    p_fa: float
    se_mdd: float
    se_mde: float
    se_cost: float
    se_p_fa: float
    kappa: float
    n_paths: int
    capped: int = 0

    def describe(self) -> dict:
        return asdict(self)


def eval_policy(
    model: QcdModel,
    spec: SisSpec,
    policy: Policy,
    kappa: float,
    n_paths: int,
    seed: int,
    cap: int = STEP_CAP,
    threads: int = 1,
) -> EvalReport:
    if n_paths < 1:
        raise QcdValidationError("n_paths must be positive")
    items = [(model, spec, policy, seed, lo, hi, cap) for lo, hi in blocks(n_paths)]
    tally = reduce_tallies(map_blocks(stopping_block, items, threads))
    if tally.capped > MAX_CAPPED_FRACTION * n_paths:
        raise PolicyFailsToStopError(tally.capped, n_paths)
    if tally.capped:
        _log.warning("%d of %d paths reached the %d-step cap", tally.capped, n_paths, cap)
    mde, se_mde = tally.mde()
    mdd, se_mdd = tally.mdd()
    j, se_j = tally.cost(kappa)
    pfa, se_pfa = tally.p_fa()
    report = EvalReport(
        mdd=float(mdd[0]),
        mde=float(mde[0]),
        cost=float(j[0]),
        p_fa=float(pfa[0]),
        se_mdd=float(se_mdd[0]),
        se_mde=float(se_mde[0]),
        se_cost=float(se_j[0]),
        se_p_fa=float(se_pfa[0]),
        kappa=kappa,
        n_paths=n_paths,
        capped=tally.capped,
    )
    _log.info("policy %s: J=%.6g (se %.3g)", policy.describe()["kind"], report.cost, report.se_cost)
    return report
