from dataclasses import dataclass
from typing import Optional

import numpy as np

from utils.error import QcdValidationError

from .qfunction import QFunction, q_value


@dataclass(frozen=True)
class TdStep:
    s: np.ndarray
    u: int
    changed: bool
    mean_residual: float
    in_delta: bool
    s_next: Optional[np.ndarray] = None


def stage_cost(changed: bool, mean_residual: float, u: int, kappa: float) -> float:
    if u:
        return 0.0 if changed else kappa * mean_residual
    return 1.0 if changed else 0.0


def td_regen(qf: QFunction, step: TdStep, gamma: float, kappa: float) -> float:
    """
    D = -Q(s_k, u_k) + c(Phi_k, u_k) + gamma (1 - u_k) 1{Phi_k not in Delta} min_u Q(s_{k+1}, u)
    """
    d = -q_value(qf, step.s, step.u) + stage_cost(step.changed, step.mean_residual, step.u, kappa)
    if step.u == 0 and not step.in_delta:
        if step.s_next is None:
            raise QcdValidationError("a continuing step needs the next SIS value")
        d += gamma * float(np.min(qf.values(step.s_next)[0]))
    return d
