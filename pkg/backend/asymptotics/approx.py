"""
Large-threshold approximations of the CUSUM cost and its optimizer.

    J_inf(kappa, h) = h / m1 + kappa sqrt(h) sqrt(2 pi gamma^2) exp(-h v_plus)
    h_inf(kappa)    = log(kappa) / v_plus
    J_inf(kappa)    = log(kappa) / (m1 v_plus)

The shifted forms move both curves by a constant so that they pass through a measured
optimum (kappa0, h*(kappa0), J*(kappa0)), typically read off a threshold sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from utils.error import QcdValidationError

from .roots import AsymptoticSummary


@dataclass(frozen=True)
class Anchor:
    kappa0: float
    h_star: float
    j_star: float


def approx_cost(summary: AsymptoticSummary, h: float, kappa: float) -> float:
    if not (h > 0 and kappa > 0):
        raise QcdValidationError("approx_cost needs h > 0 and kappa > 0, got h=%r kappa=%r" % (h, kappa))
    eager = kappa * math.sqrt(h) * math.sqrt(2.0 * math.pi * summary.gamma2) * math.exp(-h * summary.v_plus)
    return h / summary.m1 + eager


def approx_opt(summary: AsymptoticSummary, kappa: float) -> tuple[float, float]:
    if not kappa > 1:
        raise QcdValidationError("approx_opt needs kappa > 1, got %r" % kappa)
    lk = math.log(kappa)
    return lk / summary.v_plus, lk / (summary.m1 * summary.v_plus)


def shifted_approx(summary: AsymptoticSummary, kappa: float, anchor: Anchor) -> tuple[float, float]:
    h_inf, j_inf = approx_opt(summary, kappa)
    h0, j0 = approx_opt(summary, anchor.kappa0)
    return h_inf - h0 + anchor.h_star, j_inf - j0 + anchor.j_star


def asymptotics_table(
    summary: AsymptoticSummary, kappas: Iterable[float], anchor: Optional[Anchor] = None
) -> list[dict]:
    rows = []
    for kappa in kappas:
        h_inf, j_inf = approx_opt(summary, kappa)
        row = {"kappa": float(kappa), "h_inf": h_inf, "J_inf": j_inf}
        if anchor is not None:
            row["h_s"], row["J_s"] = shifted_approx(summary, kappa, anchor)
        rows.append(row)
    return rows
