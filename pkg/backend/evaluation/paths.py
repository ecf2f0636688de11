"""
Free-running evaluation paths.

Path i of a run is generated from its own substream of the master seed and read in a
fixed chunk schedule, so two evaluations that share a seed see bit-identical SIS values
up to the point where either of them stops reading.

Per-path outcomes are integers (tau_s, tau_a and their positive and negative parts);
block sums are exact int64 sums, so the reduction is order-free and a run is
bit-identical for any worker count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from backend.model.qcdmodel import ObservationStream, QcdModel
from backend.sis.statistic import SisSpec, run_chunk, sis_reset
from utils.rng import Stream, generator

FIRST_CHUNK = 256
MAX_CHUNK = 1 << 16
STEP_CAP = 10**6


def chunks(model: QcdModel, spec: SisSpec, seed: int, index: int, cap: int) -> Iterator[tuple[int, int, np.ndarray]]:
    """(tau_a, k0, SIS values) for successive chunks of path `index`, up to `cap` steps."""
    stream = ObservationStream(model, generator(seed, Stream.PATHS, index))
    state = sis_reset(spec)
    n, taken = FIRST_CHUNK, 0
    while taken < cap:
        chunk = stream.next_chunk(min(n, cap - taken))
        vals, state = run_chunk(spec, state, chunk.y)
        yield stream.tau_a, chunk.k0, vals
        taken += len(chunk)
        n = min(2 * n, MAX_CHUNK)


@dataclass
class Tally:
    """Exact sums of per-path outcomes, one slot per threshold (or a single slot)."""

    size: int
    n: int = 0
    capped: int = 0
    e: np.ndarray = field(init=False)
    e2: np.ndarray = field(init=False)
    d: np.ndarray = field(init=False)
    d2: np.ndarray = field(init=False)
    fa: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        for name in ("e", "e2", "d", "d2", "fa"):
            setattr(self, name, np.zeros(self.size, dtype=np.int64))

    def add(self, tau_a: int, tau_s: np.ndarray) -> None:
        early = np.maximum(tau_a - tau_s, 0)
        late = np.maximum(tau_s - tau_a, 0)
        self.e += early
        self.e2 += early * early
        self.d += late
        self.d2 += late * late
        self.fa += tau_s < tau_a
        self.n += 1

    def merge(self, other: "Tally") -> "Tally":
        out = Tally(self.size)
        out.n = self.n + other.n
        out.capped = self.capped + other.capped
        for name in ("e", "e2", "d", "d2", "fa"):
            setattr(out, name, getattr(self, name) + getattr(other, name))
        return out

    @staticmethod
    def _mean_se(s: np.ndarray, s2: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
        mean = s / n
        if n < 2:
            return mean, np.zeros_like(mean)
        var = np.maximum((s2 - s.astype(float) * s / n) / (n - 1), 0.0)
        return mean, np.sqrt(var / n)

    def mde(self) -> tuple[np.ndarray, np.ndarray]:
        return self._mean_se(self.e, self.e2, self.n)

    def mdd(self) -> tuple[np.ndarray, np.ndarray]:
        return self._mean_se(self.d, self.d2, self.n)

    def cost(self, kappa: float) -> tuple[np.ndarray, np.ndarray]:
        # d e = 0 on every path, so sum c^2 = sum d^2 + kappa^2 sum e^2
        s = self.d + kappa * self.e
        s2 = self.d2 + kappa * kappa * self.e2
        return self._mean_se(s, s2, self.n)

    def p_fa(self) -> tuple[np.ndarray, np.ndarray]:
        return self._mean_se(self.fa, self.fa, self.n)


def reduce_tallies(parts: list[Tally]) -> Tally:
    out = parts[0]
    for p in parts[1:]:
        out = out.merge(p)
    return out


def crossing_block(
    model: QcdModel, spec: SisSpec, levels: np.ndarray, seed: int, lo: int, hi: int, cap: int
) -> Tally:
    """First times the scalar SIS reaches each of the increasing `levels`, for paths lo..hi-1."""
    tally = Tally(len(levels))
    for i in range(lo, hi):
        tau_s = np.full(len(levels), cap, dtype=np.int64)
        j = 0
        peak = -np.inf
        tau_a = 0
        for tau_a, k0, vals in chunks(model, spec, seed, i, cap):
            runmax = np.maximum(np.maximum.accumulate(vals[:, 0]), peak)
            peak = runmax[-1]
            c = int(np.searchsorted(levels[j:], peak, side="right"))
            if c:
                tau_s[j:j + c] = k0 + np.searchsorted(runmax, levels[j:j + c], side="left")
                j += c
            if j == len(levels):
                break
        if j < len(levels):
            tally.capped += 1
        tally.add(tau_a, tau_s)
    return tally


def stopping_block(
    model: QcdModel, spec: SisSpec, policy, seed: int, lo: int, hi: int, cap: int
) -> Tally:
    """First stop of `policy` on paths lo..hi-1; a path that never stops counts as tau_s = cap."""
    tally = Tally(1)
    for i in range(lo, hi):
        tau_s = cap
        tau_a = 0
        stopped = False
        for tau_a, k0, vals in chunks(model, spec, seed, i, cap):
            hit = np.flatnonzero(policy.stops(vals))
            if hit.size:
                tau_s = k0 + int(hit[0])
                stopped = True
                break
        if not stopped:
            tally.capped += 1
        tally.add(tau_a, np.array([tau_s], dtype=np.int64))
    return tally
