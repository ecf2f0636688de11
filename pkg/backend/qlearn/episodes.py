"""
Regenerative transitions for training.

An episode starts from a fresh path of the model (a new change time, the SIS at its
reset value) and runs until the first step k with U_k = 1 or ||S_k|| >= eta. The input
U_k is i.i.d. Bernoulli(explore_p) and never depends on theta, so whole episodes can be
generated ahead of the parameter recursion.

Step k of an episode carries the hidden data the costs need (changed, mean residual),
the SIS value S_k, the input U_k, whether Phi_k lies in the regeneration set, and
S_{k+1}, the next SIS value on the same path.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from backend.model.qcdmodel import ObservationStream, QcdModel
from backend.sis.statistic import SisSpec, run_chunk, sis_reset, sup_norm
from utils.error import EpisodeOverflowError
from utils.rng import Stream, generator

_log = logging.getLogger(__name__)

FIRST_CHUNK = 8
MAX_CHUNK = 1 << 16


@dataclass
class Episode:
    s: np.ndarray
    s_next: np.ndarray
    u: np.ndarray
    changed: np.ndarray
    mean_residual: np.ndarray
    in_delta: np.ndarray

    def __len__(self) -> int:
        return len(self.u)

    def stop_cost(self, kappa: float) -> np.ndarray:
        # kappa times the expected remaining time to the change; zero once changed
        return kappa * np.where(self.changed, 0.0, self.mean_residual)

    def costs(self, kappa: float) -> np.ndarray:
        """c(Phi_k, U_k): the continuation cost 1{changed} or the stopping cost."""
        return np.where(self.u == 1, self.stop_cost(kappa), self.changed.astype(float))

    def continues(self, gamma: float) -> np.ndarray:
        """gamma (1 - U_k) 1{Phi_k not in Delta}."""
        return gamma * (1 - self.u) * (~self.in_delta)


def concat(episodes: list[Episode]) -> Episode:
    return Episode(*(np.concatenate([getattr(e, f) for e in episodes]) for f in Episode.__dataclass_fields__))


@dataclass
class EpisodeSource:
    model: QcdModel
    spec: SisSpec
    eta: float
    explore_p: float
    seed: int
    stream: Stream = Stream.TRAIN
    cap: int = 10**6

    def episode(self, index: int) -> Episode:
        path = ObservationStream(self.model, generator(self.seed, self.stream, index))
        explore = generator(self.seed, Stream.EXPLORE, index, int(self.stream))
        state = sis_reset(self.spec)
        pieces_s, pieces_u, pieces_c, pieces_k = [], [], [], []
        n = FIRST_CHUNK
        taken = 0
        end = -1
        while end < 0:
            if taken >= self.cap:
                raise EpisodeOverflowError(self.cap)
            n = min(n, self.cap + 1 - taken)
            chunk = path.next_chunk(n)
            vals, state = run_chunk(self.spec, state, chunk.y)
            u = (explore.random(n) < self.explore_p).astype(np.int64)
            pieces_s.append(vals)
            pieces_u.append(u)
            pieces_c.append(chunk.changed)
            pieces_k.append(chunk.k0 + np.arange(n))
            done = np.flatnonzero((u == 1) | (sup_norm(vals) >= self.eta))
            if done.size:
                end = taken + int(done[0])
            taken += n
            n = min(2 * n, MAX_CHUNK)
        if end >= self.cap:
            raise EpisodeOverflowError(self.cap)
        s_all = np.vstack(pieces_s)
        if len(s_all) == end + 1:
            # S_{end+1} is never used past a terminal step; keep the array shape
            s_all = np.vstack([s_all, s_all[-1:]])
        m = end + 1
        ks = np.concatenate(pieces_k)[:m]
        changed = np.concatenate(pieces_c)[:m]
        residual = np.zeros(m)
        if np.any(~changed):
            residual[~changed] = self.model.change.mean_residual_array(ks[~changed])
        s = s_all[:m]
        return Episode(
            s=s,
            s_next=s_all[1 : m + 1],
            u=np.concatenate(pieces_u)[:m],
            changed=changed,
            mean_residual=residual,
            in_delta=sup_norm(s) >= self.eta,
        )

    def __iter__(self) -> Iterator[Episode]:
        i = 0
        while True:
            yield self.episode(i)
            i += 1

    def transitions(self, n_samples: int, burn_in: int = 0) -> Episode:
        """At least n_samples steps from consecutive episodes, after skipping burn_in episodes."""
        got, eps = 0, []
        i = burn_in
        while got < n_samples:
            e = self.episode(i)
            eps.append(e)
            got += len(e)
            i += 1
        out = concat(eps)
        _log.debug("collected %d transitions from %d episodes", got, len(eps))
        return out
