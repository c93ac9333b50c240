"""Seeded Monte-Carlo photon counting for the coupled interferometer.

Each trial draws one of the 4 joint detector outcomes from the Born
probabilities of the evolved state (inverse CDF over precomputed
cumulative thresholds). Randomness comes from numpy's Philox counter
generator: trials are split into fixed-size chunks and chunk i uses the
key (seed, i), so the counts are a pure function of
(params, n_trials, seed) for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import circuit, estimation
from .circuit import CircuitParams
from .errors import DegenerateSample, EmptySample

CHUNK = 1 << 20  # trials per RNG substream

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class CountsRecord:
    """Joint detector tallies of one run, ordered (AxBx, AxBy, AyBx, AyBy)."""

    params: CircuitParams
    n_trials: int
    seed: int
    joint_counts: tuple[int, int, int, int]

    def __post_init__(self):
        if sum(self.joint_counts) != self.n_trials:
            raise ValueError("joint counts do not add up to the trial count")


@dataclass(frozen=True)
class ConditionedStats:
    """Counts surviving the postselection filter on one B (or A) port."""

    n_trials: int
    port: str  # "Bx", "By", "Ax" or "Ay"
    n_postselected: int
    n_ax: int
    n_ay: int
    empirical_rate: float

    @property
    def empty(self) -> bool:
        return self.n_postselected == 0

    @property
    def p_hat(self) -> float | None:
        """Empirical click fraction n_Ay / n_postselected; None if empty."""
        if self.empty:
            return None
        return self.n_ay / self.n_postselected


def _chunk_counts(seed: int, index: int, size: int, cdf: np.ndarray) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=[seed & _SEED_MASK, index]))
    u = rng.random(size)
    outcomes = np.searchsorted(cdf, u, side="right")
    return np.bincount(outcomes, minlength=4)


def run_experiment(
    p: CircuitParams, n_trials: int, seed: int, workers: int = 1
) -> CountsRecord:
    """Sample n_trials joint detector outcomes at configuration ``p``.

    Bit-identical for identical (p, n_trials, seed), whatever ``workers``
    is: the chunk substreams are fixed by (seed, chunk index) and integer
    counts add commutatively.
    """
    if n_trials < 0:
        raise ValueError("n_trials must be nonnegative")
    probs = circuit.joint_probabilities(circuit.evolve(p))
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0  # guard against float round-off at the top

    sizes = [
        (i, min(CHUNK, n_trials - i * CHUNK))
        for i in range((n_trials + CHUNK - 1) // CHUNK)
    ]
    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(lambda t: _chunk_counts(seed, t[0], t[1], cdf), sizes)
            )
    else:
        parts = [_chunk_counts(seed, i, m, cdf) for i, m in sizes]

    total = np.sum(parts, axis=0) if parts else np.zeros(4, dtype=np.int64)
    return CountsRecord(
        params=p,
        n_trials=n_trials,
        seed=seed,
        joint_counts=tuple(int(c) for c in total),
    )


def conditioned_statistics(c: CountsRecord, postselect_port: str) -> ConditionedStats:
    """Filter the record to trials where B clicked the chosen port.

    Returns an explicit empty result (never raises) when no trial
    survives the filter.
    """
    ax_bx, ax_by, ay_bx, ay_by = c.joint_counts
    if postselect_port == "By":
        n_ax, n_ay = ax_by, ay_by
    elif postselect_port == "Bx":
        n_ax, n_ay = ax_bx, ay_bx
    else:
        raise ValueError(f"postselect_port must be 'Bx' or 'By', got {postselect_port!r}")
    n_ps = n_ax + n_ay
    rate = n_ps / c.n_trials if c.n_trials else 0.0
    return ConditionedStats(
        n_trials=c.n_trials,
        port=postselect_port,
        n_postselected=n_ps,
        n_ax=n_ax,
        n_ay=n_ay,
        empirical_rate=rate,
    )


def empirical_inferred_phase(stats: ConditionedStats) -> float:
    """arccos((n_Ax - n_Ay)/(n_Ax + n_Ay)) on the raw conditioned counts."""
    if stats.empty:
        raise EmptySample("no postselected trials")
    arg = (stats.n_ax - stats.n_ay) / stats.n_postselected
    return math.acos(max(-1.0, min(1.0, arg)))


def empirical_snr(stats: ConditionedStats) -> float:
    """Sample SNR n_Ay / sqrt(n p_hat (1 - p_hat)) of the conditioned counts."""
    if stats.empty:
        raise EmptySample("no postselected trials")
    p = stats.p_hat
    if p <= 0.0 or p >= 1.0:
        raise DegenerateSample(f"p_hat = {p}; sample deviation is zero")
    return stats.n_ay / math.sqrt(stats.n_postselected * p * (1.0 - p))


def empirical_fisher(stats: ConditionedStats) -> float:
    """Observed information: minus the log-likelihood curvature at p_hat.

    Second central finite difference with step
    h = max(1e-5, 1e-3 min(p_hat, 1 - p_hat)); agrees with
    n / (p_hat (1 - p_hat)) to relative 1e-3 away from the boundary.
    """
    if stats.empty:
        raise EmptySample("no postselected trials")
    p = stats.p_hat
    if p <= 0.0 or p >= 1.0:
        raise DegenerateSample(f"p_hat = {p}; curvature undefined on the boundary")
    sample = estimation.ClickSample(n=stats.n_postselected, n_y=stats.n_ay)
    h = max(1e-5, 1e-3 * min(p, 1.0 - p))
    h = min(h, 0.5 * min(p, 1.0 - p))  # keep the stencil inside (0, 1)
    ll = lambda q: estimation.log_likelihood(sample, q)
    return -(ll(p + h) - 2.0 * ll(p) + ll(p - h)) / (h * h)
