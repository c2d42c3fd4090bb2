"""Bounded integrity scores and their moving averages over time.

Raw utilities are squashed into [-1, 1]; three schemes then accumulate the
per-slot scores: a cumulative mean (slow, equal weights), an exponential
average (forgets quickly in both directions), and an asymmetric average
that punishes bad slots almost instantly but redeems good behaviour only
very slowly, which is what blunts On-Off attackers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

SCORE_ATOL = 1e-12


@dataclass(frozen=True)
class AwmaParams:
    """Case weights and threshold of the asymmetric moving average.

    The threshold separates sufficiently good behaviour from anomalous
    behaviour. ``punish`` must sit close to 1 and ``redeem`` close to 0;
    that gap is the asymmetry.
    """

    reward: float = 0.99
    punish: float = 0.999
    redeem: float = 0.001
    retrogress: float = 0.001
    threshold: float = 0.0

    def __post_init__(self) -> None:
        for name in ("reward", "punish", "redeem", "retrogress"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name}={v!r} must lie strictly inside (0, 1)")
        if self.redeem > 0.1:
            raise ValueError(f"redeem={self.redeem!r} must be at most 0.1")
        if self.punish < 0.9:
            raise ValueError(f"punish={self.punish!r} must be at least 0.9")
        if not -1.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold={self.threshold!r} must lie in [-1, 1]")


@dataclass(frozen=True)
class TrustState:
    """Current value of every tracked moving-average scheme.

    ``None`` marks a scheme that has not seen an observation yet; the first
    score initialises it.
    """

    cwma_mean: float | None = None
    cwma_count: int = 0
    ewma: float | None = None
    awma: float | None = None

    def __post_init__(self) -> None:
        for name in ("cwma_mean", "ewma", "awma"):
            v = getattr(self, name)
            if v is not None and not -1.0 <= v <= 1.0:
                raise ValueError(f"{name}={v!r} must lie in [-1, 1]")


def weighted_score(utility: float) -> float:
    """Squash a raw utility into the bounded score range [-1, 1].

    Odd and strictly increasing: positive utilities map into (0, 1),
    negative ones into (-1, 0), zero maps to zero.
    """
    if not math.isfinite(utility):
        raise ValueError(f"utility {utility!r} must be finite")
    if utility == 0.0:
        return 0.0
    return math.copysign(1.0 - math.exp(-abs(utility)), utility)


def _check_score(w: float) -> None:
    if not -1.0 <= w <= 1.0:
        raise ValueError(f"score {w!r} must lie in [-1, 1]")


def cwma_step(state: TrustState, w: float) -> TrustState:
    """Fold one score into the all-history running mean."""
    _check_score(w)
    if state.cwma_mean is None:
        return replace(state, cwma_mean=w, cwma_count=1)
    count = state.cwma_count + 1
    mean = (state.cwma_mean * state.cwma_count + w) / count
    return replace(state, cwma_mean=mean, cwma_count=count)


def ewma_step(state: TrustState, w: float, alpha: float) -> TrustState:
    """Fold one score into the exponential average with smoothing ``alpha``."""
    _check_score(w)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha={alpha!r} must lie strictly inside (0, 1)")
    if state.ewma is None:
        return replace(state, ewma=w)
    return replace(state, ewma=(1.0 - alpha) * state.ewma + alpha * w)


def awma_step(state: TrustState, w: float, params: AwmaParams) -> TrustState:
    """Fold one score into the asymmetric average.

    The case weight depends on which side of the threshold the previous
    average and the current score fall (scores exactly at the threshold
    count as anomalous):

    - both above: reward (good history continues)
    - average above, score at/below: punish (crash on fresh bad evidence)
    - average at/below, score above: redeem (recover only very slowly)
    - both at/below: retrogress (stay low)

    Every update is a convex combination, so the average stays in [-1, 1].
    """
    _check_score(w)
    prev = state.awma
    if prev is None:
        return replace(state, awma=w)
    gamma = params.threshold
    if prev > gamma:
        chi = params.reward if w > gamma else params.punish
    else:
        chi = params.redeem if w > gamma else params.retrogress
    return replace(state, awma=(1.0 - chi) * prev + chi * w)
