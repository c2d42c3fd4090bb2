"""Posterior beliefs over the three monitor verdicts under a flat prior.

The verdict tally of one slot is treated as a draw from a three-category
multinomial with unknown category probabilities. With a uniform prior over
the probability simplex, the posterior mean of each category has the closed
form (count + 1) / (total + 3); the likelihood and the marginal evidence are
exposed so that the closed forms can be cross-checked numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .monitor import ObservationCounts

SIMPLEX_ATOL = 1e-9
BELIEF_SUM_ATOL = 1e-12


@dataclass(frozen=True)
class BeliefVector:
    """Posterior belief that a future verdict is clean / compromised / undecided."""

    clean: float
    compromised: float
    undecided: float

    def __post_init__(self) -> None:
        for name in ("clean", "compromised", "undecided"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"belief {name}={v!r} must lie strictly inside (0, 1)")
        s = self.clean + self.compromised + self.undecided
        if abs(s - 1.0) > BELIEF_SUM_ATOL:
            raise ValueError(f"beliefs sum to {s!r}, not 1")


def posterior(counts: ObservationCounts) -> BeliefVector:
    """Posterior mean belief for each verdict class.

    The flat prior contributes one pseudo-observation per class, so every
    belief stays strictly positive even when a class was never observed.
    """
    if counts.total < 1:
        raise ValueError("posterior needs at least one observation")
    denom = counts.total + 3
    return BeliefVector(
        clean=(counts.clean + 1) / denom,
        compromised=(counts.compromised + 1) / denom,
        undecided=(counts.undecided + 1) / denom,
    )


def multinomial_likelihood(counts: ObservationCounts, theta: Sequence[float]) -> float:
    """Probability of the observed tally under category probabilities ``theta``.

    ``theta`` must lie on the probability simplex (within 1e-9). Evaluated in
    log space so totals up to 1e4 do not overflow the factorials.
    """
    th = [float(x) for x in theta]
    if len(th) != 3:
        raise ValueError(f"theta must have exactly 3 components, got {len(th)}")
    if min(th) < -SIMPLEX_ATOL or abs(sum(th) - 1.0) > SIMPLEX_ATOL:
        raise ValueError(f"theta={th!r} is not on the probability simplex")
    th = [max(0.0, x) for x in th]

    ns = (counts.clean, counts.compromised, counts.undecided)
    log_p = math.lgamma(counts.total + 1)
    for n_i, t_i in zip(ns, th):
        log_p -= math.lgamma(n_i + 1)
        if n_i > 0:
            if t_i == 0.0:
                return 0.0
            log_p += n_i * math.log(t_i)
    return math.exp(log_p)


def marginal_evidence(total: int) -> float:
    """Probability of any particular verdict tally with the given total.

    Marginalising the multinomial likelihood over the flat prior makes every
    tally of the same total equally likely; the closed form reduces to
    1 / ((total + 1) * (total + 2)) and needs no factorials.
    """
    if total < 0:
        raise ValueError(f"total={total} must be non-negative")
    return 1.0 / ((total + 1) * (total + 2))
