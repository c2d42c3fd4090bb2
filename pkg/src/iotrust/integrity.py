"""Cost models and the prospect-theory / expected-utility integrity scores.

A slot's verdict tally is scored against a reference point in which every
device is presumed clean. Each verdict class contributes a signed deviation
in cost units; the prospect-theoretic score passes deviations through an
asymmetric value function and distorts the class beliefs with an S-shaped
weighting function, while the expected-utility variant is the risk-neutral
baseline (plain deviation times belief).
"""

from __future__ import annotations

from dataclasses import dataclass

from .bayes import BeliefVector
from .monitor import ObservationCounts

COST_ATOL = 1e-12

EUT_FORMS = ("identity", "pt-value-no-weights")


@dataclass(frozen=True)
class CostModel:
    """Per-device costs for the three verdict classes.

    ``decision`` is the average decision cost per device; it cancels out of
    every deviation, so the scores never depend on it. An optimistic model
    prices an undecided device at the midpoint of the clean and compromised
    costs; a conservative model leans toward the compromised cost with
    weight ``compromised_weight`` > 0.5.
    """

    clean: float
    undecided: float
    compromised: float
    decision: float = 0.1
    kind: str = "optimistic"
    compromised_weight: float | None = None

    def __post_init__(self) -> None:
        if not self.clean < self.undecided <= self.compromised:
            raise ValueError(
                f"costs must satisfy clean < undecided <= compromised, got "
                f"({self.clean}, {self.undecided}, {self.compromised})"
            )
        if self.kind == "optimistic":
            mid = 0.5 * (self.clean + self.compromised)
            if abs(self.undecided - mid) > COST_ATOL:
                raise ValueError(
                    f"optimistic model requires undecided == midpoint {mid!r}, got {self.undecided!r}"
                )
        elif self.kind == "conservative":
            w2 = self.compromised_weight
            if w2 is None or not 0.5 < w2 <= 1.0:
                raise ValueError(
                    f"conservative model requires compromised_weight in (0.5, 1], got {w2!r}"
                )
            mix = (1.0 - w2) * self.clean + w2 * self.compromised
            if abs(self.undecided - mix) > COST_ATOL:
                raise ValueError(
                    f"conservative model requires undecided == {mix!r}, got {self.undecided!r}"
                )
        else:
            raise ValueError(f"unknown cost model kind {self.kind!r}")

    @classmethod
    def optimistic(cls, clean: float = 0.01, compromised: float = 0.1, decision: float = 0.1) -> CostModel:
        return cls(
            clean=clean,
            undecided=0.5 * (clean + compromised),
            compromised=compromised,
            decision=decision,
            kind="optimistic",
        )

    @classmethod
    def conservative(
        cls,
        clean: float = 0.01,
        compromised: float = 0.1,
        compromised_weight: float = 8.0 / 9.0,
        decision: float = 0.1,
    ) -> CostModel:
        undecided = (1.0 - compromised_weight) * clean + compromised_weight * compromised
        return cls(
            clean=clean,
            undecided=undecided,
            compromised=compromised,
            decision=decision,
            kind="conservative",
            compromised_weight=compromised_weight,
        )


@dataclass(frozen=True)
class PTParams:
    """Behavioural parameters of the prospect-theoretic score.

    ``loss_aversion`` > 1 makes losses weigh more than equal gains;
    ``value_exponent`` in (0, 1) bends the value function (lower is more
    risk averse); the two weight exponents in [0.5, 1) control how strongly
    small beliefs are overweighted for gains and losses respectively.
    """

    loss_aversion: float = 2.0
    value_exponent: float = 0.5
    gain_weight_exponent: float = 0.69
    loss_weight_exponent: float = 0.63

    def __post_init__(self) -> None:
        if not self.loss_aversion > 1.0:
            raise ValueError(f"loss_aversion={self.loss_aversion!r} must exceed 1")
        if not 0.0 < self.value_exponent < 1.0:
            raise ValueError(f"value_exponent={self.value_exponent!r} must lie in (0, 1)")
        for name in ("gain_weight_exponent", "loss_weight_exponent"):
            v = getattr(self, name)
            if not 0.5 <= v < 1.0:
                raise ValueError(f"{name}={v!r} must lie in [0.5, 1)")


@dataclass(frozen=True)
class DeviationVector:
    """Signed profit deviations of each verdict class from the all-clean reference."""

    clean: float
    compromised: float
    undecided: float

    def __post_init__(self) -> None:
        if self.clean < 0.0:
            raise ValueError(f"clean deviation {self.clean!r} must be non-negative")


def deviations(counts: ObservationCounts, costs: CostModel) -> DeviationVector:
    """Deviation of each class's profit from the all-clean reference point.

    The average decision cost appears in both the profit and the reference
    point and cancels, so the result depends only on the class costs. The
    clean class can never fall below the reference, hence is always a gain.
    """
    n = counts.total
    return DeviationVector(
        clean=(n - counts.clean) * costs.clean,
        compromised=n * costs.clean - counts.compromised * costs.compromised,
        undecided=n * costs.clean - counts.undecided * costs.undecided,
    )


def value(delta: float, pt: PTParams) -> float:
    """Asymmetric S-shaped value of a signed deviation.

    Gains are compressed by the value exponent; losses are compressed the
    same way and then scaled up by the loss-aversion coefficient.
    """
    if delta >= 0.0:
        return delta**pt.value_exponent
    return -pt.loss_aversion * (-delta) ** pt.value_exponent


def weight(p: float, domain: str, pt: PTParams) -> float:
    """Distorted decision weight for a belief ``p``.

    Overweights small beliefs and underweights large ones; the exponent is
    chosen per domain so losses can be distorted more strongly than gains.
    Fixed points: weight(0) = 0 and weight(1) = 1.
    """
    if domain == "gain":
        e = pt.gain_weight_exponent
    elif domain == "loss":
        e = pt.loss_weight_exponent
    else:
        raise ValueError(f"domain must be 'gain' or 'loss', got {domain!r}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability p={p!r} must lie in [0, 1]")
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    num = p**e
    return num / (num + (1.0 - p) ** e) ** (1.0 / e)


def pt_utility(beliefs: BeliefVector, devs: DeviationVector, pt: PTParams) -> float:
    """Prospect-theoretic integrity score for one slot.

    Sum over the three verdict classes of value(deviation) times the
    distorted belief weight; each term's weighting domain follows the sign
    of its own deviation (zero counts as a gain, where the value is 0
    anyway).
    """
    total = 0.0
    for delta, belief in (
        (devs.clean, beliefs.clean),
        (devs.compromised, beliefs.compromised),
        (devs.undecided, beliefs.undecided),
    ):
        domain = "gain" if delta >= 0.0 else "loss"
        total += value(delta, pt) * weight(belief, domain, pt)
    return total


def eut_utility(
    beliefs: BeliefVector,
    devs: DeviationVector,
    form: str = "identity",
    pt: PTParams | None = None,
) -> float:
    """Expected-utility integrity score for one slot.

    The default "identity" form is the risk-neutral baseline: raw deviations
    weighted by the raw beliefs. The "pt-value-no-weights" form keeps the
    prospect-theoretic value function but drops the probability distortion.
    """
    if form not in EUT_FORMS:
        raise ValueError(f"eut form {form!r} not in {EUT_FORMS}")
    pairs = (
        (devs.clean, beliefs.clean),
        (devs.compromised, beliefs.compromised),
        (devs.undecided, beliefs.undecided),
    )
    if form == "identity":
        return sum(delta * belief for delta, belief in pairs)
    if pt is None:
        raise ValueError("pt parameters are required for the pt-value-no-weights form")
    return sum(value(delta, pt) * belief for delta, belief in pairs)
