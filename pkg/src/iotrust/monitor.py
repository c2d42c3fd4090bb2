"""Stochastic model of an imperfect anomaly monitor with ternary verdicts.

Each device input is truly compromised or not; the monitor renders one of
three verdicts per input: cleared, flagged as compromised, or undecided.
The model is purely probabilistic -- it draws verdicts from the profile's
conditional distributions and never inspects payloads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

PROB_ATOL = 1e-12


class Outcome(IntEnum):
    """Verdict for a single device input."""

    CLEAN = 0
    COMPROMISED = 1
    UNDECIDED = 2


@dataclass(frozen=True)
class MonitorProfile:
    """Conditional verdict probabilities of the monitoring mechanism.

    Two categorical distributions over verdicts, one per ground-truth state.
    ``flag_given_bad`` and ``clear_given_ok`` are correct calls,
    ``clear_given_bad`` is a missed detection and ``flag_given_ok`` a false
    alarm; the ``undecided_*`` entries express the monitor's own uncertainty.
    """

    flag_given_bad: float
    undecided_given_bad: float
    clear_given_bad: float
    clear_given_ok: float
    undecided_given_ok: float
    flag_given_ok: float

    def __post_init__(self) -> None:
        probs = (
            self.flag_given_bad,
            self.undecided_given_bad,
            self.clear_given_bad,
            self.clear_given_ok,
            self.undecided_given_ok,
            self.flag_given_ok,
        )
        if any(not 0.0 <= p <= 1.0 for p in probs):
            raise ValueError(f"monitor probabilities must lie in [0, 1], got {probs}")
        bad = self.flag_given_bad + self.undecided_given_bad + self.clear_given_bad
        ok = self.clear_given_ok + self.undecided_given_ok + self.flag_given_ok
        if abs(bad - 1.0) > PROB_ATOL:
            raise ValueError(f"verdict probabilities given a compromised input sum to {bad!r}, not 1")
        if abs(ok - 1.0) > PROB_ATOL:
            raise ValueError(f"verdict probabilities given a clean input sum to {ok!r}, not 1")
        if self.p_detect < 0.5 - PROB_ATOL:
            raise ValueError(
                f"p_detect={self.p_detect!r} is below 0.5; a monitor that is mostly "
                "wrong is not a supported regime"
            )

    @property
    def p_detect(self) -> float:
        """Probability of a correct verdict, averaged over both truth states."""
        return 0.5 * (self.flag_given_bad + self.clear_given_ok)

    @property
    def p_uncertain(self) -> float:
        """Probability of an undecided verdict, averaged over both truth states."""
        return 0.5 * (self.undecided_given_bad + self.undecided_given_ok)

    @property
    def p_error(self) -> float:
        """Probability of a wrong verdict (miss or false alarm), averaged."""
        return 0.5 * (self.clear_given_bad + self.flag_given_ok)


@dataclass(frozen=True)
class ObservationCounts:
    """Per-slot tally of the three verdicts over all monitored devices."""

    clean: int
    compromised: int
    undecided: int
    total: int

    def __post_init__(self) -> None:
        for name in ("clean", "compromised", "undecided", "total"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 0:
                raise ValueError(f"count {name}={v!r} must be a non-negative integer")
        if self.clean + self.compromised + self.undecided != self.total:
            raise ValueError(
                f"counts ({self.clean}, {self.compromised}, {self.undecided}) "
                f"do not sum to total {self.total}"
            )


def profile_from_pdetect(p_detect: float, p_error: float = 0.0) -> MonitorProfile:
    """Build a symmetric profile from a detection and an error probability.

    Both truth states share the same correct-call probability; whatever
    remains after errors is undecided. The default is an error-free monitor,
    so lowering detection accuracy raises only the undecided mass.
    """
    if not 0.5 <= p_detect <= 1.0:
        raise ValueError(f"p_detect={p_detect!r} must lie in [0.5, 1]")
    if p_error < 0.0:
        raise ValueError(f"p_error={p_error!r} must be non-negative")
    if p_detect + p_error > 1.0 + PROB_ATOL:
        raise ValueError(f"p_detect + p_error = {p_detect + p_error!r} exceeds 1")
    p_undecided = max(0.0, 1.0 - p_detect - p_error)
    return MonitorProfile(
        flag_given_bad=p_detect,
        undecided_given_bad=p_undecided,
        clear_given_bad=p_error,
        clear_given_ok=p_detect,
        undecided_given_ok=p_undecided,
        flag_given_ok=p_error,
    )


def observe(
    truth: np.ndarray,
    profile: MonitorProfile,
    rng: np.random.Generator,
) -> tuple[np.ndarray, ObservationCounts]:
    """Draw one verdict per device from the profile's conditionals.

    ``truth`` is a boolean vector marking the truly compromised inputs.
    Verdicts are sampled independently per device; one uniform draw per
    device keeps the stream consumption fixed, so runs with the same seed
    produce identical verdict vectors.
    """
    truth = np.asarray(truth, dtype=bool)
    if truth.ndim != 1 or truth.size < 1:
        raise ValueError("truth must be a non-empty 1-d boolean vector")
    n = truth.size
    u = rng.random(n)
    verdicts = np.empty(n, dtype=np.int8)

    bad = truth
    verdicts[bad] = np.where(
        u[bad] < profile.flag_given_bad,
        Outcome.COMPROMISED,
        np.where(
            u[bad] < profile.flag_given_bad + profile.undecided_given_bad,
            Outcome.UNDECIDED,
            Outcome.CLEAN,
        ),
    )
    ok = ~truth
    verdicts[ok] = np.where(
        u[ok] < profile.clear_given_ok,
        Outcome.CLEAN,
        np.where(
            u[ok] < profile.clear_given_ok + profile.undecided_given_ok,
            Outcome.UNDECIDED,
            Outcome.COMPROMISED,
        ),
    )
    counts = ObservationCounts(
        clean=int(np.sum(verdicts == Outcome.CLEAN)),
        compromised=int(np.sum(verdicts == Outcome.COMPROMISED)),
        undecided=int(np.sum(verdicts == Outcome.UNDECIDED)),
        total=n,
    )
    return verdicts, counts
