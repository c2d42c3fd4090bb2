"""Ground-truth attack generators: uniform-average and staged On-Off attackers.

The uniform attacker holds a long-term average fraction of compromised
inputs while the per-slot magnitude fluctuates. The On-Off attacker follows
an explicit stage schedule, staying silent in Off stages and hitting a
random number of inputs in On stages.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAGNITUDE_MODES = ("binomial", "fixed")


@dataclass(frozen=True)
class Stage:
    """One contiguous block of slots with a single attack mode."""

    start: int
    end: int  # inclusive
    mode: str  # "on" | "off"

    def __post_init__(self) -> None:
        if self.mode not in ("on", "off"):
            raise ValueError(f"stage mode must be 'on' or 'off', got {self.mode!r}")
        if self.start < 1 or self.end < self.start:
            raise ValueError(f"stage [{self.start}, {self.end}] is not a valid slot range")


@dataclass(frozen=True)
class OnOffSchedule:
    """Ordered, contiguous stages covering slots 1..horizon.

    Degenerate schedules (all-On or all-Off) are rejected: an On-Off attack
    needs both behaviours to exist.
    """

    stages: tuple[Stage, ...]

    def __post_init__(self) -> None:
        if not self.stages:
            raise ValueError("schedule needs at least one stage")
        expected = 1
        for st in self.stages:
            if st.start != expected:
                raise ValueError(
                    f"stages must be contiguous from slot 1; expected start {expected}, "
                    f"got [{st.start}, {st.end}]"
                )
            expected = st.end + 1
        modes = {st.mode for st in self.stages}
        if modes != {"on", "off"}:
            raise ValueError("schedule must contain at least one On and one Off stage")

    @property
    def horizon(self) -> int:
        return self.stages[-1].end

    def mode_at(self, t: int) -> str:
        if not 1 <= t <= self.horizon:
            raise ValueError(f"slot {t} is outside the schedule's coverage [1, {self.horizon}]")
        for st in self.stages:
            if st.start <= t <= st.end:
                return st.mode
        raise AssertionError("unreachable: contiguous stages cover the horizon")

    def slots_in_mode(self, mode: str, t_min: int = 1, t_max: int | None = None) -> int:
        """Number of slots with the given mode inside [t_min, t_max]."""
        t_max = self.horizon if t_max is None else t_max
        total = 0
        for st in self.stages:
            if st.mode == mode:
                total += max(0, min(st.end, t_max) - max(st.start, t_min) + 1)
        return total


def uniform_attack_slot(
    n: int,
    p_a: float,
    rng: np.random.Generator,
    magnitude: str = "binomial",
) -> np.ndarray:
    """Compromise vector for one slot of the uniform-average attacker.

    In binomial mode every input is hit independently with probability
    ``p_a``, which is the same joint law as drawing a Binomial(n, p_a)
    magnitude and then a uniform subset. Fixed mode pins the magnitude at
    round(p_a * n) and only the subset varies.
    """
    if n < 1:
        raise ValueError(f"device count n={n} must be at least 1")
    if not 0.0 <= p_a <= 1.0:
        raise ValueError(f"p_a={p_a!r} must lie in [0, 1]")
    if magnitude not in MAGNITUDE_MODES:
        raise ValueError(f"magnitude mode {magnitude!r} not in {MAGNITUDE_MODES}")
    if magnitude == "binomial":
        return rng.random(n) < p_a
    count = int(round(p_a * n))
    truth = np.zeros(n, dtype=bool)
    if count > 0:
        truth[rng.permutation(n)[:count]] = True
    return truth


def onoff_attack_slot(
    schedule: OnOffSchedule,
    t: int,
    n: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Compromise vector for slot ``t`` under an On-Off schedule.

    Off slots return an all-clean vector and consume no randomness, so two
    schedules sharing a seed stay aligned until their On stages diverge.
    On slots hit a uniformly random magnitude in {1..n} on a uniform subset.
    """
    if n < 1:
        raise ValueError(f"device count n={n} must be at least 1")
    if schedule.mode_at(t) == "off":
        return np.zeros(n, dtype=bool)
    count = int(rng.integers(1, n + 1))
    truth = np.zeros(n, dtype=bool)
    truth[rng.permutation(n)[:count]] = True
    return truth


def standard_onoff_schedules() -> dict[str, OnOffSchedule]:
    """The two stock schedules over a 500-slot horizon.

    "2:1" runs two 50-slot attack bursts inside a 300-slot attack period
    (Off:On = 200:100) followed by a 200-slot quiet tail. "3:1" keeps the
    same burst start slots and horizon but shortens the bursts to 38 and 37
    slots so the Off:On ratio over the attack period is exactly 3:1.
    """
    two_one = OnOffSchedule(
        stages=(
            Stage(1, 100, "off"),
            Stage(101, 150, "on"),
            Stage(151, 250, "off"),
            Stage(251, 300, "on"),
            Stage(301, 500, "off"),
        )
    )
    three_one = OnOffSchedule(
        stages=(
            Stage(1, 100, "off"),
            Stage(101, 138, "on"),
            Stage(139, 250, "off"),
            Stage(251, 287, "on"),
            Stage(288, 500, "off"),
        )
    )
    return {"2:1": two_one, "3:1": three_one}
