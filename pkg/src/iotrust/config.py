"""Scenario configuration: defaults, file loading, overrides, validation.

Configs live in TOML files with one section per subsystem. Every key has a
default matching the stock experiment setup; unknown sections or keys are
rejected with a field-level message. ``--set section.key=value`` overrides
take precedence over file values.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from pathlib import Path
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .adversary import MAGNITUDE_MODES, OnOffSchedule, Stage, standard_onoff_schedules
from .integrity import EUT_FORMS, CostModel, PTParams
from .monitor import MonitorProfile, profile_from_pdetect
from .trust_update import AwmaParams

THEORIES = ("pt", "eut", "both")
BELIEF_MODES = ("per_slot", "cumulative")
SCHEMES = ("cwma", "ewma", "awma")


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


# section -> key -> allowed types
_SCHEMA: dict[str, dict[str, tuple[type, ...]]] = {
    "scenario": {
        "n_devices": (int,),
        "t_slots": (int,),
        "seed": (int,),
        "replications": (int,),
        "theory": (str,),
        "eut_form": (str,),
        "belief_mode": (str,),
    },
    "attack": {
        "kind": (str,),
        "p_a": (int, float),
        "magnitude": (str,),
        "schedule": (str,),
        "stages": (list,),
    },
    "monitor": {
        "p_detect": (int, float),
        "p_error": (int, float),
    },
    "costs": {
        "kind": (str,),
        "clean": (int, float),
        "compromised": (int, float),
        "decision": (int, float),
        "compromised_weight": (int, float),
    },
    "pt": {
        "loss_aversion": (int, float),
        "value_exponent": (int, float),
        "gain_weight_exponent": (int, float),
        "loss_weight_exponent": (int, float),
    },
    "trust": {
        "schemes": (list,),
        "ewma_alpha": (int, float),
        "awma_reward": (int, float),
        "awma_punish": (int, float),
        "awma_redeem": (int, float),
        "awma_retrogress": (int, float),
        "awma_threshold": (int, float),
    },
    "usability": {
        "period": (int,),
        "threshold": (int, float),
        "scheme": (str,),
    },
}

_DEFAULTS: dict[str, dict[str, Any]] = {
    "scenario": {
        "n_devices": 100,
        "t_slots": 300,
        "seed": 1,
        "replications": 1,
        "theory": "pt",
        "eut_form": "identity",
        "belief_mode": "per_slot",
    },
    "attack": {
        "kind": "uniform",
        "p_a": 0.1,
        "magnitude": "binomial",
    },
    "monitor": {
        "p_detect": 0.9,
        "p_error": 0.0,
    },
    "costs": {
        "kind": "optimistic",
        "clean": 0.01,
        "compromised": 0.1,
        "decision": 0.1,
        "compromised_weight": 8.0 / 9.0,
    },
    "pt": {
        "loss_aversion": 2.0,
        "value_exponent": 0.5,
        "gain_weight_exponent": 0.69,
        "loss_weight_exponent": 0.63,
    },
    "trust": {
        "schemes": ["cwma", "ewma", "awma"],
        "ewma_alpha": 0.3,
        "awma_reward": 0.99,
        "awma_punish": 0.999,
        "awma_redeem": 0.001,
        "awma_retrogress": 0.001,
        "awma_threshold": 0.0,
    },
}


@dataclass(frozen=True)
class AttackSettings:
    kind: str
    p_a: float = 0.1
    magnitude: str = "binomial"
    schedule_name: str | None = None
    schedule: OnOffSchedule | None = None


@dataclass(frozen=True)
class TrustSettings:
    schemes: tuple[str, ...]
    ewma_alpha: float
    awma: AwmaParams


@dataclass(frozen=True)
class UsabilitySettings:
    """Periodic check declaring the aggregate usable when a tracked average
    clears the threshold."""

    period: int
    threshold: float = 0.0
    scheme: str = "cwma"


@dataclass(frozen=True)
class ScenarioConfig:
    n_devices: int
    t_slots: int
    seed: int
    replications: int
    theory: str
    eut_form: str
    belief_mode: str
    attack: AttackSettings
    profile: MonitorProfile
    costs: CostModel
    pt: PTParams
    trust: TrustSettings
    usability: UsabilitySettings | None = None

    @property
    def pt_enabled(self) -> bool:
        return self.theory in ("pt", "both")

    @property
    def eut_enabled(self) -> bool:
        return self.theory in ("eut", "both")

    @property
    def score_theory(self) -> str:
        """Theory whose utility feeds the bounded score and trust updates."""
        return "pt" if self.pt_enabled else "eut"


def _check_keys(raw: dict[str, Any]) -> None:
    for section, body in raw.items():
        if section not in _SCHEMA:
            raise ConfigError(f"{section}: unknown config section")
        if not isinstance(body, dict):
            raise ConfigError(f"{section}: must be a section, not a value")
        for key, val in body.items():
            if key not in _SCHEMA[section]:
                raise ConfigError(f"{section}.{key}: unknown config key")
            allowed = _SCHEMA[section][key]
            if not isinstance(val, allowed) or isinstance(val, bool):
                names = "/".join(t.__name__ for t in allowed)
                raise ConfigError(
                    f"{section}.{key}: expected {names}, got {type(val).__name__} ({val!r})"
                )


def _merged(raw: dict[str, Any]) -> dict[str, dict[str, Any]]:
    out = copy.deepcopy(_DEFAULTS)
    for section, body in raw.items():
        out.setdefault(section, {})
        out[section].update(body)
    return out


def _build_schedule(att: dict[str, Any]) -> tuple[str | None, OnOffSchedule | None]:
    name = att.get("schedule")
    stages_raw = att.get("stages")
    if name is not None and stages_raw is not None:
        raise ConfigError("attack.stages: give either a schedule name or explicit stages, not both")
    if stages_raw is not None:
        stages = []
        for i, row in enumerate(stages_raw):
            if not (isinstance(row, list) and len(row) == 3):
                raise ConfigError(f"attack.stages[{i}]: expected [start, end, mode]")
            start, end, mode = row
            if not isinstance(start, int) or not isinstance(end, int) or not isinstance(mode, str):
                raise ConfigError(f"attack.stages[{i}]: expected [int, int, 'on'|'off']")
            try:
                stages.append(Stage(start, end, mode))
            except ValueError as exc:
                raise ConfigError(f"attack.stages[{i}]: {exc}") from exc
        try:
            return None, OnOffSchedule(tuple(stages))
        except ValueError as exc:
            raise ConfigError(f"attack.stages: {exc}") from exc
    name = name if name is not None else "2:1"
    named = standard_onoff_schedules()
    if name not in named:
        raise ConfigError(f"attack.schedule: unknown schedule {name!r}; known: {sorted(named)}")
    return name, named[name]


def build_config(raw: dict[str, Any]) -> ScenarioConfig:
    """Validate a raw config mapping and assemble the scenario objects."""
    _check_keys(raw)
    cfg = _merged(raw)

    sc = cfg["scenario"]
    for key in ("n_devices", "t_slots", "replications"):
        if sc[key] < 1:
            raise ConfigError(f"scenario.{key}: must be at least 1, got {sc[key]}")
    if sc["theory"] not in THEORIES:
        raise ConfigError(f"scenario.theory: must be one of {THEORIES}, got {sc['theory']!r}")
    if sc["eut_form"] not in EUT_FORMS:
        raise ConfigError(f"scenario.eut_form: must be one of {EUT_FORMS}, got {sc['eut_form']!r}")
    if sc["belief_mode"] not in BELIEF_MODES:
        raise ConfigError(
            f"scenario.belief_mode: must be one of {BELIEF_MODES}, got {sc['belief_mode']!r}"
        )

    att = cfg["attack"]
    if att["kind"] not in ("uniform", "onoff"):
        raise ConfigError(f"attack.kind: must be 'uniform' or 'onoff', got {att['kind']!r}")
    if att["magnitude"] not in MAGNITUDE_MODES:
        raise ConfigError(f"attack.magnitude: must be one of {MAGNITUDE_MODES}")
    if att["kind"] == "uniform":
        if not 0.0 <= att["p_a"] <= 1.0:
            raise ConfigError(f"attack.p_a: must lie in [0, 1], got {att['p_a']}")
        attack = AttackSettings(kind="uniform", p_a=float(att["p_a"]), magnitude=att["magnitude"])
    else:
        schedule_name, schedule = _build_schedule(att)
        assert schedule is not None
        if sc["t_slots"] > schedule.horizon:
            raise ConfigError(
                f"scenario.t_slots: {sc['t_slots']} exceeds the schedule horizon {schedule.horizon}"
            )
        attack = AttackSettings(kind="onoff", schedule_name=schedule_name, schedule=schedule)

    mon = cfg["monitor"]
    try:
        profile = profile_from_pdetect(float(mon["p_detect"]), float(mon["p_error"]))
    except ValueError as exc:
        raise ConfigError(f"monitor: {exc}") from exc

    co = cfg["costs"]
    try:
        if co["kind"] == "optimistic":
            costs = CostModel.optimistic(float(co["clean"]), float(co["compromised"]), float(co["decision"]))
        elif co["kind"] == "conservative":
            costs = CostModel.conservative(
                float(co["clean"]),
                float(co["compromised"]),
                float(co["compromised_weight"]),
                float(co["decision"]),
            )
        else:
            raise ConfigError(f"costs.kind: must be 'optimistic' or 'conservative', got {co['kind']!r}")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"costs: {exc}") from exc

    try:
        pt = PTParams(
            loss_aversion=float(cfg["pt"]["loss_aversion"]),
            value_exponent=float(cfg["pt"]["value_exponent"]),
            gain_weight_exponent=float(cfg["pt"]["gain_weight_exponent"]),
            loss_weight_exponent=float(cfg["pt"]["loss_weight_exponent"]),
        )
    except ValueError as exc:
        raise ConfigError(f"pt: {exc}") from exc

    tr = cfg["trust"]
    schemes = tuple(tr["schemes"])
    if not schemes or any(s not in SCHEMES for s in schemes) or len(set(schemes)) != len(schemes):
        raise ConfigError(f"trust.schemes: must be a non-empty subset of {SCHEMES}, got {schemes}")
    if not 0.0 < tr["ewma_alpha"] < 1.0:
        raise ConfigError(f"trust.ewma_alpha: must lie in (0, 1), got {tr['ewma_alpha']}")
    try:
        awma = AwmaParams(
            reward=float(tr["awma_reward"]),
            punish=float(tr["awma_punish"]),
            redeem=float(tr["awma_redeem"]),
            retrogress=float(tr["awma_retrogress"]),
            threshold=float(tr["awma_threshold"]),
        )
    except ValueError as exc:
        raise ConfigError(f"trust: {exc}") from exc

    usability = None
    if "usability" in raw:
        us = cfg["usability"]
        if "period" not in us:
            raise ConfigError("usability.period: required when the section is present")
        if us["period"] < 1:
            raise ConfigError(f"usability.period: must be at least 1, got {us['period']}")
        scheme = us.get("scheme", "cwma")
        if scheme not in schemes:
            raise ConfigError(
                f"usability.scheme: {scheme!r} is not among the tracked trust schemes {schemes}"
            )
        usability = UsabilitySettings(
            period=us["period"],
            threshold=float(us.get("threshold", 0.0)),
            scheme=scheme,
        )

    return ScenarioConfig(
        n_devices=sc["n_devices"],
        t_slots=sc["t_slots"],
        seed=sc["seed"],
        replications=sc["replications"],
        theory=sc["theory"],
        eut_form=sc["eut_form"],
        belief_mode=sc["belief_mode"],
        attack=attack,
        profile=profile,
        costs=costs,
        pt=pt,
        trust=TrustSettings(schemes=schemes, ewma_alpha=float(tr["ewma_alpha"]), awma=awma),
        usability=usability,
    )


def default_config(**scenario_overrides: Any) -> ScenarioConfig:
    raw: dict[str, Any] = {}
    if scenario_overrides:
        raw["scenario"] = dict(scenario_overrides)
    return build_config(raw)


def load_raw_config(path: str | Path) -> dict[str, Any]:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    try:
        with open(p, "rb") as fh:
            return tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {p}: {exc}") from exc


def _parse_override_value(text: str) -> Any:
    try:
        doc = tomllib.loads(f"v = {text}")
        return doc["v"]
    except tomllib.TOMLDecodeError:
        return text  # bare string


def apply_overrides(raw: dict[str, Any], overrides: list[str]) -> dict[str, Any]:
    """Apply ``section.key=value`` overrides on top of a raw config mapping."""
    out = copy.deepcopy(raw)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r}: expected section.key=value")
        path, text = item.split("=", 1)
        parts = path.strip().split(".")
        if len(parts) != 2:
            raise ConfigError(f"override {item!r}: key must look like section.key")
        section, key = parts
        if section not in _SCHEMA or key not in _SCHEMA[section]:
            raise ConfigError(f"override {path.strip()!r}: unknown config key")
        out.setdefault(section, {})[key] = _parse_override_value(text.strip())
    return out


def effective_dict(config: ScenarioConfig) -> dict[str, Any]:
    """Flatten a built config back into a plain mapping (for printing and manifests)."""
    out: dict[str, Any] = {
        "scenario": {
            "n_devices": config.n_devices,
            "t_slots": config.t_slots,
            "seed": config.seed,
            "replications": config.replications,
            "theory": config.theory,
            "eut_form": config.eut_form,
            "belief_mode": config.belief_mode,
        },
        "attack": {"kind": config.attack.kind},
        "monitor": {
            "p_detect": config.profile.p_detect,
            "p_error": config.profile.p_error,
        },
        "costs": {
            "kind": config.costs.kind,
            "clean": config.costs.clean,
            "compromised": config.costs.compromised,
            "decision": config.costs.decision,
        },
        "pt": {
            "loss_aversion": config.pt.loss_aversion,
            "value_exponent": config.pt.value_exponent,
            "gain_weight_exponent": config.pt.gain_weight_exponent,
            "loss_weight_exponent": config.pt.loss_weight_exponent,
        },
        "trust": {
            "schemes": list(config.trust.schemes),
            "ewma_alpha": config.trust.ewma_alpha,
            "awma_reward": config.trust.awma.reward,
            "awma_punish": config.trust.awma.punish,
            "awma_redeem": config.trust.awma.redeem,
            "awma_retrogress": config.trust.awma.retrogress,
            "awma_threshold": config.trust.awma.threshold,
        },
    }
    if config.attack.kind == "uniform":
        out["attack"]["p_a"] = config.attack.p_a
        out["attack"]["magnitude"] = config.attack.magnitude
    else:
        assert config.attack.schedule is not None
        if config.attack.schedule_name is not None:
            out["attack"]["schedule"] = config.attack.schedule_name
        else:
            out["attack"]["stages"] = [
                [st.start, st.end, st.mode] for st in config.attack.schedule.stages
            ]
    if config.costs.kind == "conservative":
        out["costs"]["compromised_weight"] = config.costs.compromised_weight
    if config.usability is not None:
        out["usability"] = {
            "period": config.usability.period,
            "threshold": config.usability.threshold,
            "scheme": config.usability.scheme,
        }
    return out
