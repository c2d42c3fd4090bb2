"""Simulation driver: slot loop, parameter sweeps, CSV persistence, figure data.

One replication walks the slot loop adversary -> monitor -> beliefs ->
deviations -> utilities -> bounded score -> trust updates, recording a full
trace per slot. Replications draw independent child streams from the
scenario seed, so a (config, seed) pair pins every byte of the output.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__
from .adversary import onoff_attack_slot, uniform_attack_slot
from .bayes import posterior
from .config import ScenarioConfig, apply_overrides, build_config, effective_dict
from .integrity import CostModel, deviations, eut_utility, pt_utility
from .monitor import ObservationCounts, observe, profile_from_pdetect
from .trust_update import TrustState, awma_step, cwma_step, ewma_step, weighted_score

BELIEF_SUM_ATOL = 1e-9

SWEEP_AXES = (
    "p_a",
    "p_detect",
    "compromised_weight",
    "loss_aversion",
    "value_exponent",
    "gain_weight_exponent",
    "loss_weight_exponent",
)
_AXIS_ALIASES = {"w2": "compromised_weight"}

CSV_COLUMNS = (
    "t",
    "attacked",
    "n_clean",
    "n_compromised",
    "n_undecided",
    "belief_clean",
    "belief_compromised",
    "belief_undecided",
    "utility_pt",
    "utility_eut",
    "score",
    "cwma",
    "ewma",
    "awma",
    "usable",
)


@dataclass(frozen=True)
class SlotRecord:
    """Full trace of one simulated time slot."""

    t: int
    attacked: int
    n_clean: int
    n_compromised: int
    n_undecided: int
    belief_clean: float
    belief_compromised: float
    belief_undecided: float
    utility_pt: float | None
    utility_eut: float | None
    score: float
    cwma: float | None
    ewma: float | None
    awma: float | None
    usable: bool | None

    def validate(self, n_devices: int) -> None:
        if self.n_clean + self.n_compromised + self.n_undecided != n_devices:
            raise ValueError(f"slot {self.t}: verdict counts do not sum to {n_devices}")
        if not 0 <= self.attacked <= n_devices:
            raise ValueError(f"slot {self.t}: attacked count {self.attacked} out of range")
        s = self.belief_clean + self.belief_compromised + self.belief_undecided
        if abs(s - 1.0) > BELIEF_SUM_ATOL:
            raise ValueError(f"slot {self.t}: beliefs sum to {s!r}")
        for name in ("score", "cwma", "ewma", "awma"):
            v = getattr(self, name)
            if v is not None and not -1.0 <= v <= 1.0:
                raise ValueError(f"slot {self.t}: {name}={v!r} outside [-1, 1]")


def _simulate_replication(config: ScenarioConfig, seed_seq: np.random.SeedSequence) -> list[SlotRecord]:
    rng = np.random.default_rng(seed_seq)
    schemes = config.trust.schemes
    state = TrustState()
    cum_clean = cum_comp = cum_und = 0
    records: list[SlotRecord] = []
    usab = config.usability

    for t in range(1, config.t_slots + 1):
        if config.attack.kind == "uniform":
            truth = uniform_attack_slot(config.n_devices, config.attack.p_a, rng, config.attack.magnitude)
        else:
            assert config.attack.schedule is not None
            truth = onoff_attack_slot(config.attack.schedule, t, config.n_devices, rng)
        _, counts = observe(truth, config.profile, rng)

        if config.belief_mode == "cumulative":
            cum_clean += counts.clean
            cum_comp += counts.compromised
            cum_und += counts.undecided
            belief_counts = ObservationCounts(cum_clean, cum_comp, cum_und, t * config.n_devices)
        else:
            belief_counts = counts
        beliefs = posterior(belief_counts)
        devs = deviations(counts, config.costs)

        u_pt = pt_utility(beliefs, devs, config.pt) if config.pt_enabled else None
        u_eut = (
            eut_utility(beliefs, devs, form=config.eut_form, pt=config.pt)
            if config.eut_enabled
            else None
        )
        u_for_score = u_pt if config.score_theory == "pt" else u_eut
        assert u_for_score is not None
        w = weighted_score(u_for_score)

        if "cwma" in schemes:
            state = cwma_step(state, w)
        if "ewma" in schemes:
            state = ewma_step(state, w, config.trust.ewma_alpha)
        if "awma" in schemes:
            state = awma_step(state, w, config.trust.awma)

        usable = None
        if usab is not None and t % usab.period == 0:
            tracked = {"cwma": state.cwma_mean, "ewma": state.ewma, "awma": state.awma}[usab.scheme]
            assert tracked is not None
            usable = tracked > usab.threshold

        records.append(
            SlotRecord(
                t=t,
                attacked=int(truth.sum()),
                n_clean=counts.clean,
                n_compromised=counts.compromised,
                n_undecided=counts.undecided,
                belief_clean=beliefs.clean,
                belief_compromised=beliefs.compromised,
                belief_undecided=beliefs.undecided,
                utility_pt=u_pt,
                utility_eut=u_eut,
                score=w,
                cwma=state.cwma_mean if "cwma" in schemes else None,
                ewma=state.ewma if "ewma" in schemes else None,
                awma=state.awma if "awma" in schemes else None,
                usable=usable,
            )
        )
    return records


def run_scenario(config: ScenarioConfig, jobs: int = 1) -> list[list[SlotRecord]]:
    """Run every replication of a scenario; returns one trace per replication.

    Replication r always consumes the r-th child stream of the scenario
    seed, so results do not depend on ``jobs`` or on how many replications
    run alongside each other.
    """
    children = np.random.SeedSequence(config.seed).spawn(config.replications)
    if jobs > 1 and config.replications > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_simulate_replication, [config] * config.replications, children))
    return [_simulate_replication(config, child) for child in children]


def _with_axis_value(config: ScenarioConfig, axis: str, value: float) -> ScenarioConfig:
    if axis == "p_a":
        if config.attack.kind != "uniform":
            raise ValueError("sweeping p_a requires a uniform attack")
        return replace(config, attack=replace(config.attack, p_a=float(value)))
    if axis == "p_detect":
        return replace(config, profile=profile_from_pdetect(float(value), config.profile.p_error))
    if axis == "compromised_weight":
        if config.costs.kind != "conservative":
            raise ValueError("sweeping compromised_weight requires a conservative cost model")
        return replace(
            config,
            costs=CostModel.conservative(
                config.costs.clean, config.costs.compromised, float(value), config.costs.decision
            ),
        )
    if axis in ("loss_aversion", "value_exponent", "gain_weight_exponent", "loss_weight_exponent"):
        return replace(config, pt=replace(config.pt, **{axis: float(value)}))
    raise ValueError(f"unknown sweep axis {axis!r}; known: {SWEEP_AXES}")


def _mean_utilities(records: list[SlotRecord], which: str) -> float:
    vals = [getattr(r, f"utility_{which}") for r in records]
    return float(np.mean([v for v in vals if v is not None]))


def sweep(
    config: ScenarioConfig,
    axis: str,
    values: Sequence[float],
    jobs: int = 1,
) -> list[dict[str, Any]]:
    """Steady-state utility summary along one parameter axis.

    For each value the scenario runs all replications; a replication's
    statistic is the cumulative mean of its utilities at the final slot, and
    the summary reports the mean and sample standard deviation of that
    statistic across replications, per enabled theory.
    """
    axis = _AXIS_ALIASES.get(axis, axis)
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; known: {SWEEP_AXES}")
    rows: list[dict[str, Any]] = []
    for v in values:
        point_config = _with_axis_value(config, axis, v)
        reps = run_scenario(point_config, jobs=jobs)
        row: dict[str, Any] = {"axis": axis, "value": float(v), "replications": len(reps)}
        for theory, enabled in (("pt", config.pt_enabled), ("eut", config.eut_enabled)):
            if not enabled:
                continue
            stats = np.array([_mean_utilities(rec, theory) for rec in reps])
            row[f"mean_{theory}"] = float(stats.mean())
            row[f"std_{theory}"] = float(stats.std(ddof=1)) if len(stats) > 1 else 0.0
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# persistence


def _fmt(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".9g")


def write_table(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")
    return path


def write_run_csv(records: list[SlotRecord], path: str | Path, n_devices: int) -> Path:
    """Persist one replication's trace; every row is validated first."""
    for rec in records:
        rec.validate(n_devices)
    rows = [[getattr(rec, col) for col in CSV_COLUMNS] for rec in records]
    return write_table(path, CSV_COLUMNS, rows)


def write_sweep_csv(rows: list[dict[str, Any]], path: str | Path) -> Path:
    if not rows:
        raise ValueError("sweep produced no rows")
    axis = rows[0]["axis"]
    header = [axis, "replications"]
    for theory in ("pt", "eut"):
        if f"mean_{theory}" in rows[0]:
            header += [f"mean_{theory}", f"std_{theory}"]
    out_rows = []
    for row in rows:
        line: list[Any] = [row["value"], row["replications"]]
        for theory in ("pt", "eut"):
            if f"mean_{theory}" in row:
                line += [row[f"mean_{theory}"], row[f"std_{theory}"]]
        out_rows.append(line)
    return write_table(path, header, out_rows)


# ---------------------------------------------------------------------------
# named experiments (one per figure in the write-up)


def _raw_scenario(
    seed: int,
    *,
    t_slots: int = 300,
    replications: int = 1,
    theory: str = "pt",
    costs_kind: str = "optimistic",
    p_a: float | None = 0.1,
    p_detect: float = 0.9,
    schedule: str | None = None,
) -> dict[str, Any]:
    raw: dict[str, Any] = {
        "scenario": {
            "t_slots": t_slots,
            "seed": seed,
            "replications": replications,
            "theory": theory,
        },
        "monitor": {"p_detect": p_detect},
        "costs": {"kind": costs_kind},
    }
    if schedule is not None:
        raw["attack"] = {"kind": "onoff", "schedule": schedule}
    else:
        raw["attack"] = {"kind": "uniform", "p_a": p_a}
    return raw


def _build(raw: dict[str, Any], overrides: list[str] | None) -> ScenarioConfig:
    if overrides:
        raw = apply_overrides(raw, overrides)
    return build_config(raw)


def _cummean(values: list[float]) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    return np.cumsum(arr) / np.arange(1, len(arr) + 1)


_PA_GRID = [round(0.1 * k, 10) for k in range(1, 11)]
_PDETECT_GRID = [round(0.5 + 0.1 * k, 10) for k in range(0, 6)]
_SWEEP_REPLICATIONS = 10


def _fig_steady_state_pt(seed: int, jobs: int, overrides: list[str] | None):
    series: dict[str, list[float]] = {}
    configs = {}
    for kind in ("optimistic", "conservative"):
        cfg = _build(_raw_scenario(seed, costs_kind=kind), overrides)
        configs[kind] = cfg
        recs = run_scenario(cfg, jobs=jobs)[0]
        u = [r.utility_pt for r in recs]
        series[f"{kind}_u"] = u
        series[f"{kind}_u_mavg"] = list(_cummean(u))
    t_slots = len(series["optimistic_u"])
    header = ["t", "optimistic_u", "optimistic_u_mavg", "conservative_u", "conservative_u_mavg"]
    rows = [
        [t + 1] + [series[h][t] for h in header[1:]]
        for t in range(t_slots)
    ]
    return {"steady-state-pt.csv": (header, rows)}, configs


def _sweep_rows(cfg: ScenarioConfig, axis: str, grid: Sequence[float], jobs: int):
    return sweep(cfg, axis, grid, jobs=jobs)


def _fig_pa_sweep_optimistic(seed: int, jobs: int, overrides: list[str] | None):
    cfg = _build(_raw_scenario(seed, replications=_SWEEP_REPLICATIONS), overrides)
    rows = _sweep_rows(cfg, "p_a", _PA_GRID, jobs)
    table = [[r["value"], r["mean_pt"], r["std_pt"]] for r in rows]
    return {"pa-sweep-optimistic.csv": (["p_a", "mean_pt", "std_pt"], table)}, {"base": cfg}


def _fig_pa_sweep_both_pdetect(seed: int, jobs: int, overrides: list[str] | None):
    merged: dict[float, dict[str, float]] = {v: {} for v in _PA_GRID}
    configs = {}
    cols = []
    for p_detect, tag in ((0.9, "pd09"), (0.5, "pd05")):
        for kind in ("optimistic", "conservative"):
            cfg = _build(
                _raw_scenario(seed, replications=_SWEEP_REPLICATIONS, costs_kind=kind, p_detect=p_detect),
                overrides,
            )
            configs[f"{kind}_{tag}"] = cfg
            for r in _sweep_rows(cfg, "p_a", _PA_GRID, jobs):
                merged[r["value"]][f"{kind}_{tag}_mean"] = r["mean_pt"]
                merged[r["value"]][f"{kind}_{tag}_std"] = r["std_pt"]
            cols += [f"{kind}_{tag}_mean", f"{kind}_{tag}_std"]
    header = ["p_a"] + cols
    rows = [[v] + [merged[v][c] for c in cols] for v in _PA_GRID]
    return {"pa-sweep-both-pdetect.csv": (header, rows)}, configs


def _fig_pdetect_sweep(seed: int, jobs: int, overrides: list[str] | None):
    cfg = _build(_raw_scenario(seed, replications=_SWEEP_REPLICATIONS), overrides)
    rows = _sweep_rows(cfg, "p_detect", _PDETECT_GRID, jobs)
    table = [[r["value"], r["mean_pt"], r["std_pt"]] for r in rows]
    return {"pdetect-sweep.csv": (["p_detect", "mean_pt", "std_pt"], table)}, {"base": cfg}


def _fig_pt_vs_eut_timeseries(seed: int, jobs: int, overrides: list[str] | None):
    series: dict[str, list[float]] = {}
    configs = {}
    for kind in ("optimistic", "conservative"):
        cfg = _build(_raw_scenario(seed, theory="both", costs_kind=kind), overrides)
        configs[kind] = cfg
        recs = run_scenario(cfg, jobs=jobs)[0]
        for theory in ("pt", "eut"):
            u = [getattr(r, f"utility_{theory}") for r in recs]
            series[f"{kind}_{theory}_u"] = u
            series[f"{kind}_{theory}_u_mavg"] = list(_cummean(u))
    names = [
        f"{kind}_{theory}_{suffix}"
        for kind in ("optimistic", "conservative")
        for theory in ("pt", "eut")
        for suffix in ("u", "u_mavg")
    ]
    t_slots = len(series[names[0]])
    rows = [[t + 1] + [series[n][t] for n in names] for t in range(t_slots)]
    return {"pt-vs-eut-timeseries.csv": (["t"] + names, rows)}, configs


def _fig_pt_vs_eut_pa_sweep(seed: int, jobs: int, overrides: list[str] | None):
    cfg = _build(_raw_scenario(seed, replications=_SWEEP_REPLICATIONS, theory="both"), overrides)
    rows = _sweep_rows(cfg, "p_a", _PA_GRID, jobs)
    table = [[r["value"], r["mean_pt"], r["std_pt"], r["mean_eut"], r["std_eut"]] for r in rows]
    header = ["p_a", "pt_mean", "pt_std", "eut_mean", "eut_std"]
    return {"pt-vs-eut-pa-sweep.csv": (header, table)}, {"base": cfg}


def _fig_pt_vs_eut_both_systems(seed: int, jobs: int, overrides: list[str] | None):
    merged: dict[float, dict[str, float]] = {v: {} for v in _PA_GRID}
    configs = {}
    cols = []
    for kind in ("optimistic", "conservative"):
        cfg = _build(
            _raw_scenario(seed, replications=_SWEEP_REPLICATIONS, theory="both", costs_kind=kind),
            overrides,
        )
        configs[kind] = cfg
        for r in _sweep_rows(cfg, "p_a", _PA_GRID, jobs):
            for theory in ("pt", "eut"):
                merged[r["value"]][f"{kind}_{theory}_mean"] = r[f"mean_{theory}"]
                merged[r["value"]][f"{kind}_{theory}_std"] = r[f"std_{theory}"]
        cols += [f"{kind}_{t}_{s}" for t in ("pt", "eut") for s in ("mean", "std")]
    header = ["p_a"] + cols
    rows = [[v] + [merged[v][c] for c in cols] for v in _PA_GRID]
    return {"pt-vs-eut-both-systems.csv": (header, rows)}, configs


def _fig_pt_vs_eut_pdetect(seed: int, jobs: int, overrides: list[str] | None):
    cfg = _build(_raw_scenario(seed, replications=_SWEEP_REPLICATIONS, theory="both"), overrides)
    rows = _sweep_rows(cfg, "p_detect", _PDETECT_GRID, jobs)
    table = [[r["value"], r["mean_pt"], r["std_pt"], r["mean_eut"], r["std_eut"]] for r in rows]
    header = ["p_detect", "pt_mean", "pt_std", "eut_mean", "eut_std"]
    return {"pt-vs-eut-pdetect.csv": (header, table)}, {"base": cfg}


def _onoff_series(seed: int, jobs: int, overrides: list[str] | None, schedule: str):
    cfg = _build(_raw_scenario(seed, t_slots=500, schedule=schedule), overrides)
    recs = run_scenario(cfg, jobs=jobs)[0]
    return cfg, recs


def _fig_cwma_vs_ewma_baseline(seed: int, jobs: int, overrides: list[str] | None):
    cfg, recs = _onoff_series(seed, jobs, overrides, "2:1")
    rows = [[r.t, r.score, r.cwma, r.ewma] for r in recs]
    return {"cwma-vs-ewma-baseline.csv": (["t", "score", "cwma", "ewma"], rows)}, {"base": cfg}


def _fig_awma_vs_cwma(seed: int, jobs: int, overrides: list[str] | None):
    cfg, recs = _onoff_series(seed, jobs, overrides, "2:1")
    rows = [[r.t, r.score, r.cwma, r.awma] for r in recs]
    return {"awma-vs-cwma.csv": (["t", "score", "cwma", "awma"], rows)}, {"base": cfg}


def _fig_awma_vs_ewma(seed: int, jobs: int, overrides: list[str] | None):
    cfg, recs = _onoff_series(seed, jobs, overrides, "2:1")
    rows = [[r.t, r.score, r.ewma, r.awma] for r in recs]
    return {"awma-vs-ewma.csv": (["t", "score", "ewma", "awma"], rows)}, {"base": cfg}


def _fig_onoff_ratio_compare(seed: int, jobs: int, overrides: list[str] | None):
    cfg2, recs2 = _onoff_series(seed, jobs, overrides, "2:1")
    cfg3, recs3 = _onoff_series(seed, jobs, overrides, "3:1")
    rows = [[r2.t, r2.awma, r3.awma] for r2, r3 in zip(recs2, recs3)]
    return (
        {"onoff-ratio-compare.csv": (["t", "awma_2to1", "awma_3to1"], rows)},
        {"2:1": cfg2, "3:1": cfg3},
    )


FIGURES = {
    "steady-state-pt": _fig_steady_state_pt,
    "pa-sweep-optimistic": _fig_pa_sweep_optimistic,
    "pa-sweep-both-pdetect": _fig_pa_sweep_both_pdetect,
    "pdetect-sweep": _fig_pdetect_sweep,
    "pt-vs-eut-timeseries": _fig_pt_vs_eut_timeseries,
    "pt-vs-eut-pa-sweep": _fig_pt_vs_eut_pa_sweep,
    "pt-vs-eut-both-systems": _fig_pt_vs_eut_both_systems,
    "pt-vs-eut-pdetect": _fig_pt_vs_eut_pdetect,
    "cwma-vs-ewma-baseline": _fig_cwma_vs_ewma_baseline,
    "awma-vs-cwma": _fig_awma_vs_cwma,
    "awma-vs-ewma": _fig_awma_vs_ewma,
    "onoff-ratio-compare": _fig_onoff_ratio_compare,
}


def reproduce_figure(
    figure_id: str,
    seed: int = 1,
    out_dir: str | Path = "results",
    jobs: int = 1,
    overrides: list[str] | None = None,
) -> list[Path]:
    """Run a named experiment and persist its plot-ready CSVs plus a manifest."""
    if figure_id not in FIGURES:
        raise ValueError(f"unknown figure id {figure_id!r}; known: {sorted(FIGURES)}")
    out_dir = Path(out_dir)
    tables, configs = FIGURES[figure_id](seed, jobs, overrides)
    written = []
    for fname, (header, rows) in tables.items():
        written.append(write_table(out_dir / fname, header, rows))
    manifest = {
        "figure": figure_id,
        "seed": seed,
        "version": __version__,
        "files": sorted(t.name for t in written),
        "scenarios": {name: effective_dict(cfg) for name, cfg in configs.items()},
    }
    manifest_path = out_dir / f"{figure_id}_manifest.json"
    with open(manifest_path, "w", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(manifest_path)
    return written
