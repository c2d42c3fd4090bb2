import numpy as np
import pytest
from scipy.stats import binom

from iotrust.bayes import posterior
from iotrust.config import build_config, default_config
from iotrust.harness import (
    CSV_COLUMNS,
    reproduce_figure,
    run_scenario,
    sweep,
    write_run_csv,
    write_sweep_csv,
)
from iotrust.integrity import deviations, value, weight
from iotrust.monitor import ObservationCounts


def exact_mean_utility(config) -> float:
    """Oracle for the long-run per-slot utility of a uniform-attack scenario.

    With independent per-device attack and verdict draws, each verdict
    class's count is marginally binomial and each utility term depends only
    on its own count, so the slot-mean is an exact sum of three binomial
    expectations (error-free monitor assumed).
    """
    assert config.profile.p_error == 0.0
    n = config.n_devices
    p_a, p_d = config.attack.p_a, config.profile.p_detect
    pt = config.pt
    ks = np.arange(n + 1)
    total = 0.0
    class_probs = {
        "clean": (1 - p_a) * p_d,
        "compromised": p_a * p_d,
        "undecided": 1 - p_d,
    }
    for name, marginal in class_probs.items():
        pmf = binom.pmf(ks, n, marginal)
        vals = []
        for k in ks:
            rest = n - int(k)
            # only the coordinate under study matters for its own term
            if name == "clean":
                counts = ObservationCounts(int(k), rest, 0, n)
            elif name == "compromised":
                counts = ObservationCounts(rest, int(k), 0, n)
            else:
                counts = ObservationCounts(rest, 0, int(k), n)
            delta = getattr(deviations(counts, config.costs), name)
            belief = getattr(posterior(counts), name)
            domain = "gain" if delta >= 0 else "loss"
            vals.append(value(delta, pt) * weight(belief, domain, pt))
        total += float(pmf @ np.asarray(vals))
    return total


class TestRunScenario:
    def test_no_randomness_left(self):
        cfg = build_config(
            {
                "scenario": {"t_slots": 10},
                "attack": {"kind": "uniform", "p_a": 0.0},
                "monitor": {"p_detect": 1.0},
            }
        )
        records = run_scenario(cfg)[0]
        first = records[0]
        assert (first.n_clean, first.n_compromised, first.n_undecided) == (100, 0, 0)
        assert first.utility_pt > 0
        for rec in records:
            assert rec.utility_pt == first.utility_pt
            assert rec.cwma == rec.ewma == rec.awma == first.score

    def test_deterministic_given_seed(self):
        cfg = default_config(t_slots=25, replications=2, seed=11)
        assert run_scenario(cfg) == run_scenario(cfg)

    def test_replication_streams_are_distinct(self):
        # the harness derives replication r from the r-th child of the
        # scenario seed; the first-slot attack vectors must all differ
        from iotrust.adversary import uniform_attack_slot

        children = np.random.SeedSequence(4).spawn(100)
        vectors = {
            tuple(uniform_attack_slot(100, 0.5, np.random.default_rng(child)))
            for child in children
        }
        assert len(vectors) == 100

        cfg = default_config(t_slots=5, replications=100, seed=4)
        reps = run_scenario(cfg)
        assert np.std([r[0].attacked for r in reps]) > 0

    def test_row_invariants(self):
        cfg = default_config(t_slots=50, seed=3)
        for rec in run_scenario(cfg)[0]:
            rec.validate(cfg.n_devices)
            assert abs(rec.belief_clean + rec.belief_compromised + rec.belief_undecided - 1) < 1e-9

    def test_theory_selection_controls_columns(self):
        cfg = build_config({"scenario": {"t_slots": 3, "theory": "eut"}})
        rec = run_scenario(cfg)[0][0]
        assert rec.utility_pt is None and rec.utility_eut is not None
        cfg = build_config({"scenario": {"t_slots": 3, "theory": "both"}})
        rec = run_scenario(cfg)[0][0]
        assert rec.utility_pt is not None and rec.utility_eut is not None

    def test_usability_flags_fire_on_schedule(self):
        cfg = build_config(
            {
                "scenario": {"t_slots": 500},
                "attack": {"kind": "onoff", "schedule": "2:1"},
                "usability": {"period": 50, "threshold": 0.0, "scheme": "cwma"},
            }
        )
        records = run_scenario(cfg)[0]
        flagged = [r.t for r in records if r.usable is not None]
        assert flagged == list(range(50, 501, 50))

    def test_sim_mean_matches_exact_oracle(self):
        cfg = default_config(t_slots=300, replications=10, seed=21)
        reps = run_scenario(cfg)
        means = [np.mean([r.utility_pt for r in recs]) for recs in reps]
        sim_mean = float(np.mean(means))
        se = float(np.std(means, ddof=1) / np.sqrt(len(means)))
        exact = exact_mean_utility(cfg)
        assert abs(sim_mean - exact) < 4 * se + 1e-6

    def test_cumulative_belief_mode_converges(self):
        cfg = build_config({"scenario": {"t_slots": 200, "belief_mode": "cumulative"}})
        records = run_scenario(cfg)[0]
        late = records[-1]
        # beliefs settle near the class rates: 0.81 / 0.09 / 0.10
        assert late.belief_clean == pytest.approx(0.81, abs=0.02)
        assert late.belief_compromised == pytest.approx(0.09, abs=0.02)
        assert late.belief_undecided == pytest.approx(0.10, abs=0.02)

    def test_jobs_do_not_change_results(self):
        cfg = default_config(t_slots=20, replications=4, seed=9)
        assert run_scenario(cfg, jobs=1) == run_scenario(cfg, jobs=2)


class TestSweep:
    def test_pa_sweep_monotone_under_both_systems(self):
        values = [0.1, 0.4, 0.7, 1.0]
        rows_opt = sweep(default_config(replications=4, seed=5), "p_a", values)
        con = build_config({"scenario": {"replications": 4, "seed": 5}, "costs": {"kind": "conservative"}})
        rows_con = sweep(con, "p_a", values)
        means_opt = [r["mean_pt"] for r in rows_opt]
        means_con = [r["mean_pt"] for r in rows_con]
        assert all(b < a for a, b in zip(means_opt, means_opt[1:]))
        assert all(c <= o for c, o in zip(means_con, means_opt))

    def test_w2_axis_requires_conservative(self):
        with pytest.raises(ValueError, match="conservative"):
            sweep(default_config(), "w2", [0.8, 0.9])

    def test_w2_axis_runs(self):
        con = build_config({"scenario": {"t_slots": 30, "replications": 2}, "costs": {"kind": "conservative"}})
        rows = sweep(con, "w2", [0.7, 1.0])
        assert len(rows) == 2 and rows[0]["axis"] == "compromised_weight"

    def test_pt_axis(self):
        rows = sweep(default_config(t_slots=30, replications=2), "loss_aversion", [1.5, 3.0])
        assert [r["value"] for r in rows] == [1.5, 3.0]

    def test_unknown_axis(self):
        with pytest.raises(ValueError, match="unknown sweep axis"):
            sweep(default_config(), "p_bogus", [0.1])

    def test_reports_both_theories(self):
        cfg = build_config({"scenario": {"t_slots": 30, "replications": 3, "theory": "both"}})
        row = sweep(cfg, "p_a", [0.5])[0]
        assert {"mean_pt", "std_pt", "mean_eut", "std_eut"} <= set(row)


class TestPersistence:
    def test_run_csv_layout(self, tmp_path):
        cfg = default_config(t_slots=8, seed=2)
        records = run_scenario(cfg)[0]
        path = write_run_csv(records, tmp_path / "run.csv", cfg.n_devices)
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 9
        # nine significant digits on float cells
        first = lines[1].split(",")
        assert first[0] == "1"
        assert len(first) == len(CSV_COLUMNS)

    def test_run_csv_validates_rows(self, tmp_path):
        cfg = default_config(t_slots=2)
        records = run_scenario(cfg)[0]
        with pytest.raises(ValueError, match="sum"):
            write_run_csv(records, tmp_path / "bad.csv", cfg.n_devices + 1)

    def test_sweep_csv(self, tmp_path):
        rows = sweep(default_config(t_slots=20, replications=2), "p_a", [0.2, 0.8])
        path = write_sweep_csv(rows, tmp_path / "sweep.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "p_a,replications,mean_pt,std_pt"
        assert len(lines) == 3

    def test_byte_identical_reruns(self, tmp_path):
        cfg = default_config(t_slots=40, seed=6)
        a = write_run_csv(run_scenario(cfg)[0], tmp_path / "a.csv", cfg.n_devices)
        b = write_run_csv(run_scenario(cfg)[0], tmp_path / "b.csv", cfg.n_devices)
        assert a.read_bytes() == b.read_bytes()


class TestFigures:
    def test_unknown_figure_id(self, tmp_path):
        with pytest.raises(ValueError, match="unknown figure id"):
            reproduce_figure("fig-bogus", out_dir=tmp_path)

    def test_awma_vs_cwma_outputs(self, tmp_path):
        written = reproduce_figure("awma-vs-cwma", seed=7, out_dir=tmp_path)
        names = {p.name for p in written}
        assert names == {"awma-vs-cwma.csv", "awma-vs-cwma_manifest.json"}
        lines = (tmp_path / "awma-vs-cwma.csv").read_text().splitlines()
        assert lines[0] == "t,score,cwma,awma"
        assert len(lines) == 501

    def test_ratio_compare_outputs(self, tmp_path):
        reproduce_figure("onoff-ratio-compare", seed=3, out_dir=tmp_path)
        lines = (tmp_path / "onoff-ratio-compare.csv").read_text().splitlines()
        assert lines[0] == "t,awma_2to1,awma_3to1"
        assert len(lines) == 501

    def test_manifest_contents(self, tmp_path):
        import json

        reproduce_figure("steady-state-pt", seed=5, out_dir=tmp_path, overrides=["scenario.t_slots=40"])
        manifest = json.loads((tmp_path / "steady-state-pt_manifest.json").read_text())
        assert manifest["figure"] == "steady-state-pt"
        assert manifest["seed"] == 5
        assert set(manifest["scenarios"]) == {"optimistic", "conservative"}
        assert manifest["scenarios"]["optimistic"]["scenario"]["t_slots"] == 40
