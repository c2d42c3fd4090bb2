import json

import pytest

from iotrust.cli import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_USAGE,
    UsageError,
    main,
    parse_values,
)


class TestParseValues:
    def test_range_inclusive_of_stop(self):
        got = parse_values("0.1:1.0:0.1")
        assert len(got) == 10
        assert got[0] == pytest.approx(0.1)
        assert got[-1] == pytest.approx(1.0)

    def test_range_stop_not_reachable(self):
        assert parse_values("0.1:0.35:0.1") == pytest.approx([0.1, 0.2, 0.3])

    def test_comma_list(self):
        assert parse_values("0.5, 0.9") == [0.5, 0.9]

    def test_bad_range(self):
        with pytest.raises(UsageError):
            parse_values("0.1:1.0")
        with pytest.raises(UsageError):
            parse_values("0.1:1.0:-0.1")
        with pytest.raises(UsageError):
            parse_values("a,b")


class TestExitCodes:
    def test_no_command_is_usage_error(self, capsys):
        assert main([]) == EXIT_USAGE
        assert "error: usage:" in capsys.readouterr().err

    def test_unknown_flag_is_usage_error(self, capsys):
        assert main(["run", "--bogus"]) == EXIT_USAGE

    def test_missing_config_file_names_it(self, capsys):
        code = main(["run", "--config", "missing.conf"])
        assert code == EXIT_CONFIG
        err = capsys.readouterr().err
        assert err.startswith("error: config:")
        assert "missing.conf" in err

    def test_invalid_config_key_is_config_error(self, capsys, tmp_path):
        code = main(["run", "--set", "attack.p_a=2.0", "--out", str(tmp_path)])
        assert code == EXIT_CONFIG
        assert "attack.p_a" in capsys.readouterr().err

    def test_unknown_figure_is_usage_error(self, capsys, tmp_path):
        assert main(["figure", "fig-nope", "--out", str(tmp_path)]) == EXIT_USAGE

    def test_unknown_axis_is_usage_error(self, capsys, tmp_path):
        code = main(
            ["sweep", "--axis", "nope", "--values", "0.1,0.2", "--out", str(tmp_path)]
        )
        assert code == EXIT_USAGE


class TestRun:
    def test_writes_replication_csvs(self, tmp_path, capsys):
        code = main(
            [
                "run",
                "--seed",
                "3",
                "--out",
                str(tmp_path),
                "--set",
                "scenario.t_slots=10",
                "--set",
                "scenario.replications=2",
            ]
        )
        assert code == EXIT_OK
        assert (tmp_path / "run_rep000.csv").exists()
        assert (tmp_path / "run_rep001.csv").exists()

    def test_out_env_var(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("IOTRUST_OUT", str(tmp_path / "envout"))
        code = main(["run", "--set", "scenario.t_slots=5"])
        assert code == EXIT_OK
        assert (tmp_path / "envout" / "run_rep000.csv").exists()


class TestSweep:
    def test_summary_rows(self, tmp_path, capsys):
        code = main(
            [
                "sweep",
                "--axis",
                "p_a",
                "--values",
                "0.1:1.0:0.1",
                "--out",
                str(tmp_path),
                "--set",
                "scenario.t_slots=20",
                "--set",
                "scenario.replications=2",
            ]
        )
        assert code == EXIT_OK
        lines = (tmp_path / "sweep_p_a.csv").read_text().splitlines()
        assert len(lines) == 11  # header + 10 value rows


class TestFigure:
    def test_writes_csv_and_manifest(self, tmp_path, capsys):
        code = main(["figure", "awma-vs-cwma", "--seed", "7", "--out", str(tmp_path)])
        assert code == EXIT_OK
        assert (tmp_path / "awma-vs-cwma.csv").exists()
        manifest = json.loads((tmp_path / "awma-vs-cwma_manifest.json").read_text())
        assert manifest["seed"] == 7

    def test_repeat_runs_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["figure", "awma-vs-cwma", "--seed", "7", "--out", str(out1)]) == EXIT_OK
        assert main(["figure", "awma-vs-cwma", "--seed", "7", "--out", str(out2)]) == EXIT_OK
        assert (out1 / "awma-vs-cwma.csv").read_bytes() == (out2 / "awma-vs-cwma.csv").read_bytes()

    def test_rejects_config_flag(self, tmp_path, capsys):
        assert main(["figure", "awma-vs-cwma", "--config", "x.toml"]) == EXIT_USAGE


class TestValidateConfig:
    def test_prints_effective_and_writes_nothing(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        cfg = tmp_path / "scenario.toml"
        cfg.write_text("[attack]\nkind = \"uniform\"\np_a = 0.4\n")
        code = main(["validate-config", "--config", str(cfg), "--set", "attack.p_a=0.7"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "config ok" in out
        assert "p_a = 0.7" in out  # override wins over the file value
        leftovers = [p for p in tmp_path.iterdir() if p != cfg]
        assert leftovers == []

    def test_reports_config_error(self, tmp_path, capsys):
        cfg = tmp_path / "bad.toml"
        cfg.write_text("[attack]\nrate = 0.4\n")
        assert main(["validate-config", "--config", str(cfg)]) == EXIT_CONFIG
        assert "attack.rate" in capsys.readouterr().err
