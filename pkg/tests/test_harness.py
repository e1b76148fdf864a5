"""Experiment harness: config parsing, trial orchestration, CSV output
and the command line interface."""

import csv
import io

import numpy as np
import pytest

from modfold import cli, harness
from modfold.errors import ConfigError

FAST = dict(n_symbols=24, trials=2, pilot_harmonics=3, pilot_samples=256,
            seed=7)


def fast_cfg(**overrides):
    kwargs = {**FAST, **overrides}
    return harness.ExperimentConfig(**kwargs)


CONFIG_TEXT = """
# fast smoke configuration
schema_version = 1
n_symbols = 24
trials = 2
pilot_harmonics = 3
pilot_samples = 256
snr_db = 40
sir_db = -20
order = auto
"""


class TestConfigParsing:
    def test_roundtrip(self):
        cfg = harness.parse_config_text(CONFIG_TEXT)
        assert cfg.n_symbols == 24
        assert cfg.trials == 2
        assert cfg.sir_db == -20.0
        assert cfg.order is None

    def test_schema_version_required(self):
        with pytest.raises(ConfigError):
            harness.parse_config_text("trials = 3")

    def test_unsupported_schema_version(self):
        with pytest.raises(ConfigError):
            harness.parse_config_text("schema_version = 99")

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            harness.parse_config_text("schema_version = 1\nbogus = 1")

    def test_malformed_line_rejected(self):
        with pytest.raises(ConfigError):
            harness.parse_config_text("schema_version = 1\njust words")

    def test_bool_and_none_coercion(self):
        cfg = harness.parse_config_text(
            "schema_version = 1\nrun_nlms = false\nbeta_r = none")
        assert cfg.run_nlms is False and cfg.beta_r is None

    def test_invalid_values_rejected(self):
        with pytest.raises(ConfigError):
            harness.ExperimentConfig(trials=0)
        with pytest.raises(ConfigError):
            harness.ExperimentConfig(pulse="triangle")


class TestRunExperiment:
    def test_section_four_scale_metrics(self):
        reports = harness.run_experiment(fast_cfg())
        assert all(not r.error for r in reports)
        agg = harness.aggregate(reports)
        # recovery error sits at the quantization-noise floor
        assert 1e-3 < agg["mse_received_mean"] < 4e-2
        assert agg["mse_clipped_mean"] > 1.0

    def test_determinism(self):
        a = harness.trials_csv(harness.run_experiment(fast_cfg()))
        b = harness.trials_csv(harness.run_experiment(fast_cfg()))
        assert a == b

    def test_seed_changes_output(self):
        a = harness.trials_csv(harness.run_experiment(fast_cfg()))
        b = harness.trials_csv(harness.run_experiment(fast_cfg(seed=99)))
        assert a != b

    def test_weak_si_keeps_detection_clean(self):
        reports = harness.run_experiment(fast_cfg(sir_db=20.0, trials=1))
        assert reports[0].values["ber"] == 0.0

    def test_trial_error_recorded_not_raised(self):
        # order forced far too high for the frame: trials fail individually
        reports = harness.run_experiment(fast_cfg(order=12, trials=1))
        assert reports[0].error != ""
        agg = harness.aggregate(reports)
        assert agg["trials_failed"] == 1


class TestCsvOutput:
    def test_trials_schema(self):
        text = harness.trials_csv(harness.run_experiment(fast_cfg(trials=1)))
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == harness.TRIAL_COLUMNS
        assert len(rows) == 2
        assert len(rows[1]) == len(harness.TRIAL_COLUMNS)

    def test_waveform_dump_alignment(self):
        reports, wf = harness.run_experiment(fast_cfg(trials=1),
                                             keep_waveforms=True)
        text = harness.waveforms_csv(wf)
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0][:3] == ["k", "truth", "folded"]
        assert len(rows) - 1 == wf.truth.size
        rec = np.array([float(r[4]) for r in rows[1:]])
        truth = np.array([float(r[1]) for r in rows[1:]])
        assert np.mean((rec - truth) ** 2) < 1e-2

    def test_sweep_axis(self):
        text = harness.sweep(fast_cfg(trials=1), "snr_db", [20.0, 40.0])
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0][0] == "snr_db"
        assert [r[0] for r in rows[1:]] == ["20", "40"]

    def test_sweep_unknown_axis(self):
        with pytest.raises(ConfigError):
            harness.sweep(fast_cfg(), "pulse", [1])

    def test_noise_analysis_gap_column(self):
        text = harness.noise_analysis_csv(0.1, [2, 4], mc_samples=10 ** 5)
        rows = list(csv.reader(io.StringIO(text)))
        header = rows[0]
        gap = header.index("gap_db")
        for row in rows[1:]:
            assert float(row[gap]) == pytest.approx(20.0)


class TestCli:
    def _write_config(self, tmp_path, text=CONFIG_TEXT):
        path = tmp_path / "exp.cfg"
        path.write_text(text)
        return str(path)

    def test_simulate(self, tmp_path):
        out = tmp_path / "trials.csv"
        rc = cli.main(["simulate", "--config",
                       self._write_config(tmp_path), "--out", str(out)])
        assert rc == 0
        rows = list(csv.reader(out.open()))
        assert rows[0] == harness.TRIAL_COLUMNS

    def test_simulate_with_waveform_dump(self, tmp_path):
        out = tmp_path / "trials.csv"
        dump = tmp_path / "wave.csv"
        rc = cli.main(["simulate", "--config", self._write_config(tmp_path),
                       "--out", str(out), "--dump-waveforms", str(dump)])
        assert rc == 0
        assert dump.exists() and out.exists()

    def test_sweep(self, tmp_path):
        out = tmp_path / "sweep.csv"
        rc = cli.main(["sweep", "--config", self._write_config(tmp_path),
                       "--axis", "bits", "--values", "3,4", "--out", str(out)])
        assert rc == 0
        rows = list(csv.reader(out.open()))
        assert rows[0][0] == "bits"

    def test_noise_analysis(self, tmp_path):
        out = tmp_path / "noise.csv"
        rc = cli.main(["noise-analysis", "--zeta", "0.1", "--bits", "1..4",
                       "--out", str(out)])
        assert rc == 0
        rows = list(csv.reader(out.open()))
        assert len(rows) == 5

    def test_bad_config_exits_nonzero(self, tmp_path, capsys):
        rc = cli.main(["simulate", "--config",
                       self._write_config(tmp_path, "nonsense")])
        assert rc == 1
        assert "error" in capsys.readouterr().err

    def test_missing_file_exits_nonzero(self, capsys):
        rc = cli.main(["simulate", "--config", "/nonexistent.cfg"])
        assert rc == 1
