"""dB conversion convention and the CLI wiring."""

import numpy as np
import pytest

from gplink.cli import main
from gplink.units import db_to_linear, linear_to_db


class TestUnits:
    def test_convention_anchors(self):
        assert db_to_linear(0.0) == 1.0
        assert db_to_linear(20.0) == pytest.approx(100.0)
        assert db_to_linear(-10.0) == pytest.approx(0.1)

    def test_round_trip(self):
        xs = np.linspace(-40, 40, 101)
        assert np.allclose(linear_to_db(db_to_linear(xs)), xs, atol=1e-12)
        assert linear_to_db(db_to_linear(7.3)) == pytest.approx(7.3, abs=1e-12)

    def test_scalar_in_scalar_out(self):
        assert isinstance(db_to_linear(3.0), float)
        assert isinstance(linear_to_db(2.0), float)


class TestCli:
    def test_predict_trace_verb(self, tmp_path, capsys):
        rc = main(["predict-trace", "--out", str(tmp_path / "fig3"), "--seed", "3"])
        assert rc == 0
        assert (tmp_path / "fig3" / "predictions.csv").exists()
        assert "prediction-trace" in capsys.readouterr().out

    def test_outage_sweep_verb_with_flags(self, tmp_path, capsys):
        cfg = tmp_path / "small.cfg"
        cfg.write_text("n_slots = 300\ntargets = 1e-1, 1e-2\n")
        rc = main([
            "outage-sweep", "--config", str(cfg), "--out", str(tmp_path / "sweep"),
            "--slots", "200", "--empirical", "--conservative",
        ])
        assert rc == 0
        lines = (tmp_path / "sweep" / "sweep.csv").read_text().splitlines()
        assert len(lines) == 1 + 6  # 3 predictors x 2 targets
        assert all(line.split(",")[4] == "200" for line in lines[1:])

    def test_tune_kernel_verb(self, tmp_path, capsys):
        rc = main(["tune-kernel", "--out", str(tmp_path / "tune"), "--seed", "5"])
        assert rc == 0
        assert "chosen kernel" in capsys.readouterr().out

    def test_replay_verb(self, tmp_path):
        cfg = tmp_path / "small.cfg"
        cfg.write_text("n_slots = 100\ntargets = 1e-1,\n")
        assert main(["outage-sweep", "--config", str(cfg), "--out", str(tmp_path / "a")]) == 0
        assert main([
            "replay", str(tmp_path / "a" / "manifest.json"), "--out", str(tmp_path / "b"),
        ]) == 0
        assert (tmp_path / "a" / "sweep.csv").read_bytes() == (
            tmp_path / "b" / "sweep.csv"
        ).read_bytes()

    def test_bad_config_is_a_clean_error(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("alpha = 1.5\n")
        rc = main(["outage-sweep", "--config", str(cfg), "--out", str(tmp_path / "x")])
        assert rc == 2
        assert "alpha" in capsys.readouterr().err