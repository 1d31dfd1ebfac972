import json
import subprocess
import sys

import numpy as np
import pytest

from wireqed.cli import main
from wireqed.config import RunConfig, SCHEMA_TAG, config_from_dict, load_config
from wireqed.errors import ConfigError

# a geometry that converges with a short azimuthal ladder, for fast CLI runs
FAST_CONFIG = {
    "schema": SCHEMA_TAG,
    "radius": 0.01,
    "rho_1": 0.03,
    "rho_2": 0.03,
    "sweep": {"z_min": 0.5, "z_max": 1.5, "n_points": 3, "log_spacing": False},
    "tol_wire": 1e-4,
}


def run_cli(args):
    proc = subprocess.run([sys.executable, "-m", "wireqed.cli"] + args,
                          capture_output=True, text=True)
    return proc


def write_config(tmp_path, overrides=None, name="cfg.json"):
    cfg = dict(FAST_CONFIG)
    if overrides:
        cfg.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


class TestConfig:
    def test_defaults_validate(self):
        RunConfig().validate()

    def test_round_trip(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(RunConfig().to_json())
        cfg = load_config(p)
        assert cfg.radius == 0.01
        assert cfg.sweep.n_points == 100

    def test_schema_tag_required(self):
        with pytest.raises(ConfigError):
            config_from_dict({"radius": 0.01})

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            config_from_dict({"schema": SCHEMA_TAG, "radiuss": 0.01})

    def test_degenerate_sweep_rejected(self):
        with pytest.raises(ConfigError):
            config_from_dict({"schema": SCHEMA_TAG,
                              "sweep": {"z_min": 1.0, "z_max": 1.0, "n_points": 2}})

    def test_tolerance_window(self):
        with pytest.raises(ConfigError):
            config_from_dict({"schema": SCHEMA_TAG, "tol_wire": 1e-2})

    def test_missing_file_is_config_error(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "missing.json")


class TestExitCodes:
    def test_config_error_exit_2(self, tmp_path):
        path = write_config(tmp_path, {"sweep": {"z_min": 1.0, "z_max": 1.0,
                                                 "n_points": 2}})
        proc = run_cli(["sweep", "--config", path])
        assert proc.returncode == 2
        assert "config error" in proc.stderr

    def test_validate_passes(self):
        proc = run_cli(["validate"])
        assert proc.returncode == 0
        assert "PASS" in proc.stdout
        assert "FAIL" not in proc.stdout

    def test_injected_sign_flip_fails_validation(self):
        proc = run_cli(["validate", "--inject-sign-flip"])
        assert proc.returncode == 4
        assert "FAIL" in proc.stdout

    def test_lossless_material_reported_as_documented_skip(self, tmp_path):
        path = write_config(tmp_path, {"gamma_p_over_omega_p": 0.0})
        proc = run_cli(["validate", "--config", path])
        assert proc.returncode == 0
        assert "skipped: lossless" in proc.stdout

    def test_fit_failure_exit_3(self, tmp_path):
        # transparent wire: no bound plasmon anywhere
        path = write_config(tmp_path, {"omega_p_over_omega_a": 0.01,
                                       "radius": 1e-5, "rho_1": 0.05, "rho_2": 0.05})
        proc = run_cli(["dispersion", "--config", path])
        assert proc.returncode == 3
        assert "fit failure" in proc.stderr


class TestSweep:
    def test_csv_deterministic_across_worker_counts(self, tmp_path):
        path = write_config(tmp_path)
        out1 = tmp_path / "s1.csv"
        out2 = tmp_path / "s2.csv"
        p1 = run_cli(["sweep", "--config", path, "--out", str(out1), "--threads", "1"])
        p2 = run_cli(["sweep", "--config", path, "--out", str(out2), "--threads", "2"])
        assert p1.returncode == 0 and p2.returncode == 0
        assert out1.read_bytes() == out2.read_bytes()

        header = [l for l in out1.read_text().splitlines()
                  if not l.startswith("#")][0]
        assert header.split(",") == [
            "dz", "gamma11_over_gamma0", "gamma12_over_gamma11",
            "shift12_total_over_gamma11", "shift12_resonant_over_gamma11",
            "shift12_integral_over_gamma11", "gamma12_appr_over_gamma11_appr",
            "shift12_appr_over_gamma11_appr", "converged"]

    def test_tolerance_refinement_regression(self, tmp_path):
        # rows must be stable against a tightened quadrature budget
        path = write_config(tmp_path)
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert run_cli(["sweep", "--config", path, "--out", str(out1)]).returncode == 0
        assert run_cli(["sweep", "--config", path, "--out", str(out2),
                        "--tol", "5e-5"]).returncode == 0

        def rows(path):
            lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
            return np.array([[float(x) for x in l.split(",")[:-1]]
                             for l in lines[1:]])

        r1, r2 = rows(out1), rows(out2)
        scale = np.maximum(np.abs(r1).max(axis=0), 1.0)
        assert np.max(np.abs(r1 - r2) / scale) < 1e-4

    def test_json_format(self, tmp_path):
        path = write_config(tmp_path, {"output_format": "json"})
        out = tmp_path / "s.json"
        assert run_cli(["sweep", "--config", path, "--out", str(out)]).returncode == 0
        payload = json.loads(out.read_text())
        assert payload["meta"]["schema"] == "wireqed-sweep/1"
        assert len(payload["rows"]) == 3
        assert all(r["converged"] for r in payload["rows"])


class TestDispersion:
    def test_synthetic_round_trip(self, tmp_path):
        out = tmp_path / "d.json"
        proc = run_cli(["dispersion", "--synthetic", "3.0,0.2,9.42",
                        "--out", str(out)])
        assert proc.returncode == 0
        payload = json.loads(out.read_text())
        fit = payload["fit"]
        assert fit["amplitude"] == pytest.approx(3.0, rel=1e-6)
        assert fit["width"] == pytest.approx(0.2, rel=1e-6)
        assert fit["center_kz_pl"] == pytest.approx(9.42, rel=1e-6)

    def test_wire_dispersion_reports_bound_mode(self, tmp_path):
        path = write_config(tmp_path)
        out = tmp_path / "d.csv"
        proc = run_cli(["dispersion", "--config", path, "--out", str(out),
                        "--n-points", "60"])
        assert proc.returncode == 0
        text = out.read_text()
        meta = {l.split("=")[0].strip("# "): float(l.split("=")[1])
                for l in text.splitlines() if l.startswith("#")}
        assert meta["fit_center_kz_pl"] > 2 * np.pi  # kz_pl above the light line


class TestPoint:
    def test_full_report(self, tmp_path):
        path = write_config(tmp_path)
        out = tmp_path / "p.json"
        proc = run_cli(["point", "--config", path, "--dz", "1.0",
                        "--out", str(out)])
        assert proc.returncode == 0
        payload = json.loads(out.read_text())
        assert payload["converged"]
        s = payload["shift12"]
        assert s["total"] == pytest.approx(s["resonant"] + s["integral"], rel=1e-12)
        d = payload["dicke"]
        assert d["symmetric_decay"] == pytest.approx(
            payload["gamma11_over_gamma0"] + payload["gamma12_over_gamma0"], rel=1e-12)
        assert "markov" in payload


def test_main_entry_point_runs_in_process(capsys):
    assert main(["validate"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
