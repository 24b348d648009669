"""Command-line behavior: schemas, config precedence, determinism,
exit codes, rendered figures."""

import json

import numpy as np
import pytest

from kgcurrent.cli import main


def _read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    return header, np.array(rows, dtype=float)


def test_density_outputs(tmp_path):
    rc = main(["--out", str(tmp_path), "density", "--sigma-p", "2"])
    assert rc == 0
    header, data = _read_csv(tmp_path / "density.csv")
    assert header == ["x", "rho", "rho_born", "j0_kg"]
    assert data.shape[1] == 4
    # density column is a probability density on the box
    dx = data[1, 0] - data[0, 0]
    assert abs(np.sum(data[:, 1]) * dx - 1.0) < 1e-9
    assert (tmp_path / "density.png").exists()
    meta = json.loads((tmp_path / "density.csv.meta.json").read_text())
    assert meta["sigma_p"] == 2 and "grid" in meta


def test_density_deterministic(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert main(["--out", str(out), "density", "--sigma-p", "1.5"]) == 0
    assert (out1 / "density.csv").read_bytes() == (out2 / "density.csv").read_bytes()


def test_chi_sweep_monotone(tmp_path):
    rc = main(["--out", str(tmp_path), "chi-sweep",
               "--sigma-list", "0.1,1,10,100"])
    assert rc == 0
    header, data = _read_csv(tmp_path / "chi_sweep.csv")
    assert header == ["sigma_p", "chi"]
    assert np.all(np.diff(data[:, 1]) > 0)


def test_tof_outputs(tmp_path):
    rc = main(["--out", str(tmp_path), "tof", "--sigma-p", "2"])
    assert rc == 0
    header, data = _read_csv(tmp_path / "tof.csv")
    assert header == ["p", "g", "born_g"]
    meta = json.loads((tmp_path / "tof.csv.meta.json").read_text())
    assert meta["converged"] is True
    dp = data[1, 0] - data[0, 0]
    assert abs(np.sum(data[:, 1]) * dp - 1.0) < 1e-3


def test_delta_outputs(tmp_path):
    rc = main(["--out", str(tmp_path), "delta", "--n-list", "1,2"])
    assert rc == 0
    for tag in ("1", "2"):
        assert (tmp_path / f"delta_rho_n{tag}.csv").exists()
        assert (tmp_path / f"delta_res_n{tag}.csv").exists()
    summary = json.loads((tmp_path / "delta_summary.json").read_text())
    widths = [m["width"] for m in summary["members"]]
    assert abs(widths[0] / widths[1] - 2.0) < 0.2
    assert (tmp_path / "delta.png").exists()


def test_config_file_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"sigma_p": 2.0, "pbar": 0.5}))
    out = tmp_path / "run"
    # config sets sigma and pbar; the explicit flag overrides sigma only
    rc = main(["--out", str(out), "--config", str(cfg),
               "density", "--sigma-p", "1.0"])
    assert rc == 0
    meta = json.loads((out / "density.csv.meta.json").read_text())
    assert meta["sigma_p"] == 1.0
    assert meta["pbar"] == 0.5


def test_verify_report(tmp_path, capsys):
    rc = main(["--out", str(tmp_path), "--seed", "3", "verify"])
    assert rc == 0
    report = json.loads((tmp_path / "verify_report.json").read_text())
    assert report["all_passed"] and report["seed"] == 3
    assert len(report["properties"]) >= 8
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == len(report["properties"])
    assert all(line.startswith("PASS") for line in lines)


def test_verify_failure_exit_code(tmp_path, monkeypatch):
    from kgcurrent import verify

    def doomed(rng):
        return {"passed": False, "value": 1.0, "tolerance": 0.0}

    monkeypatch.setattr(verify, "CHECKS", [("doomed", doomed)])
    rc = main(["--out", str(tmp_path), "verify"])
    assert rc == 4


def test_bad_parameters_exit_code(tmp_path):
    assert main(["--out", str(tmp_path), "density", "--sigma-p", "-1"]) == 2


def test_unresolvable_grid_exit_code(tmp_path):
    rc = main(["--out", str(tmp_path), "density", "--sigma-p", "0.001",
               "--grid-n", "64", "--p-max", "1.0"])
    assert rc == 3
