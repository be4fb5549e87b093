"""Tests for sweep configs, CSV/report output, the CLI, and the tripartite
check of the dispersive approximation."""

import json

import numpy as np
import pytest

from rabicrit.cli import main
from rabicrit.experiments import (
    CSV_HEADER,
    SweepConfig,
    critical_lambda_grid,
    default_config,
    run,
    validate_dispersive,
)
from rabicrit.hamiltonians import ProbeParams, RabiParams
from rabicrit.hilbert import FockCutoff


def _tiny_config(out):
    return SweepConfig(
        figure="custom",
        lambda_grid=[0.5, 0.9, 1.2],
        eta_grid=[500.0],
        time_grid=[0.0, 20.0, 40.0],
        chi=1e-3,
        methods=["analytic", "variational"],
        cutoff_tol=1e-8,
        output_path=str(out),
    )


def test_config_validation():
    cfg = _tiny_config(".")
    cfg.validate()
    bad = _tiny_config(".")
    bad.lambda_grid = []
    with pytest.raises(ValueError):
        bad.validate()
    bad = _tiny_config(".")
    bad.lambda_grid = [0.9, 0.5]
    with pytest.raises(ValueError):
        bad.validate()
    bad = _tiny_config(".")
    bad.methods = ["quantum"]
    with pytest.raises(ValueError):
        bad.validate()
    bad = _tiny_config(".")
    bad.figure = "fig3"
    bad.chi = 0.0
    with pytest.raises(ValueError):
        bad.validate()


def test_config_file_roundtrip(tmp_path):
    cfg = _tiny_config(tmp_path)
    path = tmp_path / "sweep.cfg"
    path.write_text(cfg.canonical_text())
    parsed = SweepConfig.from_file(path)
    assert parsed.lambda_grid == cfg.lambda_grid
    assert parsed.methods == cfg.methods
    assert parsed.chi == cfg.chi
    assert parsed.canonical_text() == cfg.canonical_text()


def test_config_file_unknown_key(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("figure = custom\nwavelength = 3\n")
    with pytest.raises(ValueError, match="unknown key"):
        SweepConfig.from_file(path)
    path.write_text("just a line without equals\n")
    with pytest.raises(ValueError, match="key = value"):
        SweepConfig.from_file(path)


def test_empty_grid_no_output(tmp_path):
    cfg = _tiny_config(tmp_path)
    cfg.lambda_grid = []
    with pytest.raises(ValueError):
        run(cfg, out_dir=tmp_path)
    assert not (tmp_path / "custom.csv").exists()


def test_critical_lambda_grid():
    grid = critical_lambda_grid()
    arr = np.asarray(grid)
    assert all(abs(v - 1.0) >= 1e-6 for v in grid)
    near = arr[(arr >= 0.9) & (arr <= 1.1)]
    assert np.allclose(np.diff(near), 0.005, atol=1e-9) or max(np.diff(near)) < 0.011
    assert arr.min() > 0.0 and arr.max() <= 1.5 + 1e-9


def test_default_configs():
    f3 = default_config("fig3")
    assert f3.eta_grid == [5000.0]
    assert f3.chi == 1e-3
    f4 = default_config("fig4")
    assert f4.eta_grid == [2000.0, 4000.0, 6000.0, 8000.0, 10000.0]
    assert f4.time_grid == [60.0]
    f5 = default_config("fig5")
    assert f5.eta_grid == [1e5]
    assert set(f5.methods) == {"exact", "effective", "variational", "analytic"}
    with pytest.raises(ValueError):
        default_config("fig9")


def test_run_writes_outputs(tmp_path):
    cfg = _tiny_config(tmp_path)
    report = run(cfg, out_dir=tmp_path)
    csv_path = tmp_path / "custom.csv"
    assert csv_path.exists()
    assert (tmp_path / "custom.gp").exists()
    lines = csv_path.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    # 3 lambdas x 3 times x 2 methods
    assert len(lines) == 1 + 18
    assert not report.degraded

    payload = json.loads((tmp_path / "report.json").read_text())
    assert payload["schema_version"] == 1
    assert "config_hash" in payload["provenance"]
    assert len(payload["records"]) == 18

    # determinism: identical config -> byte-identical CSV
    first = csv_path.read_bytes()
    run(cfg, out_dir=tmp_path)
    assert csv_path.read_bytes() == first


def test_csv_float_formatting(tmp_path):
    cfg = _tiny_config(tmp_path)
    run(cfg, out_dir=tmp_path)
    row = (tmp_path / "custom.csv").read_text().splitlines()[1].split(",")
    value = row[7]
    assert float(value) <= 1.0
    # 17 significant digits survive a round-trip
    assert f"{float(value):.17g}" == value


def test_cli_sweep_and_exit_codes(tmp_path):
    cfg = _tiny_config(tmp_path)
    path = tmp_path / "sweep.cfg"
    path.write_text(cfg.canonical_text())
    rc = main(["sweep", "--config", str(path), "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "custom.csv").exists()


def test_cli_validate_dispersive_fast(capsys):
    rc = main(
        [
            "validate-dispersive",
            "--lam", "0.4",
            "--eta", "40",
            "--g-s", "0.05",
            "--detuning-ratio", "100",
            "--t-max", "10",
            "--n-times", "6",
        ]
    )
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert out["passed"]
    assert out["max_rel_deviation"] < 0.05


def test_validate_dispersive_decoupled_probe():
    p = RabiParams.from_dimensionless(0.5, 40.0)
    probe = ProbeParams(2.0, 0.0, 1.0)
    report = validate_dispersive(p, probe, np.linspace(0.0, 10.0, 5), cutoff=FockCutoff(24))
    assert report.max_rel_deviation < 1e-10


def test_validate_dispersive_warns_outside_regime():
    p = RabiParams.from_dimensionless(0.5, 40.0)
    probe = ProbeParams(1.2, 0.1, 0.2)  # Delta_s / g_s = 2
    with pytest.warns(UserWarning):
        validate_dispersive(p, probe, [0.0, 1.0], cutoff=FockCutoff(24))
