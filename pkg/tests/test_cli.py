import csv
import json
import math

import pytest

from sppscatter import cli


def _write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _run(tmp_path, cfg, out_name, *extra):
    out = tmp_path / out_name
    code = cli.main(
        ["--config", cfg, "--out", str(out), "--no-timestamp", *extra]
    )
    return code, out


def test_missing_config_exits_1(tmp_path, capsys):
    assert cli.main(["--config", str(tmp_path / "nope.ini")]) == 1
    assert "config error" in capsys.readouterr().err


def test_unknown_scenario_exits_1(tmp_path):
    cfg = _write(tmp_path, "[run]\nscenario = frobnicate\n")
    assert cli.main(["--config", cfg]) == 1


def test_bad_number_exits_1(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        "[run]\nscenario = radiation\n"
        "[interface]\nlambda0_nm = oops\ntheta_i_deg = 10\neps_di = 1.5\n",
    )
    assert cli.main(["--config", cfg]) == 1
    assert "lambda0_nm" in capsys.readouterr().err


def test_out_of_range_wavelength_exits_3(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        "[run]\nscenario = radiation\n"
        "[interface]\nlambda0_nm = 50\ntheta_i_deg = 10\neps_di = 1.5\n",
    )
    assert cli.main(["--config", cfg]) == 3
    assert "validation error" in capsys.readouterr().err


def test_check_scenario_passes(tmp_path, capsys):
    cfg = _write(tmp_path, "[run]\nscenario = check\n")
    code, out = _run(tmp_path, cfg, "check.csv", "--modes", "60")
    assert code == 0
    stdout = capsys.readouterr().out
    assert "PASS" in stdout and "FAIL" not in stdout
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert all(row["passed"] == "True" for row in rows)


RADIATION_CFG = (
    "[run]\nscenario = radiation\n"
    "[interface]\nlambda0_nm = 1500\ntheta_i_deg = 25\n"
    "eps_di = 1.5\neps_dj = 1.0\n"
)


def test_radiation_csv_round_trips_at_full_precision(tmp_path):
    cfg = _write(tmp_path, RADIATION_CFG)
    code, out = _run(tmp_path, cfg, "rad.csv", "--modes", "50")
    assert code == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert rows
    from sppscatter.materials import HalfSpacePair, InterfaceSpec
    from sppscatter.splitter import radiation_pattern
    from sppscatter.transfer import build_transfer_matrix

    spec = InterfaceSpec(
        side_i=HalfSpacePair(1.5),
        side_j=HalfSpacePair(1.0),
        lambda0=1500e-9,
        theta_ii=math.radians(25.0),
        n_modes=50,
    )
    channels = radiation_pattern(build_transfer_matrix(spec))
    assert len(rows) == len(channels)
    for row, ch in zip(rows, channels):
        # 17 significant digits round-trip doubles exactly
        assert float(row["power_fraction"]) == ch.power_fraction
        assert float(row["q_over_k0"]) == ch.q / spec.omega
    total = sum(float(r["power_fraction"]) for r in rows)
    assert max(float(r["normalized_power"]) for r in rows) == 1.0
    assert total < 1.0


def test_repeat_runs_are_byte_identical_without_timestamp(tmp_path):
    cfg = _write(tmp_path, RADIATION_CFG)
    _, out1 = _run(tmp_path, cfg, "a.csv", "--modes", "40")
    _, out2 = _run(tmp_path, cfg, "b.csv", "--modes", "40")
    assert out1.read_bytes() == out2.read_bytes()


def test_timestamp_header_present_by_default(tmp_path):
    cfg = _write(tmp_path, RADIATION_CFG)
    out = tmp_path / "stamped.csv"
    code = cli.main(
        ["--config", cfg, "--out", str(out), "--modes", "40"]
    )
    assert code == 0
    assert out.read_text().startswith("# generated ")


def test_json_format(tmp_path):
    cfg = _write(tmp_path, RADIATION_CFG)
    code, out = _run(
        tmp_path, cfg, "rad.json", "--modes", "40", "--format", "json"
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["columns"][0] == "side"
    assert doc["rows"]
    assert "generated" not in doc


def test_hom_scan_columns(tmp_path):
    cfg = _write(
        tmp_path,
        "[run]\nscenario = hom\n"
        "[interface]\nlambda0_nm = 1500\neps_di = 1.3\neps_dj = 1.0\n"
        "[hom]\ntheta_min_deg = 50\ntheta_max_deg = 60\ntheta_points = 3\n",
    )
    code, out = _run(tmp_path, cfg, "hom.csv", "--modes", "60")
    assert code == 0
    with open(out) as fh:
        reader = csv.DictReader(fh)
        assert reader.fieldnames == [
            "theta_i_deg", "tau", "rho", "sigma", "p_coincidence",
        ]
        for row in reader:
            tau, rho = float(row["tau"]), float(row["rho"])
            assert float(row["p_coincidence"]) == (tau - rho) ** 2


def test_sweep_columns_and_conservation(tmp_path):
    cfg = _write(
        tmp_path,
        "[run]\nscenario = sweep\n"
        "[interface]\nlambda0_nm = 790\n"
        "[sweep]\ntheta_max_deg = 20\ntheta_points = 2\n"
        "eps_di_values = 1.5\n",
    )
    code, out = _run(tmp_path, cfg, "sweep.csv", "--modes", "60")
    assert code == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2
    for row in rows:
        assert float(row["conservation_residual"]) < 1e-10
        total = float(row["tau"]) + float(row["rho"]) + float(row["sigma"])
        assert total == pytest.approx(1.0, abs=1e-10)


def test_optimize_emits_json_and_exit_code(tmp_path):
    cfg = _write(
        tmp_path,
        "[run]\nscenario = optimize\n"
        "[interface]\nlambda0_nm = 1500\neps_dj = 1.0\n"
        "[optimize]\ntheta_min_deg = 61\ntheta_max_deg = 61\n"
        "theta_points = 1\nlock_metals = true\n",
    )
    code, out = _run(tmp_path, cfg, "opt.json", "--modes", "80")
    assert code == 0
    doc = json.loads(out.read_text())
    rec = doc["rows"][0]
    assert rec["feasible"] is True
    assert abs(rec["tau"] - 0.5) + abs(rec["rho"] - 0.5) <= 0.04
    assert rec["sigma"] <= 0.05


def test_infeasible_optimization_exits_2(tmp_path):
    cfg = _write(
        tmp_path,
        "[run]\nscenario = optimize\n"
        "[interface]\nlambda0_nm = 790\neps_dj = 1.0\n"
        "[optimize]\ntheta_min_deg = 57\ntheta_max_deg = 57\n"
        "theta_points = 1\nlock_metals = true\n",
    )
    code, out = _run(tmp_path, cfg, "opt790.json", "--modes", "80")
    assert code == 2
