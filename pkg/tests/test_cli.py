import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from twocavity.analysis import first_transfer_peak
from twocavity.cli import main
from twocavity.dynamics import COLUMNS, population

from conftest import ATOM1, LARGE_HOPPING

HEADER = "t,p_atom1,p_atom2,p_cav1,p_cav2,p_field_total,p_mode_m1,p_mode_m2,norm"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return np.array([[float(x) for x in r] for r in list(csv.reader(io.StringIO(text)))[1:]])


def test_csv_header_and_shape(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--t-max", "40", "--samples", "201")
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == HEADER
    assert ",".join(COLUMNS) == HEADER
    assert out.endswith("\n") and "\r" not in out
    body = [ln for ln in lines[1:] if ln]
    assert len(body) == 201
    assert all(ln.count(",") == 8 and not ln.endswith(",") for ln in body)


@pytest.mark.parametrize("model", ["exact", "oracle", "dispersive"])
def test_columns_consistent(capsys, model):
    _, out, _ = run_cli(capsys, "simulate", "--model", model, "--samples", "101", "--init", "0.7,1.2")
    x = rows(out)
    np.testing.assert_allclose(x[:, 5], x[:, 3] + x[:, 4], atol=1e-12)
    np.testing.assert_allclose(x[:, 6] + x[:, 7], x[:, 5], atol=1e-12)
    assert np.ptp(x[:, 8]) <= 1e-10
    assert x[0, 8] == pytest.approx(1, abs=1e-12)


def test_zero_horizon_gives_initial_state(capsys):
    _, out, _ = run_cli(capsys, "simulate", "--model", "exact", "--t-max", "0", "--samples", "2")
    x = rows(out)
    assert x.shape == (2, 9)
    np.testing.assert_array_equal(x[0], x[1])
    np.testing.assert_array_equal(x[0], [0, 1, 0, 0, 0, 0, 0, 0, 1])


def test_resonance_run(capsys):
    _, out, _ = run_cli(capsys, "simulate", "--hopping", "100", "--detuning", "100", "--t-max", "12")
    x = rows(out)
    assert x[:, 2].max() > 0.98
    assert x[:, 5].max() == pytest.approx(0.5, abs=0.02)


def test_deterministic(capsys):
    argv = ["simulate", "--model", "oracle", "--samples", "301", "--format", "json"]
    _, first, _ = run_cli(capsys, *argv)
    _, second, _ = run_cli(capsys, *argv)
    assert first == second


def test_json_round_trip(capsys, tmp_path):
    saved = tmp_path / "run.json"
    argv = ["simulate", "--hopping", "7", "--detuning", "0.3", "--t-max", "5", "--samples", "11", "--init", "atom2"]
    assert main(argv + ["--format", "json", "--output", str(saved)]) == 0
    doc = json.loads(saved.read_text())
    assert doc["columns"] == list(COLUMNS)
    assert doc["config"]["hopping"] == 7
    assert len(doc["rows"]) == 11
    _, again, _ = run_cli(capsys, "simulate", "--config", str(saved), "--format", "json")
    assert again == saved.read_text()
    # explicit flags override the saved ones
    _, changed, _ = run_cli(capsys, "simulate", "--config", str(saved), "--format", "json", "--samples", "3")
    assert len(json.loads(changed)["rows"]) == 3


def test_csv_matches_json(capsys):
    _, c, _ = run_cli(capsys, "simulate", "--samples", "21")
    _, j, _ = run_cli(capsys, "simulate", "--samples", "21", "--format", "json")
    np.testing.assert_array_equal(rows(c), np.array(json.loads(j)["rows"]))


def test_g_flag_rescales(capsys):
    _, base, _ = run_cli(capsys, "simulate", "--model", "exact", "--samples", "11")
    _, scaled, _ = run_cli(capsys, "simulate", "--model", "exact", "--samples", "11", "--g", "2.5")
    np.testing.assert_allclose(rows(base), rows(scaled), atol=1e-9)
    _, base, _ = run_cli(capsys, "scan", "--param", "hopping", "--from", "10", "--to", "10", "--points", "1")
    _, scaled, _ = run_cli(capsys, "scan", "--param", "hopping", "--from", "10", "--to", "10", "--points", "1", "--g", "4")
    np.testing.assert_allclose(rows(base), rows(scaled), rtol=1e-6)


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--model", "bogus"],
        ["simulate", "--samples", "1"],
        ["simulate", "--t-max", "-1"],
        ["simulate", "--init", "atom3"],
        ["simulate", "--init", "2,0"],
        ["scan", "--param", "hopping", "--from", "1", "--to", "2", "--observable", "bogus"],
        ["scan", "--param", "omega", "--from", "1", "--to", "2"],
        ["nonsense"],
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    capsys.readouterr()


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--model", "dispersive", "--hopping", "100", "--detuning", "100"],
        ["transfer-times", "--hopping", "5", "--detuning", "5"],
        ["simulate", "--model", "resonant", "--init", "cav1", "--hopping", "100", "--detuning", "100"],
    ],
)
def test_domain_errors(capsys, argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 3
    assert out == ""
    assert "error" in err


def test_compare_exact_vs_oracle(capsys):
    rng = np.random.default_rng(3)
    for _ in range(3):
        A, delta = rng.uniform(-50, 50, 2)
        _, out, _ = run_cli(
            capsys, "compare", "--model", "exact", "--against", "oracle",
            "--hopping", str(A), "--detuning", str(delta), "--init", "0.9,2.0", "--t-max", "100",
        )
        report = json.loads(out)
        assert report["max_dev"] <= 1e-9
        assert set(report) >= {"config", "grid", "max_dev", "rms_dev"}


def test_compare_same_model(capsys):
    _, out, _ = run_cli(capsys, "compare", "--model", "dispersive", "--against", "dispersive")
    report = json.loads(out)
    assert report["max_dev"] == 0
    assert report["rms_dev"] == 0


def test_compare_dispersive_reports_field_scale(capsys):
    _, out, _ = run_cli(capsys, "compare", "--model", "dispersive", "--against", "oracle")
    report = json.loads(out)
    assert report["field_population_scale"] == pytest.approx((1 / 10.1) ** 2)
    assert report["validity_indicator"] == pytest.approx(40 / 10.1)
    # the model drops the field entirely, so the gap is the oracle's field population
    assert 0.01 < report["max_field_population_dev"] < 0.05


def test_scan_hopping_increasing(capsys):
    _, out, _ = run_cli(capsys, "scan", "--param", "hopping", "--from", "2", "--to", "20", "--points", "7")
    x = rows(out)
    assert x.shape == (7, 2)
    assert np.all(np.diff(x[:, 1]) > 0)


def test_scan_detuning_increasing(capsys):
    _, out, _ = run_cli(
        capsys, "scan", "--param", "detuning", "--from", "20", "--to", "60", "--points", "5",
        "--t-max", "1000", "--samples", "50001",
    )
    x = rows(out)
    assert np.all(np.isfinite(x[:, 1]))
    assert np.all(np.diff(x[:, 1]) > 0)


def test_scan_single_point(capsys):
    _, out, _ = run_cli(capsys, "scan", "--param", "hopping", "--from", "10", "--to", "10", "--points", "1")
    x = rows(out)
    assert x.shape == (1, 2)
    t = np.linspace(0, 100, 20001)
    expected = first_transfer_peak(population("oracle", LARGE_HOPPING, ATOM1), t)[0]
    assert x[0, 1] == pytest.approx(expected, rel=1e-12)


def test_scan_beat_frequency_and_max_prob(capsys):
    _, out, _ = run_cli(
        capsys, "scan", "--param", "hopping", "--from", "99", "--to", "101", "--points", "3",
        "--detuning", "-100", "--observable", "beat-frequency",
    )
    x = rows(out)
    # delta1 = delta + A vanishes at the middle point only
    assert math.isnan(x[1, 1])
    assert x[0, 1] == pytest.approx(-199 / 2 + 1 / -1)
    assert x[2, 1] == pytest.approx(-201 / 2 + 1 / 1)
    _, out, _ = run_cli(
        capsys, "scan", "--param", "hopping", "--from", "100", "--to", "100", "--points", "1",
        "--detuning", "100", "--observable", "max-transfer-prob", "--t-max", "12", "--samples", "2001",
    )
    assert rows(out)[0, 1] > 0.99


def test_transfer_times_dispersive(capsys):
    _, out, _ = run_cli(capsys, "transfer-times", "--regime", "dispersive", "--n-max", "2")
    lines = out.splitlines()
    assert lines[0] == "n,tau,condition_ok,m,residual"
    taus = [float(ln.split(",")[1]) for ln in lines[1:]]
    np.testing.assert_allclose(taus, [15.71, 78.54, 141.37], atol=0.02)


def test_transfer_times_resonant(capsys):
    _, out, _ = run_cli(
        capsys, "transfer-times", "--regime", "resonant", "--hopping", "100", "--detuning", "100", "--n-max", "2"
    )
    taus = [float(ln.split(",")[1]) for ln in out.splitlines()[1:]]
    np.testing.assert_allclose(taus, [math.pi, 3 * math.pi, 5 * math.pi], rtol=1e-15)
    _, out, _ = run_cli(capsys, "transfer-times", "--n-max", "0")
    assert len(out.splitlines()) == 2


def test_classify(capsys):
    _, out, _ = run_cli(capsys, "classify")
    assert out.splitlines()[1].startswith("large-hopping,")
    _, out, _ = run_cli(capsys, "classify", "--hopping", "100", "--detuning", "100", "--format", "json")
    assert json.loads(out)["rows"][0][0] == "near-resonance"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "twocavity", "transfer-times", "--n-max", "0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("n,tau,condition_ok,m,residual\n")
