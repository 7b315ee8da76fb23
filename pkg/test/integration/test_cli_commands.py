"""
End-to-end runs of the command line on real files.
"""
import json
import math

import pytest
from click.testing import CliRunner

import qpurity.__main__ as main
from qpurity.estimator.variance import exact_variance
from qpurity.states import ALL_STATES, thermal, true_purity, vacuum
from qpurity.tomography import NoiseConfig, simulate, write_samples


def checksum_of(stdout):
    line = next(line for line in stdout.splitlines() if line.startswith("sha256: "))
    return line.split(": ", 1)[1]


def test_states():
    """
    Test that states lists the catalogue with purities and thresholds
    """
    runner = CliRunner()
    result = runner.invoke(main.cli, ["states", "--no-wrap"])
    assert result.exit_code == 0, result.stdout
    for name in ALL_STATES:
        assert name in result.stdout
    assert f"{true_purity(vacuum()):.7f}" == "0.1591549"
    assert "0.1591549" in result.stdout
    assert f"{true_purity(thermal(1.0)):.7f}" in result.stdout
    assert "α < 0.25" in result.stdout


def test_simulate(tmp_path):
    """
    Test that simulate writes n samples and reproduces them for the same seed
    """
    runner = CliRunner()
    first = runner.invoke(main.cli, ["--seed", "1", "simulate", "-n", "1000", "-o", str(tmp_path / "a.csv")])
    second = runner.invoke(main.cli, ["--seed", "1", "simulate", "-n", "1000", "-o", str(tmp_path / "b.csv")])
    other = runner.invoke(main.cli, ["--seed", "2", "simulate", "-n", "1000", "-o", str(tmp_path / "c.csv")])
    assert first.exit_code == second.exit_code == other.exit_code == 0
    assert len((tmp_path / "a.csv").read_text().splitlines()) == 1001
    assert checksum_of(first.stdout) == checksum_of(second.stdout)
    assert checksum_of(first.stdout) != checksum_of(other.stdout)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_simulate_out_dir(tmp_path):
    runner = CliRunner()
    result = runner.invoke(main.cli, ["--out", str(tmp_path / "run"), "simulate", "--state", "thermal", "-n", "10"])
    assert result.exit_code == 0, result.stdout
    assert (tmp_path / "run" / "samples.csv").exists()


def test_estimate_vacuum(tmp_path):
    """
    Test that the estimate of simulated vacuum data is within four standard deviations
    """
    n = 50_000
    path = write_samples(simulate(vacuum(), n, NoiseConfig(0.9), seed=11), tmp_path / "vacuum.csv")
    runner = CliRunner()
    result = runner.invoke(main.cli, ["estimate", str(path), "--state", "vacuum", "--eta", "0.9", "--alpha", "0.2", "--tau", "0.02"])
    assert result.exit_code == 0, result.stdout
    payload = json.loads(result.stdout)
    assert payload["n"] == n
    assert payload["rule"] == "delta_star"
    assert payload["delta"] == pytest.approx((9 * math.log(n)) ** -0.5)
    assert payload["true_purity"] == true_purity(vacuum())
    assert payload["abs_error"] <= 4 * math.sqrt(exact_variance(vacuum(), 0.9, payload["delta"], n))
    assert payload["verdict"] == "pure"
    assert payload["config"]["eta"] == 0.9
    assert "version" in payload


def test_estimate_without_state(vacuum_samples):
    runner = CliRunner()
    result = runner.invoke(main.cli, ["estimate", str(vacuum_samples), "--rule", "fixed", "--delta", "0.4"])
    assert result.exit_code == 0, result.stdout
    payload = json.loads(result.stdout)
    assert payload["delta"] == 0.4
    assert "abs_error" not in payload
    assert "verdict" not in payload


def test_estimate_echoes_dt(vacuum_samples):
    runner = CliRunner()
    coarse = runner.invoke(main.cli, ["estimate", str(vacuum_samples), "--rule", "fixed", "--delta", "0.4"])
    fine = runner.invoke(main.cli, ["estimate", str(vacuum_samples), "--rule", "fixed", "--delta", "0.4", "--dt", "0.01"])
    assert coarse.exit_code == fine.exit_code == 0, fine.stdout
    assert json.loads(coarse.stdout)["config"]["dt"] is None
    payload = json.loads(fine.stdout)
    assert payload["config"]["dt"] == 0.01
    assert payload["nodes"] > json.loads(coarse.stdout)["nodes"]


def test_estimate_missing_file(tmp_path):
    runner = CliRunner()
    result = runner.invoke(main.cli, ["estimate", str(tmp_path / "missing.csv")])
    assert result.exit_code == 4


def test_estimate_malformed_file(sample_file):
    path = sample_file("y,phi\n0.1,0.2\n0.3\n")
    runner = CliRunner()
    result = runner.invoke(main.cli, ["estimate", str(path)])
    assert result.exit_code == 4


def test_estimate_no_samples():
    runner = CliRunner()
    result = runner.invoke(main.cli, ["estimate"])
    assert result.exit_code == 2


def test_estimate_rule_not_applicable(vacuum_samples):
    """
    Test that delta_opt is rejected for the Gaussian class r=2
    """
    runner = CliRunner()
    result = runner.invoke(main.cli, ["estimate", str(vacuum_samples), "--rule", "delta_opt", "-r", "2"])
    assert result.exit_code == 2


def test_rates_parametric():
    runner = CliRunner()
    result = runner.invoke(main.cli, ["rates", "-n", "1000", "-f", "json"])
    assert result.exit_code == 0, result.stdout
    rows = json.loads(result.stdout)["rows"]
    assert [row["rule"] for row in rows] == ["delta_star"]
    assert rows[0]["regime"] == "r2_parametric"
    assert rows[0]["rate"] == 1 / 1000
    assert rows[0]["rate_lower"] is None


def test_rates_slow_class():
    runner = CliRunner()
    result = runner.invoke(main.cli, ["rates", "-r", "1", "--alpha", "0.1", "-n", "100000", "-f", "json"])
    assert result.exit_code == 0, result.stdout
    rows = json.loads(result.stdout)["rows"]
    assert {row["rule"] for row in rows} == {"delta_opt", "adaptive1", "adaptive2", "iterative"}
    for row in rows:
        assert 0 < row["delta"] < 1
        assert row["bias_bound_sq"] > 0
        assert row["var_bound"] > 0


def test_rates_console():
    runner = CliRunner()
    result = runner.invoke(main.cli, ["rates", "-n", "1000", "--no-wrap"])
    assert result.exit_code == 0, result.stdout
    assert "delta_star" in result.stdout
    assert "r2_parametric" in result.stdout


def test_rates_boundary():
    """
    Test that the degenerate r=2 boundary exits with the numeric regime code
    """
    runner = CliRunner()
    result = runner.invoke(main.cli, ["rates", "--eta", "0.5", "--alpha", "0.25", "-f", "json"])
    assert result.exit_code == 3


def test_rates_bound_overflow():
    """
    Test that a fixed delta whose variance bound overflows exits with the numeric regime code
    """
    runner = CliRunner()
    result = runner.invoke(
        main.cli, ["rates", "--eta", "0.5", "-r", "1", "--alpha", "0.2", "--delta", "0.02", "-n", "1000", "-f", "json"]
    )
    assert result.exit_code == 3
    assert not isinstance(result.exception, OverflowError)


def run_small_experiment(out):
    runner = CliRunner()
    return runner.invoke(
        main.cli,
        [
            "--out",
            str(out),
            "experiment",
            "--n-grid",
            "20,40,80",
            "-R",
            "3",
            "--rule",
            "fixed",
            "--delta",
            "0.5",
            "--normality-n",
            "50",
            "--normality-replicates",
            "5",
            "--no-wrap",
        ],
    )


def test_experiment(tmp_path):
    """
    Test that experiment writes its three files and repeats itself for the same seed
    """
    result = run_small_experiment(tmp_path / "first")
    assert result.exit_code == 0, result.stdout
    first = tmp_path / "first"
    assert len((first / "mse.csv").read_text().splitlines()) == 4
    assert len((first / "normality.csv").read_text().splitlines()) == 6
    summary = json.loads((first / "summary.json").read_text())
    assert summary["state"] == "vacuum"
    assert summary["truth"] == true_purity(vacuum())
    assert [row["n"] for row in summary["rows"]] == [20, 40, 80]
    assert summary["normality_n"] == 50
    assert summary["normality_delta"] == 0.5
    assert summary["standardisation"] == "asymptotic"
    for key in ("rate_slope", "ks_distance", "skewness", "excess_kurtosis", "asymptotic_variance", "exact_n_variance", "config", "version"):
        assert key in summary

    again = run_small_experiment(tmp_path / "second")
    assert again.exit_code == 0, again.stdout
    assert (first / "mse.csv").read_bytes() == (tmp_path / "second" / "mse.csv").read_bytes()
    assert (first / "normality.csv").read_bytes() == (tmp_path / "second" / "normality.csv").read_bytes()


def test_experiment_without_normality(tmp_path):
    runner = CliRunner()
    result = runner.invoke(
        main.cli,
        ["--out", str(tmp_path), "experiment", "--n-grid", "20,40", "-R", "2", "--rule", "fixed", "--delta", "0.5", "--no-normality"],
    )
    assert result.exit_code == 0, result.stdout
    assert (tmp_path / "mse.csv").exists()
    assert not (tmp_path / "normality.csv").exists()
    assert "ks_distance" not in json.loads((tmp_path / "summary.json").read_text())
