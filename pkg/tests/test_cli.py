from pathlib import Path

import pytest

from src.cli import main, read_csv
from src.cli.commands import parse_pairs, parse_times
from src.exceptions import ConfigError


@pytest.fixture
def run(configuration):
    """main() with caches and default outputs under the test's temporary directory."""

    def invoke(*args: str) -> int:
        flags = ["--cache-dir", configuration.cache_dir, "--output-dir", configuration.output_dir]
        return main([*flags, "--log-level", "WARNING", *args])

    return invoke


def body(path: Path) -> list[str]:
    return [line for line in path.read_text(encoding="utf-8").splitlines() if not line.startswith("#")]


def test_parse_times():
    assert parse_times("0..4") == [0, 1, 2, 3, 4]
    assert parse_times("0..10:5") == [0, 5, 10]
    assert parse_times("3,1,2") == [3, 1, 2]
    with pytest.raises(ConfigError):
        parse_times("5..2")


def test_parse_pairs():
    assert parse_pairs("1:2,0:0") == [(1, 2), (0, 0)]
    assert parse_pairs(None) is None
    with pytest.raises(ConfigError):
        parse_pairs("12")


def test_green_table(run, tmp_path):
    out = tmp_path / "green.csv"
    assert run("green", "--n", "3", "--d", "3", "--output", str(out)) == 0
    meta, rows = read_csv(out)
    assert meta["version"]
    assert len(rows) == 27
    assert list(rows[0]) == ["xi_1", "xi_2", "xi_3", "g", "gprime"]


def test_identity_check(run, tmp_path):
    out = tmp_path / "identities.csv"
    assert run("green", "--check-identities", "--n", "5", "--d", "3", "--output", str(out)) == 0
    _, rows = read_csv(out)
    assert [row["check"] for row in rows] == ["zero_sum", "zero_sum_prime", "plancherel", "symmetry"]
    assert all(row["passed"] == "True" for row in rows)


def test_lattice_green(run, tmp_path):
    out = tmp_path / "lattice.csv"
    assert run("green", "--lattice", "--d", "3", "--xi", "0,0,0", "--method", "bessel", "--output", str(out)) == 0
    _, rows = read_csv(out)
    assert float(rows[0]["G"]) == pytest.approx(2 * 1.516386059, abs=1e-7)
    assert rows[0]["Gprime"] == "NA"


def test_tails(run, tmp_path):
    out = tmp_path / "tails.csv"
    assert run("tails", "--n", "4", "--d", "3", "--t", "0..10", "--output", str(out)) == 0
    meta, rows = read_csv(out)
    assert [int(row["t"]) for row in rows] == list(range(11))
    assert float(rows[0]["exact"]) == pytest.approx(1 - 1 / 64)
    assert meta["mean_hitting_time"] > 0


def test_usage_errors(run):
    with pytest.raises(SystemExit) as excinfo:
        run("simulate", "--n", "4")
    assert excinfo.value.code == 2
    assert run("theory", "--n", "4", "--d", "2", "--t", "3") == 2
    assert run("theory", "--n", "4", "--d", "3") == 2
    assert run("tails", "--n", "4", "--d", "3", "--xi", "9,0,0") == 2
    assert run("green", "--d", "3") == 2
    assert run("simulate", "--n", "4", "--d", "3", "--t", "5", "--u", "1.0", "--reps", "10") == 2


def test_vertex_budget(run):
    assert run("--max-vertices", "10", "simulate", "--n", "4", "--d", "3", "--t", "5", "--reps", "10") == 3


def test_simulate_bodies_are_reproducible(run, tmp_path):
    args = ["simulate", "--n", "4", "--d", "3", "--ell", "2", "--t", "15", "--reps", "120", "--seed", "5"]
    assert run(*args, "--output", str(tmp_path / "a")) == 0
    assert run(*args, "--workers", "2", "--output", str(tmp_path / "b")) == 0
    for name in ("results.csv", "histogram.csv"):
        assert body(tmp_path / "a" / name) == body(tmp_path / "b" / name)
    meta, rows = read_csv(tmp_path / "a" / "results.csv")
    assert meta["seed"] == 5
    assert meta["config"]["t"] == 15
    statistics = {row["statistic"] for row in rows}
    assert {"mean", "variance", "covariance", "range_mean"} <= statistics


def test_simulate_from_file(run, tmp_path):
    config = tmp_path / "exp.conf"
    config.write_text("n=3\nd=3\nell=1\nu=0.5\nreps=30\nseed=2\n", encoding="utf-8")
    assert run("simulate", "--config", str(config), "--output", str(tmp_path / "out")) == 0
    meta, _ = read_csv(tmp_path / "out" / "results.csv")
    assert meta["config"]["t"] == 13
    assert not (tmp_path / "out" / "histogram.csv").exists()


def test_compare_flow(run, tmp_path):
    sim_dir = tmp_path / "sim"
    theory = tmp_path / "theory.csv"
    compared = tmp_path / "compare.csv"
    common = ["--n", "3", "--d", "3", "--ell", "1", "--t", "5", "--pairs", "0:0"]
    assert run("simulate", *common, "--reps", "300", "--output", str(sim_dir)) == 0
    assert run("theory", *common, "--output", str(theory)) == 0
    assert run("compare", "--simulate", str(sim_dir / "results.csv"), "--theory", str(theory), "--output", str(compared)) == 0

    meta, rows = read_csv(theory)
    assert meta["alpha_3"]["lattice_sum"]["method"] == "theta"
    assert "cov_0_0" in rows[0]
    _, rows = read_csv(compared)
    assert [row["statistic"] for row in rows] == ["mean", "variance", "covariance"]
    for row in rows:
        assert abs(float(row["z"])) < 6


def test_compare_needs_a_matching_theory_row(run, tmp_path):
    sim_dir = tmp_path / "sim"
    theory = tmp_path / "theory.csv"
    assert run("simulate", "--n", "3", "--d", "3", "--t", "5", "--reps", "20", "--output", str(sim_dir)) == 0
    assert run("theory", "--n", "3", "--d", "3", "--t", "6", "--output", str(theory)) == 0
    assert run("compare", "--simulate", str(sim_dir / "results.csv"), "--theory", str(theory)) == 2
