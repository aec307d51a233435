"""Scaled-down empirical studies on the bundled datasets; run with `pytest -m slow`."""

import json
from fractions import Fraction

import pytest

from marketeq.cli import EXIT_OK, main
from marketeq.experiments.generators import GeneratorSpec, generate_dataset
from marketeq.experiments.studies import StudyConfig, revenue_study

pytestmark = pytest.mark.slow


def run_experiment(spec, out, workers):
    assert main(["experiment", "--spec", spec, "--out", str(out), "--workers", str(workers), "--quiet"]) == EXIT_OK
    return json.loads((out / "summary.json").read_text())


@pytest.fixture(scope="module")
def d1_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("d1")
    return out, run_experiment("d1_small", out, 8)


def rate(summary, study, key):
    return float(summary[study][key])


def test_few_type_instances(d1_run):
    """Test the balanced, stable and near-stable shares of 300 few-type instances"""
    _, summary = d1_run
    assert summary["stability"]["instances"] == 300
    assert summary["stability"]["errors"] == 0
    assert 0.20 <= rate(summary, "stability", "balanced_rate") <= 0.45
    assert 0.45 <= rate(summary, "stability", "h_zero_rate") <= 0.75
    assert rate(summary, "stability", "h_near_rate") >= 0.88
    assert summary["census"]["lp_infeasible"] <= 6


def test_thread_count_does_not_change_files(d1_run, tmp_path):
    """Test that one worker thread writes the same bytes as eight"""
    parallel, _ = d1_run
    run_experiment("d1_small", tmp_path, 1)
    for name in ("stability.csv", "census.csv", "survival.csv", "summary.json"):
        assert (tmp_path / name).read_bytes() == (parallel / name).read_bytes()


def test_independent_weight_instances(tmp_path):
    """Test that most instances with independent weights are stable under proportional payments"""
    summary = run_experiment("d2_small", tmp_path, 8)
    assert rate(summary, "stability", "h_zero_rate") >= 0.70
    assert summary["census"]["lp_infeasible"] <= 3


def test_unconstrained_valuations(tmp_path):
    """Test that a minority of unsorted-increment instances admit stable payments"""
    summary = run_experiment("unconstrained_small", tmp_path, 8)
    assert summary["census"]["instances"] == 100
    assert 0.15 <= rate(summary, "census", "stable_rate") <= 0.50


def test_power_revenue_near_prediction(tmp_path):
    """Test that equilibrium revenue of v(w) = w ** alpha stays within 15% of (1 - alpha) v(q)"""
    summary = run_experiment("d3_small", tmp_path, 8)
    assert summary["revenue"]["instances"] == 99
    spec = GeneratorSpec.for_kind("D3", count=99, master_seed=2024)
    games = {game.metadata["id"]: game for game in generate_dataset(spec)}
    rows = (tmp_path / "revenue.csv").read_text().splitlines()
    header = rows[0].split(",")
    checked = inside = 0
    for line in rows[1:]:
        row = dict(zip(header, line.split(",")))
        if not row["r_min_exact"] or not row["r_max_exact"]:
            continue
        game = games[row["id"]]
        alpha = game.metadata["alpha"]
        q = game.total_weight // game.k
        target = (1 - alpha) * game.valuations[0].values[q]
        band = target * Fraction(15, 100)
        checked += 1
        for column in ("r_min_exact", "r_max_exact"):
            if abs(Fraction(row[column]) - target) > band:
                break
        else:
            inside += 1
    assert checked >= 90
    assert inside >= 0.9 * checked


def test_baseline_between_revenue_extremes():
    """Test that r0 lies between least and greatest equilibrium revenue on random concave games"""
    games = generate_dataset(GeneratorSpec.for_kind("D1", count=100, master_seed=2024))
    result = revenue_study(games, StudyConfig(workers=8))
    assert float(result.summary["sandwich_rate"]) >= 0.90
