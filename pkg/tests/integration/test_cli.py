import json

import pytest

from marketeq.cli import EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, EXIT_VERIFICATION, SEED_ENV, main
from marketeq.game.io import load_game


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_solve_nonexistence(capsys):
    """Test that the capped nine-worker game is certified without equilibrium"""
    code, document = run(capsys, "solve", "capped_nine_workers")
    assert code == EXIT_NEGATIVE
    assert document["verdict"] == "nonexistence"
    assert len(document["partitions"]) == 2
    assert all(p["status"] == "infeasible" and p["conflict"] for p in document["partitions"])


@pytest.mark.parametrize(
    "fixture", ["nonconcave_three_workers", "sqrt_eleven_workers", "crossed_pairs", "crossed_pairs_symmetric"]
)
def test_solve_more_nonexistence(capsys, fixture):
    code, document = run(capsys, "solve", fixture)
    assert code == EXIT_NEGATIVE
    assert document["verdict"] == "nonexistence"


def test_solve_min_pay(capsys):
    """Test that the cheapest stable payments of the {1,2,3,5} game pay worker 0 exactly 1"""
    code, document = run(capsys, "solve", "four_workers_cap6", "--objective", "min-pay")
    assert code == EXIT_OK
    assert document["verdict"] == "pspe"
    assert document["payments"] == ["1", "1", "1", "2"]


def test_solve_two_firm(capsys):
    """Test that the two-firm construction pays every worker its weight"""
    code, document = run(capsys, "solve", "four_workers_cap6", "--construction", "two-firm")
    assert code == EXIT_OK
    assert document["payments"] == ["1", "2", "3", "5"]
    assert document["parameters"]["delta"] == "1"


def test_solve_triangle(capsys):
    code, document = run(capsys, "solve", "triangle_synergy")
    assert code == EXIT_OK
    assert document["welfare"] == "12"


def test_solve_synergy(capsys):
    """Test that max-cut payments for the three-worker matrix leave each firm 2"""
    code, document = run(capsys, "solve", "three_worker_synergy", "--construction", "synergy")
    assert code == EXIT_OK
    assert document["assignment"] == [1, 2, 1]
    assert document["payments"] == ["5/2", "2", "7/2"]
    assert document["profits"] == ["2", "2"]


def test_solve_balanced_not_applicable(capsys):
    code, document = run(capsys, "solve", "capped_nine_workers", "--construction", "balanced")
    assert code == EXIT_NEGATIVE
    assert document["verdict"] == "not-applicable"


def test_solve_homogeneous_nonexistence(capsys):
    code, document = run(capsys, "solve", "nonconcave_three_workers", "--construction", "homogeneous")
    assert code == EXIT_NEGATIVE
    assert document == {"verdict": "nonexistence", "construction": "homogeneous"}


def test_solve_precondition_fails(capsys):
    """Test that a construction outside its preconditions is an input error"""
    code, _ = run(capsys, "solve", "capped_nine_workers", "--construction", "two-firm")
    assert code == EXIT_INPUT


def test_verify(capsys):
    """Test that the triangle outcome passes and half pay fails with gap 1"""
    code, document = run(capsys, "verify", "triangle_synergy", "triangle_outcome")
    assert code == EXIT_OK
    assert document["verdicts"]["pspe"]
    code, document = run(capsys, "verify", "triangle_synergy", "triangle_half_pay_outcome", "--normalized")
    assert code == EXIT_VERIFICATION
    assert document["gap"] == "1"
    assert document["verdicts"]["deviation"]["normalized"] == "2/3"


def test_solve_then_verify(capsys, tmp_path):
    """Test that a solved outcome verifies"""
    out = tmp_path / "outcome.json"
    assert main(["solve", "asymmetric_caps", "--out", str(out)]) == EXIT_OK
    _, document = run(capsys, "verify", "asymmetric_caps", str(out))
    assert document["gap"] == "0"
    assert document["welfare"] == "43"


def test_convert_net2syn(capsys):
    code, document = run(capsys, "convert", "three_worker_network", "--direction", "net2syn")
    assert code == EXIT_OK
    assert document == {"matrix": [["1", "2", "1"], ["2", "0", "2"], ["1", "2", "2"]]}


def test_convert_syn2net(capsys):
    code, document = run(capsys, "convert", "three_worker_matrix", "--direction", "syn2net")
    assert code == EXIT_OK
    assert document["nodes"] == 11
    assert document["workers"] == [0, 1, 2]


def test_convert_not_two_sparse(capsys, tmp_path, crossed_pairs):
    """Test that the 3-sparse combined network is reported with its witness node"""
    path = tmp_path / "combined.json"
    path.write_text(json.dumps(crossed_pairs.combined_network.to_dict()))
    code, document = run(capsys, "convert", str(path), "--direction", "net2syn")
    assert code == EXIT_NEGATIVE
    assert document["verdict"] == "not-applicable"
    assert document["witness"] == 6


@pytest.mark.parametrize(
    "argv, document",
    [
        (["solve"], {"weights": [1, 1, 1], "firms": [{"kind": "synergy", "copies": 2}]}),
        (["solve"], {"weights": [1, 1], "firms": [{"kind": "explicit", "table": [[[0]]], "copies": 2}]}),
        (["convert", "--direction", "syn2net"], {"rows": [[0, 1], [1, 0]]}),
    ],
)
def test_malformed_input(capsys, tmp_path, argv, document):
    """Test that a document with missing fields exits as bad input instead of crashing"""
    path = tmp_path / "malformed.json"
    path.write_text(json.dumps(document))
    code = main([argv[0], str(path), *argv[1:]])
    assert code == EXIT_INPUT


def test_convert_moebius(capsys):
    """Test that v = (0, 3, 6, 8) is not an influence valuation"""
    code, document = run(capsys, "convert", "moebius_three_workers", "--direction", "moebius")
    assert code == EXIT_NEGATIVE
    assert not document["representable"]
    assert document["witness"] == {"subset": [0, 1, 2], "value": "-1"}


def test_influence(capsys):
    code, document = run(capsys, "influence", "three_worker_network", "--seeds", "0,2")
    assert code == EXIT_OK
    assert document["influence"] == "8"
    code, document = run(capsys, "influence", "three_worker_network", "--seeds", "1", "--samples", "50", "--seed", "1")
    assert document["mean"] == 4.0


def test_gap(capsys):
    code, document = run(capsys, "gap", "capped_nine_workers")
    assert code == EXIT_OK
    assert document == {"integral": "23", "fractional": "47/2", "ratio": "47/46"}


def test_generate(tmp_path, monkeypatch):
    """Test that generated games load back and the seed falls back to the environment"""
    monkeypatch.setenv(SEED_ENV, "17")
    assert main(["generate", "--kind", "D3", "--count", "3", "--out", str(tmp_path)]) == EXIT_OK
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["D3-00000.json", "D3-00001.json", "D3-00002.json", "dataset.json"]
    dataset = json.loads((tmp_path / "dataset.json").read_text())
    assert dataset["master_seed"] == 17
    game = load_game(tmp_path / "D3-00001.json")
    assert game.k == 3
    document = json.loads((tmp_path / "D3-00001.json").read_text())
    assert document["metadata"]["alpha"] == "1/5"


def write_spec(path, count, studies=("stability", "census")):
    spec = {
        "dataset": {"kind": "D1", "count": count, "workers": [5, 7], "weights": [2, 6], "max_total": 40, "master_seed": 8},
        "studies": list(studies),
    }
    path.write_text(json.dumps(spec))
    return str(path)


def test_experiment_csv(capsys, tmp_path):
    """Test that an experiment writes one CSV per study, the survival curve and a summary"""
    spec = write_spec(tmp_path / "spec.json", 5)
    out = tmp_path / "out"
    code, summary = run(capsys, "experiment", "--spec", spec, "--out", str(out), "--quiet")
    assert code == EXIT_OK
    assert summary["census"]["instances"] == 5
    assert sorted(p.name for p in out.iterdir()) == ["census.csv", "stability.csv", "summary.json", "survival.csv"]
    assert len((out / "census.csv").read_text().splitlines()) == 6
    assert json.loads((out / "summary.json").read_text()) == summary


def test_experiment_threads_identical(capsys, tmp_path):
    """Test that CSVs are byte-identical for one and several worker threads"""
    spec = write_spec(tmp_path / "spec.json", 6)
    for workers in ("1", "4"):
        assert main(["experiment", "--spec", spec, "--out", str(tmp_path / workers), "--workers", workers, "--quiet"]) == EXIT_OK
    capsys.readouterr()
    for name in ("census.csv", "stability.csv", "survival.csv"):
        assert (tmp_path / "1" / name).read_bytes() == (tmp_path / "4" / name).read_bytes()


def test_experiment_empty(capsys, tmp_path):
    """Test that a zero-instance spec still writes headers"""
    spec = write_spec(tmp_path / "spec.json", 0, studies=("census",))
    out = tmp_path / "out"
    code, summary = run(capsys, "experiment", "--spec", spec, "--out", str(out), "--quiet")
    assert code == EXIT_OK
    assert (out / "census.csv").read_text() == "id,n,types,W,d,pspe\n"
    assert summary["census"]["instances"] == 0


def test_experiment_duckdb(capsys, tmp_path):
    spec = write_spec(tmp_path / "spec.json", 3, studies=("census",))
    out = tmp_path / "out"
    code, _ = run(capsys, "experiment", "--spec", spec, "--out", str(out), "--store", "duckdb", "--quiet")
    assert code == EXIT_OK
    assert (out / "experiments.db").exists()


def test_missing_input(capsys):
    code, _ = run(capsys, "solve", "no_such_game")
    assert code == EXIT_INPUT
