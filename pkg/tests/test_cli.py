import json
import subprocess

import numpy as np
import pytest

from epsentropy import cli
from epsentropy.asymptotics import exp_pivot_ci, normal_ci
from epsentropy.core import RngStream, SeriesSample, read_sample_csv, write_sample_csv
from epsentropy.discrete import DiscreteSample, discrete_report, discrete_residual
from epsentropy.epskeys import rank_candidates
from epsentropy.estimators import EstimateConfig, estimate_report
from epsentropy.gof import gof_statistic
from epsentropy.montecarlo import SimulationPlan, run_residual_study
from epsentropy.processes import generate, iid_uniform_process, ma2_normal_process


@pytest.fixture()
def sample_csv(tmp_path):
    series = generate(iid_uniform_process(1), 150, RngStream(500, 0))
    path = str(tmp_path / "sample.csv")
    write_sample_csv(series.sample, path)
    return path, series.sample


@pytest.fixture()
def table_csv(tmp_path):
    gen = RngStream(501, 0).generator()
    table = gen.integers(0, 5, size=(40, 3)).astype(float)
    path = str(tmp_path / "table.csv")
    write_sample_csv(SeriesSample(table), path)
    return path, table


def _load(path):
    with open(path) as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# estimate
# ---------------------------------------------------------------------------

def test_estimate_matches_library(sample_csv, tmp_path):
    path, sample = sample_csv
    out = str(tmp_path / "est.json")
    assert cli.main(["estimate", "--input", path, "--eps", "0.05", "--r", "2",
                     "--output", out]) == 0
    doc = _load(out)
    ref = estimate_report(sample, EstimateConfig(eps=0.05, r=2))
    assert doc["report"] == json.loads(json.dumps(ref.to_dict()))
    assert doc["run"] == {"subcommand": "estimate", "input": path,
                          "eps": 0.05, "eps0": None, "r": 2}
    assert "intervals" not in doc


def test_estimate_interval_stack(sample_csv, tmp_path):
    path, sample = sample_csv
    out = str(tmp_path / "est.json")
    assert cli.main(["estimate", "--input", path, "--eps", "0.05", "--r", "2",
                     "--ci", "sqrtn", "--exp-pivot", "--level", "0.9",
                     "--output", out]) == 0
    doc = _load(out)
    assert [iv["method"] for iv in doc["intervals"]] == ["normal_q2", "normal_h2", "exp_pivot"]
    ref = estimate_report(sample, EstimateConfig(eps=0.05, r=2))
    assert doc["intervals"][0] == normal_ci(ref, target="q2", regime="sqrtn", level=0.9).to_dict()
    assert doc["intervals"][1] == normal_ci(ref, target="h2", regime="sqrtn", level=0.9).to_dict()
    assert doc["intervals"][2] == exp_pivot_ci(sample, level=0.9).to_dict()


def test_estimate_stdout_equals_file(sample_csv, tmp_path, capsys):
    path, _ = sample_csv
    out = str(tmp_path / "est.json")
    assert cli.main(["estimate", "--input", path, "--eps", "0.1", "--output", out]) == 0
    assert cli.main(["estimate", "--input", path, "--eps", "0.1"]) == 0
    captured = capsys.readouterr()
    with open(out) as fh:
        assert captured.out == fh.read()
    assert captured.out.endswith("\n")


def test_estimate_runs_are_byte_identical(sample_csv, tmp_path):
    path, _ = sample_csv
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for out in (a, b):
        assert cli.main(["estimate", "--input", path, "--eps", "0.05", "--r", "1",
                         "--ci", "neps", "--output", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _plan_file(tmp_path, base_seed=77):
    plan = SimulationPlan(
        spec=iid_uniform_process(1),
        n=80,
        n_sim=6,
        config=EstimateConfig(eps=0.05),
        kind="q_sqrtn",
        base_seed=base_seed,
    )
    path = str(tmp_path / "plan.json")
    with open(path, "w") as fh:
        json.dump(plan.to_json(), fh)
    return path, plan


def test_simulate_matches_library(tmp_path):
    path, plan = _plan_file(tmp_path)
    out = str(tmp_path / "sim.json")
    csv_out = str(tmp_path / "res.csv")
    assert cli.main(["simulate", "--plan", path, "--residuals-csv", csv_out,
                     "--output", out]) == 0
    doc = _load(out)
    ref = run_residual_study(plan)
    assert doc["outcome"]["residuals"] == json.loads(json.dumps(ref.residuals))
    assert doc["plan"] == json.loads(json.dumps(plan.to_json()))
    assert doc["run"]["seed"] == 77
    with open(csv_out) as fh:
        lines = fh.read().splitlines()
    assert len(lines) == plan.n_sim + 1 and lines[0] == "residual"


def test_simulate_seed_override(tmp_path):
    path, plan = _plan_file(tmp_path)
    out_a = str(tmp_path / "a.json")
    out_b = str(tmp_path / "b.json")
    assert cli.main(["simulate", "--plan", path, "--output", out_a]) == 0
    assert cli.main(["simulate", "--plan", path, "--seed", "123", "--output", out_b]) == 0
    doc_a, doc_b = _load(out_a), _load(out_b)
    assert doc_b["run"]["seed"] == 123
    assert doc_b["plan"]["base_seed"] == 123
    assert doc_a["outcome"]["residuals"] != doc_b["outcome"]["residuals"]


def test_simulate_rejects_malformed_plan(tmp_path, capsys):
    path = str(tmp_path / "plan.json")
    with open(path, "w") as fh:
        fh.write("{not json")
    assert cli.main(["simulate", "--plan", path]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error: ") and err.count("\n") == 1


# ---------------------------------------------------------------------------
# gof
# ---------------------------------------------------------------------------

def test_gof_matches_library(sample_csv, tmp_path):
    path, sample = sample_csv
    out = str(tmp_path / "gof.json")
    assert cli.main(["gof", "--input", path, "--eps", "0.25", "--delta", "0.2",
                     "--output", out]) == 0
    doc = _load(out)
    ref = gof_statistic(sample, eps=0.25, delta=0.2)
    assert doc["gof"] == json.loads(json.dumps(ref.to_dict()))
    assert doc["run"]["delta"] == 0.2


# ---------------------------------------------------------------------------
# keys
# ---------------------------------------------------------------------------

def test_keys_by_size_matches_library(table_csv, tmp_path):
    path, table = table_csv
    out = str(tmp_path / "keys.json")
    assert cli.main(["keys", "--input", path, "--eps", "0.9", "--size", "1",
                     "--output", out]) == 0
    doc = _load(out)
    ref = rank_candidates(read_sample_csv(path), [(0,), (1,), (2,)], 0.9)
    assert doc["candidates"] == [json.loads(json.dumps(c.to_dict())) for c in ref]


def test_keys_by_explicit_subsets(table_csv, tmp_path):
    path, _ = table_csv
    out = str(tmp_path / "keys.json")
    assert cli.main(["keys", "--input", path, "--eps", "0.9",
                     "--subsets", "0,1; 0,2", "--output", out]) == 0
    doc = _load(out)
    got = {tuple(c["attributes"]) for c in doc["candidates"]}
    assert got == {(0, 1), (0, 2)}


def test_keys_requires_exactly_one_selector(table_csv, capsys):
    path, _ = table_csv
    assert cli.main(["keys", "--input", path, "--eps", "0.9"]) == 1
    assert cli.main(["keys", "--input", path, "--eps", "0.9",
                     "--size", "1", "--subsets", "0,1"]) == 1
    err = capsys.readouterr().err
    assert all(line.startswith("error: ") for line in err.splitlines())


def test_keys_rejects_empty_subset_group(table_csv, capsys):
    path, _ = table_csv
    assert cli.main(["keys", "--input", path, "--eps", "0.9", "--subsets", "0,1;;2"]) == 1
    assert "error: " in capsys.readouterr().err


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------

def test_generate_matches_library_stream(tmp_path, capsys):
    csv_out = str(tmp_path / "gen.csv")
    assert cli.main(["generate", "--family", "iid_uniform", "--params", '{"d": 2}',
                     "--n", "40", "--seed", "11", "--output", csv_out]) == 0
    capsys.readouterr()  # manifest goes to stdout; the CSV is the artifact here
    ref = generate(iid_uniform_process(2), 40, RngStream(11, 0)).sample
    got = read_sample_csv(csv_out)
    assert np.array_equal(got.points, ref.points)


def test_generate_from_spec_file_is_deterministic(tmp_path, capsys):
    spec_path = str(tmp_path / "spec.json")
    with open(spec_path, "w") as fh:
        json.dump(ma2_normal_process().to_json(), fh)
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    for out in (a, b):
        assert cli.main(["generate", "--spec", spec_path, "--n", "64",
                         "--seed", "3", "--output", str(out)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    assert read_sample_csv(str(a)).n == 64


def test_generate_stdout_manifest(tmp_path, capsys):
    csv_out = str(tmp_path / "gen.csv")
    assert cli.main(["generate", "--family", "iid_uniform", "--params", '{"d": 1}',
                     "--n", "25", "--seed", "4", "--output", csv_out]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["rows"] == 25 and doc["columns"] == 1
    assert doc["spec"]["family"] == "iid_uniform"
    assert doc["run"]["seed"] == 4


def test_generate_requires_exactly_one_source(tmp_path, capsys):
    csv_out = str(tmp_path / "gen.csv")
    assert cli.main(["generate", "--n", "10", "--output", csv_out]) == 1
    spec_path = str(tmp_path / "spec.json")
    with open(spec_path, "w") as fh:
        json.dump({"family": "iid_uniform", "params": {"d": 1}}, fh)
    assert cli.main(["generate", "--spec", spec_path, "--family", "iid_uniform",
                     "--n", "10", "--output", csv_out]) == 1
    err = capsys.readouterr().err
    assert "exactly one of --spec or --family" in err


# ---------------------------------------------------------------------------
# discrete
# ---------------------------------------------------------------------------

@pytest.fixture()
def symbols_csv(tmp_path):
    gen = RngStream(502, 0).generator()
    # skewed alphabet keeps the asymptotic variance bounded away from zero
    symbols = gen.choice(4, size=200, p=[0.55, 0.2, 0.15, 0.1])
    path = str(tmp_path / "symbols.csv")
    with open(path, "w") as fh:
        fh.write("\n".join(str(int(s)) for s in symbols) + "\n")
    return path, symbols


def test_discrete_matches_library(symbols_csv, tmp_path):
    path, symbols = symbols_csv
    out = str(tmp_path / "disc.json")
    assert cli.main(["discrete", "--input", path, "--r", "1", "--output", out]) == 0
    doc = _load(out)
    ref = discrete_report(DiscreteSample(symbols), 1)
    assert doc["report"] == json.loads(json.dumps(ref.to_dict()))
    assert "residual" not in doc


def test_discrete_residual_flags(symbols_csv, tmp_path):
    path, symbols = symbols_csv
    out = str(tmp_path / "disc.json")
    assert cli.main(["discrete", "--input", path, "--r", "1",
                     "--truth", "0.25", "--kind", "q", "--output", out]) == 0
    doc = _load(out)
    ref = discrete_residual(DiscreteSample(symbols), 1, 0.25, "q")
    assert doc["residual"] == json.loads(json.dumps(ref))
    assert doc["run"]["truth"] == 0.25 and doc["run"]["kind"] == "q"


def test_discrete_truth_needs_kind(symbols_csv, capsys):
    path, _ = symbols_csv
    assert cli.main(["discrete", "--input", path, "--truth", "0.25"]) == 1
    assert "needs --kind" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# error and exit-code contract
# ---------------------------------------------------------------------------

def test_missing_input_file_is_a_clean_failure(tmp_path, capsys):
    assert cli.main(["estimate", "--input", str(tmp_path / "nope.csv"), "--eps", "0.1"]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error: ") and err.count("\n") == 1


def test_argparse_failures_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["estimate", "--eps", "0.1"])  # --input missing
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_console_script_is_installed():
    proc = subprocess.run(["epsentropy", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for name in ("estimate", "simulate", "gof", "keys", "generate", "discrete"):
        assert name in proc.stdout
