import csv
import json
import math

import numpy as np
import pytest

from ginicorr.cli import run_cli


def write_csv(path, x, y, header=("a", "b")):
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for xi, yi in zip(x, y):
            f.write(f"{xi},{yi}\n")


@pytest.fixture
def data_csv(tmp_path):
    rng = np.random.default_rng(0)
    x = rng.normal(size=60)
    y = 0.6 * x + 0.8 * rng.normal(size=60)
    path = tmp_path / "data.csv"
    write_csv(path, x, y)
    return str(path)


def run(capsys, *args):
    code = run_cli(list(args))
    out = capsys.readouterr().out
    return code, out


# --- exit codes ---------------------------------------------------------------


def test_missing_input_exits_2(capsys):
    code, _ = run(capsys, "estimate", "--input", "missing.csv", "--columns", "a,b")
    assert code == 2


def test_unknown_flag_exits_2(capsys):
    assert run_cli(["estimate", "--nope"]) == 2


def test_unknown_subcommand_exits_2():
    assert run_cli(["transmogrify"]) == 2


def test_degenerate_data_exits_1(tmp_path, capsys):
    path = tmp_path / "const.csv"
    write_csv(path, [1.0] * 10, list(range(10)))
    code, _ = run(capsys, "estimate", "--input", str(path), "--columns", "a,b")
    assert code == 1


def test_nan_cell_is_data_error(tmp_path, capsys):
    path = tmp_path / "nan.csv"
    with open(path, "w") as f:
        f.write("a,b\n1,2\nnan,3\n4,5\n")
    code, _ = run(capsys, "estimate", "--input", str(path), "--columns", "a,b")
    assert code == 1  # parsed as float nan -> core validation error


def test_non_numeric_cell_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    with open(path, "w") as f:
        f.write("a,b\n1,2\nfoo,3\n")
    code, _ = run(capsys, "estimate", "--input", str(path), "--columns", "a,b")
    assert code == 2


def test_unknown_column_exits_2(data_csv, capsys):
    code, _ = run(capsys, "estimate", "--input", data_csv, "--columns", "a,zzz")
    assert code == 2


# --- estimate -------------------------------------------------------------------


def test_estimate_json_schema(data_csv, capsys):
    code, out = run(capsys, "estimate", "--input", data_csv, "--columns", "a,b")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"dataset", "n", "estimates", "diagnostics"}
    assert payload["n"] == 60
    tags = [e["estimator"] for e in payload["estimates"]]
    assert tags == [
        "pearson",
        "kendall_tau",
        "tau_to_rho",
        "gini_xy",
        "gini_yx",
        "symmetric_gini",
        "corrected_symmetric_gini",
        "affine_symmetric_gini",
    ]
    assert payload["diagnostics"]["affine_iterations"] >= 1
    for e in payload["estimates"]:
        assert abs(e["value"]) <= 1.0
        if "stderr" in e:
            assert e["stderr"] >= 0.0


def test_estimate_csv_json_identical_values(data_csv, capsys):
    code, out_json = run(capsys, "estimate", "--input", data_csv, "--columns", "a,b")
    assert code == 0
    code, out_csv = run(
        capsys, "estimate", "--input", data_csv, "--columns", "a,b", "--output", "csv"
    )
    assert code == 0
    payload = json.loads(out_json)
    rows = list(csv.DictReader(out_csv.splitlines()))
    assert len(rows) == len(payload["estimates"])
    for row, est in zip(rows, payload["estimates"]):
        assert row["estimator"] == est["estimator"]
        assert float(row["value"]) == est["value"]
        if est.get("stderr") is not None:
            assert float(row["stderr"]) == est["stderr"]


def test_estimate_column_indices(data_csv, capsys):
    code, out = run(capsys, "estimate", "--input", data_csv, "--columns", "0,1")
    assert code == 0
    assert json.loads(out)["n"] == 60


def test_estimate_rerun_byte_identical(data_csv, capsys):
    _, a = run(capsys, "estimate", "--input", data_csv, "--columns", "a,b")
    _, b = run(capsys, "estimate", "--input", data_csv, "--columns", "a,b")
    assert a == b


def test_estimate_if_grid(data_csv, capsys):
    code, out = run(
        capsys,
        "estimate",
        "--input",
        data_csv,
        "--columns",
        "a,b",
        "--if-grid=-2:2:5,-2:2:4",
        "--output",
        "csv",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,y,if_pearson,if_symmetric_gini,if_kendall"
    assert len(lines) == 1 + 5 * 4
    for line in lines[1:]:
        vals = [float(v) for v in line.split(",")]
        assert abs(vals[4]) <= 4.0  # kendall influence bound


def test_estimate_bad_grid_spec(data_csv, capsys):
    code, _ = run(capsys, "estimate", "--input", data_csv, "--columns", "a,b", "--if-grid", "oops")
    assert code == 2


# --- ktable / validate-k ----------------------------------------------------------


def test_ktable_step_001(capsys):
    code, out = run(capsys, "ktable", "--step", "0.01")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "rho,k_rho"
    assert len(lines) == 202
    assert lines[1] == "-1.0,-1.0"
    assert lines[-1] == "1.0,1.0"


def test_validate_k_small(capsys):
    code, out = run(capsys, "validate-k", "--rhos", "0.5", "--pairs", "50000", "--seed", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "rho,k_rho,oracle,oracle_se,abs_diff,within_3se"
    assert lines[1].endswith(",1")


# --- simulate ----------------------------------------------------------------------


def test_simulate_csv(capsys):
    code, out = run(
        capsys,
        "simulate",
        "--rho",
        "0.5",
        "--n",
        "30",
        "--replicates",
        "20",
        "--estimators",
        "pearson,tau_to_rho",
        "--seed",
        "9",
        "--threads",
        "1",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "estimator,sqrt_n_rmse,mc_se,n,M,dist,rho,seed"
    assert len(lines) == 3
    assert lines[1].split(",")[5] == "normal"


def test_simulate_t_requires_nu(capsys):
    code, _ = run(capsys, "simulate", "--dist", "t", "--rho", "0.5", "--n", "30", "--replicates", "5")
    assert code == 2


def test_simulate_rerun_identical(capsys):
    args = [
        "simulate", "--rho", "0.3", "--n", "25", "--replicates", "15",
        "--estimators", "pearson", "--seed", "4", "--threads", "1",
    ]
    _, a = run(capsys, *args)
    _, b = run(capsys, *args)
    assert a == b


# --- are -----------------------------------------------------------------------------


def test_are_csv(capsys):
    code, out = run(capsys, "are", "--rhos", "0.5", "--n-mc", "3000", "--seed", "2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("rho,asv_pearson,")
    vals = lines[1].split(",")
    assert float(vals[1]) > 0


# --- iris -----------------------------------------------------------------------------


def test_iris_setosa_pair_matches_published(capsys):
    code, out = run(
        capsys,
        "iris",
        "--species",
        "setosa",
        "--pair",
        "sepal_length,sepal_width",
        "--output",
        "json",
    )
    assert code == 0
    row = json.loads(out)[0]
    assert round(row["pearson"], 3) == 0.743
    assert round(row["kendall_tau"], 3) == 0.597
    assert abs(row["affine_gini"] - 0.742) <= 0.005
    assert round(row["gini_xy"], 3) == 0.759
    assert round(row["gini_yx"], 3) == 0.781


def test_iris_full_report_shape(capsys):
    code, out = run(capsys, "iris", "--output", "json")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 18
    assert {r["species"] for r in rows} == {"setosa", "versicolor", "virginica"}


def test_iris_summary_table4_spots(capsys):
    code, out = run(capsys, "iris", "--summary", "--output", "json")
    assert code == 0
    rows = {(r["variable"], r["scope"]): r for r in json.loads(out)}
    assert len(rows) == 16
    assert round(rows[("sepal_length", "setosa")]["mean"], 3) == 5.006
    assert round(rows[("sepal_length", "setosa")]["sd"], 3) == 0.352
    assert round(rows[("petal_width", "virginica")]["mean"], 3) == 2.026
    assert round(rows[("petal_width", "virginica")]["sd"], 3) == 0.275


def test_iris_bad_pair(capsys):
    code, _ = run(capsys, "iris", "--pair", "sepal_length,unicorn")
    assert code == 2


# --- exchangeability -----------------------------------------------------------------


def test_exchangeability_iris_virginica_significant(capsys):
    code, out = run(
        capsys,
        "exchangeability",
        "--iris-species",
        "virginica",
        "--pair",
        "sepal_width,petal_length",
        "--permutations",
        "999",
        "--seed",
        "0",
        "--output",
        "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["p_value"] < 0.05


def test_exchangeability_needs_source(capsys):
    assert run_cli(["exchangeability"]) == 2


def test_exchangeability_csv_roundtrip(data_csv, capsys):
    args = [
        "exchangeability", "--input", data_csv, "--columns", "a,b",
        "--permutations", "199", "--seed", "3",
    ]
    code, a = run(capsys, *args)
    assert code == 0
    _, b = run(capsys, *args)
    assert a == b
    row = a.strip().splitlines()[1].split(",")
    assert 0.0 <= float(row[3]) <= 1.0


# --- out file -------------------------------------------------------------------------


def test_out_file(tmp_path, data_csv, capsys):
    target = tmp_path / "report.json"
    code, out = run(
        capsys, "estimate", "--input", data_csv, "--columns", "a,b", "--out", str(target)
    )
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["n"] == 60
