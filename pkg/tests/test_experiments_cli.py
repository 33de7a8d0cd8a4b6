import json

import pytest

from subquad.cli import main
from subquad.experiments import (
    CSV_FIELDS,
    ExperimentSpec,
    ReportRow,
    exact_cap,
    factor_table,
    loglog_slope,
    rows_from_csv,
    rows_to_csv,
    rows_to_json,
    run_experiment,
)


def test_spec_defaults_and_validation():
    spec = ExperimentSpec("quantum7", 64)
    assert spec.planted_ops == 4
    for bad in (
        dict(algorithm="nope", n=8),
        dict(algorithm="mr", n=0),
        dict(algorithm="mr", n=8, epsilon=0),
        dict(algorithm="mr", n=8, planted_ops=9),
        dict(algorithm="mr", n=8, x=2.0),
    ):
        with pytest.raises(ValueError):
            ExperimentSpec(**bad).validate()


def test_spec_from_dict_rejects_unknown():
    with pytest.raises(ValueError):
        ExperimentSpec.from_dict({"algorithm": "mr", "n": 8, "colour": 1})


def test_csv_and_json_agree():
    rows = run_experiment(ExperimentSpec("quantum7", 64, seed=2, repetitions=3))
    assert [r.seed for r in rows] == [2, 3, 4]
    from_csv = rows_from_csv(rows_to_csv(rows))
    from_json = json.loads(rows_to_json(rows))
    assert from_csv == from_json
    assert list(from_csv[0]) == list(CSV_FIELDS)


@pytest.mark.parametrize("algo", ["quantum7", "bootstrap", "mr", "metric", "metric-fast"])
def test_each_algorithm_reports(algo):
    rows = run_experiment(ExperimentSpec(algo, 48, seed=1))
    assert len(rows) == 1 and not rows[0].violates


def test_violation_flag():
    row = ReportRow(8, "mr", 0.5, 2, 10, 5.0, 0, 0, 1, 1, factor_bound=3.5)
    assert row.violates
    assert not ReportRow(8, "mr", 0.5, 2, 6, 3.0, 0, 0, 1, 1, factor_bound=3.5).violates


def test_exact_cap_env(monkeypatch):
    monkeypatch.setenv("SUBQUAD_EXACT_CAP", "10")
    assert exact_cap() == 10
    row = run_experiment(ExperimentSpec("quantum7", 32))[0]
    assert row.exact is None and row.ratio is None


def test_workers_match_serial():
    spec = ExperimentSpec("mr", 40, seed=5, repetitions=2)
    assert rows_to_csv(run_experiment(spec, workers=2)) == rows_to_csv(run_experiment(spec))


def test_slope_and_factors():
    assert loglog_slope([2, 4, 8], [4, 16, 64]) == pytest.approx(2)
    table = factor_table()
    assert table["e_m"][1 / 3] == 27 and table["e_e"][0.1] == pytest.approx(16381)


# -- command line -----------------------------------------------------------------------------


def test_gen_deterministic(capsys):
    assert main(["gen", "--n", "40", "--seed", "3"]) == 0
    first = capsys.readouterr().out
    main(["gen", "--n", "40", "--seed", "3"])
    assert capsys.readouterr().out == first
    assert json.loads(first)["n"] == 40


def test_run_csv_to_file(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["run", "--algo", "mr", "--n", "48", "--reps", "2", "--out", str(out)]) == 0
    rows = rows_from_csv(out.read_text())
    assert len(rows) == 2 and rows[0]["algorithm"] == "mr"


def test_run_json_matches_csv(tmp_path):
    a, b = tmp_path / "r.csv", tmp_path / "r.json"
    main(["run", "--n", "40", "--out", str(a)])
    main(["run", "--n", "40", "--out", str(b)])
    assert rows_from_csv(a.read_text()) == json.loads(b.read_text())


def test_run_from_spec_file(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"algorithm": "bootstrap", "n": 40, "seed": 1, "epsilon": 0.1}))
    assert main(["run", str(spec)]) == 0
    assert capsys.readouterr().out.startswith(",".join(CSV_FIELDS))


def test_bad_input_exit_code(capsys):
    assert main(["run", "--n", "0"]) == 2
    assert "error" in capsys.readouterr().err


def test_bad_spec_file(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"algorithm": "mr", "n": 10, "bogus": 1}))
    assert main(["run", str(spec)]) == 2


def test_sweep_metric(capsys):
    assert main(["sweep", "--algo", "metric", "--ns", "16,32", "--reps", "1"]) == 0
    captured = capsys.readouterr()
    assert captured.out.splitlines()[0] == "n,charged_queries"
    assert "slope" in captured.err


def test_sweep_strings(capsys):
    assert main(["sweep", "--algo", "quantum7", "--ns", "32,48"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 3


def test_mrsim_trace(tmp_path):
    out = tmp_path / "trace.json"
    assert main(["mrsim", "--n", "64", "--seed", "2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["estimate"] <= 3.5 * doc["exact"]
    assert all(t["max_mem"] <= doc["mem_cap"] for t in doc["traces"])
    assert doc["rounds"] >= 2
