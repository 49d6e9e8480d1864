import json
import math

import pytest

from cqlp import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, doc, name="in.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


DISCRETE = {
    "space": {"weights": [1.0, 2.0, 0.5]},
    "function": {"re": [1.0, -2.0, 3.0], "im": [0.0, 1.0, 0.0]},
    "weight": {"re": [0.3, 0.2, 0.0]},
}


def test_norm_on_bundled_fixture(capsys):
    code, out, _ = run(capsys, "norm", "--input", cli.fixture_path(), "--p", "2")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(math.sqrt(3))


def test_divergence_is_a_valid_answer(capsys):
    code, out, _ = run(capsys, "norm", "--input", cli.fixture_path(), "--p", "3")
    assert code == 0 and json.loads(out)["value"] == "diverges"


def test_schema_error_reports_pointer(tmp_path, capsys):
    bad = write(tmp_path, {"function": {"terms": [{"c": 1, "a": "x"}]}})
    code, _, err = run(capsys, "norm", "--input", bad, "--p", "2")
    assert code == 2 and "/function/terms/0/a" in err


def test_empty_corpus_is_usage_error(tmp_path, capsys):
    code, _, err = run(capsys, "gamma-table", "--input", write(tmp_path, {"functions": []}), "--p", "2")
    assert code == 2 and "empty corpus" in err


def test_missing_exponent_is_usage_error(capsys):
    code, _, _ = run(capsys, "norm", "--input", cli.fixture_path())
    assert code == 2


def test_reports_are_deterministic(tmp_path, capsys):
    path = write(tmp_path, DISCRETE)
    a = run(capsys, "beta", "--input", path, "--p", "4", "--mode", "optimize", "--seed", "3")[1]
    b = run(capsys, "beta", "--input", path, "--p", "4", "--mode", "optimize", "--seed", "3")[1]
    assert a == b


@pytest.mark.parametrize("cmd", ["alpha", "gamma"])
def test_optimize_modes_match_closed_forms(tmp_path, capsys, cmd):
    path = write(tmp_path, DISCRETE)
    closed = json.loads(run(capsys, cmd, "--input", path, "--p", "4")[1])["value"]
    code, out, _ = run(capsys, cmd, "--input", path, "--p", "4", "--mode", "optimize", "--tol", "1e-9")
    assert code == 0 and json.loads(out)["value"] == pytest.approx(closed, rel=1e-9)


def test_gns_and_gelfand(tmp_path, capsys):
    path = write(tmp_path, DISCRETE)
    code, out, _ = run(capsys, "gns", "--input", path, "--p", "4")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["dimension"] == 2 and rep["model"]["kernel"] == [2]
    code, out, _ = run(capsys, "gelfand", "--input", path, "--p", "4")
    rep = json.loads(out)
    assert code == 0 and rep["certified"] and rep["isometry_gap"] < 1e-9


def test_forms_check(tmp_path, capsys):
    code, out, _ = run(capsys, "forms-check", "--input", write(tmp_path, DISCRETE), "--p", "4")
    assert code == 0 and json.loads(out)["passed"]


def test_espace(capsys):
    code, out, _ = run(capsys, "espace", "--input", cli.fixture_path())
    assert code == 0 and json.loads(out)["interval"] == "[1, 3)"


def test_gamma_table_csv(capsys):
    code, out, _ = run(capsys, "gamma-table", "--p", "2", "--domain", "unit_interval", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 901
    assert lines[0].split(",")[:4] == ["gamma1", "gamma2", "gamma_s", "gamma_w"]


def test_witness_search_exhausted_on_unit_interval(tmp_path, capsys):
    doc = write(tmp_path, {"domain": "unit_interval", "grid": ["-1/2", 0, "1/2"]})
    code, out, _ = run(capsys, "witness-search", "--input", doc, "--p", "2")
    assert code == 0 and json.loads(out)["exhausted"]


def test_suite_failure_exits_one(capsys):
    code, out, _ = run(capsys, "suite", "--only", "collapse")
    rep = json.loads(out)
    assert rep["criteria"][0]["key"] == "collapse"
    assert code == (0 if rep["criteria"][0]["passed"] else 1)


def test_suite_pass_exits_zero(capsys):
    code, out, _ = run(capsys, "suite", "--only", "gns", "gelfand")
    assert code == 0 and all(c["passed"] for c in json.loads(out)["criteria"])


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "norm", "--input", cli.fixture_path(), "--p", "2", "--out", str(target))
    assert code == 0 and out == "" and json.loads(target.read_text())["in_lp"]
