import json
import subprocess
import sys

import pytest

from schur_ginibre.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--output", "json")
    return code, json.loads(out)


def test_avg_both_routes(capsys):
    code, doc = run_json(capsys, "avg", "--partition", "2,2", "--dim", "3", "--method", "both")
    assert code == 0
    row = doc["rows"][0]
    assert row["value"] == "6" and row["routes_agree"] is True
    assert row["closed_value"] == row["pfaffian_value"] == "6"


def test_avg_odd_part_and_too_long(capsys):
    assert run_json(capsys, "avg", "--partition", "3", "--dim", "4")[1]["rows"][0]["value"] == "0"
    code, doc = run_json(capsys, "avg", "--partition", "2,2,2", "--dim", "2", "--method", "both")
    assert code == 0 and doc["rows"][0]["value"] == "0"


def test_avg_embed_dim_override(capsys):
    code, doc = run_json(capsys, "avg", "--partition", "4,2", "--dim", "3", "--method", "pfaffian", "--embed-dim", "12")
    assert code == 0 and doc["rows"][0]["value"] == "30"
    code, _, err = run(capsys, "avg", "--partition", "4,2", "--dim", "3", "--method", "pfaffian", "--embed-dim", "7")
    assert code == 1 and "embedding dimension" in err


def test_avg_route_disagreement_exit_code(capsys, monkeypatch):
    from fractions import Fraction

    import schur_ginibre.cli as cli
    from schur_ginibre.ginibre import MomentValue

    monkeypatch.setattr(cli, "schur_average_pfaffian", lambda lam, n, m=None: MomentValue(Fraction(7), lam, n))
    code, _, _ = run(capsys, "avg", "--partition", "2,2", "--dim", "3", "--method", "both")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["avg", "--partition", "2,3", "--dim", "3"],
    ["avg", "--partition", "x", "--dim", "3"],
    ["avg", "--partition", "2", "--dim", "0"],
    ["table", "--max-weight", "-1", "--dim", "2"],
    ["mc-verify", "--samples", "10"],
    ["density", "--dim", "1", "--samples", "1000"],
    ["expand", "--power-sum", "0", "--dim", "3"],
])
def test_validation_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err


def test_table_example(capsys):
    code, doc = run_json(capsys, "table", "--max-weight", "4", "--dim", "2")
    assert code == 0
    values = {row["partition"]: row["value"] for row in doc["rows"]}
    assert values == {"4": "8", "3,1": "0", "3": "0", "2,2": "2", "2,1": "0", "2": "2", "1,1": "0", "1": "0", "": "1"}
    assert [row["partition"] for row in doc["rows"]] == ["4", "3,1", "3", "2,2", "2,1", "2", "1,1", "1", ""]


def test_table_weight_zero(capsys):
    _, doc = run_json(capsys, "table", "--max-weight", "0", "--dim", "3")
    assert doc["rows"] == [{"partition": "", "weight": 0, "value": "1"}]


def test_table_both_routes(capsys):
    code, _ = run_json(capsys, "table", "--max-weight", "8", "--dim", "5", "--method", "both")
    assert code == 0


@pytest.mark.parametrize("fmt", ["json", "csv", "text"])
def test_table_is_byte_deterministic(capsys, fmt):
    argv = ["table", "--max-weight", "6", "--dim", "3", "--output", fmt]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second and first


def test_csv_output(capsys):
    _, out, _ = run(capsys, "table", "--max-weight", "2", "--dim", "2", "--output", "csv")
    assert out.splitlines() == ["partition,weight,value", "2,2,2", "\"1,1\",2,0", "1,1,0", ",0,1"]


def test_large_values_are_exact_strings(capsys):
    _, doc = run_json(capsys, "avg", "--partition", "40,40,40", "--dim", "30")
    value = int(doc["rows"][0]["value"])
    assert value > 2**64


def test_json_round_trip(capsys):
    _, out, _ = run(capsys, "pfaffian", "--partition", "4,2", "--dim", "3", "--output", "json")
    doc = json.loads(out)
    assert json.loads(json.dumps(doc)) == doc
    row = doc["rows"][0]
    assert row["rows"] == [1, 4, 7, 8] and row["embed_dim"] == 8
    assert row["epsilon_inverse_pfaffian"] == "1" and row["value"] == "30"


def test_expand_power_sum(capsys):
    code, doc = run_json(capsys, "expand", "--power-sum", "4", "--dim", "3")
    assert code == 0 and doc["total"] == "15"
    assert [r["value"] for r in doc["rows"]] == ["15", "0", "0", "0"]
    _, doc = run_json(capsys, "expand", "--power-sum", "3", "--dim", "5")
    assert all(r["value"] == "0" for r in doc["rows"]) and doc["total"] == "0"


def test_expand_charpoly_text(capsys):
    code, out, _ = run(capsys, "expand", "--charpoly", "2", "--dim", "2")
    assert code == 0
    assert out.strip() == "1 + 2·(x1x2) + 2·(x1x2)²"


def test_out_path(tmp_path, capsys):
    path = tmp_path / "t.json"
    code, out, _ = run(capsys, "table", "--max-weight", "3", "--dim", "2", "--output", "json", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["command"] == "table"


def test_mc_verify_small_run(capsys):
    argv = ["mc-verify", "--samples", "2000", "--seed", "3", "--dims", "2,3", "--partitions", "2;2,2;1", "--trace-powers", "2,3", "--pairs", "0.3,-0.2"]
    code, doc = run_json(capsys, *argv)
    assert code == 0 and doc["passed"] is True
    row = doc["rows"][0]
    assert set(row) == {"statistic", "target", "estimate", "std_error", "z_score", "n_samples", "seed", "passed"}
    assert len(doc["rows"]) == 2 * (3 + 2 + 1)
    _, again = run_json(capsys, *argv)
    assert again == doc


def test_mc_verify_injected_bias_fails(capsys):
    code, doc = run_json(capsys, "mc-verify", "--samples", "2000", "--dims", "2", "--partitions", "2", "--trace-powers", "2", "--pairs", "0.5,0.5", "--inject-bias", "10")
    assert code == 3 and doc["passed"] is False


def test_density_command(capsys):
    code, doc = run_json(capsys, "density", "--dim", "2", "--samples", "20000", "--seed", "1")
    assert code == 0 and doc["passed"] is True
    assert len(doc["rows"]) == 16 * 8


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "schur_ginibre", "avg", "--partition", "4", "--dim", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and "8" in res.stdout


@pytest.mark.slow
def test_mc_verify_default_matrix(capsys):
    code, doc = run_json(capsys, "mc-verify", "--samples", "100000", "--seed", "42")
    assert code == 0 and doc["passed"] is True
    assert len(doc["rows"]) == 3 * (7 + 4 + 2)
    assert all(abs(row["z_score"]) < 5 for row in doc["rows"])
