import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from mtype_approx.cli import main

from conftest import ROUND_UP_TARGET, TWO_HEAVY_TWO_LIGHT


@pytest.fixture
def vec(tmp_path):
    def write(values, name="t.json", fmt="json"):
        path = tmp_path / name
        if fmt == "json":
            path.write_text(json.dumps({"probabilities": list(values)}))
        else:
            path.write_text("\n".join(str(v) for v in values) + "\n")
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_quantize_beats_round_up(vec, capsys):
    code, out, _ = run(capsys, "quantize", "--input", vec(ROUND_UP_TARGET), "--M", 50, "--cost", "kl-target-first")
    assert code == 0
    record = json.loads(out)
    assert record["counts"] == [37, 7, 4, 2]
    assert sum(record["counts"]) == record["M"] == 50
    assert record["probabilities"] == [0.74, 0.14, 0.08, 0.04]
    assert record["cost"] == "kl-target-first"
    assert {"bound_eq12", "bound_eq7", "bound_eq7_valid"} <= record.keys()
    assert record["cost_value"] <= record["bound_eq12"]


@pytest.mark.parametrize("kind", ["variational", "kl-approx-first", "kl-target-first", "chi2-approx-first", "chi2-target-first"])
def test_quantize_uniform_binary(vec, capsys, kind):
    code, out, _ = run(capsys, "quantize", "--input", vec([0.5, 0.5]), "--M", 2, "--cost", kind)
    assert code == 0
    record = json.loads(out)
    assert record["counts"] == [1, 1] and record["cost_value"] == 0
    assert ("bound_eq12" in record) == (kind == "kl-target-first")


def test_quantize_csv_input_and_out_file(vec, capsys, tmp_path):
    out_path = tmp_path / "r.json"
    code, out, _ = run(
        capsys, "quantize", "--input", vec([0.4, 0.35, 0.25], "t.csv", "csv"), "--M", 4, "--cost", "variational",
        "--out", out_path,
    )
    assert code == 0 and out == ""
    assert json.loads(out_path.read_text())["counts"] == [2, 1, 1]


def test_quantize_normalize(vec, capsys):
    assert run(capsys, "quantize", "--input", vec([2, 2]), "--M", 2, "--cost", "variational")[0] == 2
    code, out, _ = run(capsys, "quantize", "--input", vec([2, 2]), "--M", 2, "--cost", "variational", "--normalize")
    assert code == 0 and json.loads(out)["counts"] == [1, 1]


def test_exit_codes(vec, capsys, tmp_path):
    assert run(capsys, "quantize", "--input", vec([0.85, 0.075, 0.075]), "--M", 2, "--cost", "kl-target-first")[0] == 3
    assert run(capsys, "quantize", "--input", vec([0.5, -0.1, 0.6]), "--M", 2, "--cost", "variational")[0] == 2
    assert run(capsys, "quantize", "--input", str(tmp_path / "missing.json"), "--M", 2, "--cost", "variational")[0] == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("0.5\nabc\n")
    assert run(capsys, "quantize", "--input", bad, "--M", 2, "--cost", "variational")[0] == 2
    assert run(capsys, "sweep", "--input", vec(TWO_HEAVY_TWO_LIGHT), "--M-min", 3, "--M-max", 10)[0] == 3
    assert run(capsys, "sweep", "--input", vec(TWO_HEAVY_TWO_LIGHT), "--M-min", 10, "--M-max", 4)[0] == 2
    assert run(capsys, "oracle", "--input", vec(np.full(20, 0.05)), "--M", 40, "--cost", "variational")[0] == 4
    with pytest.raises(SystemExit) as exc:
        main(["quantize", "--input", "x", "--M", "0", "--cost", "variational"])
    assert exc.value.code == 2


def test_sweep_two_heavy_two_light(vec, capsys):
    code, out, _ = run(capsys, "sweep", "--input", vec(TWO_HEAVY_TWO_LIGHT), "--M-min", 4, "--M-max", 60)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "M,exact,bound_eq12,bound_eq7,bound_eq7_valid"
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 57
    assert [r["bound_eq7_valid"] for r in rows] == ["false"] * 46 + ["true"] * 11
    for r in rows:
        assert float(r["exact"]) <= float(r["bound_eq12"])
        for key in ("exact", "bound_eq12", "bound_eq7"):
            digits = r[key].split("e")[0].replace("-", "").replace(".", "").lstrip("0")
            assert len(digits) <= 12


def test_sweep_single_row_and_deterministic(vec, capsys):
    path = vec(TWO_HEAVY_TWO_LIGHT)
    _, first, _ = run(capsys, "sweep", "--input", path, "--M-min", 20, "--M-max", 20)
    _, second, _ = run(capsys, "sweep", "--input", path, "--M-min", 20, "--M-max", 20)
    assert first == second
    assert len(first.splitlines()) == 2


def test_sweep_uniform(vec, capsys):
    _, out, _ = run(capsys, "sweep", "--input", vec([0.25] * 4), "--M-min", 4, "--M-max", 16)
    for r in csv.DictReader(io.StringIO(out)):
        if int(r["M"]) % 4 == 0:
            assert float(r["exact"]) == 0.0


def test_markov_identical_rows(tmp_path, capsys):
    path = tmp_path / "T.json"
    path.write_text(json.dumps([[0.85, 0.075, 0.075]] * 3))
    code, out, _ = run(capsys, "markov", "--input", path, "--M", 20)
    assert code == 0
    record = json.loads(out)
    assert record["counts"] == [[16, 2, 2]] * 3
    assert record["graph_preserved"] is True
    assert record["stationary"] == pytest.approx([0.85, 0.075, 0.075])


def test_markov_doubly_stochastic(tmp_path, capsys):
    path = tmp_path / "T.json"
    path.write_text(json.dumps((np.array([[2, 1, 1], [1, 2, 1], [1, 1, 2]]) / 4).tolist()))
    record = json.loads(run(capsys, "markov", "--input", path, "--M", 4)[1])
    assert record["divergence_rate"] == 0


def test_markov_random_and_errors(tmp_path, capsys):
    path = tmp_path / "T.json"
    path.write_text(json.dumps([[0.2, 0.8, 0.0], [0.0, 0.3, 0.7], [0.6, 0.1, 0.3]]))
    code, out, _ = run(capsys, "markov", "--input", path, "--M", 16)
    assert code == 0 and json.loads(out)["graph_preserved"] is True
    assert run(capsys, "markov", "--input", path, "--M", 2)[0] == 3
    path.write_text(json.dumps([[1.0, 0.0], [0.5, 0.5]]))
    assert run(capsys, "markov", "--input", path, "--M", 4)[0] == 2
    path.write_text("not json")
    assert run(capsys, "markov", "--input", path, "--M", 4)[0] == 2


def test_oracle_cmd(vec, capsys):
    code, out, _ = run(capsys, "oracle", "--input", vec([0.7, 0.3]), "--M", 3, "--cost", "kl-approx-first")
    assert code == 0
    record = json.loads(out)
    assert record["counts"] == [2, 1]
    assert record["num_candidates"] == 4
    assert record["gap"] <= 1e-12


def test_oracle_single_point(vec, capsys):
    record = json.loads(run(capsys, "oracle", "--input", vec([1.0]), "--M", 7, "--cost", "variational")[1])
    assert record["counts"] == [7]


def test_module_entry_point(vec):
    proc = subprocess.run(
        [sys.executable, "-m", "mtype_approx", "quantize", "--input", vec([17 / 20, 3 / 40, 3 / 40]),
         "--M", "20", "--cost", "kl-target-first"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["counts"] == [16, 2, 2]
    proc = subprocess.run(
        [sys.executable, "-m", "mtype_approx", "quantize", "--input", vec([0.85, 0.075, 0.075]),
         "--M", "2", "--cost", "kl-target-first"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 3
