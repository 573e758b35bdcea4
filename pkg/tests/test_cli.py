import io
import json
from fractions import Fraction

import pytest

from cubik import bounds
from cubik.cli import EXIT_INVALID, EXIT_LIMIT, EXIT_OK, EXIT_USAGE, run


def _gen(tmp_path, *extra, name="inst.json"):
    path = tmp_path / name
    assert run(["generate", *extra, "-o", str(path)]) == EXIT_OK
    return path


def test_certify_table(capsys):
    assert run(["certify"]) == EXIT_OK
    out = capsys.readouterr().out
    for ratio in ("139/29", "17/4", "30/7", "24/7"):
        assert ratio in out
    assert "MISMATCH" not in out and "objective=1/4" in out


def test_generate_solve_validate(tmp_path, capsys):
    inst = _gen(tmp_path, "--family", "mixed-classes", "--n", "20", "--seed", "3")
    sol = tmp_path / "sol.json"
    svg = tmp_path / "sol.svg"
    assert run(["solve", "-i", str(inst), "--gap", "-o", str(sol), "--svg", str(svg)]) == EXIT_OK
    data = json.loads(sol.read_text())
    assert {"profit", "placements", "containers", "instance", "provenance"} <= set(data)
    assert svg.read_text().startswith("<svg")
    assert run(["validate", "-s", str(sol)]) == EXIT_OK
    assert run(["validate", "-s", str(sol), "-i", str(inst)]) == EXIT_OK
    assert capsys.readouterr().out.strip().endswith(f"profit {Fraction(data['profit'])}")


def test_solve_reads_stdin(tmp_path, monkeypatch, capsys):
    inst = _gen(tmp_path, "--family", "cubes", "--n", "5")
    monkeypatch.setattr("sys.stdin", io.StringIO(inst.read_text()))
    assert run(["solve", "-i", "-", "--strategies", "singletons,simple5"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["placements"]


def test_hardness_generation(tmp_path):
    path = _gen(tmp_path, "--family", "hardness", "--m", "2")
    assert len(json.loads(path.read_text())["items"]) == 6
    assert run(["generate", "--family", "hardness"]) == EXIT_USAGE
    assert run(["generate", "--family", "cubes"]) == EXIT_USAGE


def test_empty_instance(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text('{"side": "1", "items": []}')
    assert run(["solve", "-i", str(path)]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["placements"] == []


def test_usage_errors(tmp_path):
    assert run(["solve", "-i", str(tmp_path / "missing.json")]) == EXIT_USAGE
    assert run(["frobnicate"]) == EXIT_USAGE
    assert run([]) == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["solve", "-i", str(bad)]) == EXIT_USAGE
    inst = _gen(tmp_path, "--family", "cubes", "--n", "3")
    assert run(["solve", "-i", str(inst), "--strategies", "nope"]) == EXIT_USAGE


def test_invalid_solution(tmp_path, capsys):
    inst = _gen(tmp_path, "--family", "cubes", "--n", "3", "--seed", "1")
    items = json.loads(inst.read_text())["items"]
    sol = tmp_path / "overlap.json"
    sol.write_text(json.dumps({"profit": "0", "placements": [
        {"id": it["id"], "orient": "wdh", "x": 0, "y": 0, "z": 0} for it in items[:2]]}))
    assert run(["validate", "-i", str(inst), "-s", str(sol)]) == EXIT_INVALID
    assert "invalid" in capsys.readouterr().out
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"placements": [{"id": 99, "x": 0, "y": 0, "z": 0}]}))
    assert run(["validate", "-i", str(inst), "-s", str(unknown)]) == EXIT_INVALID
    assert run(["validate", "-s", str(sol)]) == EXIT_USAGE


def test_classify(tmp_path, capsys):
    inst = _gen(tmp_path, "--family", "thin-I1", "--n", "8")
    assert run(["classify", "-i", str(inst), "--mu", "0.01"]) == EXIT_OK
    assert "I1" in json.loads(capsys.readouterr().out)["classes"]


def test_oracle(tmp_path, capsys):
    inst = _gen(tmp_path, "--family", "hardness", "--m", "1")
    out = tmp_path / "opt.json"
    assert run(["oracle", "-i", str(inst), "-o", str(out)]) == EXIT_OK
    assert "optimum 3" in capsys.readouterr().out
    assert run(["validate", "-s", str(out)]) == EXIT_OK
    big = _gen(tmp_path, "--family", "cubes", "--n", "10", name="big.json")
    assert run(["oracle", "-i", str(big)]) == EXIT_LIMIT


def test_bound(tmp_path, capsys):
    variant, prof, expected = bounds.tight_instances()[0]
    path = tmp_path / "profile.json"
    path.write_text(json.dumps(prof.to_dict()))
    assert run(["bound", "--profile", str(path), "--variant", variant]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["ratio"] == str(expected) and out["claim_holds"]
    path.write_text(json.dumps({"bogus": 1}))
    assert run(["bound", "--profile", str(path), "--variant", variant]) == EXIT_USAGE
    assert run(["bound", "--profile", str(path), "--variant", "nope"]) == EXIT_USAGE


@pytest.mark.parametrize("suite", ["kernels", "strategies"])
def test_bench(suite, capsys):
    assert run(["bench", "--suite", suite]) == EXIT_OK
    assert capsys.readouterr().out.strip()


def test_bench_svg(tmp_path):
    inst = _gen(tmp_path, "--family", "cubes", "--n", "4")
    sol = tmp_path / "sol.json"
    assert run(["solve", "-i", str(inst), "-o", str(sol)]) == EXIT_OK
    svg = tmp_path / "out.svg"
    assert run(["bench", "--suite", "strategies", "-i", str(inst), "-s", str(sol), "--svg", str(svg)]) == EXIT_OK
    assert "</svg>" in svg.read_text()
    assert run(["bench", "--suite", "strategies", "--svg", str(svg)]) == EXIT_USAGE
