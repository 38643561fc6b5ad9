import json
import subprocess
import sys

import jsonschema
import pytest

from ppgeom.cli import load_schema, main

SCHEMAS = ["error", "roots", "hasse", "homology", "weight", "classify", "tables", "verify",
           "pencil", "pencil_input"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, schema, *argv):
    code, out, _ = run(capsys, "--json", *argv)
    data = json.loads(out)
    jsonschema.validate(data, load_schema(schema))
    return code, data


@pytest.mark.parametrize("name", SCHEMAS)
def test_schemas_are_valid(name):
    schema = load_schema(name)
    jsonschema.Draft202012Validator.check_schema(schema)
    assert schema["version"] == "1"


def test_weight_example(capsys):
    code, out, _ = run(capsys, "weight", "--type", "E6", "--cross", "5", "--lambda", "1,0,3,0,-5,1")
    assert code == 0 and out == "1\n"
    code, data = run_json(capsys, "weight", "weight", "--type", "E6", "--cross", "5",
                          "--lambda", "1,0,3,0,-5,1")
    assert data["geometric_weight"] == 1


def test_rational_weight(capsys):
    code, out, _ = run(capsys, "weight", "--type", "A", "--rank", "2", "--cross", "1", "--lambda", "1/2,0")
    assert code == 0 and "/" in out


def test_roots(capsys):
    code, data = run_json(capsys, "roots", "roots", "--type", "E6")
    assert code == 0
    assert len(data["positive_roots"]) == 36
    assert data["highest_root"] == [1, 2, 3, 2, 1, 2]
    code, out, _ = run(capsys, "roots", "--type", "G2")
    assert "highest root: (3,2)" in out


def test_hasse_projective_chain(capsys):
    code, data = run_json(capsys, "hasse", "hasse", "--type", "A", "--rank", "4", "--cross", "4", "--depth", "2")
    assert [v["weight"] for v in data["vertices"]] == [[0, 0, 0, 1], [0, 0, 1, -1], [0, 1, -1, 0]]
    assert [e["node"] for e in data["edges"]] == [4, 3]


def test_hasse_e6(capsys):
    code, data = run_json(capsys, "hasse", "hasse", "--type", "E6", "--cross", "5", "--depth", "3")
    assert [e["node"] for e in data["edges"][:3]] == [5, 4, 3]


def test_hasse_diagrams_ascii(capsys, monkeypatch):
    monkeypatch.setenv("PPGEOM_ASCII", "1")
    code, out, _ = run(capsys, "hasse", "--type", "B3", "--cross", "1", "--depth", "1", "--diagrams")
    assert code == 0
    out.encode("ascii")


def test_homology_projective(capsys):
    code, data = run_json(capsys, "homology", "homology", "--type", "A", "--rank", "5", "--cross", "5",
                          "--rep", "adjoint", "--degree", "2")
    assert [c["weight"] for c in data["components"]] == [[1, 0, 1, 1, -4]]


def test_homology_weight_rep(capsys):
    code, data = run_json(capsys, "homology", "homology", "--type", "A4", "--cross", "4",
                          "--rep", "2,0,0,0", "--degree", "1")
    assert code == 0 and len(data["components"]) == 1


def test_classify(capsys):
    code, data = run_json(capsys, "classify", "classify", "--max-rank", "9")
    assert code == 0
    assert sorted(data["families"]) == ["A", "BD", "C", "D", "E7"]
    assert sum(len(v) for v in data["families"].values()) == 34
    code, out, _ = run(capsys, "classify", "--max-rank", "7")
    assert out.startswith("| family |")


@pytest.mark.parametrize("which", ["appendix", "classification", "Ud"])
def test_tables(capsys, which):
    code, data = run_json(capsys, "tables", "tables", "--which", which, "--max-rank", "7")
    assert code == 0
    if which == "appendix":
        assert set(data["tables"]) == {"rspace", "real", "W", "Wd", "Ud"}
    code, out, _ = run(capsys, "tables", "--which", which, "--max-rank", "7")
    assert "|---|" in out


def test_verify_small(capsys):
    code, data = run_json(capsys, "verify", "verify", "--samples", "10", "--max-n", "1")
    assert code == 0 and data["passed"]
    ids = {s["id"] for s in data["suites"]}
    assert {"jacobi n=1", "bracket-table n=1", "quaternionic-bracket"} <= ids


def write(tmp_path, obj):
    path = tmp_path / "pencil.json"
    path.write_text(json.dumps(obj))
    jsonschema.validate(obj, load_schema("pencil_input"))
    return str(path)


def test_pencil_real(capsys, tmp_path):
    path = write(tmp_path, {"r": 1, "n": 3, "h": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                            "hbar": [[4, 0, 0], [0, 1, 0], [0, 0, 2]]})
    code, data = run_json(capsys, "pencil", "pencil", "--input", path)
    assert code == 0
    assert data["pfaffian_degree"] == 3 and data["adjugate_degree"] == 2
    assert data["eigenvalues"] == [1.0, 2.0, 4.0]
    assert data["pfaffian_polynomial"] == [8.0, -14.0, 7.0, -1.0]
    assert data["interlacing"]["interlaced"]


def test_pencil_hermitian(capsys, tmp_path):
    path = write(tmp_path, {"r": 2, "n": 2, "h": [[1, 0], [0, 1]],
                            "hbar": [[2, [0, 1]], [[0, -1], 3]]})
    code, data = run_json(capsys, "pencil", "pencil", "--input", path)
    assert code == 0 and data["multiplicities_divisible"]
    assert data["interlacing"] is None


def test_pencil_bad_input(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"r": 1, "n": 2, "h": [[1, 2], [0, 1]], "hbar": [[1, 0], [0, 1]]}))
    code, data = run_json(capsys, "error", "pencil", "--input", str(path))
    assert code == 1 and data["error"]["kind"] == "validation"
    code, _, err = run(capsys, "pencil", "--input", str(tmp_path / "missing.json"))
    assert code == 1 and "error" in err


def test_pencil_degenerate(capsys, tmp_path):
    path = write(tmp_path, {"r": 1, "n": 2, "h": [[1, 0], [0, 0]], "hbar": [[1, 0], [0, 1]]})
    code, data = run_json(capsys, "error", "pencil", "--input", path)
    assert code == 1 and "degenerate" in data["error"]["message"]


def test_pencil_failed_checks(capsys, tmp_path, monkeypatch):
    import ppgeom.pencil
    monkeypatch.setattr(ppgeom.pencil, "multiplicity_check", lambda P: False)
    path = write(tmp_path, {"r": 2, "n": 1, "h": [[1]], "hbar": [[2]]})
    code, out, _ = run(capsys, "--json", "pencil", "--input", path)
    data = json.loads(out)
    assert code == 2 and data["error"]["kind"] == "verification"
    jsonschema.validate(data, load_schema("error"))
    assert data["report"]["multiplicities_divisible"] is False


@pytest.mark.parametrize("argv", [
    ["weight", "--type", "E9", "--cross", "1", "--lambda", "1"],
    ["weight", "--type", "E6", "--cross", "5", "--lambda", "1,2"],
    ["weight", "--type", "E6", "--cross", "x", "--lambda", "1,0,0,0,0,0"],
    ["homology", "--type", "A3", "--cross", "1", "--rep", "-1,0,0"],
    ["hasse", "--type", "A3", "--cross", "1", "--depth", "-1"],
    ["weight", "--type", "E6"],
    ["nosuchcommand"],
])
def test_validation_errors(capsys, argv):
    code, data = run_json(capsys, "error", *argv)
    assert code == 1 and data["error"]["kind"] == "validation"


def test_subcommand_json_flag(capsys):
    code, out, _ = run(capsys, "weight", "--json", "--type", "E6", "--cross", "5", "--lambda", "1,0,3,0,-5,1")
    assert json.loads(out)["geometric_weight"] == 1


def test_help_shows_node_order(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["weight", "--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "E7:" in out and "G2:" in out


@pytest.mark.parametrize("argv", [
    ["--json", "classify", "--max-rank", "9"],
    ["hasse", "--type", "E6", "--cross", "5", "--depth", "3"],
    ["--json", "tables", "--which", "appendix", "--max-rank", "6"],
])
def test_determinism(argv):
    cmd = [sys.executable, "-m", "ppgeom.cli", *argv]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first
