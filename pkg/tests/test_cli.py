"""End-to-end tests of the command line."""

import json
from fractions import Fraction

import pytest

from poisson_pairs.catalog import diagonal_extension_pencil
from poisson_pairs.exterior import DiffForm
from poisson_pairs.formats import dump_model, pencil_to_model
from poisson_pairs.liealg import LieAlgebra
from poisson_pairs.main import main
from poisson_pairs.models import ExitCode
from poisson_pairs.pencil import Pencil


@pytest.fixture(autouse=True)
def isolated(monkeypatch, tmp_path):
    for name in ("POISSON_PAIRS_SEED", "POISSON_PAIRS_SEARCH_BUDGET", "POISSON_PAIRS_WORKERS",
                 "POISSON_PAIRS_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("HOME", str(tmp_path))
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def diagonal_pencil_file(tmp_path):
    construction = diagonal_extension_pencil()
    path = tmp_path / "diagonal.json"
    path.write_text(dump_model(pencil_to_model(construction.pencil, construction.base_point)))
    return path


def test_construct_then_check(tmp_path, capsys):
    out = tmp_path / "truncated5.json"
    assert main(["construct", "truncated", "--m", "5", "-o", str(out)]) == 0
    assert out.exists()
    capsys.readouterr()
    assert main(["--json", "check", str(out)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "ok"
    assert report["unimodular"] is False
    assert report["modular_vector"]["text"] == "10*d/dx1"


def test_construct_prints_document(capsys):
    assert main(["--json", "construct", "affine", "--n", "2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["document"]["dim"] == 6


def test_construct_needs_its_parameters(capsys):
    assert main(["construct", "truncated"]) == 1
    assert "--m" in capsys.readouterr().err


def test_jacobi_violation_fails(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "dim": 3,
        "brackets": [{"i": 1, "j": 2, "coeffs": {"2": "1"}}, {"i": 2, "j": 3, "coeffs": {"1": "1"}}],
    }))
    assert main(["--json", "check", str(path)]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "failed"
    assert report["violations"]
    assert report["exit_name"] == "FAILURE"


def test_malformed_file_is_a_parse_error(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{ not json")
    assert main(["check", str(path)]) == 2
    assert "broken.json: line 1" in capsys.readouterr().err


def test_flatness_verdicts(diagonal_pencil_file, capsys):
    assert main(["flatness", str(diagonal_pencil_file)]) == 0
    assert "flatness: flat" in capsys.readouterr().out
    assert main(["flatness", str(diagonal_pencil_file), "--shift", "1"]) == 10


def test_flatness_json_fields(diagonal_pencil_file, capsys):
    assert main(["--json", "flatness", str(diagonal_pencil_file), "--point", "0,0,1,0,1"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "flat"
    assert report["point_source"] == "command line"
    assert report["point"] == ["0", "0", "1", "0", "1"]


def test_flatness_in_even_dimension_is_inapplicable(tmp_path):
    L = LieAlgebra(4, {(0, 1): {1: 1}})
    pencil = Pencil.linear_pair(L, DiffForm(4, 2, {(2, 3): Fraction(1)}))
    path = tmp_path / "even.json"
    path.write_text(dump_model(pencil_to_model(pencil)))
    assert main(["flatness", str(path)]) == 20


def test_genericity_of_a_couple(tmp_path, capsys):
    out = tmp_path / "truncated5.json"
    assert main(["construct", "truncated", "--m", "5", "-o", str(out)]) == 0
    capsys.readouterr()
    assert main(["--json", "genericity", str(out), "--alpha", "e5", "--beta", "e5+e4"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "generic"


def test_genericity_of_a_pencil(diagonal_pencil_file):
    assert main(["genericity", str(diagonal_pencil_file)]) == 0
    assert main(["genericity", str(diagonal_pencil_file), "--point", "0,0,0,0,0"]) == 20


def test_verify_one_case(capsys):
    assert main(["--json", "verify", "--case", "character-extension"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["summary"] == "1/1 cases passed"


@pytest.mark.parametrize("argv", [
    ["verify", "--case", "no-such-case"],
    [],
    ["flatness"],
    ["--workers", "0", "verify", "--case", "character-extension"],
])
def test_usage_errors(argv):
    assert main(argv) == 1


def test_classify_lie(tmp_path, capsys):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    first.write_text(json.dumps({"dim": 3, "brackets": [
        {"i": 1, "j": 2, "coeffs": {"2": "1"}}, {"i": 1, "j": 3, "coeffs": {"2": "1", "3": "2"}}]}))
    second.write_text(json.dumps({"dim": 3, "brackets": [
        {"i": 1, "j": 2, "coeffs": {"3": "1"}}, {"i": 1, "j": 3, "coeffs": {"2": "1"}}]}))
    assert main(["--json", "classify3", "lie", str(first), str(second)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "non_flat"
    assert report["P"] == "x2^2 - x2*x3 - 2*x3^2"


@pytest.mark.parametrize("command", ["verify-paper", "verify"])
def test_verify_paper_and_its_alias(command, capsys):
    assert main(["--json", command, "--case", "character-extension"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["summary"] == "1/1 cases passed"


def test_usage_is_an_alias_of_failure():
    assert ExitCode.USAGE is ExitCode.FAILURE
    assert ExitCode(1).name == "FAILURE"
