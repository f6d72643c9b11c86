"""命令行测试"""

import json

import numpy as np
import pytest

from multischmidt.cli import ExitCode, PATI_WARNING, main
from multischmidt.exceptions import NumericalAmbiguity
from multischmidt.fileio import read_state_file, read_truth_sidecar, write_state_file
from multischmidt.models import to_pairs
from multischmidt.oracle import random_state
from multischmidt.tensor import product_state


@pytest.fixture
def state_file(tmp_path):
    def write(state, name="state.json"):
        path = tmp_path / name
        write_state_file(str(path), state, name=name)
        return str(path)
    return write


def test_decompose_ghz(state_file, ghz, capsys):
    assert main(["decompose", state_file(ghz)]) == ExitCode.OK
    out = capsys.readouterr().out
    assert "DECOMPOSABLE" in out
    assert "lambda: 0.7071067812, 0.7071067812" in out
    assert "norm=1.0000000000" in out


def test_decompose_biseparable_gives_partial_separability_certificate(state_file, biseparable, capsys):
    assert main(["decompose", state_file(biseparable)]) == ExitCode.NOT_DECOMPOSABLE
    out = capsys.readouterr().out
    assert "NOT DECOMPOSABLE" in out
    assert "partially separable {A,B}|{C}, not completely separable" in out
    assert "[partial-separability]" in out


def test_decompose_json_schema(state_file, ghz, w, capsys):
    assert main(["--json", "decompose", state_file(ghz)]) == ExitCode.OK
    report = json.loads(capsys.readouterr().out)
    assert set(report) == {"verdict", "lambdas", "vectors", "certificate", "m_j"}
    assert report["verdict"] == "decomposable"
    assert report["m_j"] == {"A": 2, "B": 2, "C": 2}
    assert report["certificate"] is None

    assert main(["decompose", "--json", state_file(w, "w.json")]) == ExitCode.NOT_DECOMPOSABLE
    report = json.loads(capsys.readouterr().out)
    assert set(report) == {"verdict", "lambdas", "vectors", "certificate", "m_j"}
    assert report["verdict"] == "not-decomposable"
    assert report["certificate"]["kind"] == "residual"


def test_decompose_rejects_truncated_file(tmp_path, ghz):
    path = tmp_path / "truncated.json"
    path.write_text(json.dumps({"dims": [2, 2, 2], "amps": to_pairs(ghz.amps)})[:-20])
    assert main(["decompose", str(path)]) == ExitCode.INPUT_ERROR


def test_decompose_rejects_wrong_length(tmp_path):
    path = tmp_path / "short.yaml"
    path.write_text("dims: [2, 2]\namps: [[1, 0], [0, 0], [0, 0]]\n")
    assert main(["decompose", str(path)]) == ExitCode.INPUT_ERROR


def test_decompose_rejects_zero_state(tmp_path):
    path = tmp_path / "zero.yaml"
    path.write_text("dims: [2]\namps: [[0, 0], [0, 0]]\n")
    assert main(["decompose", str(path)]) == ExitCode.INPUT_ERROR


@pytest.mark.parametrize("fixture, split, rank", [
    ("biseparable", "0|1,2", 2),
    ("biseparable", "0,1", 1),
    ("plus_zero_zero", "1|0,2", 1),
    ("w", "0|1,2", 2),
])
def test_rank(fixture, split, rank, state_file, request, capsys):
    path = state_file(request.getfixturevalue(fixture))
    assert main(["rank", path, "--split", split]) == ExitCode.OK
    assert f": {rank}\n" in capsys.readouterr().out


def test_rank_rejects_invalid_split(state_file, ghz):
    assert main(["rank", state_file(ghz), "--split", "0|0"]) == ExitCode.INPUT_ERROR


def test_check_pati_mode_warns(state_file, biseparable, capsys):
    assert main(["check", state_file(biseparable), "--mode", "pati"]) == ExitCode.OK
    out = capsys.readouterr().out
    assert "satisfied: true" in out
    assert PATI_WARNING in out


def test_check_all_parties_reports_failing_party(state_file, biseparable, capsys):
    assert main(["check", state_file(biseparable), "--mode", "all"]) == ExitCode.NOT_DECOMPOSABLE
    out = capsys.readouterr().out
    assert "satisfied: false" in out
    assert "failing party C" in out


def test_check_ghz_json(state_file, ghz, capsys):
    assert main(["check", state_file(ghz), "--json"]) == ExitCode.OK
    report = json.loads(capsys.readouterr().out)
    assert report["satisfied"] is True
    assert report["m_j"] == {"A": 2, "B": 2, "C": 2}
    assert report["warning"] is None


def test_check_with_basis_file(state_file, plus_zero_zero, tmp_path):
    hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    basis_file = tmp_path / "bases.json"
    bases = [[to_pairs(row) for row in hadamard]] + [[to_pairs(row) for row in np.eye(2)]] * 2
    basis_file.write_text(json.dumps({"bases": bases}))
    assert main(["check", state_file(plus_zero_zero), "--basis", str(basis_file)]) == ExitCode.OK


def test_check_rejects_non_orthonormal_basis(state_file, ghz, tmp_path):
    basis_file = tmp_path / "bases.json"
    skewed = [to_pairs([1, 0]), to_pairs([1, 1])]
    basis_file.write_text(json.dumps({"bases": [skewed] * 3}))
    assert main(["check", state_file(ghz), "--basis", str(basis_file)]) == ExitCode.INPUT_ERROR


def test_paper_examples(capsys):
    assert main(["paper-examples"]) == ExitCode.OK
    out = capsys.readouterr().out
    for key in ("E1 PASS", "E2 PASS", "E3 PASS", "3/3 PASS"):
        assert key in out


def test_random_round_trips_through_decompose(tmp_path, capsys):
    out_file = str(tmp_path / "random.json")
    args = ["random", "--dims", "2,2,2", "--lambdas", "0.8,0.6", "--seed", "7", "--out", out_file]
    assert main(args) == ExitCode.OK
    truth = read_truth_sidecar(out_file + ".truth.json")
    np.testing.assert_allclose(truth.lambdas, [0.8, 0.6])
    capsys.readouterr()

    assert main(["--json", "decompose", out_file]) == ExitCode.OK
    report = json.loads(capsys.readouterr().out)
    np.testing.assert_allclose(report["lambdas"], [0.8, 0.6], atol=1e-9)


def test_random_is_deterministic(tmp_path):
    first, second = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    for path in (first, second):
        main(["random", "--dims", "3,2", "--lambdas", "1", "--seed", "3", "--out", path])
    assert np.array_equal(read_state_file(first)[0].amps, read_state_file(second)[0].amps)


def test_random_rejects_too_many_terms(tmp_path):
    args = ["random", "--dims", "2", "--lambdas", "0.8,0.6,0.1", "--out", str(tmp_path / "x.json")]
    assert main(args) == ExitCode.INPUT_ERROR


def test_state_file_round_trip_is_exact(state_file):
    x = random_state([2, 3], 12).scaled(1 / 3)
    y, name = read_state_file(state_file(x, "exact.json"))
    assert np.array_equal(x.amps, y.amps)
    assert name == "exact.json"


def test_yaml_state_file(tmp_path, capsys):
    path = tmp_path / "product.yaml"
    path.write_text("name: product\ndims: [2, 2]\namps:\n  - [1, 0]\n  - [0, 0]\n  - [0, 0]\n  - [0, 0]\n")
    assert main(["decompose", str(path)]) == ExitCode.OK
    assert "lambda: 1.0000000000" in capsys.readouterr().out


def test_selftest_small(tmp_path, capsys):
    report = tmp_path / "report.txt"
    assert main(["selftest", "--trials", "3", "--report", str(report)]) == ExitCode.OK
    assert "5/5 PASS" in capsys.readouterr().out
    assert report.exists()


def test_invalid_config_file(tmp_path, ghz, state_file):
    config_file = tmp_path / "config.yaml"
    config_file.write_text("tolerance: 5\n")
    assert main(["--config", str(config_file), "decompose", state_file(ghz)]) == ExitCode.INPUT_ERROR


def test_product_state_decomposes(state_file, capsys):
    x = product_state([[1, 0], [0, 1], [1, 1]])
    assert main(["decompose", state_file(x)]) == ExitCode.OK
    assert "m=1" in capsys.readouterr().out


def test_decompose_indistinguishable_cluster_gives_spectral_certificate(state_file, code_space_state, capsys):
    assert main(["decompose", state_file(code_space_state)]) == ExitCode.NOT_DECOMPOSABLE
    out = capsys.readouterr().out
    assert "NOT DECOMPOSABLE" in out
    assert "[spectral]" in out


def test_numerical_ambiguity_exit_code(state_file, ghz, monkeypatch, capsys):
    def ambiguous(*args, **kwargs):
        raise NumericalAmbiguity("簇内对角化失败")

    monkeypatch.setattr("multischmidt.cli.diagnose_decomposition", ambiguous)
    assert main(["decompose", state_file(ghz)]) == ExitCode.NUMERICAL_AMBIGUITY
    assert "NOT DECOMPOSABLE" not in capsys.readouterr().out
