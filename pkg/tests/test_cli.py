import json

import numpy as np
import pytest

from orthogate.cli import main
from orthogate.gates import catalog, gate_to_dict


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, json.loads(out), err


def _vec(pairs):
    return np.array([re + 1j * im for re, im in pairs])


def test_check_cnot_symmetric(capsys):
    code, doc, _ = run(capsys, "check", "--gate", "cnot")
    assert code == 0
    assert doc["command"] == "check" and doc["gate_label"] == "cnot" and doc["N"] == 2
    assert doc["symmetry"]["symmetric"] and doc["orthogonality"]["holds"]
    assert list(doc)[:5] == ["command", "tool_version", "gate_label", "N", "tol"]


def test_check_controlled_pauli_reports_witness(capsys):
    code, doc, _ = run(capsys, "check", "--gate", "controlled-pauli")
    assert code == 3
    assert doc["symmetry"]["witness"]["indices"] == [1, 2, 1, 3]
    assert doc["commuting"]["witness"] == [1, 2, 1, 3]


def test_check_non_unitary_file(tmp_path, capsys):
    d = gate_to_dict(catalog("cnot"))
    d["unitaries"][1] = [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d))
    code, doc, err = run(capsys, "check", "--file", str(path))
    assert code == 1
    assert doc["error"]["kind"] == "input-error"
    assert "non-unitary" in doc["error"]["message"]
    assert doc["error"]["file"] == str(path)
    assert str(path) in err


def test_check_parse_error_has_position(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "N": 2,\n  "unitaries": [,]\n}')
    code, doc, _ = run(capsys, "check", "--file", str(path))
    assert code == 1
    assert doc["error"]["line"] == 3
    assert doc["error"]["column"] >= 1


def test_missing_file(tmp_path, capsys):
    code, doc, _ = run(capsys, "check", "--file", str(tmp_path / "nope.json"))
    assert code == 1 and "cannot read" in doc["error"]["message"]


def test_no_gate_source(capsys):
    code, doc, _ = run(capsys, "check")
    assert code == 1


def test_unknown_gate(capsys):
    code, doc, _ = run(capsys, "check", "--gate", "toffoli")
    assert code == 1 and "unknown gate" in doc["error"]["message"]


def test_simulate_cprime_reverse_all(capsys):
    code, doc, _ = run(capsys, "simulate", "--gate", "cprime", "--reverse", "--all")
    assert code == 0
    assert doc["direction"] == "reverse"
    assert [t["decoded"] for t in doc["transcripts"]] == [1, 2, 3, 4]
    assert doc["gram"]["identity"]
    G = np.array([[_vec([c])[0] for c in row] for row in doc["gram"]["matrix"]])
    np.testing.assert_allclose(G, np.eye(4), atol=1e-12)


def test_simulate_cnot_forward(capsys):
    code, doc, _ = run(capsys, "simulate", "--gate", "cnot", "--forward", "-m", "1")
    assert code == 0
    assert doc["transcripts"][0]["decoded"] == 1


def test_simulate_forward_all_gram(capsys):
    code, doc, _ = run(capsys, "simulate", "--gate", "shift", "--n", "4", "--all")
    assert code == 0 and doc["gram"]["identity"]


def test_simulate_reverse_with_eta(capsys):
    code, doc, _ = run(capsys, "simulate", "--gate", "shift", "--n", "3", "--reverse", "--all", "--eta", "0.1,0.2,0.3")
    assert code == 0
    assert doc["transcripts"][0]["eta"] == [0.1, 0.2, 0.3]
    assert doc["gram"]["identity"]


def test_simulate_controlled_pauli_reverse_unavailable(capsys):
    code, doc, _ = run(capsys, "simulate", "--gate", "controlled-pauli", "--reverse", "-m", "1")
    assert code == 3
    assert doc["error"]["kind"] == "protocol-unavailable"


def test_bad_eta(capsys):
    code, doc, _ = run(capsys, "simulate", "--gate", "cnot", "--reverse", "--eta", "a,b")
    assert code == 1


@pytest.mark.parametrize(
    "argv, expected",
    [(["--gate", "controlled-pauli"], 2), (["--gate", "shift", "--n", "4"], 4), (["--gate", "cnot"], 2)],
)
def test_capacity(capsys, argv, expected):
    code, doc, _ = run(capsys, "capacity", *argv)
    assert code == 0
    cap = doc["capacity"]
    assert cap["N_B"] == expected
    assert "not established" in cap["scope"]
    assert cap["certificate"]["decoded"] == cap["certificate"]["messages"]


def test_construct_cprime(capsys):
    code, doc, _ = run(capsys, "construct", "--gate", "cprime")
    assert code == 0
    np.testing.assert_allclose(_vec(doc["reference"]), np.full(4, 0.5), atol=1e-12)
    assert doc["orthogonality"]["holds"]


def test_construct_random_then_check(tmp_path, capsys):
    out = tmp_path / "g.json"
    code, doc, _ = run(capsys, "construct", "--random-symmetric", "--n", "5", "--seed", "7", "--out", str(out))
    assert code == 0 and doc["written"] == str(out)
    code, doc, _ = run(capsys, "check", "--file", str(out))
    assert code == 0 and doc["symmetry"]["symmetric"] and doc["orthogonality"]["holds"]


def test_construct_random_needs_n(capsys):
    code, _, _ = run(capsys, "construct", "--random-symmetric")
    assert code == 1


def test_construct_controlled_pauli(capsys):
    code, doc, _ = run(capsys, "construct", "--gate", "controlled-pauli")
    assert code == 3 and doc["error"]["kind"] == "asymmetric"


def test_construct_with_gamma(capsys):
    code, doc, _ = run(capsys, "construct", "--gate", "shift", "--n", "3", "--gamma", "0,1,2")
    assert code == 0 and doc["gamma"] == [0.0, 1.0, 2.0]


def test_catalog_lists_gates(capsys):
    code, doc, _ = run(capsys, "catalog")
    assert code == 0
    assert [g["name"] for g in doc["gates"]] == ["cnot", "controlled-u", "controlled-pauli", "cprime", "shift", "shifted-u"]


def test_controlled_u_flags(capsys):
    code, doc, _ = run(capsys, "check", "--gate", "controlled-u", "--alpha", "0.4", "--b", "0.6+0.8j")
    assert code == 0 and doc["symmetry"]["symmetric"]


def test_tol_precedence(monkeypatch, capsys):
    monkeypatch.setenv("ORTHOGATE_TOL", "1e-7")
    _, doc, _ = run(capsys, "check", "--gate", "cnot")
    assert doc["tol"] == 1e-7
    _, doc, _ = run(capsys, "check", "--gate", "cnot", "--tol", "1e-6")
    assert doc["tol"] == 1e-6
    monkeypatch.setenv("ORTHOGATE_TOL", "oops")
    code, _, _ = run(capsys, "check", "--gate", "cnot")
    assert code == 1


def test_default_tol(monkeypatch, capsys):
    monkeypatch.delenv("ORTHOGATE_TOL", raising=False)
    _, doc, _ = run(capsys, "check", "--gate", "cnot")
    assert doc["tol"] == 1e-9


def test_verbose_goes_to_stderr(capsys):
    code, doc, err = run(capsys, "check", "--gate", "cnot", "--verbose")
    assert "cnot: symmetric" in err


def test_repeat_runs_identical(capsys):
    main(["capacity", "--gate", "shifted-u", "--n", "4", "--seed", "3"])
    first = capsys.readouterr().out
    main(["capacity", "--gate", "shifted-u", "--n", "4", "--seed", "3"])
    assert capsys.readouterr().out == first
