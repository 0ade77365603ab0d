import json

import numpy as np
import pytest

from autgrp.cli import EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, EXIT_STRUCTURE, main
from autgrp.errors import InputError
from autgrp.io import matrix_from_json, matrix_to_json, read_matrix

from conftest import EXAMPLE_JORDAN, EXAMPLE_JORDAN_SOL, EXAMPLE_SURFACE, as_basis


def _write(tmp_path, name, M):
    path = tmp_path / name
    path.write_text(json.dumps(matrix_to_json(M)))
    return str(path)


def test_matrix_json_round_trip_is_bit_exact(rng):
    for M in (rng.standard_normal((3, 4)),
              rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)),
              np.array([[0.1, 1e-300, -5e307]])):
        text = json.dumps(matrix_to_json(M))
        back = matrix_from_json(json.loads(text))
        assert back.dtype == M.dtype
        assert np.array_equal(back, M)


def test_complex_entries_are_pairs():
    obj = matrix_to_json(np.array([[1 + 2j]]))
    assert obj == {"rows": 1, "cols": 1, "field": "complex", "data": [[[1.0, 2.0]]]}


@pytest.mark.parametrize("obj", [
    [],
    {"rows": 1, "cols": 1},
    {"rows": 2, "cols": 1, "data": [[1.0]]},
    {"rows": 1, "cols": 1, "data": [["x"]]},
    {"rows": 1, "cols": 1, "field": "quaternion", "data": [[1.0]]},
    {"rows": 1, "cols": 1, "field": "real", "data": [[[1.0, 2.0]]]},
])
def test_malformed_matrix_json(obj):
    with pytest.raises(InputError):
        matrix_from_json(obj)


def test_read_csv(tmp_path):
    path = tmp_path / "J.csv"
    path.write_text("1,2\n3,4\n")
    np.testing.assert_array_equal(read_matrix(str(path)), [[1, 2], [3, 4]])
    path.write_text("1,2\n3\n")
    with pytest.raises(InputError):
        read_matrix(str(path))


def test_cli_dim_identity(tmp_path, capsys):
    path = _write(tmp_path, "I4.json", np.eye(4))
    assert main(["dim", "--input", path, "--involution", "T"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "6"


def test_cli_dim_report(tmp_path, capsys):
    path = _write(tmp_path, "J.json", np.diag([1.0, 0.0]))
    assert main(["dim", "-i", path, "--report"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["agrees"] and report["oracle"] == 2


def test_cli_classify_zero(tmp_path, capsys):
    path = _write(tmp_path, "zero2.json", np.zeros((2, 2)))
    assert main(["classify", "--input", path]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["case"] == 9 and out["dim"] == 4 and out["sol_dim"] == 4


def test_cli_basis_then_verify(tmp_path, capsys):
    from autgrp.solution_basis import span_equal

    path = _write(tmp_path, "J.json", EXAMPLE_JORDAN)
    out = str(tmp_path / "basis.json")
    assert main(["basis", "-i", path, "-o", out]) == EXIT_OK
    data = json.loads(open(out).read())
    assert data["dim"] == 2 and data["dim_report"]["agrees"]
    mats = [matrix_from_json(e) for e in data["elements"]]
    assert span_equal(as_basis(mats, EXAMPLE_JORDAN), as_basis(EXAMPLE_JORDAN_SOL, EXAMPLE_JORDAN))
    assert main(["verify", "-i", path, "--basis", out]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["passed"]


def test_cli_verify_detects_tampering(tmp_path, capsys):
    path = _write(tmp_path, "J.json", EXAMPLE_JORDAN)
    out = str(tmp_path / "basis.json")
    main(["basis", "-i", path, "-o", out])
    data = json.loads(open(out).read())
    data["elements"][0]["data"][0][0] += 1.0
    (tmp_path / "bad.json").write_text(json.dumps(data))
    assert main(["verify", "-i", path, "--basis", str(tmp_path / "bad.json")]) == EXIT_MISMATCH


def test_cli_basis_is_reproducible(tmp_path):
    path = _write(tmp_path, "J.json", EXAMPLE_SURFACE)
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    main(["basis", "-i", path, "-o", a, "--space", "cosol"])
    main(["basis", "-i", path, "-o", b, "--space", "cosol"])
    assert open(a, "rb").read() == open(b, "rb").read()


def test_cli_structure(tmp_path, capsys):
    path = _write(tmp_path, "J.json", np.eye(3, k=1))
    assert main(["structure", "-i", path]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["blocks"] == [{"kind": "L", "s": 1}]


def test_cli_sample_and_project(tmp_path):
    path = _write(tmp_path, "J.json", EXAMPLE_SURFACE)
    s1, s2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
    for target in (s1, s2):
        assert main(["sample", "-i", path, "-N", "5", "--seed", "3", "-o", str(target)]) == EXIT_OK
    assert s1.read_bytes() == s2.read_bytes()
    assert s1.read_text().splitlines()[0].startswith("g11,g12")
    cloud, script = tmp_path / "c.csv", tmp_path / "c.gp"
    assert main(["project", "-i", path, "--mode", "surface-grid", "--grid", "4",
                 "-o", str(cloud), "--gnuplot", str(script)]) == EXIT_OK
    assert len(cloud.read_text().splitlines()) == 17
    assert "splot" in script.read_text()
    ply = tmp_path / "c.ply"
    assert main(["project", "-i", path, "-N", "3", "--format", "ply", "-o", str(ply)]) == EXIT_OK
    assert "element vertex 3" in ply.read_text()


def test_cli_input_errors(tmp_path, capsys):
    assert main(["dim", "-i", str(tmp_path / "missing.json")]) == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["dim", "-i", str(bad)]) == EXIT_INPUT
    rect = _write(tmp_path, "rect.json", np.zeros((2, 3)))
    assert main(["dim", "-i", rect]) == EXIT_INPUT
    path = _write(tmp_path, "I3.json", np.eye(3))
    assert main(["project", "-i", path, "--mode", "surface-grid"]) == EXIT_INPUT
    assert "input error" in capsys.readouterr().err


def test_cli_structure_error_exit(tmp_path, monkeypatch, capsys):
    from autgrp import cli
    from autgrp.errors import StructureError

    def boom(*args, **kwargs):
        raise StructureError("forced", "test", 1e-9)

    monkeypatch.setattr(cli, "kronecker_structure", boom)
    path = _write(tmp_path, "J.json", np.eye(2))
    assert main(["structure", "-i", path]) == EXIT_STRUCTURE
    assert "stage=test" in capsys.readouterr().err


def test_cli_rejects_bad_tolerance(tmp_path):
    path = _write(tmp_path, "J.json", np.eye(2))
    with pytest.raises(SystemExit):
        main(["dim", "-i", path, "--tol", "-1"])


def test_env_tolerance_override(tmp_path, monkeypatch, capsys):
    from autgrp import default_tol

    monkeypatch.setenv("AUTGRP_TOL", "1e-7")
    assert default_tol() == 1e-7
    path = _write(tmp_path, "J.json", np.eye(2))
    assert main(["dim", "-i", path]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "1"
