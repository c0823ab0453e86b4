import json

import pytest

from plrot.cli import main
from plrot.localrotation import LocalRotation, verify
from plrot.plmap import PLMap


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_alpha_golden(capsys):
    code, out, _ = run(capsys, "alpha", "--p", "1", "--q", "1")
    assert code == 0
    assert "1.61803398875" in out
    assert "alpha^2 = 1 alpha + 1" in out


def test_alpha_json_schema(capsys):
    code, out, _ = run(capsys, "alpha", "--p", "2", "--q", "1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == 1
    assert data["discriminant"] == 8
    assert data["cf"]["period"] == [2]


def test_alpha_usage_error(capsys):
    code, _, err = run(capsys, "alpha", "--p", "1", "--q", "0")
    assert code == 2
    assert "error" in err


def test_bieri_strebel_check_and_realize(capsys):
    code, out, _ = run(
        capsys, "bieri-strebel", "check", "--p", "1", "--q", "1",
        "--a", "0", "--c", "1", "--a2", "0", "--c2", "0,1",
    )
    assert code == 0
    code, out, _ = run(
        capsys, "bieri-strebel", "realize", "--p", "1", "--q", "1",
        "--a", "0", "--c", "1", "--a2", "0", "--c2", "0,1", "--json",
    )
    assert code == 0
    data = json.loads(out)
    assert data["realizable"]
    f = PLMap.from_json(data["map"])
    assert float(f.evaluate(f.right)) == pytest.approx(1.6180339887, abs=1e-9)


def test_bieri_strebel_rejection_exit_code(capsys):
    code, _, _ = run(
        capsys, "bieri-strebel", "check", "--p", "2", "--q", "1",
        "--a", "0", "--c", "1", "--a2", "0", "--c2", "2",
    )
    assert code == 1


def test_bieri_strebel_bad_element_syntax(capsys):
    code, _, err = run(
        capsys, "bieri-strebel", "check", "--p", "1", "--q", "1",
        "--a", "zebra", "--c", "1", "--a2", "0", "--c2", "1",
    )
    assert code == 2


def test_local_rotation_pipeline(capsys, tmp_path):
    code, out, _ = run(capsys, "local-rotation", "build", "--p", "1", "--q", "1", "--json")
    assert code == 0
    payload = json.loads(out)
    L = LocalRotation.from_json(payload["local_rotation"])
    assert verify(L).all_ok
    path = tmp_path / "lr.json"
    path.write_text(out)
    code, out2, _ = run(capsys, "local-rotation", "verify", "--in", str(path))
    assert code == 0
    assert "4/4" in out2


def test_local_rotation_verify_bad_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "local-rotation", "verify", "--in", str(path))
    assert code == 2


def test_rot_number_cf_from_build(capsys):
    code, out, _ = run(
        capsys, "rot-number", "--p", "1", "--q", "1", "--method", "cf",
        "--depth", "6", "--json",
    )
    assert code == 0
    data = json.loads(out)
    assert data["digits"] == [0, 2, 1, 1, 1, 1]


def test_rot_number_orbit_csv(capsys, tmp_path):
    path = tmp_path / "orbit.csv"
    code, out, _ = run(
        capsys, "rot-number", "--p", "1", "--q", "1", "--method", "orbit",
        "--n", "200", "--out", str(path),
    )
    assert code == 0
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "n,Fn0"
    assert len(lines) == 201


def test_rot_number_rejects_non_homeomorphism(capsys, tmp_path):
    path = tmp_path / "bad_map.json"
    path.write_text(json.dumps({"pieces": "nonsense"}))
    code, _, err = run(capsys, "rot-number", "--in", str(path))
    assert code == 2
    assert "error" in err


def test_cf_surd(capsys):
    code, out, _ = run(capsys, "cf", "--surd", "0,1,2", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["preperiod"] == [1] and data["period"] == [2]
    assert data["bound_M"] == 2


def test_cf_with_witness(capsys):
    code, out, _ = run(
        capsys, "cf", "--p", "1", "--q", "1", "--qmax", "100", "--json"
    )
    assert code == 0
    data = json.loads(out)
    assert 0.44 < data["witness"]["bound_approx"] < 0.45


def test_cf_requires_input(capsys):
    code, _, err = run(capsys, "cf")
    assert code == 2


def test_smooth_verify(capsys):
    code, out, _ = run(capsys, "smooth", "verify", "--p", "1", "--q", "1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["report"]["passed"]
    assert data["jump_exponent_total"] == 0


def test_smooth_verify_perturbed_fails(capsys):
    code, out, _ = run(
        capsys, "smooth", "verify", "--p", "1", "--q", "1", "--sigma", "1.01"
    )
    assert code == 1
