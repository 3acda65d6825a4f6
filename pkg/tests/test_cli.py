import json

import pytest

from curveinv.catalog import DIAGRAM_FIXTURES, validate_catalog
from curveinv.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_catalog_is_valid():
    assert validate_catalog()


def test_catalog_command(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    for name in DIAGRAM_FIXTURES:
        assert name in out
    assert "figure8_sphere_param" in out


def test_validate_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", "circle_sphere")
    assert code == 0
    assert "chi=2" in out and "regions=2" in out

    code, out, _ = run(capsys, "validate", "essential_torus_circle")
    assert code == 2
    assert "nontrivial" in out

    bad = tmp_path / "bad.diagram"
    bad.write_text("curve 1+ 1-\nbase 0\n")
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 1


def test_invariant_text(capsys):
    code, out, _ = run(capsys, "invariant", "figure8_sphere")
    assert code == 0
    assert "iq = -1/2*q^(-1/2) + 1/2*q^(1/2)" in out
    assert "rot = 0 (mod 2)" in out
    assert "jplus = 0" in out

    code, out, _ = run(capsys, "invariant", "circle_torus")
    assert code == 0
    assert "jplus: undefined (chi = 0)" in out

    code, out, _ = run(capsys, "invariant", "circle_sphere")
    assert "sjplus = 1/2" in out


def test_invariant_json_matches_text(capsys):
    code, out, _ = run(capsys, "invariant", "figure8_sphere", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["iq"] == "-1/2*q^(-1/2) + 1/2*q^(1/2)"
    assert data["i1"] == 0
    assert data["rotation"] == {"value": 0, "modulus": 2}
    assert data["jplus"] == "0"
    assert data["jminus"] == "-1"
    assert data["sjplus"] == "0"


def test_invariant_base_override(capsys):
    code, out, _ = run(capsys, "invariant", "figure8_sphere", "--base", "2",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["base_region"] == 2
    assert data["jplus"] == "0"   # base independent


def test_invariant_nontrivial_exit(capsys):
    code, _, err = run(capsys, "invariant", "essential_torus_circle")
    assert code == 2


def test_compare(capsys, tmp_path):
    code, out, _ = run(capsys, "compare", "figure8_sphere")
    assert code == 0
    assert out.strip().endswith("PASS")

    code, out, _ = run(capsys, "random", "--crossings", "5", "--genus", "0",
                       "--seed", "42", "-o", str(tmp_path / "r.diagram"))
    assert code == 0
    code, out, _ = run(capsys, "compare", str(tmp_path / "r.diagram"))
    assert code == 0

    code, out, _ = run(capsys, "random", "--crossings", "4", "--genus", "2",
                       "--seed", "7", "-o", str(tmp_path / "g2.diagram"))
    assert code == 0
    code, out, _ = run(capsys, "compare", str(tmp_path / "g2.diagram"))
    assert code == 0


def test_move_birth_and_json(capsys, tmp_path):
    out_path = tmp_path / "moved.diagram"
    code, out, _ = run(capsys, "move", "figure8_sphere",
                       "--site", "birth:0:0.0.500:0.1.500:direct",
                       "-o", str(out_path), "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["delta_n"] == 2
    assert data["delta_jplus"] == "2"
    assert data["rot_before"] == data["rot_after"]
    assert out_path.exists()

    code, out, _ = run(capsys, "move", "circle_sphere",
                       "--site", "birth:0:0.0.250:0.0.750:opposite")
    assert code == 0
    assert "delta jplus = 0" in out


def test_move_triangle(capsys, tmp_path):
    host = tmp_path / "host.diagram"
    code, _, _ = run(capsys, "move", "figure8_sphere",
                     "--site", "birth:0:0.0.500:0.1.500:direct",
                     "-o", str(host))
    assert code == 0
    code, out, _ = run(capsys, "move", str(host), "--site", "triangle:2")
    assert code == 0
    assert "delta jplus = 0" in out


def test_move_site_errors(capsys):
    code, _, err = run(capsys, "move", "figure8_sphere", "--site", "bigon:0")
    assert code == 1
    assert "not a bigon" in err

    code, _, err = run(capsys, "move", "circle_torus",
                       "--site", "birth:1:1.0.250:1.0.750:opposite")
    assert code == 1
    assert "plan" in err.lower()


def test_move_birth_with_plan(capsys, tmp_path):
    code, out, _ = run(capsys, "move", "circle_torus",
                       "--site", "birth:1:1.0.250:1.0.750:opposite:plan=g0~g1*",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["delta_n"] == 2
    assert data["delta_jplus"] is None   # chi = 0


def test_random_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.diagram", tmp_path / "b.diagram"
    run(capsys, "random", "--crossings", "3", "--seed", "9", "-o", str(a))
    run(capsys, "random", "--crossings", "3", "--seed", "9", "-o", str(b))
    assert a.read_text() == b.read_text()

    code, out, _ = run(capsys, "random", "--crossings", "0", "--genus", "0",
                       "--seed", "1")
    assert code == 0
    assert "curve -" in out


def test_numeric_command(capsys):
    code, out, _ = run(capsys, "numeric", "--fixture", "circle_torus",
                       "--q", "0.5,2,3")
    assert code == 0
    assert out.strip().endswith("PASS")

    code, out, _ = run(capsys, "numeric", "--fixture", "latitude",
                       "--grid", "128", "--q", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["pass"] is True
    assert data["i1"]["exact"] == 1


def test_numeric_unknown_fixture(capsys):
    code, _, err = run(capsys, "numeric", "--fixture", "nonsense")
    assert code == 1


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["move", "circle_sphere"])   # missing --site
    assert exc.value.code == 1
