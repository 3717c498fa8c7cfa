"""CLI: exit codes, report envelope, schema conformance, determinism."""

import json
import math
from importlib import resources

import jsonschema
import pytest

from isonorm.cli import main
from isonorm.isometry import Sector, bump_profile, glue_construct
from isonorm.profile import Profile, save_profile

SCHEMA = json.loads(resources.files("isonorm")
                    .joinpath("schemas/report.schema.json").read_text())


@pytest.fixture
def profiles(tmp_path):
    paths = {}
    for name, p in {
        "euclid": Profile(1, (0.5,)),
        "ellipse": Profile(2, (1.0, 0.2)),
        "bad": Profile(2, (1.0, 1.1)),
        "pinched": Profile(1, (0.75, 1.0, 0.25)),  # (1 + cos t)^2 / 2
        "wobble3": Profile(3, (0.5, 0.02)),
    }.items():
        path = tmp_path / f"{name}.json"
        save_profile(p, path)
        paths[name] = str(path)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    return code, report


# -------------------------------------------------------------- exit codes

def test_validate_ok(capsys, profiles):
    code, rep = run_json(capsys, "validate", "--profile", profiles["euclid"])
    assert code == 0
    assert rep["status"] == "ok"
    assert rep["results"]["min_gap"] == pytest.approx(1.0, abs=1e-8)


def test_validate_invalid_exits_1(capsys, profiles):
    code, rep = run_json(capsys, "validate", "--profile", profiles["bad"])
    assert code == 1
    assert rep["status"] == "failed"
    assert rep["results"]["min_gap"] == pytest.approx(-0.84, abs=1e-8)


def test_validate_marginal_exits_2(capsys, profiles):
    # profile pinches to zero at the antipode: reported, not guessed
    code, rep = run_json(capsys, "validate", "--profile", profiles["pinched"])
    assert code == 2
    assert rep["status"] == "marginal"


def test_usage_error_exits_64(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        main(["tensor", "--model", "d1:3"])  # missing --profile
    assert exc.value.code == 64


def test_missing_file_exits_1(capsys):
    code = main(["validate", "--profile", "/does/not/exist.json"])
    assert code == 1
    assert "error" in capsys.readouterr().err


# ------------------------------------------------------------------- dual

def test_dual_ellipse_oracle(capsys, profiles):
    code, rep = run_json(capsys, "dual", "--profile", profiles["ellipse"],
                         "--grid", "512")
    assert code == 0
    c = rep["results"]["cos_coeffs"]
    assert c[0] == pytest.approx(0.2604166666666667, abs=1e-6)
    assert c[1] == pytest.approx(-0.05208333333333333, abs=1e-6)


# ----------------------------------------------------------------- reports

def test_reports_validate_against_schema(capsys, profiles):
    invocations = [
        ["validate", "--profile", profiles["ellipse"], "--degrees"],
        ["dual", "--profile", profiles["ellipse"]],
        ["foliation", "info", "--model", "cartan3"],
        ["tensor", "--profile", profiles["ellipse"], "--model", "d2:4:2",
         "--t", "0.6"],
        ["sample", "--profile", profiles["ellipse"], "--count", "4"],
    ]
    for argv in invocations:
        _, rep = run_json(capsys, *argv)
        assert rep["tool"] == "isonorm"


def test_determinism(capsys, profiles):
    argv = ["sample", "--profile", profiles["ellipse"], "--model", "d2:4:2",
            "--count", "6", "--seed", "3"]
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert first == second


def test_degrees_is_display_only(capsys, profiles):
    _, plain = run_json(capsys, "validate", "--profile", profiles["ellipse"])
    _, deg = run_json(capsys, "validate", "--profile", profiles["ellipse"],
                      "--degrees")
    assert deg["results"]["argmin"] == plain["results"]["argmin"]
    assert deg["results"]["argmin_degrees"] == pytest.approx(
        math.degrees(plain["results"]["argmin"]))


# ------------------------------------------------------------------ tensor

def test_tensor_ok(capsys, profiles):
    code, rep = run_json(capsys, "tensor", "--profile", profiles["ellipse"],
                         "--model", "d2:4:2", "--t", str(math.pi / 4))
    assert code == 0
    assert rep["results"]["positive_definite"] is True
    assert rep["residuals"]["frame_error"] < 1e-5
    assert rep["results"]["g_rr"] == pytest.approx(2.0, abs=1e-9)


# --------------------------------------------------------------- curvature

def test_curvature_flat_round(capsys, profiles):
    code, rep = run_json(capsys, "curvature", "--profile", profiles["euclid"],
                         "--model", "d1:3", "--samples", "2")
    assert code == 0
    assert rep["results"]["flat"] is True


# ---------------------------------------------------------------- foliation

def test_foliation_info(capsys):
    code, rep = run_json(capsys, "foliation", "info", "--model", "d2:5:2")
    assert code == 0
    res = rep["results"]
    assert res["d"] == 2 and res["n"] == 5 and res["k"] == 2
    assert res["multiplicities"] == [{"k": 0, "m": 2}, {"k": 1, "m": 1}]


# ------------------------------------------------------------------ sample

def test_sample_csv(capsys, profiles):
    code, out = run(capsys, "sample", "--profile", profiles["ellipse"],
                    "--model", "d2:4:2", "--count", "5", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,r,x0,x1,x2,x3"
    assert len(lines) == 6


def test_sample_planar_json(capsys, profiles):
    code, rep = run_json(capsys, "sample", "--profile", profiles["ellipse"],
                         "--count", "3")
    assert code == 0
    assert rep["results"]["columns"] == ["t", "r", "x0", "x1"]
    assert rep["residuals"]["norm_error"] < 1e-12


# ---------------------------------------------------------------- isometry

def test_isometry_solve_check_classify_flow(capsys, profiles, tmp_path):
    triple_path = str(tmp_path / "triple.json")
    code, rep = run_json(capsys, "isometry", "solve",
                         "--profile", profiles["ellipse"],
                         "--theta", "legendre", "--out", triple_path)
    assert code == 0
    assert rep["residuals"]["ode_max"] < 1e-6

    code, rep = run_json(capsys, "isometry", "check", "--triple", triple_path)
    assert code == 0
    assert rep["residuals"]["ode_max"] < 1e-6

    code, rep = run_json(capsys, "isometry", "classify",
                         "--triple", triple_path)
    assert code == 0
    sectors = rep["results"]["sectors"]
    assert len(sectors) == 1 and sectors[0]["label"] == "legendre"


def test_isometry_check_flags_broken_triple(capsys, profiles, tmp_path):
    # h is not the profile the theta map calls for
    bad = {"f": {"d": 2, "kind": "cosine", "cos_coeffs": [1.0, 0.2]},
           "h": {"d": 2, "kind": "cosine", "cos_coeffs": [1.0, 0.3]},
           "theta": {"kind": "identity"}}
    path = tmp_path / "bad_triple.json"
    path.write_text(json.dumps(bad))
    code, rep = run_json(capsys, "isometry", "check", "--triple", str(path))
    assert code == 1
    assert rep["status"] == "failed"


def test_isometry_glue_cli(capsys, tmp_path):
    base = bump_profile(2, humps=[(0.5, 0.4)])
    base_path = tmp_path / "base.json"
    save_profile(base, base_path)
    sectors_path = tmp_path / "sectors.json"
    sectors_path.write_text(json.dumps({"sectors": [
        {"lo": 0.0, "hi": 0.9, "mode": "scale"},
        {"lo": 0.9, "hi": math.pi / 2, "mode": "legendre-scale"},
    ]}))
    out_path = str(tmp_path / "glued.json")
    code, rep = run_json(capsys, "isometry", "glue",
                         "--profile", str(base_path),
                         "--sectors", str(sectors_path), "--out", out_path)
    assert code == 0
    assert rep["residuals"]["band_residual"] < 1e-6

    code, rep = run_json(capsys, "isometry", "check", "--triple", out_path)
    assert code == 0
