import json
import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

SRC = str(Path(__file__).resolve().parents[1] / "src")


def run_cli(args, stdin_text=None):
    env = dict(os.environ)
    env["PYTHONPATH"] = SRC + os.pathsep + env.get("PYTHONPATH", "")
    proc = subprocess.run(
        [sys.executable, "-m", "seppack.cli", *args],
        input=stdin_text,
        capture_output=True,
        text=True,
        env=env,
    )
    return proc


BALL2 = json.dumps({"dim": 2, "kind": "ball", "params": {}})
HEX3 = json.dumps(
    {
        "body": {"dim": 2, "kind": "ball", "params": {}},
        "centers": [[0, 0], [2, 0], [1, math.sqrt(3)]],
    }
)


def test_grid_contacts_pipeline(tmp_path):
    body_path = tmp_path / "ball2.json"
    body_path.write_text(BALL2)
    grid = run_cli(["grid", "--body", str(body_path), "--k", "10"])
    assert grid.returncode == 0
    contacts = run_cli(["contacts"], stdin_text=grid.stdout)
    assert contacts.returncode == 0
    report = json.loads(contacts.stdout)
    assert report["result"]["contact_number"] == 180
    assert report["result"]["max_degree"] == 4


def test_example5d_conditions_pipeline():
    gen = run_cli(["example-5d"])
    assert gen.returncode == 0
    cond = run_cli(["conditions", "--which", "OpenLin"], stdin_text=gen.stdout)
    assert cond.returncode == 0
    assert json.loads(cond.stdout)["result"]["holds"] is True


def test_certify_hex_inconclusive(tmp_path):
    path = tmp_path / "hex3.json"
    path.write_text(HEX3)
    proc = run_cli(["certify", "--packing", str(path), "--n-random", "64"])
    assert proc.returncode == 2
    assert json.loads(proc.stdout)["result"]["status"] == "inconclusive"


def test_check_packing_exit_codes(tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"body": json.loads(BALL2), "centers": [[0, 0], [2, 0]]}))
    assert run_cli(["check-packing", "--packing", str(good)]).returncode == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"body": json.loads(BALL2), "centers": [[0, 0], [1, 0]]}))
    assert run_cli(["check-packing", "--packing", str(bad)]).returncode == 1


def test_malformed_json_exit_3(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"body": [,]}')
    proc = run_cli(["contacts", "--packing", str(path)])
    assert proc.returncode == 3
    assert "line 1" in proc.stderr and "column" in proc.stderr


def test_unknown_verb_exit_3():
    assert run_cli(["frobnicate"]).returncode == 3


def test_unknown_body_kind_exit_3(tmp_path):
    path = tmp_path / "weird.json"
    path.write_text(json.dumps({"dim": 2, "kind": "torus", "params": {}}))
    proc = run_cli(["iq", "--body", str(path)])
    assert proc.returncode == 3
    assert "torus" in proc.stderr


def test_out_flag_writes_file(tmp_path):
    target = tmp_path / "report.json"
    proc = run_cli(["bounds", "--d", "3", "--out", str(target)])
    assert proc.returncode == 0 and proc.stdout == ""
    report = json.loads(target.read_text())
    assert report["result"]["hadwiger"]["lower"] == 6


def test_spiky_lambda_pipeline(tmp_path):
    spiky = run_cli(["spiky", "--epsilon", "0.05"])
    assert spiky.returncode == 0
    body = json.loads(spiky.stdout)
    assert body["kind"] == "smoothed-polytope"
    path = tmp_path / "spiky.json"
    path.write_text(spiky.stdout)
    rep = run_cli(["lambda-sep", "--body", str(path), "--samples", "512"])
    assert rep.returncode == 0
    assert json.loads(rep.stdout)["result"]["value"] > 2.0


def test_bounds_verb():
    proc = run_cli(["bounds", "--d", "2", "--n", "100"])
    assert proc.returncode == 0
    result = json.loads(proc.stdout)["result"]
    assert result["hadwiger"]["upper_general"] == 8
    assert result["planar"] == pytest.approx(197.7844, abs=1e-4)


def test_search_exit_codes(tmp_path):
    path = tmp_path / "ball2.json"
    path.write_text(BALL2)
    ok = run_cli(["search", "--body", str(path), "--target", "4", "--iterations", "8000"])
    assert ok.returncode == 0
    fail = run_cli(
        ["search", "--body", str(path), "--target", "5", "--iterations", "2000", "--restarts", "1"]
    )
    assert fail.returncode == 1


def test_iq_verb(tmp_path):
    path = tmp_path / "ball2.json"
    path.write_text(BALL2)
    proc = run_cli(["iq", "--body", str(path)])
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["value"] == pytest.approx(4 * math.pi)


def test_iq_union_verb(tmp_path):
    grid = run_cli(["grid", "--body", "/dev/stdin", "--k", "2"], stdin_text=BALL2)
    path = tmp_path / "grid.json"
    path.write_text(grid.stdout)
    proc = run_cli(["iq", "--packing", str(path), "--samples", "200000"])
    assert proc.returncode == 0
    result = json.loads(proc.stdout)["result"]
    assert result["value"] + 3 * result["stderr"] >= 4 * math.pi


def test_certify_refuted_exit_1(tmp_path):
    square = {
        "dim": 2,
        "kind": "polytope-V",
        "params": {"vertices": [[1, 1], [1, -1], [-1, 1], [-1, -1]]},
    }
    path = tmp_path / "staggered.json"
    path.write_text(json.dumps({"body": square, "centers": [[0, 0], [2, 0], [1, 2]]}))
    proc = run_cli(["certify", "--packing", str(path), "--n-random", "64"])
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["result"]["status"] == "refuted"


def test_determinism_byte_identical(tmp_path):
    path = tmp_path / "hex3.json"
    path.write_text(HEX3)
    args = ["certify", "--packing", str(path), "--seed", "7", "--n-random", "32"]
    a = run_cli(args)
    b = run_cli(args)
    assert a.stdout == b.stdout and a.returncode == b.returncode

    gen_a = run_cli(["example-5d"])
    gen_b = run_cli(["example-5d"])
    assert gen_a.stdout == gen_b.stdout

    pk = tmp_path / "single.json"
    pk.write_text(json.dumps({"body": json.loads(BALL2), "centers": [[0, 0]]}))
    margs = ["density", "--packing", str(pk), "--samples", "100000", "--seed", "5"]
    m1 = run_cli(margs)
    m2 = run_cli(margs)
    assert m1.stdout == m2.stdout


def test_rho_check_verb(tmp_path):
    grid = run_cli(["grid", "--body", "/dev/stdin", "--k", "2"], stdin_text=BALL2)
    path = tmp_path / "grid.json"
    path.write_text(grid.stdout)
    proc = run_cli(["rho-check", "--packing", str(path), "--rho", "2"])
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["separable"] is True
    hex_path = tmp_path / "hex3.json"
    hex_path.write_text(HEX3)
    proc2 = run_cli(["rho-check", "--packing", str(hex_path), "--rho", "4"])
    assert proc2.returncode == 2


def test_verify_config_verb():
    cfg = json.dumps(
        {"body": {"dim": 2, "kind": "ball", "params": {}}, "vectors": [[2, 0], [0, 2], [-2, 0], [0, -2]]}
    )
    proc = run_cli(["verify-config"], stdin_text=cfg)
    assert proc.returncode == 0
    result = json.loads(proc.stdout)["result"]
    assert result["conditions"]["lin"]["holds"] is True
    assert result["conditions"]["open-lin"]["holds"] is False


def test_steinitz_verb():
    payload = json.dumps({"points": [[1, 0], [0, 1], [-1, -1]]})
    proc = run_cli(["steinitz"], stdin_text=payload)
    assert proc.returncode == 0
    core = json.loads(proc.stdout)["result"]["core"]
    assert core["size"] == 3 and core["is_cross_polytope"] is False


def test_density_verb(tmp_path):
    pk = tmp_path / "single.json"
    pk.write_text(json.dumps({"body": json.loads(BALL2), "centers": [[0, 0]]}))
    proc = run_cli(
        ["density", "--packing", str(pk), "--rho", "1", "--delta", "1", "--samples", "100000"]
    )
    assert proc.returncode == 0
    result = json.loads(proc.stdout)["result"]
    assert abs(result["value"] - 0.25) < 0.01


def test_dg_cert_verb(tmp_path):
    body_path = tmp_path / "ball2.json"
    body_path.write_text(BALL2)
    system = json.dumps(
        {
            "dim": 2,
            "pairs": [
                {"x": [1, 0], "f": [1, 0]},
                {"x": [0, 1], "f": [0, 1]},
                {"x": [-1, 0], "f": [-1, 0]},
                {"x": [0, -1], "f": [0, -1]},
            ],
        }
    )
    sys_path = tmp_path / "cross.json"
    sys_path.write_text(system)
    proc = run_cli(
        ["dg-cert", "--body", str(body_path), "--system", str(sys_path), "--samples", "200000"]
    )
    assert proc.returncode == 0
    result = json.loads(proc.stdout)["result"]
    assert result["ok"] is True and result["strict_status"] == "confirmed"


def test_report_header_fields(tmp_path):
    path = tmp_path / "ball2.json"
    path.write_text(BALL2)
    proc = run_cli(["lambda-sep", "--body", str(path), "--samples", "256", "--seed", "3"])
    report = json.loads(proc.stdout)
    assert report["tool"] == "seppack"
    assert report["verb"] == "lambda-sep"
    assert report["seed"] == 3
    assert "tolerances" in report and "version" in report
