"""CLI contract tests: subcommands, file formats, exit codes, determinism."""

import json
import os
import subprocess

import pytest

CLI = os.environ.get("STQ_CLI")

pytestmark = pytest.mark.skipif(CLI is None, reason="STQ_CLI not set")


def run(*args, **kwargs):
    return subprocess.run([CLI, *args], capture_output=True, text=True, **kwargs)


def matrix_json(entries):
    rows = len(entries)
    cols = len(entries[0])
    data = []
    for r in range(rows):
        for c in range(cols):
            z = complex(entries[r][c])
            data.append([z.real, z.imag])
    return {"rows": rows, "cols": cols, "data": data}


def identity_channel_json():
    return {
        "dim_in": 2,
        "dim_out": 2,
        "kraus": [matrix_json([[1, 0], [0, 1]])],
        "flags": ["cptp"],
    }


def projective_instrument_json():
    return {
        "outcomes": [
            {"dim_in": 2, "dim_out": 2, "kraus": [matrix_json([[1, 0], [0, 0]])]},
            {"dim_in": 2, "dim_out": 2, "kraus": [matrix_json([[0, 0], [0, 1]])]},
        ]
    }


def eye16_process_json(scale):
    entries = [[scale if r == c else 0 for c in range(16)] for r in range(16)]
    return {"dims": {"A1": 2, "A2": 2, "B1": 2, "B2": 2}, "matrix": matrix_json(entries)}


def test_switch_scan_rows_and_determinism(tmp_path):
    out = tmp_path / "scan.csv"
    res = run("switch-scan", "--steps", "11", "--out", str(out))
    assert res.returncode == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "p_a,p_c,f_a1c2a2,f_c1a1a2,f_a1c2,f_a1a2"
    assert len(lines) == 1 + 121

    out2 = tmp_path / "scan2.csv"
    assert run("switch-scan", "--steps", "11", "--out", str(out2)).returncode == 0
    assert out.read_bytes() == out2.read_bytes()


def test_verify_exit_codes():
    ok = run("verify", "--suite", "abl", "--trials", "25", "--seed", "42", "--tol", "1e-9")
    assert ok.returncode == 0
    report = json.loads(ok.stdout)
    assert report["pass"] is True
    assert report["seed"] == 42

    strict = run("verify", "--suite", "bridge", "--trials", "5", "--seed", "42",
                 "--tol", "0")
    assert strict.returncode == 1
    assert json.loads(strict.stdout)["pass"] is False

    unknown = run("verify", "--suite", "nope")
    assert unknown.returncode == 4


def test_verify_reports_are_reproducible():
    a = run("verify", "--suite", "pure", "--trials", "20", "--seed", "9")
    b = run("verify", "--suite", "pure", "--trials", "20", "--seed", "9")
    assert a.stdout == b.stdout


def test_pdm_build_negativity_marginal(tmp_path):
    spec = {
        "state": matrix_json([[0.5, 0], [0, 0.5]]),
        "channels": [identity_channel_json()],
    }
    in_path = tmp_path / "case.json"
    in_path.write_text(json.dumps(spec))
    out_path = tmp_path / "pdm.json"

    build = run("pdm", "build", "--in", str(in_path), "--out", str(out_path))
    assert build.returncode == 0
    assert json.loads(build.stdout)["negativity"] == pytest.approx(1.0, abs=1e-12)

    neg = run("pdm", "negativity", "--in", str(out_path))
    assert neg.returncode == 0
    assert json.loads(neg.stdout)["negativity"] == pytest.approx(1.0, abs=1e-12)

    marg = run("pdm", "marginal", "--in", str(out_path), "--keep", "t2",
               "--out", str(tmp_path / "m.json"))
    assert marg.returncode == 0
    reduced = json.loads((tmp_path / "m.json").read_text())
    assert reduced["slots"] == [{"label": "t2", "dim": 2}]
    # identity channel on the maximally mixed state: marginal negativity 0
    assert json.loads(marg.stdout)["negativity"] == pytest.approx(0.0, abs=1e-12)


def test_pdm_negativity_accepts_bare_density_matrix(tmp_path):
    rho = tmp_path / "rho.json"
    rho.write_text(json.dumps(matrix_json([[0.5, 0], [0, 0.5]])))
    res = run("pdm", "negativity", "--in", rho.as_posix())
    assert res.returncode == 0
    assert json.loads(res.stdout)["negativity"] == pytest.approx(0.0, abs=1e-12)


def test_pdm_schema_and_dimension_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"state": matrix_json([[1, 0], [0, 0]])}))
    assert run("pdm", "build", "--in", str(bad)).returncode == 3

    mismatch = {
        "state": matrix_json([[0.25 if r == c else 0 for c in range(4)] for r in range(4)]),
        "channels": [identity_channel_json()],
    }
    bad2 = tmp_path / "bad2.json"
    bad2.write_text(json.dumps(mismatch))
    assert run("pdm", "build", "--in", str(bad2)).returncode == 4


def test_process_validate_and_to_pdm(tmp_path):
    w_ok = tmp_path / "w.json"
    w_ok.write_text(json.dumps(eye16_process_json(0.25)))
    res = run("process", "validate", "--in", str(w_ok), "--seed", "3")
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["valid"] is True
    assert report["seed"] == 3

    w_bad = tmp_path / "wneg.json"
    w_bad.write_text(json.dumps(eye16_process_json(-0.25)))
    assert run("process", "validate", "--in", str(w_bad)).returncode == 5

    inst = tmp_path / "inst.json"
    inst.write_text(json.dumps(projective_instrument_json()))
    topdm = run("process", "to-pdm", "--w", str(w_ok), "--inst-a", str(inst),
                "--inst-b", str(inst))
    assert topdm.returncode == 0
    report = json.loads(topdm.stdout)
    assert report["max_abs_diff"] < 1e-8
    for row in report["table_pdm"]:
        for p in row:
            assert p == pytest.approx(0.25, abs=1e-9)

    assert run("process", "to-pdm", "--w", str(w_bad), "--inst-a", str(inst),
               "--inst-b", str(inst)).returncode == 5
