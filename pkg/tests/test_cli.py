import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from conftest import fixture_path, fixture_pipeline

from nonfill_scl.cli import RunConfig, main, run
from nonfill_scl.lp import EncodingVector, SclResult, verify_certificate


def invoke(command, name_or_path, **kw):
    path = fixture_path(name_or_path) if isinstance(name_or_path, str) else name_or_path
    out, err = io.StringIO(), io.StringIO()
    code = run(RunConfig(command, str(path), **kw), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_solve_sep2():
    code, out, err = invoke("solve", "SEP2")
    assert (code, out) == (0, "scl = 1/2\n")
    assert err == ""


def test_solve_ann_certificate_verifies():
    code, out, _ = invoke("solve", "ANN", certificate=True)
    assert code == 0
    head, _, body = out.partition("\n")
    assert head == "scl = 0/1"
    doc = json.loads(body)
    p = doc["primal"]
    primal = EncodingVector({k: F(v) for k, v in p["x"].items()}, F(p["r_plus"]), F(p["r_minus"]))
    res = SclResult("optimal", F(doc["value"]), primal, [F(y) for y in doc["dual"]],
                    [F(r) for r in doc["reduced_costs"]], doc["stats"])
    assert verify_certificate(fixture_pipeline("ANN")[3], res)


def test_solve_json_and_oracle():
    code, out, _ = invoke("solve", "ANN", format="json", oracle=True)
    assert code == 0 and json.loads(out)["scl"] == "0/1"
    code, out, _ = invoke("solve", "SEP2", single_slot=True, oracle=True)
    assert (code, out) == (0, "scl = 1/2\n")


def test_oracle_past_the_guard_is_an_audit_failure():
    code, _, err = invoke("solve", "SEP2", oracle=True)
    assert code == 4 and "TOO_LARGE" in err


def test_dump_lp(tmp_path):
    dump = tmp_path / "lp.json"
    code, _, _ = invoke("solve", "ANN", dump_lp=str(dump))
    assert code == 0
    doc = json.loads(dump.read_text())
    assert doc == json.loads(json.dumps(fixture_pipeline("ANN")[3].to_dict()))


def test_validate_outputs():
    code, out, _ = invoke("validate", "SEP2")
    assert code == 0 and "genus: 2" in out
    code, out, _ = invoke("validate", "SEP2", format="json")
    assert json.loads(out)["status"] == "valid"


def test_validate_broken(tmp_path):
    doc = json.loads(fixture_path("SEP2").read_text())
    doc["disks"][0]["boundary"][5] = dict(doc["disks"][0]["boundary"][1])
    p = tmp_path / "broken.json"
    p.write_text(json.dumps(doc))
    code, out, _ = invoke("validate", p)
    assert code == 2 and "DUPLICATE_LONG_SIDE" in out
    code, _, err = invoke("solve", p)
    assert code == 2 and "DUPLICATE_LONG_SIDE" in err


def test_malformed_input(tmp_path):
    p = tmp_path / "junk.json"
    p.write_text("[1, 2")
    code, out, err = invoke("solve", p)
    assert code == 1 and out == "" and "MALFORMED_INPUT" in err
    assert invoke("solve", tmp_path / "absent.json")[0] == 1
    assert invoke("solve", "SEP2", path_cap=0)[0] == 1


def test_not_null_homologous():
    code, _, err = invoke("solve", "NONSEP")
    assert code == 2 and "NOT_NULL_HOMOLOGOUS" in err


def test_path_cap_exit():
    code, _, err = invoke("solve", "SEP2", path_cap=5)
    assert code == 5 and "PATH_EXPLOSION" in err


def test_paths_listing():
    code, out, _ = invoke("paths", "ANN", format="json")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(recs) == len(fixture_pipeline("ANN")[2])
    assert all(len(r["sides"]) == len(r["steps"]) for r in recs)
    code, out, _ = invoke("paths", "ANN")
    assert out.rstrip().endswith(f"{len(recs)} taut turn paths")


@pytest.mark.parametrize("name", ["SEP2", "ANN"])
def test_extremal(name):
    code, out, _ = invoke("extremal", name, format="json")
    doc = json.loads(out)
    assert code == 0 and all(doc["audits"].values())
    assert -doc["chi_final"] == 2 * doc["n_final"] * F(doc["scl_value"])


def test_output_is_deterministic():
    for cmd in ("paths", "solve", "extremal"):
        a = invoke(cmd, "SEP2", format="json", certificate=True)
        b = invoke(cmd, "SEP2", format="json", certificate=True)
        assert a == b


def test_main_and_console_entry(capsys):
    assert main(["solve", str(fixture_path("SEP2"))]) == 0
    assert capsys.readouterr().out == "scl = 1/2\n"
    proc = subprocess.run([sys.executable, "-m", "nonfill_scl.cli", "solve",
                           str(fixture_path("ANN"))], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "scl = 0/1\n"
