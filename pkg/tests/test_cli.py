import json
import subprocess
import sys
from pathlib import Path

import pytest

from trivext.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main, serial_document
from trivext.io import dumps

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "serial_f2_n2.json"
GOLDEN_N3 = DATA / "serial_f2_n3.json"


def run(capsys, *argv):
    code = main([*argv, "--no-timestamp"])
    captured = capsys.readouterr()
    out = json.loads(captured.out) if captured.out else None
    return code, out, captured.err


def checks(report):
    return {c["name"]: c["status"] for c in report["checks"]}


def test_golden_file_is_frozen():
    assert GOLDEN.read_text() == dumps(serial_document(2, 2))
    assert GOLDEN_N3.read_text() == dumps(serial_document(3, 2))


def test_validate_golden(capsys):
    code, rep, _ = run(capsys, "validate", "--input", str(GOLDEN))
    assert code == EXIT_OK and rep["status"] == "pass"
    assert rep["input_digest"].startswith("sha256:")


def test_validate_broken_associativity(capsys, tmp_path):
    data = json.loads(GOLDEN_N3.read_text())
    entry = next(e for e in data["phi"] if (e["i"], e["j"]) == (1, 2))
    entry["matrix"] = [[0]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, rep, _ = run(capsys, "validate", "--input", str(bad))
    assert code == EXIT_FAIL and rep["status"] == "fail"
    phi = next(c for c in rep["checks"] if c["name"] == "phi")
    assert any("(i,j,k)=(1,1,1)" in msg for msg in phi["messages"])


def test_validate_empty_module_list(capsys, tmp_path):
    data = json.loads(GOLDEN.read_text())
    data["modules"] = []
    path = tmp_path / "empty.json"
    path.write_text(json.dumps(data))
    code, rep, _ = run(capsys, "validate", "--input", str(path))
    assert code == EXIT_OK and rep["status"] == "pass"


def test_invalid_module_fails(capsys, tmp_path):
    data = json.loads(GOLDEN.read_text())
    tr = next(m for m in data["modules"] if m["name"] == "TR")
    tr["f"][1]["matrix"] = [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
    path = tmp_path / "badmod.json"
    path.write_text(json.dumps(data))
    code, rep, _ = run(capsys, "validate", "--input", str(path))
    assert code == EXIT_FAIL
    assert checks(rep)["module TR"] == "fail"


def test_build_serial_and_reingest(capsys, tmp_path):
    out = tmp_path / "alg.json"
    code, rep, _ = run(capsys, "build", "--input", str(GOLDEN), "--out", str(out))
    assert code == EXIT_OK and rep["results"]["dim_S"] == 3
    code, rep, _ = run(capsys, "validate", "--input", str(out))
    assert code == EXIT_OK and rep["status"] == "pass"


def test_build_with_zero_bimodules_keeps_table(capsys, tmp_path):
    data = json.loads(GOLDEN.read_text())
    for b in data["bimodules"]:
        b["dim"], b["left_act"], b["right_act"] = 0, [[]], [[]]
    data["phi"] = [{"i": 1, "j": 1, "matrix": [], "layout": "kron-left-major"}]
    data["modules"] = []
    path = tmp_path / "zero.json"
    path.write_text(json.dumps(data))
    code, rep, _ = run(capsys, "build", "--input", str(path))
    assert code == EXIT_OK
    assert rep["results"]["algebra"]["ring"] == data["ring"]


def test_classify_generated(capsys):
    code, rep, _ = run(capsys, "classify", "--gen", "TR", "--oracle", "--cap", "3")
    cls = rep["results"]["classification"]
    assert code == EXIT_OK
    assert cls["projective"]["status"] == "yes" and cls["flat"]["status"] == "yes"
    assert cls["oracle"]["projective_agrees"]
    code, rep, _ = run(capsys, "classify", "--gen", "ZR", "--cap", "3")
    cls = rep["results"]["classification"]
    assert cls["projective"]["status"] == "no"
    assert "dimension obstruction" in cls["projective"]["reason"]


def test_text_and_json_agree(capsys):
    _, rep, _ = run(capsys, "classify", "--gen", "ZR", "--cap", "2")
    code = main(["classify", "--gen", "ZR", "--cap", "2", "--no-timestamp", "--format", "text"])
    text = capsys.readouterr().out
    assert code == EXIT_OK
    cls_line = next(line for line in text.splitlines() if line.strip().startswith("classification:"))
    assert json.loads(cls_line.split(":", 1)[1]) == rep["results"]["classification"]


@pytest.mark.parametrize("gen,tag", [("regular", "C"), ("TR", "U"), ("TR", "C")])
def test_functor_on_S_modules(capsys, gen, tag):
    code, rep, _ = run(capsys, "functor", "--gen", gen, "--tag", tag)
    assert code == EXIT_OK and rep["results"]["image_dim"] == (1 if tag == "C" else 3)


def test_functor_T_Z_H_on_base_module(capsys, tmp_path):
    data = json.loads(GOLDEN.read_text())
    data["modules"].append({"name": "R", "form": "base", "dim": 1, "action": [[[1]]]})
    data["modules"].append({"name": "zero", "form": "base", "dim": 0, "action": [[]]})
    path = tmp_path / "base.json"
    path.write_text(json.dumps(data))
    code, rep, _ = run(capsys, "functor", "--input", str(path), "--module", "R", "--tag", "T")
    assert code == EXIT_OK and checks(rep)["C(T(X)) = X via the canonical map"] == "pass"
    assert rep["results"]["image_dim"] == 3 and rep["results"]["kappa"]
    code, rep, _ = run(capsys, "functor", "--input", str(path), "--module", "R", "--tag", "Z")
    assert checks(rep)["U(Z(X)) = X"] == "pass"
    code, rep, _ = run(capsys, "functor", "--input", str(path), "--module", "R", "--tag", "H")
    assert checks(rep)["K(H(X)) = X"] == "pass" and rep["results"]["lambda"]
    code, rep, _ = run(capsys, "functor", "--input", str(path), "--module", "zero", "--tag", "H")
    assert code == EXIT_OK and rep["results"]["image_dim"] == 0


def test_functor_form_mismatch_is_usage_error(capsys):
    code, _, err = run(capsys, "functor", "--gen", "TR", "--tag", "K")
    assert code == EXIT_INPUT and "convert" in err


def test_convert_roundtrip(capsys, tmp_path):
    out = tmp_path / "left.json"
    for gen in ("TR", "ZR"):
        code, rep, _ = run(capsys, "convert", "--gen", gen, "--out", str(out))
        assert code == EXIT_OK
        assert checks(rep)["round trip is exact"] == "pass"
        assert checks(rep)["endomorphism dimensions agree"] == "pass"
    code, rep, _ = run(capsys, "convert", "--input", str(out), "--module", "ZR")
    assert code == EXIT_OK
    code, rep, _ = run(capsys, "functor", "--input", str(out), "--module", "ZR", "--tag", "K")
    assert code == EXIT_OK and rep["results"]["image_dim"] == 1


def test_dimension_commands(capsys):
    code, rep, _ = run(capsys, "pd", "--gen", "TR", "--cap", "3")
    assert code == EXIT_OK and rep["results"]["pd"] == 0
    code, rep, _ = run(capsys, "id", "--gen", "ZR", "--cap", "3")
    assert rep["results"]["id"] == ">=3"


def test_selfinj_and_perfect(capsys, tmp_path):
    code, rep, _ = run(capsys, "selfinj", "--gen", "serial", "3", "3", "--cap", "4")
    assert code == EXIT_OK
    assert rep["results"]["selfinj"]["conclusion"]["status"] == "holds"
    code, rep, _ = run(capsys, "perfect", "--gen", "serial", "1", "2", "--max-dim", "2")
    assert code == EXIT_OK
    assert "not desk-reproducible" in rep["results"]["perfect"]["k_at_least_1"]


def test_selfinj_hypothesis_not_satisfied(capsys, tmp_path):
    data = json.loads(GOLDEN.read_text())
    data["n"] = 1
    data["bimodules"] = [{"dim": 0, "left_act": [[]], "right_act": [[]]}]
    data["phi"], data["modules"] = [], []
    path = tmp_path / "m0.json"
    path.write_text(json.dumps(data))
    code, rep, _ = run(capsys, "selfinj", "--input", str(path))
    res = rep["results"]["selfinj"]
    assert res["conclusion"] == {"status": "not-claimed", "reason": "hypothesis-not-satisfied"}
    assert checks(rep)["hypothesis"] == "not-satisfied"


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["validate"], "need --input"),
        (["validate", "--input", "/nonexistent/x.json"], "x.json"),
        (["validate", "--gen", "serial", "2"], "serial needs"),
        (["validate", "--gen", "serial", "2", "4"], "not prime"),
        (["validate", "--gen", "bogus"], "--gen must be"),
        (["classify", "--gen", "TR", "--module", "nope"], "unknown module"),
    ],
)
def test_usage_errors_exit_2(capsys, argv, needle):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT and needle in err


def test_malformed_json_reports_position(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"p": 2,\n  "ring": }')
    code, _, err = run(capsys, "validate", "--input", str(path))
    assert code == EXIT_INPUT and "line 2" in err


def test_bad_shape_reports_field(capsys, tmp_path):
    data = json.loads(GOLDEN.read_text())
    data["ring"]["mult"] = [[[1, 0]]]
    path = tmp_path / "shape.json"
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "validate", "--input", str(path))
    assert code == EXIT_INPUT and "ring.mult" in err


def test_unknown_command_exit_2(capsys):
    assert main(["frobnicate"]) == EXIT_INPUT


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "trivext", "validate", "--input", str(GOLDEN), "--no-timestamp", "--format", "text"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "validate: pass" in proc.stdout
