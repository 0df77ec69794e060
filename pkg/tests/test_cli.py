from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from cobarforge.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_derive_torsion(capsys):
    code, out, _ = run(capsys, "derive-torsion")
    assert code == 0
    assert out.splitlines()[-1] == "2*z - a1*z^2 + a3*z^4"
    code, out, _ = run(capsys, "derive-torsion", "--format", "json")
    assert json.loads(out)["relation"] == "2*z - a1*z^2 + a3*z^4"


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--all", "--precision", "8")
    assert code == 0
    assert out.count("PASS") == 10 and "FAIL" not in out


def test_verify_single_json(capsys):
    code, out, _ = run(capsys, "verify", "TRACE_INVARIANT", "--format", "json")
    body = json.loads(out)
    assert code == 0 and body["pass"] and body["id"] == "TRACE_INVARIANT"


def test_verify_unknown(capsys):
    code, _, err = run(capsys, "verify", "NO_SUCH")
    assert code == 2 and "unknown check" in err


def test_verify_needs_exactly_one_target(capsys):
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "verify", "TRACE_INVARIANT", "--all")[0] == 2


def test_unknown_subcommand(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 2 and "usage" in err


def test_precision_env(capsys, monkeypatch):
    monkeypatch.setenv("COBARFORGE_PRECISION", "6")
    code, out, _ = run(capsys, "verify", "TRACE_INVARIANT", "--format", "json")
    assert code == 0 and json.loads(out)["precision"] == 6
    code, out, _ = run(capsys, "verify", "TRACE_INVARIANT", "--format", "json", "--precision", "8")
    assert json.loads(out)["precision"] == 8
    monkeypatch.setenv("COBARFORGE_PRECISION", "eight")
    assert run(capsys, "derive-torsion")[0] == 2


def test_low_precision_rejected(capsys):
    assert run(capsys, "verify", "Z8_COCYCLE", "--precision", "2")[0] == 2
    assert run(capsys, "verify", "--all", "--precision", "0")[0] == 2


def test_coaction_of_trace(capsys):
    from cobarforge.comodule import trace_element, unit_tensor
    from cobarforge.expr import format_tensor

    code, out, _ = run(capsys, "coaction", "--element", "2 - a1*z + a3*z^3")
    assert code == 0 and out.strip() == format_tensor(unit_tensor(trace_element()).reduce())
    code, out, _ = run(capsys, "coaction", "--element", "2 - a1*z + a3*z^3", "--format", "json", "--mod", "2^3")
    assert json.loads(out)["modulus"] == 8


def test_coaction_bad_input(capsys):
    assert run(capsys, "coaction", "--element", "2 +")[0] == 2
    assert run(capsys, "coaction", "--element", "s", "--mod", "2^2")[0] == 2
    assert run(capsys, "coaction", "--element", "z", "--mod", "2^9")[0] == 2
    assert run(capsys, "coaction", "--element", "z", "--mod", "3")[0] == 2


def test_ext_table(capsys):
    code, out, _ = run(capsys, "ext", "--max-stem", "8", "--max-filt", "2", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and {"s": 0, "t": 0, "dim": 1, "labels": []} in rows


def test_ext_integral(capsys):
    code, out, _ = run(capsys, "ext", "--coeff", "z2:8", "--max-stem", "3", "--max-filt", "1")
    assert code == 0 and "s=1 t=2 stem=1: Z/2" in out


def test_ext_chart_file(capsys, tmp_path):
    path = tmp_path / "e2.json"
    assert run(capsys, "ext", "--max-stem", "6", "--max-filt", "2", "--chart", str(path))[0] == 0
    doc = json.loads(path.read_text())
    assert {"stem": 0, "filt": 0, "order": "F2", "label": "", "id": "e0_0_0"} in doc["classes"]
    code, out, _ = run(capsys, "chart", "--input", str(path), "--format", "svg")
    assert code == 0 and out.startswith("<svg")


def test_bockstein(capsys):
    code, out, _ = run(capsys, "bockstein", "--lift", "a1", "--format", "json")
    body = json.loads(out)
    assert code == 0 and not body["zero"] and body["t"] == 2
    code, out, _ = run(capsys, "bockstein", "--lift", "a3^3*(a1^3 - 27*a3)", "--format", "json")
    assert json.loads(out)["zero"]


def test_bockstein_rejects_fractions(capsys):
    assert run(capsys, "bockstein", "--lift", "a3inv")[0] == 2
    assert run(capsys, "bockstein", "--lift", "a1 + a3")[0] == 2


def test_product(capsys):
    code, out, _ = run(capsys, "product", "--left", "h1", "--right", "h1", "--format", "json")
    body = json.loads(out)
    assert code == 0 and (body["s"], body["t"]) == (2, 4) and not body["zero"]


def test_sseq_run(capsys):
    code, out, _ = run(capsys, "sseq", "run")
    assert code == 0 and "FAIL" not in out and "no_class_above_24: PASS" in out


def test_chart_bad_input(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "chart", "--input", str(bad))[0] == 2


def test_output_flag_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run(capsys, "verify", "--all", "--format", "json", "--output", str(a))
    run(capsys, "verify", "--all", "--format", "json", "--output", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_console_script():
    exe = shutil.which("cobarforge")
    cmd = [exe] if exe else [sys.executable, "-m", "cobarforge.cli"]
    proc = subprocess.run(cmd + ["derive-torsion"], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0 and proc.stdout.splitlines()[-1] == "2*z - a1*z^2 + a3*z^4"
