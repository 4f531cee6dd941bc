import io
import json
import subprocess
import sys
from dataclasses import replace

import pytest

from hslice.cli import main
from hslice.catalog import CuratedInvariantStore, torus_knot_table


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def headline(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    return out.splitlines()[0]


def test_golden_headlines():
    assert headline("check", "--knot", "braid(2; 1 1 1)", "--manifold", "K3", "--class", "0", "--genus", "0") \
        == "OBSTRUCTED (arf_spin)"
    assert headline("check", "--knot", "unknot", "--manifold", "S4", "--class", "0", "--genus", "0") == "CONSISTENT"
    assert headline("dv", "--knot-name", "K_DV", "--b2w", "21", "--sigmaw", "16", "--manifold", "K3") \
        == "OBSTRUCTED (donald_vafaee: 43 < 45)"
    assert headline("dv", "--knot-name", "K_DV", "--b2w", "28", "--sigmaw", "-16") \
        == "CONSISTENT (donald_vafaee: 50 >= 5)"
    assert headline("dv", "--knot-name", "K_DV", "--b2w", "1", "--sigmaw", "-16").startswith("NOT APPLICABLE")
    assert headline("bf", "--knot", "RHT", "--manifold", "K3#mCP2").startswith("OBSTRUCTED (bauer_furuta")
    assert headline("bf", "--knot", "RHT", "--manifold", "CP2").startswith("NOT APPLICABLE")
    assert headline("scan", "--knot", "T(2,5)", "--manifold", "CP2") \
        == "OBSTRUCTED (every class in box 3 up to genus 0)"


def test_check_report_body():
    code, out, _ = run("check", "--knot", "RHT", "--manifold", "K3")
    lines = out.splitlines()
    assert lines[1:3] == ["knot: RHT", "manifold: K3 (b2+=3, b2-=19, sigma=-16, spin, symplectic, simple_type, bf_hypothesis)"]
    assert "  arf_spin [topological] obstructed: Arf(K) = 1 != 0" in lines
    assert "summary: obstructed" in lines


def test_constructions_flag():
    assert headline("check", "--knot", "unknot", "--manifold", "S4", "--constructions") \
        == "CERTIFIED SLICEABLE (unknot)"
    assert headline("check", "--knot", "RHT", "--manifold", "CP2", "--constructions") \
        == "CERTIFIED SLICEABLE (curated_surface)"


def test_abstract_class_and_single_rules():
    assert headline("check", "--knot", "RHT", "--manifold", "K3", "--square", "1", "--genus", "1") \
        == "OBSTRUCTED (adjunction_nu)"
    assert headline("check", "--knot", "RHT", "--manifold", "K3", "--square", "1", "--genus", "1",
                    "--rules", "adjunction_g4") == "CONSISTENT"
    assert headline("check", "--knot", "K_DV", "--manifold", "K3", "--b2w", "21", "--sigmaw", "16",
                    "--topological") == "CONSISTENT"


def test_records_format():
    code, out, _ = run("check", "--knot", "RHT", "--manifold", "K3", "--format", "records")
    recs = [json.loads(line) for line in out.splitlines()]
    assert recs[0]["record"] == "problem" and recs[-1] == {"record": "summary", "summary": "obstructed",
                                                           "primary_rule": "arf_spin"}
    assert [r["rule_id"] for r in recs if r["record"] == "rule"][0] == "arf_spin"
    code, out, _ = run("scan", "--knot", "T(2,-15)", "--manifold", "CP2", "--format", "records")
    recs = [json.loads(line) for line in out.splitlines()]
    assert {r["record"] for r in recs} >= {"scan", "class", "summary"}


def test_upper_and_invariants(tmp_path, monkeypatch):
    code, out, _ = run("upper", "--knot", "RHT")
    assert "unknotting_k3: RHT bounds a disk in K3" in out
    code, out, _ = run("upper", "--whitehead", "LHT,0")
    assert "Wh+_0(T(2,-3)) bounds a null-homologous disk in K3" in out
    code, out, _ = run("invariants", "--knot", "T(2,15)", "--modulus", "2")
    assert "arf: 0" in out.splitlines() and "determinant: 15" in out.splitlines()
    cache = tmp_path / "store.jsonl"
    monkeypatch.setenv("HSLICE_CACHE", str(cache))
    code, out, _ = run("invariants", "--knot", "RHT", "--save")
    assert code == 0 and CuratedInvariantStore(str(cache)).get("T(2,3)") is not None


def test_bundle_override_warns(tmp_path):
    bundle = tmp_path / "k.json"
    bundle.write_text(json.dumps({"arf": 1, "signature": -2, "tau": 0}))
    code, out, _ = run("check", "--knot", "RHT", "--manifold", "K3", "--bundle", str(bundle))
    assert code == 0
    assert any(line.startswith("warning: bundle overrides tau") for line in out.splitlines())
    # a bundle contradicting the computed determinant is rejected
    bundle.write_text(json.dumps({"arf": 0, "signature": -2}))
    code, _, err = run("check", "--knot", "RHT", "--manifold", "K3", "--bundle", str(bundle))
    assert code == 2 and "contradicts determinant" in err


def test_cache_override_warns(tmp_path, monkeypatch):
    cache = tmp_path / "store.jsonl"
    store = CuratedInvariantStore(str(cache))
    store.put("T(2,3)", replace(torus_knot_table(3), tau=0))
    monkeypatch.setenv("HSLICE_CACHE", str(cache))
    code, out, _ = run("invariants", "--knot", "RHT")
    assert "tau: 0" in out.splitlines()
    assert any("cache overrides tau" in line for line in out.splitlines())


@pytest.mark.parametrize("argv", [
    ("check", "--knot", "braid(2; 1 1)", "--manifold", "K3"),
    ("check", "--knot", "RHT", "--manifold", "T4"),
    ("check", "--knot", "5_2", "--manifold", "K3"),
    ("check", "--knot", "RHT", "--manifold", "CP2", "--class", "1,2"),
    ("check", "--knot", "RHT", "--manifold", "K3", "--rules", "nope"),
    ("check", "--manifold", "K3"),
    ("scan", "--knot", "RHT", "--manifold", "K3", "--box", "1"),
    ("dv", "--knot", "K_DV", "--b2w", "21"),
    ("check", "--knot", "RHT", "--manifold-file", "/nonexistent.json"),
    ("nosuch",),
])
def test_input_errors_exit_2(argv):
    code, out, err = run(*argv)
    assert code == 2
    assert out == ""


def test_error_message_format():
    code, _, err = run("check", "--knot", "RHT", "--manifold", "T4")
    assert err.startswith("hslice: error: ")


def test_reports_are_byte_identical_across_processes():
    argv = ["scan", "--knot", "T(2,-15)", "--manifold", "CP2", "--format", "records"]
    runs = [subprocess.run([sys.executable, "-m", "hslice", *argv], capture_output=True, check=True).stdout
            for _ in range(2)]
    assert runs[0] == runs[1] and runs[0]
