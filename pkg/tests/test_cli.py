import json
import subprocess
import sys

import pytest

from pisot_disc.automata import DigitAlphabet, state_count
from pisot_disc.cli import main
from pisot_disc.numberfield import MonicIntPoly, NumberField
from pisot_disc.relations import build_zero_automaton


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_help(capsys):
    code, out, _ = run(["--help"], capsys)
    assert code == 0 and "check" in out and "zeroauto" in out


def test_usage_errors(capsys):
    assert run([], capsys)[0] == 64
    assert run(["bogus"], capsys)[0] == 64
    assert run(["check", "a->ab;a->b"], capsys)[0] == 64
    assert run(["cutproject", "--dir", "1,x", "--offset", "0,0"], capsys)[0] == 64


def test_check_tribonacci(capsys, tmp_path):
    code, out, _ = run(["check", "a->ab;b->ac;c->a", "--no-meta", "--dot", str(tmp_path)], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["status"] == "PURE_DISCRETE"
    assert data["schema"] == "pisot-disc/interior-report/1"
    assert (tmp_path / "interior_a.dot").read_text().startswith("digraph")


def test_check_reducible(capsys):
    code, out, _ = run(["check", "a->ab;b->ab", "--no-meta"], capsys)
    assert code == 2
    assert "not irreducible" in json.loads(out)["reasons"]


def test_json_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["check", "a->ab;b->a", "--no-meta", "--json", str(p)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_meta_carries_seed(capsys):
    code, out, _ = run(["check", "a->ab;b->a"], capsys)
    assert json.loads(out)["meta"]["seed"] == 0


def test_cutproject(capsys):
    code, out, _ = run(["cutproject", "--dir", "1,1", "--offset", "0.5,0.25", "--n", "6"], capsys)
    assert code == 0 and out.strip() == "121212"
    code, _, err = run(["cutproject", "--dir", "1,1", "--offset", "0.5,0.5", "--n", "6"], capsys)
    assert code == 2 and "PRECONDITION_FAILED" in err


def test_render(tmp_path, capsys):
    out = tmp_path / "f.ppm"
    code, text, _ = run(["render", "a->ab;b->ac;c->a", "--depth", "6", "--out", str(out)], capsys)
    assert code == 0 and out.read_bytes().startswith(b"P6")
    assert text.startswith("44 points")


def test_interior(capsys):
    code, out, _ = run(["interior", "a->ab;b->ac;c->a", "--letter", "b", "--no-meta"], capsys)
    data = json.loads(out)
    assert code == 0 and data["state_counts"] == {"b": 4}
    assert data["language_state_counts"] == data["state_counts"]


def test_family(capsys):
    code, out, _ = run(["family", "slk", "--l", "1", "--k", "4", "--no-meta"], capsys)
    assert code == 0 and json.loads(out)["inclusion"] is True
    code, out, _ = run(["family", "sk", "--k", "150", "--certificate", "--no-meta"], capsys)
    assert code == 0 and json.loads(out)["passed"] is True
    assert run(["family", "slk", "--k", "4"], capsys)[0] == 64


def test_sadic(capsys):
    code, out, _ = run(["sadic", "--no-meta"], capsys)
    counts = json.loads(out)["state_counts"]
    assert code == 0 and counts["L0"] == 62


def test_zeroauto(capsys):
    code, out, _ = run(["zeroauto", "--poly", "[-1, -1, -1, 1]", "--digits=-1,0,1", "--no-meta"], capsys)
    data = json.loads(out)
    assert code == 0 and data["schema"] == "pisot-disc/zero-automaton/1"
    f = NumberField(MonicIntPoly.parse("X^3 - X^2 - X - 1"))
    alpha = DigitAlphabet.from_scalars([f(-1), f(0), f(1)])
    assert data["states"] == state_count(build_zero_automaton(alpha, f))
    assert run(["zeroauto", "--poly", "2*X^2+1", "--digits", "0"], capsys)[0] == 64


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "pisot_disc", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "pisot-disc" in res.stdout
