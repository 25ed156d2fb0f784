import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from foldquiv.cli import parse_text, run
from foldquiv.errors import ParseError, SemanticError

HERE = Path(__file__).parent
DATA = HERE / "data"
BUNDLED = HERE.parent / "src" / "foldquiv" / "data"
GOLDEN = HERE / "golden"
REGEN = os.environ.get("FOLDQUIV_REGEN") == "1"

CASES = [
    ("quotient", BUNDLED / "a3.fq", []),
    ("cartan", BUNDLED / "a3.fq", []),
    ("roots", BUNDLED / "a3.fq", []),
    ("fold", BUNDLED / "a3.fq", []),
    ("induce", BUNDLED / "a3.fq", ["--root", "1,1,1"]),
    ("verify", BUNDLED / "a3.fq", []),
    ("quotient", BUNDLED / "kronecker.fq", []),
    ("cartan", BUNDLED / "kronecker.fq", []),
    ("verify", BUNDLED / "kronecker.fq", []),
    ("verify", DATA / "d4_c3.fq", []),
    ("cartan", DATA / "d4_c3.fq", []),
    ("verify", DATA / "kronecker_twisted.fq", []),
    ("verify", DATA / "klein.fq", []),
]


def _run(argv):
    buf = io.StringIO()
    code = run(argv, buf)
    return code, buf.getvalue()


def _golden_name(cmd, path, json_mode):
    return f"{cmd}_{path.stem}{'.json' if json_mode else '.txt'}"


@pytest.mark.parametrize("json_mode", [False, True])
@pytest.mark.parametrize("cmd,path,extra", CASES, ids=[f"{c}-{p.stem}" for c, p, _ in CASES])
def test_golden_output(cmd, path, extra, json_mode):
    argv = [cmd, str(path)] + extra + (["--json"] if json_mode else [])
    code, text = _run(argv)
    target = GOLDEN / _golden_name(cmd, path, json_mode)
    record = f"exit {code}\n{text}"
    if REGEN:
        target.write_text(record)
    assert record == target.read_text()


EXPECTED_EXIT = {
    ("quotient", "a3"): 0, ("cartan", "a3"): 0, ("roots", "a3"): 0, ("fold", "a3"): 0, ("induce", "a3"): 0,
    ("verify", "a3"): 0, ("quotient", "kronecker"): 0, ("cartan", "kronecker"): 1, ("verify", "kronecker"): 1,
    ("verify", "d4_c3"): 0, ("cartan", "d4_c3"): 0, ("verify", "kronecker_twisted"): 0, ("verify", "klein"): 1,
}


@pytest.mark.parametrize("cmd,path,extra", CASES, ids=[f"{c}-{p.stem}" for c, p, _ in CASES])
def test_exit_codes(cmd, path, extra):
    code, _ = _run([cmd, str(path)] + extra)
    assert code == EXPECTED_EXIT[(cmd, path.stem)]


def test_deterministic_output():
    argv = ["verify", str(BUNDLED / "a3.fq"), "--seed", "7"]
    assert _run(argv) == _run(argv)


def test_json_round_trip():
    code, text = _run(["cartan", str(BUNDLED / "a3.fq"), "--json"])
    rep = json.loads(text)
    assert rep["C"] == [[2, -1], [-2, 2]] and rep["D"] == [2, 1] and rep["exit_code"] == code == 0
    assert json.dumps(rep, sort_keys=True, indent=2) + "\n" == text


def test_selftest():
    code, text = _run(["selftest"])
    assert code == 0 and text.count("PASS") == 5 and "FAIL" not in text


def test_induce_needs_field(tmp_path):
    src = (BUNDLED / "a3.fq").read_text().replace("[field]\np 2", "")
    f = tmp_path / "nofield.fq"
    f.write_text(src)
    code, _ = _run(["induce", str(f), "--root", "1,1,1"])
    assert code == 2


@pytest.mark.parametrize("text,line,col", [
    ("", 1, 1),
    ("vertex 1\n", 1, 1),
    ("[quiver]\nvertex 1\n[bogus]\n", 3, 1),
    ("[quiver]\nvertex 1\nvertex 2\narrow a 1 2\n[group]\ncyclic x\n[action]\n", 6, 8),
    ("[quiver]\nvertex 1\n[group]\ncyclic 2\n[action]\ns spin 1 1\n", 6, 1),
    ("[quiver]\nvertex 1\n[group]\ncyclic 2\n[action]\n[field]\np 2\np 3\n", 8, 1),
])
def test_parse_errors(text, line, col):
    with pytest.raises(ParseError) as err:
        parse_text(text, "in.fq")
    assert (err.value.line, err.value.col) == (line, col)
    assert str(err.value).startswith(f"in.fq:{line}:{col}: ")


@pytest.mark.parametrize("text", [
    "[quiver]\nvertex 1\nvertex 2\narrow a 1 2\narrow b 2 1\n[group]\ncyclic 1\n[action]\n",
    "[quiver]\nvertex 1\nvertex 2\nvertex 3\narrow a 1 2\narrow b 1 3\n[group]\ncyclic 2\n[action]\n"
    "s vertex 1 2\ns vertex 2 1\ns arrow a b\ns arrow b a\n",
    "[quiver]\nvertex 1\n[group]\ncyclic 2\n[action]\nq vertex 1 1\n",
    "[quiver]\nvertex 1\n[group]\ncyclic 2\n[action]\n[field]\np 4\n",
    "[quiver]\nvertex 1\n[group]\ntable 2\n0 1\n1 1\n[action]\n",
])
def test_semantic_errors(text):
    with pytest.raises((SemanticError, ParseError)):
        parse_text(text, "in.fq")


def test_input_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.fq"
    bad.write_text("[quiver]\nvertex 1\nvertex 2\narrow a 1 2\narrow b 2 1\n[group]\ncyclic 1\n[action]\n")
    assert _run(["cartan", str(bad)])[0] == 2
    assert _run(["cartan", str(tmp_path / "missing.fq")])[0] == 2
    assert _run(["cartan"])[0] == 2
    assert _run(["nonsense", str(bad)])[0] == 2


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "foldquiv", "cartan", str(BUNDLED / "a3.fq")],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "D=diag(2,1)" in out.stdout
