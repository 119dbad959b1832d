import json
import subprocess
import sys
from pathlib import Path

import pytest

from diffgalois.cli import main

SYSTEMS = Path(__file__).resolve().parent.parent / "demos" / "systems"


def system(name):
    return str(SYSTEMS / f"{name}.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_relations_fibonacci(capsys):
    code, out, _ = run(capsys, "relations", "--input", system("fibonacci"), "--degree", "2", "--coeff-degree", "0")
    assert code == 0
    assert out.splitlines()[1:] == ["y11+y21-y22", "y12-y21"]


def test_relations_json(capsys):
    code, out, _ = run(capsys, "relations", "--input", system("fibonacci"), "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["generators"] == ["y11+y21-y22", "y12-y21"] and data["operator_order"] == 6


def test_decompose_and_hyper(capsys):
    code, out, _ = run(capsys, "decompose", "--input", system("two_cosets"), "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["delta"] == 2 and len(data["components"]) == 2
    code, out, _ = run(capsys, "hyper", "--input", system("two_cosets"), "--format", "json")
    data = json.loads(out)
    assert {e["element"]: e["certificate"] for e in data["elements"]} == {
        "y12": "x", "y21": "x+1", "y33": "1/(x^2+x)"}


def test_lattice_command(capsys):
    code, out, _ = run(capsys, "lattice", "--delta", "2", "x", "x+1", "1/(x*(x+1))")
    assert code == 0
    assert out.splitlines() == ["# rank 1, step 2", "(1, 1, 1)\t1"]
    code, out, _ = run(capsys, "lattice", "--delta", "1", "--", "-1")
    assert out.splitlines()[1] == "(2)\t1"


def test_stab_command(tmp_path, capsys):
    ideal = tmp_path / "torus.txt"
    ideal.write_text("# the diagonal torus with det 1\ny12\ny21\ny11*y22-1\n")
    code, out, _ = run(capsys, "stab", "--ideal", str(ideal), "--n", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["generators"] == ["g11*g22-1", "g12", "g21"]


def test_bound_command(capsys):
    code, out, _ = run(capsys, "bound", "--n", "1", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["I(n)"] == 384064 and data["d_bits"] == 110610145


def test_compute_text_and_transcript(tmp_path, capsys):
    tr = tmp_path / "t.json"
    code, out, _ = run(capsys, "compute", "--input", system("two_cosets"), "--transcript", str(tr))
    assert code == 0
    assert "== stabilizer (det g != 0)" in out
    assert "[1] g11*g22*g33-1, g12, g13, g21, g23, g31, g32" in out
    assert out.rstrip().splitlines()[-1].startswith("caveat: ")
    doc = json.loads(tr.read_text())
    assert [s["step"] for s in doc["steps"]][-1] == "stabilizer"
    assert all("seconds" not in s for s in doc["steps"])


def test_compute_is_deterministic(capsys):
    outputs = [run(capsys, "compute", "--input", system("sign"), "--format", "json")[1] for _ in range(2)]
    assert outputs[0] == outputs[1]
    assert json.loads(outputs[0])["stabilizer"] == ["g11^2-1"]


def test_lex_order_round_trip(tmp_path, capsys):
    code, out, _ = run(capsys, "relations", "--input", system("fibonacci"), "--order", "lex", "--format", "json")
    gens = json.loads(out)["generators"]
    f = tmp_path / "fib.json"
    f.write_text(json.dumps(gens))
    code, out, _ = run(capsys, "decompose", "--input", system("fibonacci"), "--ideal", str(f), "--format", "json")
    assert code == 0
    comps = json.loads(out)["components"]
    assert len(comps) == 1 and sorted(comps[0]["generators"]) == ["y11+y21-y22", "y12-y21"]


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "relations", "--input", str(bad))[0] == 2
    ragged = tmp_path / "ragged.json"
    ragged.write_text(json.dumps({"A": [["1", "0"], ["0"]]}))
    assert run(capsys, "relations", "--input", str(ragged))[0] == 2
    assert run(capsys, "relations", "--input", str(tmp_path / "missing.json"))[0] == 2
    cubic = tmp_path / "cubic.txt"
    cubic.write_text("y11^3+y12^3+y21^3-1\n")
    code, _, err = run(capsys, "decompose", "--input", system("identity2"), "--ideal", str(cubic))
    assert code == 3 and "error:" in err
    with pytest.raises(SystemExit) as info:
        main(["compute"])
    assert info.value.code == 2


def test_extension_needed_exit_code(tmp_path, capsys):
    sq = tmp_path / "sq.txt"
    sq.write_text("y11^2-2\ny12\ny21\ny22-1\n")
    code, _, err = run(capsys, "decompose", "--input", system("identity2"), "--ideal", str(sq))
    assert code == 4 and "algebraic extension" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "diffgalois", "lattice", "x/(x+1)"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines() == ["# rank 1, step 1", "(1)\t1/x"]


def test_bound_large_n_summarises(capsys):
    code, out, _ = run(capsys, "bound", "--n", "3")
    assert code == 0
    assert "I(n) = <701138-bit integer>" in out.splitlines()
    assert run(capsys, "bound", "--n", "2", "--full")[0] == 1
