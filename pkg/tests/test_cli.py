import json

import pytest

from quotring.cli import expand_word, main
from quotring.construction import DESK
from quotring.freegroup import invert


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_params(capsys):
    code, out, _ = run(capsys, "params")
    assert code == 0
    assert "epsilon = 1/100" in out and "tau = 10/100" in out and "|v| = 5550" in out


def test_chart_of_v(capsys):
    code, out, _ = run(capsys, "chart", "v")
    assert code == 0
    assert "members = 1" in out and "measure=100/100" in out and "f = (1, 1)" in out


def test_measure(capsys):
    assert run(capsys, "measure", "v.w.v")[1].strip() == "200/100"
    code, _, err = run(capsys, "measure", "xz")
    assert code == 1 and "not a generalized" in err


def test_reduce_and_verify(tmp_path, capsys):
    src = tmp_path / "e.json"
    src.write_text('["v^-1"]')
    out = tmp_path / "r.json"
    assert run(capsys, "reduce", str(src), "--out", str(out))[0] == 0
    assert json.loads(out.read_text()) == ["", "zt"]
    cert = tmp_path / "r.cert.json"
    both = tmp_path / "both.json"
    both.write_text(json.dumps(["v^-1", "", "zt"]))
    code, text, _ = run(capsys, "verify", str(both), str(cert))
    assert code == 0 and text.strip() == "PASS"


def test_verify_generator(tmp_path, capsys):
    e = tmp_path / "g.json"
    e.write_text('["", "v", "vw"]')
    c = tmp_path / "c.json"
    c.write_text('[["", ""]]')
    assert run(capsys, "verify", str(e), str(c))[1].strip() == "PASS"
    e.write_text('["v"]')
    code, text, _ = run(capsys, "verify", str(e), str(c))
    assert code == 1 and text.startswith("FAIL")


def test_multiply_and_diagram(tmp_path, capsys):
    out = tmp_path / "m.json"
    ys = [i for i, ch in enumerate(DESK.v) if ch == "y"]
    cut = ys[49] + 1
    a, b = DESK.v[:cut], DESK.v[cut:]
    code, _, _ = run(capsys, "multiply", "z" + invert(b), invert(a) + "t", "--out", str(out))
    assert code == 0
    result = json.loads(out.read_text())
    assert "z" + DESK.v + "t" in result
    diagram = tmp_path / "m.diagram.json"
    assert (tmp_path / "m.cert.json").exists() and diagram.exists()
    code, dot, _ = run(capsys, "diagram", str(diagram))
    assert code == 0 and dot.startswith("digraph") and "cluster_lens0" in dot
    code, _, err = run(capsys, "multiply", "zv^-1t", "1")
    assert code == 1 and "S̃" in err


def test_derived(capsys):
    code, out, _ = run(capsys, "derived", "xz")
    assert code == 0 and out.strip() == "f=(2, 0) depth=0 xz"


def test_round_trip_and_determinism(tmp_path, capsys):
    src = tmp_path / "e.json"
    src.write_text('["zv^-1t", "x"]')
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "reduce", str(src), "--out", str(first))
    run(capsys, "reduce", str(src), "--out", str(second))
    assert first.read_bytes() == second.read_bytes()
    again = tmp_path / "c.json"
    run(capsys, "reduce", str(first), "--out", str(again))
    assert json.loads(again.read_text()) == json.loads(first.read_text())


def test_errors(tmp_path, capsys):
    assert run(capsys, "chart", "xq")[0] == 1
    bad = tmp_path / "bad.cfg"
    bad.write_text("beta = 10\n")
    code, _, err = run(capsys, "params", "--config", str(bad))
    assert code == 1 and "τ ≥ 10ε" in err
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2
    assert run(capsys, "params", "--bound", "2")[1].count("w_exponent_bound = 2") == 1


def test_abbreviations():
    assert expand_word("v", DESK) == DESK.v
    assert expand_word("v⁻¹", DESK) == invert(DESK.v)
    assert expand_word("V", DESK) == invert(DESK.v)
    assert expand_word("w·w", DESK) == "ztzt"
