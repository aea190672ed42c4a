import csv
import io
import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inccad import cli
from inccad.ccd import EQUATION, INEQUATION, PLAIN
from inccad.parsing import ParseError, format_system, parse_polynomial, parse_system
from inccad.poly import VarOrder

SYSTEMS = Path(__file__).resolve().parent.parent / "systems"
XY = VarOrder(["x", "y"])
x, y = XY.gens()


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(map(str, argv)), out=out)
    return code, out.getvalue()


# ---- parser -----------------------------------------------------------------------------

def test_parse_plain_example():
    s = parse_system("vars: x, y\ny^2 + x\ny^2 + y")
    assert s.order.names == ("x", "y")
    assert s.items == [(y**2 + x, PLAIN), (y**2 + y, PLAIN)]


def test_parse_constraint_example():
    s = parse_system("vars: x, y\ny^2 + x = 0\ny^2 + y = 0")
    assert [r for _, r in s.items] == [EQUATION, EQUATION]


def test_parse_moves_rhs_and_normalizes():
    s = parse_system("vars: x, y\n2*y^2 = -2*x  # comment\n\nx <> 1/2")
    assert s.items == [(y**2 + x, EQUATION), (2 * x - 1, INEQUATION)]


def test_parse_degenerate_constants():
    s = parse_system("vars: x\n0 = 0")
    assert s.items[0][0].is_zero and s.items[0][1] == EQUATION
    assert parse_system("vars: x\n3 <> 0").items[0][1] == INEQUATION
    assert parse_system("vars: x\n3 = 0").items[0][0] == 1


@pytest.mark.parametrize(
    "text, message",
    [
        ("vars: x, y\ny^2 + z", "unknown variable 'z'"),
        ("vars: x, y\n", "no constraints"),
        ("", "missing 'vars:' header"),
        ("vars: x, y\n3", "constant polynomial"),
        ("vars: x\n0 <> 0", "0 <> 0"),
        ("vars: x, y\ny\nx = 0", "cannot be mixed"),
        ("vars: x, x\nx", "duplicate"),
        ("vars: x\nx / x", "division by a non-constant"),
        ("vars: x\nx / 0", "division by zero"),
        ("vars: x\n2 x", "line 2"),
        ("vars: x\nx^y", "line 2"),
        ("vars: x\n(x + 1", "line 2"),
        ("vars: x\nx $ 1", r"unexpected character '\$'"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_system(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as e:
        parse_system("vars: x, y\n\ny^2 + q")
    assert (e.value.line, e.value.col) == (3, 7)
    assert str(e.value).startswith("line 3, column 7")


def test_parse_polynomial_operators():
    assert parse_polynomial("(x + y)**2 - x^2", XY) == 2 * x * y + y**2
    assert parse_polynomial("-(x - 1)*3", XY) == 3 - 3 * x


@st.composite
def systems(draw):
    role = draw(st.sampled_from([PLAIN, EQUATION, INEQUATION]))
    lines = []
    for _ in range(draw(st.integers(1, 3))):
        terms = draw(st.lists(st.tuples(st.integers(-9, 9), st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=4))
        body = " + ".join(f"({c})*x^{i}*y^{j}" for c, i, j in terms) + " + y"
        lines.append(body + {PLAIN: "", EQUATION: " = 0", INEQUATION: " <> 0"}[role])
    return "vars: x, y\n" + "\n".join(lines)


@settings(max_examples=60, deadline=None)
@given(systems())
def test_round_trip(text):
    try:
        s = parse_system(text)
    except ParseError:
        return
    again = parse_system(format_system(s))
    assert again.order.names == s.order.names and again.items == s.items
    assert format_system(again) == format_system(s)


# ---- CLI --------------------------------------------------------------------------------

def test_cli_ccd_text_matches_example_tree():
    code, out = run("ccd", SYSTEMS / "parabola.sys", "--text")
    assert code == 0
    lines = [l.strip() for l in out.splitlines()]
    assert "x = 0 {" in lines and "x <> 0 {" in lines
    assert "y = 0 : y^2 + x = 0" in lines and "y^2 + x <> 0 : y^2 + x <> 0" in lines


def test_cli_json_and_text_counts_agree():
    for f in ("example1.sys", "parabola.sys"):
        _, text = run("ccd", SYSTEMS / f, "--text")
        _, js = run("ccd", SYSTEMS / f, "--json")
        doc = json.loads(js)
        leaves = [l for l in text.splitlines() if " : " in l]
        assert doc["paths"] == len(leaves)
        _, text = run("cad", SYSTEMS / f, "--text")
        _, js = run("cad", SYSTEMS / f, "--json")
        assert len(json.loads(js)["cells"]) == len([l for l in text.splitlines() if " : " in l])


def test_cli_ccd_history_and_eqs():
    _, js = run("ccd", SYSTEMS / "example1.sys", "--json", "--history")
    assert json.loads(js)["history"]
    code, js = run("ccd", SYSTEMS / "example1_eqs.sys", "--eqs", "--json")
    assert code == 0 and json.loads(js)["paths"] == 2


def test_cli_cad_parabola_layout():
    code, out = run("cad", SYSTEMS / "parabola.sys")
    assert code == 0
    assert out.count(" : ") == 9
    assert "x > 0 {" in out and "any y : y^2 + x > 0" in out


def test_cli_check_passes_and_is_reproducible(monkeypatch):
    monkeypatch.delenv("CCD_SEED", raising=False)
    code, a = run("check", SYSTEMS / "example1.sys", "--samples", 100, "--seed", 42)
    _, b = run("check", SYSTEMS / "example1.sys", "--samples", 100, "--seed", 42)
    assert code == 0 and a == b
    assert all(line.startswith("PASS") for line in a.splitlines())


def test_cli_seed_env_overrides(monkeypatch):
    monkeypatch.setenv("CCD_SEED", "7")
    _, a = run("check", SYSTEMS / "parabola.sys", "--samples", 50, "--seed", 1)
    _, b = run("check", SYSTEMS / "parabola.sys", "--samples", 50, "--seed", 2)
    assert a == b


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.sys"
    bad.write_text("vars: x\nx +\n")
    assert run("ccd", bad)[0] == 1
    assert run("ccd", tmp_path / "missing.sys")[0] == 1
    assert run("frobnicate")[0] == 1
    assert run("ccd", SYSTEMS / "parabola.sys", "--eqs")[0] == 1
    assert run("bench", tmp_path / "nodir")[0] == 1
    assert "line 2" in capsys.readouterr().err


def test_cli_check_failure_exit_code(monkeypatch):
    from inccad import checks

    def failing(system, rng, samples):
        r = checks.CheckResult("forced")
        r.record(False, "forced")
        return [r]

    monkeypatch.setattr(checks, "run_all", failing)
    code, out = run("check", SYSTEMS / "parabola.sys")
    assert code == 2 and out.startswith("FAIL forced")


def test_cli_internal_error_exit_code(monkeypatch):
    from inccad import ccd

    def boom(*a, **k):
        raise AssertionError("broken invariant")

    monkeypatch.setattr(ccd, "cylindrical_decompose", boom)
    assert run("ccd", SYSTEMS / "parabola.sys")[0] == 3


def test_cli_bench_csv(tmp_path):
    dest = tmp_path / "report.csv"
    code, _ = run("bench", SYSTEMS, "--out", dest)
    assert code == 0
    rows = list(csv.DictReader(dest.open()))
    assert {r["system"] for r in rows} >= {"parabola", "example1", "example1_eqs"}
    assert {"system", "mode", "ccd_s", "paths"} <= set(rows[0])
    for r in rows:
        assert float(r["ccd_s"]) >= 0 and int(r["paths"]) >= 0
    eqs = [r for r in rows if r["mode"] == "eqs"]
    assert eqs and all(r["cells"] == "" for r in eqs)
