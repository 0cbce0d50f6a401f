import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from prs.cli import main

GOLDEN = Path(__file__).parent / "golden" / "classification_table.json"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture(scope="module")
def table_json():
    return run("table", "--format", "json")


def test_table_json_schema_and_golden(table_json):
    code, text = table_json
    assert code == 0
    data = json.loads(text)
    assert set(data) == {"rows", "config"}
    for row in data["rows"]:
        assert set(row) == {"family", "class", "n", "hp", "verdict", "certified"}
        assert isinstance(row["hp"], list) and len(row["hp"]) == 3
        assert row["n"] is None or isinstance(row["n"], int)
    assert data == json.loads(GOLDEN.read_text())


def test_table_is_deterministic(table_json):
    assert run("table", "--format", "json") == table_json


def test_table_golden_diff_passes_and_fails(tmp_path):
    small = run("table", "--n-max", "2", "--samples", "1", "--format", "json")[1]
    good = tmp_path / "good.json"
    good.write_text(small)
    assert run("table", "--n-max", "2", "--samples", "1", "--golden", str(good))[0] == 0
    data = json.loads(small)
    data["rows"][0]["hp"] = [9, 9, 9]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    assert run("table", "--n-max", "2", "--samples", "1", "--golden", str(bad))[0] == 1


def test_table_markdown():
    code, text = run("table", "--n-max", "1", "--samples", "1")
    assert code == 0
    assert text.splitlines()[0].startswith("| surface |")
    assert "| S0 |  | 0 | 4 | 7 | 3 | obstructed | yes |" in text


def test_table_fails_when_truncation_too_small():
    code = subprocess.run([sys.executable, "-m", "prs.cli", "table", "--n-max", "1", "--samples", "1",
                           "--M", "4", "--N", "4", "--K", "1"], capture_output=True).returncode
    assert code != 0


@pytest.mark.parametrize("argv, hp", [
    (["--family", "sn", "--n", "1", "--coeffs", "a0=0,c0=1"], "HP = (1, 2, 1)"),
    (["--family", "s0", "--coeffs", "A=0,B=0,C=0"], "HP = (4, 7, 3)"),
    (["--family", "a0", "--coeffs", "a0=0"], "HP = (2, 3, 1)"),
    (["--family", "twisted", "--t0", "2/3", "--coeffs", "5"], "HP = (2, 3, 1)"),
    (["--family", "am1"], "HP = (1, 1, 0)"),
])
def test_cohomology(argv, hp):
    code, text = run("cohomology", *argv)
    assert code == 0 and hp in text


def test_cohomology_reports_class():
    assert "class any" in run("cohomology", "--family", "a0", "--coeffs", "a0=0")[1]


def test_obstruction():
    code, text = run("obstruction", "--family", "sn", "--n", "3", "--coeffs", "a0=0,c0=1,c1=0,c2=0")
    assert code == 0 and "witness found" in text and "verdict: obstructed" in text
    code, text = run("obstruction", "--family", "a0", "--coeffs", "a0=1")
    assert "none found" in text and "verdict: unobstructed" in text


def test_verify_family():
    code, text = run("verify-family", "--family", "s0", "--coeffs", "A=1,B=2,C=3")
    assert code == 0
    assert "well-defined: true" in text and "KS rank 3/3" in text
    code, text = run("verify-family", "--family", "sn", "--n", "2", "--coeffs", "0,0,0")
    assert code == 1 and "no registered family" in text


def test_bracket_reproduces_product_surface_display():
    code, text = run("bracket", "--family", "s0", "--lhs", "2 d_xi^d_u + 3 xi d_xi^d_u + 5 xi^2 d_xi^d_u",
                     "--rhs", "7 d_u + 11 d_xi + 13 xi d_xi + 17 xi^2 d_xi")
    assert code == 0
    assert text.splitlines()[0] == "-7*d_xi^d_u - 42*xi*d_xi^d_u - 14*xi^2*d_xi^d_u"


def test_bracket_reduce_and_orders():
    code, text = run("bracket", "--family", "s0", "--chart", "1", "--reduce",
                     "--lhs", "d_xi^d_u", "--rhs", "u1^-1 xi d_xi")
    assert code == 0 and "class in H^1(wedge2): ['1', '0', '0']" in text
    code, text = run("bracket", "--family", "s0", "--lhs", "d_xi", "--rhs", "d_xi^d_u")
    assert text.strip() == "0"
    code, text = run("bracket", "--family", "s0", "--lhs", "d_xi^d_u", "--rhs", "xi d_xi^d_u")
    assert "trivector" in text


def test_partial_named_coefficients_default_to_zero():
    code, text = run("cohomology", "--family", "s0", "--coeffs", "A=1,B=2")
    assert code == 0 and "'C': '0'" in text


@pytest.mark.parametrize("argv", [
    ["cohomology", "--family", "s0", "--coeffs", "1,2"],
    ["cohomology", "--family", "s0", "--coeffs", "D=1"],
    ["cohomology", "--family", "s0", "--coeffs", "A=1,2"],
    ["cohomology", "--family", "s0", "--coeffs", "A=x"],
    ["cohomology", "--family", "sn"],
    ["cohomology", "--family", "twisted"],
    ["bracket", "--family", "s0", "--lhs", "d_xi +", "--rhs", "d_u"],
    ["table", "--format", "xml"],
    ["nonsense"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        run(*argv)
    assert exc.value.code == 2


def test_arity_error_names_parameters(capsys):
    with pytest.raises(SystemExit):
        run("cohomology", "--family", "sn", "--n", "2", "--coeffs", "1")
    assert "a0, c0, c1" in capsys.readouterr().err


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "prs.cli", "cohomology", "--family", "am1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "HP = (1, 1, 0)" in r.stdout
