import json
import subprocess
import sys

import pytest

from mixsing.cli import JobConfig, main, parse_eisenstein, parse_expression, run_report
from mixsing.coeff import DvrSpec
from mixsing.errors import ExponentOverflow, ExprSyntaxError, UnknownVariable


def terms(src, p=3, **kw):
    return parse_expression(src, DvrSpec(p), **kw).terms


def test_parse_basic():
    assert terms("x1^2 + x2^2 + p^3") == {(2, 0): [1], (0, 2): [1], (0, 0): [27]}
    assert terms("p*x1") == {(1,): [3]}
    assert terms("(x1 + 1)^2 - 1") == {(2,): [1], (1,): [2]}
    assert terms(" - x1 * - x1 ") == {(2,): [1]}
    assert terms("pi*x1") == {(1,): [3]}  # pi aliases p when unramified


def test_parse_ramified():
    spec = parse_eisenstein("t^2-3", 3)
    assert spec == DvrSpec(3, (-3, 0))
    f = parse_expression("x1^2 + pi^3 + p", spec)
    assert f.terms == {(2,): [1], (0,): [3, 0, 0, 1]}
    assert f.series(6, 4).terms[(0,)] == (3, 3)  # pi^3 = 3 pi


def test_syntax_error_offset():
    with pytest.raises(ExprSyntaxError) as e:
        terms("x1^^2")
    assert e.value.offset == 3
    for bad, off in [("x1 +", 4), ("(x1", 3), ("x1 $ 2", 3), ("x1^2^3", 4), ("", 0), ("x1 x2", 3)]:
        with pytest.raises(ExprSyntaxError) as e:
            terms(bad)
        assert e.value.offset == off, bad


def test_unknown_variable_and_overflow():
    with pytest.raises(UnknownVariable):
        terms("x3", n=2)
    with pytest.raises(UnknownVariable):
        terms("z + x1")
    with pytest.raises(UnknownVariable):
        terms("y + x1")
    with pytest.raises(ExponentOverflow):
        terms("x1^13")
    assert terms("y^2 + x1^2", allow_y=True) == {(0, 2): [1], (2, 0): [1]}


def test_report_examples():
    rep, rc = run_report("p^2+x1^2", JobConfig(p=3))
    assert rc == 0
    assert rep["tau_V"]["value"] == 1 and rep["classify"]["kind"] == "Morse"
    assert rep["determinacy"]["order"] == 2
    rep, rc = run_report("x1", JobConfig(p=7))
    assert rep["tau_V"]["value"] == 0 and rep["classify"]["kind"] == "Regular"
    rep, _ = run_report("p*x1", JobConfig(p=3), ["0"])
    assert rep["tau_Delta"]["value"] == "1"  # rationals always serialize as strings
    assert rep["tau_delta"][0]["value"] == "5/3"  # the expected 1 does not hold
    assert list(rep) == ["input", "config", "ord", "tilde", "tau_V", "mu_V", "tau_delta", "tau_Delta",
                         "tau_pi", "ord_uniformizer", "determinacy", "classify", "certificates",
                         "precision_events"]


def test_rationals_are_strings(capsys):
    assert main(["invariants", "x1^2+p^2", "--p", "5", "--json", "--only", "tau_Delta"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["tau_Delta"]["value"] == "2/5"


def test_json_is_byte_identical(capsys):
    args = ["invariants", "x1^2+x2^3+p^2", "--p", "5", "--json", "--tau-delta", "x1,1", "--seed", "4"]
    main(args)
    a = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == a


def test_error_exit_code(capsys):
    assert main(["tilde", "x1^^2", "--json"]) == 2
    err = json.loads(capsys.readouterr().out)
    assert err["error"] == "ExprSyntaxError" and err["module"] == "cli" and "bounds" in err
    assert main(["tilde", "x1", "--p", "4", "--json"]) == 2
    assert main(["tilde", "x1", "--eisenstein", "t^2-9", "--json"]) == 2


def test_inconclusive_exits_zero(capsys):
    assert main(["isolated", "p*x1*x2", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["isolated"]["kind"] == "Inconclusive"
    assert main(["invariants", "x1*x2", "--json", "--only", "tau_V"]) == 0
    assert json.loads(capsys.readouterr().out)["tau_V"]["flag"] == "NotFiniteUpToBounds"


def test_subcommands(capsys):
    assert main(["tilde", "p*x1+x1^3", "--p", "5"]) == 0
    assert "tilde: x1*y + x1^3" in capsys.readouterr().out
    assert main(["split", "x1^2+pi^3", "--eisenstein", "t^2-3", "--json"]) == 0
    sp = json.loads(capsys.readouterr().out)["split"]
    assert sp["residual"] == "x1^3" and sp["k"] == 0
    assert main(["determinacy", "y^2+x1^2", "--json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["ideal"] == "vars" and d["determinacy"]["k"] == 1


def test_batch(tmp_path, capsys):
    f = tmp_path / "in.txt"
    f.write_text("x1\n# comment\n\nx1^^2\np^2+x1^2\n")
    assert main(["invariants", "--batch", str(f), "--json", "--only", "tau_V"]) == 2
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    assert json.loads(lines[1])["error"] == "ExprSyntaxError"
    assert json.loads(lines[2])["tau_V"]["value"] == 1


def test_selftest_table(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "tau_V(x1)" in out and "PASS" in out and "FAIL" in out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "mixsing", "tilde", "p^2*x1", "--json"],
                       capture_output=True, text=True, check=True)
    assert json.loads(r.stdout)["tilde"]["text"] == "x1*y^2"
