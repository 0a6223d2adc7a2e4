import io
import json
import subprocess
import sys

import pytest

from grpgeom.cli import main

COMM_SQ_CUBE = """# commuting pair, involution and order-3 element
vars 2
eq [x1,x2]
eq x1^2
eq x2^3
"""


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def structured(*argv):
    code, text = run(*argv, "--format", "structured")
    return code, json.loads(text)


@pytest.fixture
def eqs_file(tmp_path):
    path = tmp_path / "comm_sq_cube.eqs"
    path.write_text(COMM_SQ_CUBE)
    return str(path)


def test_solve_cyclic(tmp_path):
    code, rep = structured("solve", "--group", "cyclic(2)", "--vars", "1", "--eq", "x1^2")
    assert code == 0
    assert rep["solutions"]["count"] == 2
    assert rep["schema"] == "grpgeom.report/1"


def test_analyze_no_instance(eqs_file):
    code, text = run("analyze", "--group", "symmetric(3)", "--vars", "2", "--system", eqs_file)
    assert code == 0
    assert "result: not fully characteristic" in text
    code, rep = structured("analyze", "--group", "symmetric(3)", "--vars", "2", "--system", eqs_file)
    w = rep["decompose"]["witness"]
    assert w["point"] != w["image"] and rep["consistent"]


def test_decompose_commuting(tmp_path):
    code, rep = structured("decompose", "--group", "symmetric(3)", "--vars", "2", "--eq", "[x1,x2]")
    assert code == 0
    assert rep["result"] == "fully characteristic"
    assert sorted(len(K["elements"]) for K in rep["decompose"]["family"]) == [2, 2, 2, 3]


def test_closure_of_points():
    code, rep = structured("closure", "--group", "symmetric(3)", "--vars", "1", "--point", "1")
    assert code == 0
    assert rep["closure"]["count"] == 4 and not rep["is_algebraic"]


def test_identities_and_gcheck():
    code, rep = structured("identities", "--group", "symmetric(3)", "--vars", "1", "--eq", "x1^2",
                           "--maxlen", "8")
    assert code == 0 and rep["status"] == "ok"
    code, rep = structured("gcheck", "--group", "symmetric(3)", "--vars", "1", "--coefficients",
                           "--eq", "x1*g1 = g1*x1")
    assert code == 0
    assert rep["corollary2"]["witness_verified"]
    assert rep["corollary3"]["status"] == "no variety correspondence asserted"


@pytest.mark.parametrize("argv", [
    ["solve", "--group", "symmetric(3)", "--vars", "1", "--eq", "x2"],
    ["solve", "--group", "nonsense", "--vars", "1"],
    ["solve", "--group", "cyclic(2)"],
    ["solve", "--group", "cyclic(2)", "--vars", "1", "--system", "/nonexistent.eqs"],
    ["decompose", "--group", "symmetric(3)", "--vars", "1", "--coefficients", "--eq", "g1*x1"],
    ["gcheck", "--group", "symmetric(3)", "--vars", "1", "--eq", "x1"],
    ["bogus"],
    ["solve", "--vars", "one"],
])
def test_input_errors_exit_1(argv, capsys):
    try:
        code = main(argv, out=io.StringIO())
    except SystemExit as exc:
        code = exc.code
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_system_file_error_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.eqs"
    path.write_text("vars 1\neq x1\neq x1^\n")
    assert main(["solve", "--group", "cyclic(2)", "--system", str(path)], out=io.StringIO()) == 1
    assert "line 3" in capsys.readouterr().err


def test_budget_exit_3():
    code, rep = structured("solve", "--group", "symmetric(3)", "--vars", "3", "--budget", "100")
    assert code == 3 and rep["truncated"]
    code, rep = structured("analyze", "--group", "symmetric(3)", "--vars", "2", "--budget", "500")
    assert code == 3 and rep["exact"]["outcome"] == "budget"


def test_scan_examples():
    code, rep = structured("scan", "--group", "cyclic(2)", "--vars", "1")
    assert code == 0
    row = rep["groups"][0]
    assert row["fully_characteristic"] == row["examined"]
    code, rep = structured("scan", "--group", "symmetric(3)", "--vars", "2", "--samples", "0")
    assert code == 0
    row = rep["groups"][0]
    assert row["oracle_agreement"] == row["examined"] > 0
    code, rep = structured("scan")
    assert code == 0 and rep["groups"] == []


def test_scan_is_deterministic_across_jobs():
    argv = ["scan", "--group", "symmetric(3)", "--group", "cyclic(4)", "--vars", "2", "--samples", "30",
            "--seed", "5", "--format", "structured"]
    a, b = io.StringIO(), io.StringIO()
    assert main(argv + ["--jobs", "1"], out=a) == 0
    assert main(argv + ["--jobs", "3"], out=b) == 0
    assert a.getvalue() == b.getvalue()


def test_text_is_derived_from_structure():
    code, text = run("solve", "--group", "cyclic(2)", "--vars", "1", "--eq", "x1")
    assert "count: 1" in text and "schema: grpgeom.report/1" in text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "grpgeom", "solve", "--group", "cyclic(3)", "--vars", "1",
                           "--eq", "x1^3", "--format", "structured"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["solutions"]["count"] == 3
