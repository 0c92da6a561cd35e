import json
import subprocess
import sys
from pathlib import Path

import pytest

from gradedq.cli import main
from gradedq.dsl.parser import parse, parse_expr
from gradedq.dsl.printer import format_expr
from gradedq.dsl.runner import EXIT_FAIL, EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC, fmt_text, run_text
from gradedq.errors import ParseError

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"
CORPUS = sorted(SCRIPTS.glob("*.gq"))
EXPECTED_EXIT = {"su2_mutated.gq": EXIT_FAIL}


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_round_trip(path):
    text = path.read_text()
    once = fmt_text(text)
    assert parse(once) == parse(text)
    assert fmt_text(once) == once


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_corpus_exit_codes(path, capsys):
    code = main(["run", "--no-timing", str(path)])
    assert code == EXPECTED_EXIT.get(path.name, EXIT_OK)
    out = capsys.readouterr().out
    assert out.rstrip().splitlines()[-1].startswith("summary:")


@pytest.mark.parametrize("path", CORPUS[:4], ids=lambda p: p.name)
def test_json_report_is_deterministic(path, capsys):
    outs = []
    for _ in range(2):
        main(["run", "--emit", "json", "--no-timing", str(path)])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    records = json.loads(outs[0])
    assert records and all("timing_ms" not in r for r in records)
    assert {r["status"] for r in records} <= {"PASS", "FAIL", "ERROR"}


@pytest.mark.parametrize("text", ["x^2*y - 3/4*d(x)*y", "-(a + b)^3", "x*(y - z)", "2*x^2 - -x"])
def test_expression_round_trip(text):
    e = parse_expr(text)
    assert parse_expr(format_expr(e)) == e


def test_parse_errors_carry_location():
    with pytest.raises(ParseError) as exc:
        parse("algebra A { x:0.5 }")
    assert (exc.value.line, exc.value.column) == (1, 15)
    with pytest.raises(ParseError) as exc:
        parse("algebra A { x:1 }\nfrobnicate A")
    assert exc.value.line == 2 and "check" in exc.value.expected


@pytest.mark.parametrize("text,kind", [
    ("algebra A { x:1 }\ncheck nilpotent Q", "UnknownName"),
    ("algebra A { x:1 }\nalgebra A { y:1 }", "DuplicateName"),
    ("algebra A { x:1 }\ncheck nilpotent A", "KindMismatch"),
    ("algebra A { x:1 y:1 }\nderivation Q on A degree 2 { x -> y }", "DegreeMismatch"),
])
def test_semantic_errors(text, kind):
    r = run_text(text)
    assert r.exit_code == EXIT_SEMANTIC
    assert r.error.kind == kind and r.error.line == 2


def test_semantic_errors_found_without_execution():
    r = run_text("algebra A { x:1 }\ncheck nilpotent A", execute=False)
    assert r.exit_code == EXIT_SEMANTIC and not r.records


PQ_HEAD = """algebra Tstar { x1:0 x2:0 p1:1 p2:1 }
symplectic W1 on Tstar degree 1 pairs { (x1, p1); (x2, p2) }
qfield Qc from W1 hamiltonian p1*p2
algebra S2 { s:0 r:0 }
"""


def test_kernel_error_is_reported_as_error():
    r = run_text(PQ_HEAD + "morphism Z : Tstar -> S2 { x1 -> s; x2 -> r; p1 -> 0; p2 -> 0 }\naksz W1 Qc Z")
    assert r.exit_code == EXIT_FAIL
    (rec,) = r.records
    assert rec.status == "ERROR" and rec.error.startswith("BaseNotTangent")


def test_expect_fail_semantics():
    base = "algebra A { x:1 y:2 }\nderivation Q on A degree 1 { x -> y; y -> x*y }\n"
    r = run_text(base + "check nilpotent Q expect fail")
    assert r.exit_code == EXIT_OK and r.records[0].expected == "FAIL"
    r = run_text("algebra A { x:1 y:1 }\nderivation Q on A degree 1 { x -> y*y }\ncheck nilpotent Q expect fail")
    assert r.exit_code == EXIT_FAIL
    assert r.records[0].witness == "expected failure did not occur"


def test_cli_exit_codes(tmp_path, capsys):
    cases = {
        "ok.gq": ("algebra A { x:1 }\nderivation Q on A degree 1 { }\ncheck nilpotent Q", EXIT_OK),
        "parse.gq": ("algebra A { x:1.5 }", EXIT_PARSE),
        "sem.gq": ("check nilpotent Q", EXIT_SEMANTIC),
    }
    for name, (text, code) in cases.items():
        p = tmp_path / name
        p.write_text(text)
        assert main(["run", str(p)]) == code
        assert main(["check", str(p)]) == code
    assert main(["fmt", str(tmp_path / "parse.gq")]) == EXIT_PARSE
    assert main(["run", str(tmp_path / "missing.gq")]) == EXIT_SEMANTIC
    capsys.readouterr()


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "gradedq.cli", "run", "--no-timing",
                        str(SCRIPTS / "su2_mutated.gq")], capture_output=True, text=True)
    assert r.returncode == EXIT_FAIL
    assert "summary: 0 PASS, 2 FAIL, 0 ERROR" in r.stdout


def test_empty_script_and_zero_image():
    r = run_text("# nothing to do\n")
    assert r.exit_code == EXIT_OK and not r.records
    r = run_text("algebra su2 { xi1:1 xi2:1 xi3:1 }\nderivation Q on su2 degree 1 { xi1 -> xi1*xi1 }\n"
                 "check nilpotent Q\neval Q(xi1) on su2")
    assert r.exit_code == EXIT_OK
    assert r.records[-1].outputs and all(str(v) == "0" for v in r.records[-1].outputs.values())
