import io
import os
import subprocess
import sys
from pathlib import Path

import pytest

from pkn.cli import Repl, main
from pkn.graph import KnowledgeGraph

DATA = Path(__file__).parent / "data"
CORPUS = DATA / "corpus.pkn"
RAIN = DATA / "rain.pkn"
ROSES = DATA / "roses.pkn"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for key in list(os.environ):
        if key.startswith("PKN_"):
            monkeypatch.delenv(key)


@pytest.fixture
def rain_fact(tmp_path):
    path = tmp_path / "fact.pkn"
    path.write_text("weather of Paris includes rainy (certainty high)\n")
    return path


# ------------------------------------------------------------------- check


def test_check_corpus():
    assert run("check", CORPUS) == (0, "14 statements, 0 errors\n", "")


def test_check_truncated_line(tmp_path):
    path = tmp_path / "bad.pkn"
    path.write_text("flowers of Netherlands includes\nPaul likes John\n")
    code, out, _ = run("check", path)
    lines = out.splitlines()
    assert code == 1
    assert lines[0].startswith(f"{path}:1:") and "referent" in lines[0]
    assert lines[-1] == "1 statements, 1 errors"


def test_check_missing_file(tmp_path):
    code, _, err = run("check", tmp_path / "nope.pkn")
    assert code == 2 and "nope.pkn" in err


def test_usage_error():
    assert run("frobnicate")[0] == 1


# ------------------------------------------------------------------- query


def test_query_few():
    q = "few ?x where color of ?x includes yellow from ?x kind-of rose"
    assert run("query", q, ROSES) == (0, "true (2/10, 0.20)\n", "")


def test_query_count_and_which():
    assert run("query", "count ?x where color of ?x includes yellow", ROSES)[1] == "2\n"
    assert run("query", "which ?x where color of ?x includes yellow", ROSES)[1] == "r0\nr1\n"


def test_query_threshold_flag():
    q = "many ?x where color of ?x includes yellow from ?x kind-of rose"
    assert run("query", q, ROSES)[1].startswith("false")
    assert run("query", "--many", "0.2", q, ROSES)[1].startswith("true")


def test_malformed_query():
    code, out, err = run("query", "few ?x where color of ?x includes yellow", ROSES)
    assert code == 1 and out == "" and "from" in err


def test_empty_reference_class_is_reported():
    code, _, err = run("query", "most ?x where color of ?x includes yellow from ?x kind-of tulip",
                       ROSES)
    assert code == 1 and err.startswith("error:")


# --------------------------------------------------------------------- ask


def test_ask_forward_with_explanation(rain_fact):
    code, out, _ = run("ask", "--explain", "weather of Paris includes cloudy", RAIN, rain_fact)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "supported (high)" and len(lines) == 4
    assert lines[1] == "weather of Paris includes cloudy (implication-forward, high)"


def test_ask_backward(tmp_path):
    path = tmp_path / "cloudy.pkn"
    path.write_text("weather of Paris includes cloudy\n")
    assert run("ask", "weather of Paris includes rainy", RAIN, path)[:2] == (0, "supported (low)\n")


def test_ask_undecided():
    assert run("ask", "weather of Rome includes cloudy", RAIN)[:2] == (4, "undecided (none)\n")


def test_ask_opposed():
    path = DATA / "attacks" / "rebut.pkn"
    assert run("ask", "color of flamingo includes pink", path)[:2] == (3, "opposed (certain)\n")


def test_ask_depth_flag(rain_fact):
    assert run("ask", "--depth", "1", "weather of Paris includes cloudy", RAIN, rain_fact)[0] == 0


def test_ask_min_certainty_from_env(monkeypatch, tmp_path):
    path = tmp_path / "cloudy.pkn"
    path.write_text("weather of Paris includes cloudy\n")
    monkeypatch.setenv("PKN_MIN_CERTAINTY", "0.5")
    assert run("ask", "weather of Paris includes rainy", RAIN, path)[:2] == (4, "undecided (none)\n")


def test_ask_bad_supposition():
    code, _, err = run("ask", "weather of", RAIN)
    assert code == 1 and "1:" in err


def test_bad_config_value(monkeypatch):
    monkeypatch.setenv("PKN_DEPTH", "0")
    code, _, err = run("ask", "a likes b", RAIN)
    assert code == 1 and "max_depth" in err


# ------------------------------------------------------------------ export


def test_export_flowers(tmp_path):
    path = tmp_path / "flowers.pkn"
    path.write_text("flowers of Netherlands includes daffodils, tulips (certainty high)\n")
    code, out, _ = run("export", path)
    assert code == 0 and out.count("a pkn:Property") == 1


def test_export_empty_file(tmp_path):
    path = tmp_path / "empty.pkn"
    path.write_text("")
    assert run("export", path)[1] == ("@prefix pkn: <urn:x-pkn:> .\n"
                                       "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n")


def test_export_parse_error_emits_nothing(tmp_path):
    path = tmp_path / "bad.pkn"
    path.write_text("a likes b\nflowers of Netherlands includes\n")
    code, out, err = run("export", path)
    assert (code, out) == (1, "") and "2:" in err


def test_export_deterministic():
    assert run("export", CORPUS) == run("export", CORPUS)


# -------------------------------------------------------------------- repl


def session(lines, graph=None):
    out = io.StringIO()
    code = Repl(graph or KnowledgeGraph()).run(io.StringIO("".join(l + "\n" for l in lines)), out)
    return code, out.getvalue()


def test_repl_assert_ask_undo():
    code, out = session(["a likes b", "ask a likes b", "undo", "ask a likes b"])
    assert code == 0
    assert out == "asserted #0\nsupported (certain)\nundone, 0 statements\nundecided (none)\n"


def test_repl_survives_bad_input():
    code, out = session(["a likes", "which ?x", "ask", "explain maybe", "a likes b"])
    lines = out.splitlines()
    assert code == 0 and lines[-1] == "asserted #0"
    assert all(line.startswith("error:") for line in lines[:-1]) and len(lines) == 5


def test_repl_eof_is_clean():
    assert session([]) == (0, "")


def test_repl_query():
    _, out = session(["r1 kind-of rose", "count ?x where ?x kind-of rose"])
    assert out.splitlines()[-1] == "1"


def test_repl_golden_transcript():
    script = (DATA / "repl_session.in").read_bytes()
    proc = subprocess.run([sys.executable, "-m", "pkn", "repl", str(RAIN)], input=script,
                          capture_output=True, check=False)
    assert proc.returncode == 0 and proc.stderr == b""
    assert proc.stdout == (DATA / "repl_session.golden").read_bytes()
