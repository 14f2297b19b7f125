"""End-to-end acceptance checks, one per criterion.

Each ``check_N`` returns ``(ok, detail)``. Under pytest the results are
printed as a PASS/FAIL block at the end of the run; running this file
directly prints the same lines.
"""

from __future__ import annotations

import io
import random
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from attack_cases import load_cases, observed_edges, run_case  # noqa: E402
from generators import conjunctive_query, ground_goals, query_graph, rdf_graph, reasoner_graph  # noqa: E402
from oracles import QueryOracle, saturate  # noqa: E402
from turtle_check import check_collections, check_turtle  # noqa: E402

from pkn.argumentation import Stance, aggregate, ask  # noqa: E402
from pkn.cli import main  # noqa: E402
from pkn.fuzzy import (defuzzify, fuzzify, fuzzify_many, fuzzy_and, fuzzy_not, fuzzy_or,  # noqa: E402
                       make_range)
from pkn.graph import KnowledgeGraph  # noqa: E402
from pkn.model import Level, Name, Query, count_statements  # noqa: E402
from pkn.parser import parse_condition, parse_document, parse_query, serialize  # noqa: E402
from pkn.query import run_query  # noqa: E402
from pkn.rdf import BNode, to_triples, to_turtle  # noqa: E402
from pkn.reasoner import Argument, InferenceStep, Polarity, ProofParams, Reasoner, StepKind, \
    complete_analogy, verify_analogy  # noqa: E402

DATA = Path(__file__).parent / "data"
RAIN_RULE = (DATA / "rain.pkn").read_text()
RESULTS: dict = {}


def _record(n, title, ok, detail):
    RESULTS[n] = (title, ok, detail)
    return ok, detail


# --------------------------------------------------------------- criteria


def check_1():
    start = time.perf_counter()
    text = (DATA / "corpus.pkn").read_text()
    items = parse_document(text)
    same = parse_document(serialize(items)) == items
    out = io.StringIO()
    code = main(["check", str(DATA / "corpus.pkn")], out, io.StringIO())
    elapsed = time.perf_counter() - start
    ok = len(items) == 14 and same and code == 0 and elapsed < 1.0
    return _record(1, "corpus fidelity", ok,
                   f"{len(items)} items, round-trip {'equal' if same else 'DIFFERS'}, "
                   f"check exit {code}, {elapsed * 1000:.0f} ms")


def check_2():
    forward = KnowledgeGraph.from_text(RAIN_RULE + "weather of Paris includes rainy (certainty high)\n")
    backward = KnowledgeGraph.from_text(RAIN_RULE + "weather of Paris includes cloudy\n")
    f = ask(forward, parse_condition("weather of Paris includes cloudy")).summary()
    b = ask(backward, parse_condition("weather of Paris includes rainy")).summary()
    ok = (f, b) == ("supported (high)", "supported (low)")
    return _record(2, "rainy/cloudy reproduction", ok, f"forward {f}, backward {b}")


def check_3():
    rng = np.random.default_rng(3)
    a, b, c = rng.random((3, 10_000))
    laws = [
        np.abs(fuzzy_and(a, a) - a), np.abs(fuzzy_or(a, a) - a),
        np.abs(fuzzy_and(a, b) - fuzzy_and(b, a)), np.abs(fuzzy_or(a, b) - fuzzy_or(b, a)),
        np.abs(fuzzy_and(a, fuzzy_and(b, c)) - fuzzy_and(fuzzy_and(a, b), c)),
        np.abs(fuzzy_or(a, fuzzy_or(b, c)) - fuzzy_or(fuzzy_or(a, b), c)),
        np.abs(fuzzy_not(fuzzy_and(a, b)) - fuzzy_or(fuzzy_not(a), fuzzy_not(b))),
        np.abs(fuzzy_not(fuzzy_or(a, b)) - fuzzy_and(fuzzy_not(a), fuzzy_not(b))),
    ]
    law_err = max(float(x.max()) for x in laws)
    age = make_range("age", [("infant", 0, 4), ("child", 5, 17), ("adult", 18, 120)], "person")
    sweep = np.linspace(age.lower, age.upper, 1000)
    m = fuzzify_many(age, sweep)
    norm_err = float(np.abs(m.sum(axis=1) - 1).max())
    back = [defuzzify(age, row) for row in m]
    monotone = all(y >= x for x, y in zip(back, back[1:]))
    temperature = make_range("temperature", [("cold", -10, 15), ("warm", 15, 25), ("hot", 25, 45)],
                             half_width=1.0)
    boundary = fuzzify(temperature, 25).as_tuple()
    ok = law_err <= 1e-12 and norm_err <= 1e-9 and monotone and boundary == (0.0, 0.5, 0.5)
    return _record(3, "fuzzy suite", ok,
                   f"law error {law_err:.1e}, normalization error {norm_err:.1e}, "
                   f"monotone {monotone}, boundary {boundary}")


def _roses(yellow):
    lines = [f"r{i} kind-of rose" for i in range(10)]
    lines += [f"color of r{i} includes {'yellow' if i < yellow else 'red'}" for i in range(10)]
    return KnowledgeGraph.from_text("\n".join(lines))


def check_4():
    q = parse_query("few ?x where color of ?x includes yellow from ?x kind-of rose")
    two, five = run_query(_roses(2), q).holds, run_query(_roses(5), q).holds
    rng = random.Random(4)
    agree = 0
    for _ in range(100):
        statements = query_graph(rng, 50)
        which = conjunctive_query(rng)
        graph = KnowledgeGraph(statements)
        count = run_query(graph, Query("count", which.head, which.where)).count
        values = run_query(graph, which).values
        expected = QueryOracle(statements).which(which)
        agree += count == len(values) == len(expected) and set(values) == expected
    ok = two is True and five is False and agree == 100
    return _record(4, "quantifier reproduction", ok,
                   f"few 2/10 {two}, few 5/10 {five}, oracle agreement {agree}/100")


def check_5():
    rng = random.Random(5)
    graphs = mismatches = compared = 0
    for _ in range(50):
        statements, vocab = reasoner_graph(rng, 20)
        depth = rng.randint(1, 3)
        goals = ground_goals(vocab)
        expected = saturate(statements, goals, depth)
        r = Reasoner(KnowledgeGraph(statements), ProofParams(max_depth=depth))
        for goal in goals:
            compared += 1
            mismatches += r.certainty(goal, depth).anchor != expected[goal]
        graphs += 1
    ok = graphs == 50 and mismatches == 0
    return _record(5, "reasoner oracle", ok,
                   f"{graphs} graphs, {compared} goals, {mismatches} anchor mismatches")


def check_6():
    g = KnowledgeGraph.from_text("dog parent-of puppy\ncat parent-of kitten\n")
    ranked = complete_analogy(g, Name("dog"), Name("puppy"), Name("cat"))
    top = ranked[0][0] if ranked else None
    shared = KnowledgeGraph.from_text("leaf part-of tree\npetal part-of flower\n")
    unshared = KnowledgeGraph.from_text("leaf part-of tree\npetal colour-of flower\n")
    terms = [Name(n) for n in ("leaf", "tree", "petal", "flower")]
    yes, no = verify_analogy(shared, *terms), verify_analogy(unshared, *terms)
    ok = top == Name("kitten") and yes and not no
    return _record(6, "analogy", ok, f"rank 1 {top}, leaf:tree::petal:flower {yes} / {no}")


def check_7():
    cases = load_cases()
    exact = sum(sorted(observed_edges(run_case(c))) == sorted(c.expected) for c in cases)
    g = KnowledgeGraph.from_text("color of flamingo includes pink (certainty high)\n"
                                 "color of flamingo excludes pink\n")
    pro = Argument(InferenceStep(StepKind.FACT, parse_condition("color of flamingo includes pink"),
                                 (), 0, 0.8, Level.HIGH), Polarity.FOR)
    con = Argument(InferenceStep(StepKind.FACT, parse_condition("color of flamingo excludes pink"),
                                 (), 1, 1.0, Level.CERTAIN), Polarity.AGAINST)
    verdict = aggregate(pro.conclusion, [pro, con], g)
    ok = len(cases) == 3 and exact == 3 and verdict.polarity is Stance.OPPOSED
    return _record(7, "counter-argument classification", ok,
                   f"{exact}/{len(cases)} golden cases exact, high vs certain -> {verdict.summary()}")


def check_8():
    rng = random.Random(8)
    count_ok = violations = identical = 0
    for _ in range(100):
        statements = rdf_graph(rng, 15)
        g = KnowledgeGraph(statements)
        triples = to_triples(g)
        nodes = {t.subject for t in triples if isinstance(t.subject, BNode)}
        count_ok += len(nodes) == sum(count_statements(s) for s in g)
        text = to_turtle(g)
        violations += len(check_collections(triples)) + len(check_turtle(text))
        identical += to_turtle(KnowledgeGraph(statements)) == text
    ok = count_ok == 100 and violations == 0 and identical == 100
    return _record(8, "RDF export", ok,
                   f"bnode count {count_ok}/100, {violations} violations, identical {identical}/100")


def check_9():
    script = (DATA / "repl_session.in").read_bytes()
    golden = (DATA / "repl_session.golden").read_bytes()
    runs = [subprocess.run([sys.executable, "-m", "pkn", "repl", str(DATA / "rain.pkn")],
                           input=script, capture_output=True, check=False) for _ in range(2)]
    same = sum(p.stdout == golden and p.returncode == 0 for p in runs)
    return _record(9, "REPL determinism", same == 2, f"{same}/2 runs byte-identical to golden")


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9]


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{i}" for i in range(1, 10)])
def test_criterion(check):
    ok, detail = check()
    assert ok, detail


def summary_lines() -> list[str]:
    return [f"criterion {n}: {'PASS' if ok else 'FAIL'} {title} ({detail})"
            for n, (title, ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for check in CHECKS:
        check()
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for _, ok, _ in RESULTS.values()) else 1)
