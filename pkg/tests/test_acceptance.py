"""Acceptance criteria, one test each, with their time limits.

Every test records a PASS/FAIL line that is printed in the pytest terminal
summary (see conftest.py).
"""

import random
import time
from contextlib import contextmanager

from procsem.axioms import check_derivation, fuzz_soundness, instantiate
from procsem.bisim import bisimilar, collapse, isomorphic
from procsem.chart import has_infinite_trace, to_json
from procsem.cli import main
from procsem.extract import extract, roundtrip
from procsem.fixtures import EXPR_LEFT, EXPR_RIGHT, FIXTURE_C, FIXTURE_N1, FIXTURE_N2
from procsem.generate import all_regexps, random_chart, random_regexp
from procsem.lee import Witness, check_witness, lee_decide, replay, witness_of
from procsem.semantics import chart_of, deriv, one_return_less, steps_by_rules, terminates_by_rules, tm
from procsem.syntax import Act, letters, parse, to_string

from .test_axioms import b10_derivation, node

RESULTS: list[str] = []
REFERENCE_LEVELS = {("u2", "b", "u1"): 1, ("u0", "a", "u1"): 2}


@contextmanager
def criterion(number, title, limit):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < limit
        verdict = "PASS" if ok and within else "FAIL"
        RESULTS.append(f"[{verdict}] criterion {number}: {title} ({elapsed:.2f}s, limit {limit}s)")
    assert within, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"


def test_criterion_1_reference_pair():
    with criterion(1, "reference expressions bisimilar, both collapse to C", 1):
        g, h = chart_of(parse(EXPR_LEFT)), chart_of(parse(EXPR_RIGHT))
        assert bisimilar(g, h).related
        for c in (g, h):
            q = collapse(c).quotient
            assert len(q.vertices) == 3
            assert isomorphic(q, FIXTURE_C)


def test_criterion_2_non_expressible(tmp_path, capsys):
    with criterion(2, "N1 and N2 fail LEE and expressible", 1):
        for name, c in (("n1", FIXTURE_N1), ("n2", FIXTURE_N2)):
            assert lee_decide(c) is None
            path = tmp_path / f"{name}.json"
            path.write_text(to_json(c))
            assert main(["expressible", str(path)]) == 1
            assert "collapse does not satisfy LEE" in capsys.readouterr().out


def test_criterion_3_elimination_run():
    with criterion(3, "LEE run on C: 2 steps, levels [1],[2], 3 transitions then 1 vertex", 1):
        trace = lee_decide(FIXTURE_C)
        assert trace is not None and len(trace.steps) == 2
        w = witness_of(FIXTURE_C, trace)
        assert w.levels == REFERENCE_LEVELS
        assert check_witness(w)
        _, after1, after2 = replay(FIXTURE_C, trace)
        assert len(after1.transitions) == 3
        assert after2.vertices == {"u0"} and not after2.transitions
        assert not has_infinite_trace(after2)


def test_criterion_4_extraction_on_figure():
    with criterion(4, "extraction from C is bisimilar to C and to the left reference expression", 1):
        e = extract(FIXTURE_C, Witness(FIXTURE_C, REFERENCE_LEVELS))
        assert bisimilar(chart_of(e), FIXTURE_C).related
        assert bisimilar(chart_of(e), chart_of(parse(EXPR_RIGHT))).related


def _facts_agree(e):
    by_deriv = {(a, d) for a in letters(e) for d in deriv(a, e)}
    by_rules = {(f.label, f.target) for f in steps_by_rules(e)}
    return by_deriv == by_rules and bool(tm(e)) == terminates_by_rules(e)


def test_criterion_5_oracle_equivalence():
    with criterion(5, "deriv/tm agree with rule-based proof search", 60):
        disagreements = [to_string(e) for e in all_regexps(7, ("a", "b")) if not _facts_agree(e)]
        rng = random.Random(5)
        disagreements += [to_string(e) for e in (random_regexp(rng, 15) for _ in range(1000))
                          if not _facts_agree(e)]
        assert disagreements == []


def test_criterion_6_roundtrip_corpus():
    with criterion(6, "200 random 1-return-less expressions round-trip", 300):
        rng = random.Random(6)
        failures = []
        done = 0
        while done < 200:
            e = random_regexp(rng, 12)
            if not one_return_less(e):
                continue
            done += 1
            report = roundtrip(e)
            if not (report.bisimilar and report.one_return_less):
                failures.append(to_string(e))
        assert failures == []


def lee_corpus():
    for e in all_regexps(7, ("a", "b")):
        yield chart_of(e)
    rng = random.Random(7)
    for _ in range(1000):
        yield random_chart(rng, rng.randint(1, 8), edge_prob=rng.choice([0.1, 0.15, 0.2, 0.3]))
    yield from (FIXTURE_C, FIXTURE_N1, FIXTURE_N2)


def test_criterion_7_lee_preserved_by_collapse():
    with criterion(7, "LEE preserved under collapse on the corpus", 120):
        failures = []
        with_lee = 0
        for c in lee_corpus():
            if lee_decide(c) is None:
                continue
            with_lee += 1
            if lee_decide(collapse(c).quotient) is None:
                failures.append(c)
        assert with_lee > 1000
        assert failures == []


def test_criterion_8_axiom_soundness():
    with criterion(8, "500 sound instances per axiom; B5/B8 counterexamples fail", 120):
        for name in ("B1", "B2", "B3", "B4", "B6", "B7", "B9", "B10", "B11", "A8"):
            report = fuzz_soundness(name, 500, seed=8)
            assert report.failures == [], name
        a, b, c = Act("a"), Act("b"), Act("c")
        lhs, rhs = instantiate("B8", {"e": a})
        assert not bisimilar(chart_of(lhs), chart_of(rhs)).related
        lhs, rhs = instantiate("B5", {"e": a, "f": b, "g": c})
        assert not bisimilar(chart_of(lhs), chart_of(rhs)).related


def test_criterion_9_proof_checker():
    with criterion(9, "proof checker accepts B10 derivation, rejects B5/B8 and unguarded Fix", 1):
        d = b10_derivation()
        assert d.size() == 5 and check_derivation(d)
        assert not check_derivation(node("axiom", "a.(b+c)", "a.b+a.c", name="B5",
                                         subst={"e": "a", "f": "b", "g": "c"}))
        assert not check_derivation(node("axiom", "a.0", "0", name="B8", subst={"e": "a"}))
        premise = node("axiom", "x", "1.x+0")
        result = check_derivation(node("fix", "x", "1*.0", premise))
        assert not result and "empty word" in result.message
