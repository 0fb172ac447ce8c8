"""Corpus-scale invariants: bounded-exhaustive expressions plus seeded random charts."""

import random

import pytest

from procsem.axioms import MILNER_AXIOMS, SCHEMAS, Derivation, check_derivation, instantiate, plug
from procsem.bisim import bisimilar, bisimilar_naive, collapse, greatest_bisimulation_naive
from procsem.extract import extract, star_bodies_guarded
from procsem.fixtures import FIXTURE_C
from procsem.generate import all_regexps, random_chart, random_regexp
from procsem.lee import check_witness, lee_decide, lee_greedy, lee_search, witness_of
from procsem.semantics import chart_of, one_return_less
from procsem.syntax import Hole, Prod, Star, Sum, to_string

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def exhaustive_charts():
    return [chart_of(e) for e in all_regexps(7, ("a", "b"))]


@pytest.fixture(scope="module")
def random_charts():
    rng = random.Random(99)
    return [random_chart(rng, rng.randint(1, 8), edge_prob=rng.choice([0.1, 0.15, 0.2, 0.3]))
            for _ in range(1000)]


def test_bisim_deciders_agree_exhaustive(exhaustive_charts):
    for i, g in enumerate(exhaustive_charts):
        h = exhaustive_charts[(i * 7919) % len(exhaustive_charts)]
        assert bool(bisimilar(g, h)) == bisimilar_naive(g, h)
        mapping = collapse(g).mapping
        naive = greatest_bisimulation_naive(g, g)
        assert naive == {(v, w) for v in g.vertices for w in g.vertices if mapping[v] == mapping[w]}


def test_bisim_deciders_agree_random(random_charts):
    for g, h in zip(random_charts, random_charts[1:] + random_charts[:1]):
        assert bool(bisimilar(g, h)) == bisimilar_naive(g, h)
        q = collapse(g).quotient
        assert bisimilar_naive(g, q)


def test_greedy_agrees_with_search(exhaustive_charts, random_charts):
    for c in exhaustive_charts + random_charts:
        greedy, search = lee_greedy(c), lee_search(c)
        assert (greedy is None) == (search is None), c
        for trace in (greedy, search):
            if trace is not None:
                assert check_witness(witness_of(c, trace))


def _random_orl(rng, count, max_size=12):
    found = []
    while len(found) < count:
        e = random_regexp(rng, max_size)
        if one_return_less(e):
            found.append(e)
    return found


def test_orl_collapse_satisfies_lee():
    for e in _random_orl(random.Random(12), 200):
        assert lee_decide(collapse(chart_of(e)).quotient) is not None, to_string(e)


def test_extraction_soundness_corpus():
    rng = random.Random(13)
    corpus = [collapse(chart_of(e)).quotient for e in _random_orl(rng, 200)] + [FIXTURE_C]
    lee_charts = 0
    while lee_charts < 50:
        c = random_chart(rng, rng.randint(2, 8), edge_prob=rng.choice([0.15, 0.2, 0.3]))
        if lee_decide(c) is not None:
            corpus.append(c)
            lee_charts += 1
    for c in corpus:
        w = witness_of(c, lee_decide(c))
        assert check_witness(w)
        e = extract(c, w)
        assert bisimilar(chart_of(e), c), to_string(e)
        assert star_bodies_guarded(e)
        assert one_return_less(e), to_string(e)


def _random_context(rng, depth):
    if depth == 0:
        return Hole()
    other = random_regexp(rng, 3)
    kind = rng.choice(("sum-l", "sum-r", "prod-l", "prod-r", "star"))
    inner = _random_context(rng, depth - 1)
    return {"sum-l": lambda: Sum(inner, other), "sum-r": lambda: Sum(other, inner),
            "prod-l": lambda: Prod(inner, other), "prod-r": lambda: Prod(other, inner),
            "star": lambda: Star(inner)}[kind]()


def _random_derivation(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        name = rng.choice(MILNER_AXIOMS + ("B5", "B8"))
        subst = {v: random_regexp(rng, 5) for v in SCHEMAS[name].metavars}
        lhs, rhs = instantiate(name, subst)
        return Derivation("axiom", lhs, rhs, name=name, subst=subst)
    rule = rng.choice(("symm", "cxt", "trans"))
    p = _random_derivation(rng, depth - 1)
    if rule == "symm":
        return Derivation("symm", p.rhs, p.lhs, [p])
    if rule == "cxt":
        ctx = _random_context(rng, rng.randint(1, 2))
        return Derivation("cxt", plug(ctx, p.lhs), plug(ctx, p.rhs), [p], context=ctx)
    q = Derivation("refl", p.rhs, p.rhs)
    return Derivation("trans", p.lhs, p.rhs, [p, q])


def test_accepted_derivations_are_sound():
    rng = random.Random(14)
    accepted = rejected = 0
    for _ in range(400):
        d = _random_derivation(rng, 4)
        if check_derivation(d):
            accepted += 1
            assert bisimilar(chart_of(d.lhs), chart_of(d.rhs)), d.equation()
        else:
            rejected += 1
    assert accepted > 100 and rejected > 10
