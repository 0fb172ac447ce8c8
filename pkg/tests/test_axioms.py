import json

import pytest

from procsem.axioms import (MILNER_AXIOMS, SCHEMAS, Derivation, DerivationFormatError, UnknownAxiom,
                            check_derivation, derivation_from_dict, derivation_from_json, derivation_to_dict,
                            fuzz_soundness, instantiate)
from procsem.bisim import bisimilar
from procsem.semantics import chart_of
from procsem.syntax import Act, parse, to_string

a, b, c = Act("a"), Act("b"), Act("c")


def node(rule, lhs, rhs, *premises, **extra):
    if "subst" in extra:
        extra["subst"] = {k: parse(v) for k, v in extra["subst"].items()}
    if "context" in extra:
        extra["context"] = parse(extra["context"], allow_hole=True)
    return Derivation(rule, parse(lhs), parse(rhs), list(premises), **extra)


def b10_derivation():
    """a* = 0*+a.a* in five nodes: trans(symm(symm(B10)), refl)."""
    ax = node("axiom", "a*", "0*+a.a*", name="B10", subst={"e": "a"})
    s1 = node("symm", "0*+a.a*", "a*", ax)
    s2 = node("symm", "a*", "0*+a.a*", s1)
    refl = node("refl", "0*+a.a*", "0*+a.a*")
    return node("trans", "a*", "0*+a.a*", s2, refl)


def test_schema_table():
    assert set(SCHEMAS) == {f"B{i}" for i in range(1, 12)} | {"A8"}
    assert {n for n, s in SCHEMAS.items() if not s.in_milner_system} == {"B5", "B8"}
    assert str(SCHEMAS["B10"]) == "(B10) e* = 0*+e.e*"
    assert SCHEMAS["B5"].metavars == ("e", "f", "g")


@pytest.mark.parametrize("name, lhs, rhs", [
    ("B6", "a+a", "a"),
    ("B8", "a.0", "0"),
    ("A8", "0.a", "0"),
])
def test_instantiate(name, lhs, rhs):
    assert instantiate(name, {"e": a}) == (parse(lhs), parse(rhs))


def test_instantiate_errors():
    with pytest.raises(UnknownAxiom):
        instantiate("B12", {"e": a})
    with pytest.raises(KeyError):
        instantiate("B1", {"e": a, "f": b})


def test_b10_derivation_is_valid():
    d = b10_derivation()
    assert d.size() == 5
    assert check_derivation(d)
    assert bisimilar(chart_of(d.lhs), chart_of(d.rhs))


def test_refl():
    assert check_derivation(node("refl", "a", "a"))
    assert not check_derivation(node("refl", "a", "b"))


@pytest.mark.parametrize("name, subst, lhs, rhs", [
    ("B5", {"e": "a", "f": "b", "g": "c"}, "a.(b+c)", "a.b+a.c"),
    ("B8", {"e": "a"}, "a.0", "0"),
])
def test_unsound_axioms_rejected(name, subst, lhs, rhs):
    result = check_derivation(node("axiom", lhs, rhs, name=name, subst=subst))
    assert not result
    assert "not part of Milner's system" in result.message


def test_unsound_axiom_rejected_deep_in_tree():
    bad = node("axiom", "a.0", "0", name="B8", subst={"e": "a"})
    d = node("trans", "a.0", "0", bad, node("refl", "0", "0"))
    result = check_derivation(d)
    assert not result and result.path == (0,)


def test_fix_side_condition():
    premise = Derivation("axiom", parse("x"), parse("1.x+0"))
    d = node("fix", "x", "1*.0", premise)
    result = check_derivation(d)
    assert not result
    assert "empty word" in result.message


def test_fix_accepts_guarded_solution():
    # a* = 0*+a.a* by B10, commuted by B3 into the Fix shape; Fix then gives a* = a*.0*.
    b10 = node("axiom", "a*", "0*+a.a*", name="B10", subst={"e": "a"})
    b3 = node("axiom", "0*+a.a*", "a.a*+0*", name="B3", subst={"e": "0*", "f": "a.a*"})
    eq = node("trans", "a*", "a.a*+0*", b10, b3)
    fix = node("fix", "a*", "a*.0*", eq)
    assert check_derivation(fix)
    assert bisimilar(chart_of(fix.lhs), chart_of(fix.rhs))


def test_fix_premise_shape_is_syntactic():
    eq = node("refl", "a*", "a*")
    assert not check_derivation(node("fix", "a*", "a*.0*", eq))


def test_cxt_rule():
    ax = node("axiom", "a+a", "a", name="B6", subst={"e": "a"})
    good = node("cxt", "b.(a+a)*", "b.a*", ax, context="b._*")
    assert check_derivation(good)
    wrong = node("cxt", "b.(a+a)", "b.a*", ax, context="b._*")
    assert not check_derivation(wrong)
    two_holes = node("cxt", "(a+a).(a+a)", "a.a", ax, context="_._")
    assert not check_derivation(two_holes)


def test_symm_and_trans_shapes():
    ax = node("axiom", "a+a", "a", name="B6", subst={"e": "a"})
    assert not check_derivation(node("symm", "a+a", "a", ax))
    assert not check_derivation(node("trans", "a+a", "b", ax, node("refl", "b", "b")))
    assert not check_derivation(node("trans", "a+a", "a", ax))


def test_axiom_instance_must_match():
    assert not check_derivation(node("axiom", "a+b", "a", name="B6", subst={"e": "a"}))
    assert not check_derivation(node("axiom", "a+a", "a", name="B6", subst={}))
    assert not check_derivation(node("axiom", "a+a", "a", name="B99", subst={"e": "a"}))


def test_json_roundtrip():
    d = b10_derivation()
    doc = derivation_to_dict(d)
    assert doc["rule"] == "trans"
    assert doc["conclusion"] == {"lhs": "a*", "rhs": "0*+a.a*"}
    again = derivation_from_json(json.dumps(doc))
    assert again == d


def test_json_context_uses_underscore():
    doc = {"rule": "cxt", "context": "b._", "conclusion": {"lhs": "b.(a+a)", "rhs": "b.a"},
           "premises": [{"rule": "axiom", "name": "B6", "subst": {"e": "a"}, "premises": [],
                         "conclusion": {"lhs": "a+a", "rhs": "a"}}]}
    assert check_derivation(derivation_from_dict(doc))


@pytest.mark.parametrize("doc", [
    {"rule": "magic", "conclusion": {"lhs": "a", "rhs": "a"}},
    {"rule": "refl"},
    {"rule": "refl", "conclusion": {"lhs": "(a", "rhs": "a"}},
    [],
])
def test_json_format_errors(doc):
    with pytest.raises((DerivationFormatError, ValueError)):
        derivation_from_dict(doc)


@pytest.mark.parametrize("name", MILNER_AXIOMS)
def test_fuzz_sound_axioms_small(name):
    assert fuzz_soundness(name, 60, seed=3).sound


def test_fuzz_b6_500():
    assert fuzz_soundness("B6", 500, seed=11).failures == []


def test_fuzz_b8_finds_letter_instance():
    report = fuzz_soundness("B8", 10, seed=0)
    first = report.failures[0]
    assert first.trial == 0 and first.subst == {"e": a}


def test_fuzz_b5_finds_letter_instance():
    report = fuzz_soundness("B5", 10, seed=0)
    first = report.failures[0]
    assert first.subst == {"e": a, "f": b, "g": c}
    assert to_string(first.lhs) == "a.(b+c)"


def test_fuzz_is_reproducible():
    r1, r2 = fuzz_soundness("B8", 30, seed=4), fuzz_soundness("B8", 30, seed=4)
    assert [f.trial for f in r1.failures] == [f.trial for f in r2.failures]


def test_fuzz_argument_errors():
    with pytest.raises(ValueError):
        fuzz_soundness("B6", 0, seed=1)
    with pytest.raises(UnknownAxiom):
        fuzz_soundness("nope", 1, seed=1)
