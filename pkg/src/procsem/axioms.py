"""Milner's equational system for expressions under bisimilarity, and a proof checker.

The schema table is the Aanderaa-style system with commuted products;
Milner's system drops left distributivity (B5) and ``e.0 = 0`` (B8) and
adds ``0.e = 0`` (A8).  Derivations are trees of Axiom, Refl, Symm, Trans,
Cxt and Fix nodes, each carrying its conclusion.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .bisim import bisimilar
from .generate import random_regexp
from .semantics import chart_of, ewp
from .syntax import Act, Hole, Prod, RegExp, Star, Sum, parse, subterms, to_string


@dataclass(frozen=True)
class AxiomSchema:
    name: str
    lhs: RegExp
    rhs: RegExp
    in_milner_system: bool

    @property
    def metavars(self) -> tuple[str, ...]:
        return tuple(sorted({t.name for side in (self.lhs, self.rhs)
                             for t in subterms(side) if isinstance(t, Act)}))

    def __str__(self) -> str:
        return f"({self.name}) {to_string(self.lhs)} = {to_string(self.rhs)}"


def _schema(name: str, lhs: str, rhs: str, sound: bool = True) -> AxiomSchema:
    return AxiomSchema(name, parse(lhs), parse(rhs), sound)


SCHEMAS: dict[str, AxiomSchema] = {s.name: s for s in (
    _schema("B1", "e+(f+g)", "(e+f)+g"),
    _schema("B2", "(e.f).g", "e.(f.g)"),
    _schema("B3", "e+f", "f+e"),
    _schema("B4", "(e+f).g", "e.g+f.g"),
    _schema("B5", "e.(f+g)", "e.f+e.g", sound=False),
    _schema("B6", "e+e", "e"),
    _schema("B7", "e.0*", "e"),
    _schema("B8", "e.0", "0", sound=False),
    _schema("B9", "e+0", "e"),
    _schema("B10", "e*", "0*+e.e*"),
    _schema("B11", "e*", "(0*+e)*"),
    _schema("A8", "0.e", "0"),
)}

MILNER_AXIOMS = tuple(name for name, s in SCHEMAS.items() if s.in_milner_system)


class UnknownAxiom(KeyError):
    pass


def substitute(pattern, subst: Mapping[str, RegExp]):
    if isinstance(pattern, Act):
        if pattern.name not in subst:
            raise KeyError(f"no value for metavariable {pattern.name!r}")
        return subst[pattern.name]
    if isinstance(pattern, Sum):
        return Sum(substitute(pattern.left, subst), substitute(pattern.right, subst))
    if isinstance(pattern, Prod):
        return Prod(substitute(pattern.left, subst), substitute(pattern.right, subst))
    if isinstance(pattern, Star):
        return Star(substitute(pattern.body, subst))
    return pattern


def instantiate(name: str, subst: Mapping[str, RegExp]) -> tuple[RegExp, RegExp]:
    try:
        schema = SCHEMAS[name]
    except KeyError:
        raise UnknownAxiom(name) from None
    return substitute(schema.lhs, subst), substitute(schema.rhs, subst)


def plug(context, e: RegExp) -> RegExp:
    """Fill the single hole of ``context`` with ``e``."""
    if isinstance(context, Hole):
        return e
    if isinstance(context, Sum):
        return Sum(plug(context.left, e), plug(context.right, e))
    if isinstance(context, Prod):
        return Prod(plug(context.left, e), plug(context.right, e))
    if isinstance(context, Star):
        return Star(plug(context.body, e))
    return context


# -- derivations -------------------------------------------------------------------

RULES = ("axiom", "refl", "symm", "trans", "cxt", "fix")


@dataclass
class Derivation:
    rule: str
    lhs: RegExp
    rhs: RegExp
    premises: list["Derivation"] = field(default_factory=list)
    name: Optional[str] = None
    subst: dict[str, RegExp] = field(default_factory=dict)
    context: Optional[object] = None

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def equation(self) -> str:
        return f"{to_string(self.lhs)} = {to_string(self.rhs)}"


class DerivationFormatError(ValueError):
    pass


def derivation_from_dict(doc) -> Derivation:
    if not isinstance(doc, dict):
        raise DerivationFormatError(f"derivation node must be an object: {doc!r}")
    rule = doc.get("rule")
    if rule not in RULES:
        raise DerivationFormatError(f"unknown rule {rule!r}")
    try:
        conclusion = doc["conclusion"]
        lhs, rhs = parse(conclusion["lhs"]), parse(conclusion["rhs"])
        subst = {k: parse(v) for k, v in (doc.get("subst") or {}).items()}
        context = parse(doc["context"], allow_hole=True) if doc.get("context") is not None else None
    except (KeyError, TypeError) as exc:
        raise DerivationFormatError(f"malformed {rule} node: {exc}") from None
    premises = [derivation_from_dict(p) for p in doc.get("premises", [])]
    return Derivation(rule, lhs, rhs, premises, doc.get("name"), subst, context)


def derivation_from_json(text: str) -> Derivation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DerivationFormatError(f"invalid JSON: {exc}") from None
    return derivation_from_dict(doc)


def derivation_to_dict(d: Derivation) -> dict:
    doc: dict = {"rule": d.rule}
    if d.name is not None:
        doc["name"] = d.name
    if d.subst:
        doc["subst"] = {k: to_string(v) for k, v in sorted(d.subst.items())}
    if d.context is not None:
        doc["context"] = to_string(d.context)
    doc["premises"] = [derivation_to_dict(p) for p in d.premises]
    doc["conclusion"] = {"lhs": to_string(d.lhs), "rhs": to_string(d.rhs)}
    return doc


@dataclass
class CheckResult:
    ok: bool
    path: tuple[int, ...] = ()
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _check_node(d: Derivation) -> Optional[str]:
    n = len(d.premises)
    if d.rule == "axiom":
        if n:
            return "axiom nodes have no premises"
        schema = SCHEMAS.get(d.name or "")
        if schema is None:
            return f"unknown axiom {d.name!r}"
        if not schema.in_milner_system:
            return f"axiom {d.name} is not part of Milner's system"
        missing = set(schema.metavars) - set(d.subst)
        if missing:
            return f"substitution misses {sorted(missing)}"
        if instantiate(d.name, d.subst) != (d.lhs, d.rhs):
            return f"conclusion is not an instance of {schema}"
        return None
    if d.rule == "refl":
        if n:
            return "refl nodes have no premises"
        return None if d.lhs == d.rhs else "refl needs identical sides"
    if d.rule == "symm":
        if n != 1:
            return "symm needs one premise"
        p = d.premises[0]
        return None if (p.rhs, p.lhs) == (d.lhs, d.rhs) else "symm conclusion must swap the premise"
    if d.rule == "trans":
        if n != 2:
            return "trans needs two premises"
        p, q = d.premises
        if p.rhs != q.lhs:
            return "trans premises do not chain"
        return None if (p.lhs, q.rhs) == (d.lhs, d.rhs) else "trans conclusion does not match premises"
    if d.rule == "cxt":
        if n != 1:
            return "cxt needs one premise"
        if d.context is None:
            return "cxt needs a context"
        holes = sum(1 for t in subterms(d.context) if isinstance(t, Hole))
        if holes != 1:
            return f"context must have exactly one hole, found {holes}"
        p = d.premises[0]
        ok = (plug(d.context, p.lhs), plug(d.context, p.rhs)) == (d.lhs, d.rhs)
        return None if ok else "cxt conclusion is not the context applied to the premise"
    if d.rule == "fix":
        if n != 1:
            return "fix needs one premise"
        p = d.premises[0]
        e = p.lhs
        if not (isinstance(p.rhs, Sum) and isinstance(p.rhs.left, Prod) and p.rhs.left.right == e):
            return "fix premise must have the shape e = f.e + g"
        f, g = p.rhs.left.left, p.rhs.right
        if ewp(f):
            return f"fix side condition violated: {to_string(f)} has the empty word property"
        return None if (d.lhs, d.rhs) == (e, Prod(Star(f), g)) else "fix conclusion must be e = f*.g"
    return f"unknown rule {d.rule!r}"


def check_derivation(d: Derivation, _path: tuple[int, ...] = ()) -> CheckResult:
    """Validate every node; on failure report the path (premise indices) to the bad node."""
    message = _check_node(d)
    if message:
        return CheckResult(False, _path, message)
    for i, p in enumerate(d.premises):
        result = check_derivation(p, _path + (i,))
        if not result:
            return result
    return CheckResult(True)


# -- soundness fuzzing ---------------------------------------------------------------


@dataclass
class FuzzFailure:
    trial: int
    subst: dict[str, RegExp]
    lhs: RegExp
    rhs: RegExp
    reason: str


@dataclass
class FuzzReport:
    axiom: str
    trials: int
    seed: int
    failures: list[FuzzFailure] = field(default_factory=list)

    @property
    def sound(self) -> bool:
        return not self.failures


def fuzz_soundness(name: str, n: int, seed: int, max_size: int = 8,
                   alphabet=("a", "b", "c")) -> FuzzReport:
    """Check ``n`` instances of an axiom for bisimilarity of both sides.

    Trial 0 maps the metavariables to distinct letters; the rest are random
    expressions drawn from a generator seeded by ``seed``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    schema = SCHEMAS.get(name)
    if schema is None:
        raise UnknownAxiom(name)
    rng = random.Random(seed)
    report = FuzzReport(name, n, seed)
    for trial in range(n):
        if trial == 0:
            subst = {v: Act(a) for v, a in zip(schema.metavars, alphabet)}
        else:
            subst = {v: random_regexp(rng, max_size, alphabet) for v in schema.metavars}
        lhs, rhs = instantiate(name, subst)
        result = bisimilar(chart_of(lhs), chart_of(rhs))
        if not result:
            report.failures.append(FuzzFailure(trial, subst, lhs, rhs, result.reason))
    return report
