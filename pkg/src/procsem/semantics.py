"""Operational semantics of expressions.

Two independent routes compute the same steps:

* ``deriv``/``tm``: Antimirov-style partial derivatives and termination,
  defined by structural recursion;
* ``steps_by_rules``/``terminates_by_rules``: proof search over a table of
  inference rules for ``e -a-> e'`` and ``✓(e)``.

``chart_of`` closes an expression under ``deriv`` into a finite chart whose
vertex ids are the printed successor expressions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .chart import Chart
from .syntax import ONE, Act, One, Prod, RegExp, Star, Sum, Zero, letters, subterms, to_string


class StateLimitExceeded(RuntimeError):
    """Chart construction exceeded its safety cap on the number of states."""


DEFAULT_MAX_STATES = 100_000


@dataclass(frozen=True)
class StepFact:
    source: RegExp
    label: str
    target: RegExp


# -- termination and partial derivatives ---------------------------------------


@lru_cache(maxsize=None)
def tm(e: RegExp) -> int:
    """1 if ``e`` can terminate immediately, else 0."""
    if isinstance(e, One):
        return 1
    if isinstance(e, (Zero, Act)):
        return 0
    if isinstance(e, Sum):
        return max(tm(e.left), tm(e.right))
    if isinstance(e, Prod):
        return min(tm(e.left), tm(e.right))
    if isinstance(e, Star):
        return 1
    raise TypeError(f"not a regular expression: {e!r}")


def ewp(e: RegExp) -> bool:
    """Empty word property: the language of ``e`` contains the empty word."""
    return tm(e) == 1


@lru_cache(maxsize=None)
def deriv(a: str, e: RegExp) -> frozenset:
    """Partial derivatives of ``e`` with respect to letter ``a``, unsimplified."""
    if isinstance(e, (Zero, One)):
        return frozenset()
    if isinstance(e, Act):
        return frozenset([ONE]) if e.name == a else frozenset()
    if isinstance(e, Sum):
        return deriv(a, e.left) | deriv(a, e.right)
    if isinstance(e, Prod):
        result = {Prod(d, e.right) for d in deriv(a, e.left)}
        if tm(e.left):
            result |= deriv(a, e.right)
        return frozenset(result)
    if isinstance(e, Star):
        return frozenset(Prod(d, e) for d in deriv(a, e.body))
    raise TypeError(f"not a regular expression: {e!r}")


# -- proof search over the inference rules ---------------------------------------
#
# Each rule inspects the shape of its conclusion's source and asks for
# derivations of its premises on strict subterms, so the search terminates.


def _rule_letter(e, steps, term):
    if isinstance(e, Act):
        yield e.name, ONE


def _rule_sum_left(e, steps, term):
    if isinstance(e, Sum):
        yield from steps(e.left)


def _rule_sum_right(e, steps, term):
    if isinstance(e, Sum):
        yield from steps(e.right)


def _rule_prod_left(e, steps, term):
    if isinstance(e, Prod):
        for a, d in steps(e.left):
            yield a, Prod(d, e.right)


def _rule_prod_skip(e, steps, term):
    if isinstance(e, Prod) and term(e.left):
        yield from steps(e.right)


def _rule_star(e, steps, term):
    if isinstance(e, Star):
        for a, d in steps(e.body):
            yield a, Prod(d, e)


STEP_RULES = (_rule_letter, _rule_sum_left, _rule_sum_right,
              _rule_prod_left, _rule_prod_skip, _rule_star)

# Termination rules: (name, conclusion shape, premises as subterm selectors).
# A rule fires when every premise is itself derivable.
TERM_RULES = (
    ("one", One, ()),
    ("star", Star, ()),
    ("sum-left", Sum, (lambda e: e.left,)),
    ("sum-right", Sum, (lambda e: e.right,)),
    ("prod", Prod, (lambda e: e.left, lambda e: e.right)),
)


def terminates_by_rules(e: RegExp) -> bool:
    """Whether ✓(e) has a derivation from the termination rules."""
    for _, shape, premises in TERM_RULES:
        if isinstance(e, shape) and all(terminates_by_rules(p(e)) for p in premises):
            return True
    return False


def _steps_by_rules(e: RegExp) -> set[tuple[str, RegExp]]:
    found = set()
    for rule in STEP_RULES:
        found.update(rule(e, _steps_by_rules, terminates_by_rules))
    return found


def steps_by_rules(e: RegExp) -> set[StepFact]:
    """All derivable step facts ``e -a-> e'``."""
    return {StepFact(e, a, d) for a, d in _steps_by_rules(e)}


# -- charts -------------------------------------------------------------------------


def chart_of(e: RegExp, max_states: int = DEFAULT_MAX_STATES) -> Chart:
    """The part of the expression transition system reachable from ``e``."""
    alphabet = letters(e)
    seen = {e}
    queue = deque([e])
    transitions = set()
    while queue:
        f = queue.popleft()
        src = to_string(f)
        for a in alphabet:
            for d in deriv(a, f):
                transitions.add((src, a, to_string(d)))
                if d not in seen:
                    seen.add(d)
                    if len(seen) > max_states:
                        raise StateLimitExceeded(f"more than {max_states} states reachable from {to_string(e)}")
                    queue.append(d)
    return Chart(
        frozenset(to_string(f) for f in seen),
        to_string(e),
        frozenset(to_string(f) for f in seen if tm(f)),
        frozenset(transitions),
    )


def _can_reach_termination_later(c: Chart) -> set[str]:
    """Vertices with a nonempty path to a terminating vertex."""
    preds: dict[str, set[str]] = {v: set() for v in c.vertices}
    for s, _, t in c.transitions:
        preds[t].add(s)
    result: set[str] = set()
    frontier = [p for v in c.terminating for p in preds[v]]
    while frontier:
        v = frontier.pop()
        if v in result:
            continue
        result.add(v)
        frontier.extend(preds[v])
    return result


def one_return_less(e: RegExp) -> bool:
    """No star body can reach a state that may both stop now and step on to stop later."""
    bodies = {t.body for t in subterms(e) if isinstance(t, Star)}
    for body in bodies:
        c = chart_of(body)
        if c.terminating & _can_reach_termination_later(c):
            return False
    return True
