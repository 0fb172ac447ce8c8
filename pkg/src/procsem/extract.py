"""Reading a regular expression off a chart with a LEE witness.

Levels are replayed in ascending order.  Each eliminated loop at ``v`` is
summarized as ``a1.B1 + ... + an.Bn`` over its entry transitions, where
``B(w)`` expresses the way from ``w`` back to ``v`` through the (acyclic)
loop body, and is remembered at ``v``.  A vertex carrying summaries
``f1..fm`` is expressed as ``(f1+...+fm)*.rest``.  Once all loops are gone
the residual chart is acyclic and is expressed bottom-up, with ``+1``
for terminating vertices.
"""

from __future__ import annotations

import graphlib
from dataclasses import dataclass
from typing import Optional

from .bisim import bisimilar, collapse
from .chart import Chart, gc, has_infinite_trace
from .lee import DEFAULT_BUDGET, Witness, check_witness, generated_subchart, lee_decide, witness_of
from .semantics import chart_of, ewp, one_return_less
from .syntax import ONE, Act, Prod, RegExp, Star, subterms, sum_of, to_string


class ExtractionError(ValueError):
    pass


@dataclass(frozen=True)
class LoopSummary:
    vertex: str
    level: int
    body_sum: RegExp


def _successors_first(edges: dict[str, list[str]]) -> list[str]:
    try:
        return list(graphlib.TopologicalSorter(edges).static_order())
    except graphlib.CycleError as exc:
        raise ExtractionError(f"loop body is cyclic: {exc.args[1]}") from None


def _with_prefix(summaries: list[LoopSummary], rest: RegExp) -> RegExp:
    if not summaries:
        return rest
    return Prod(Star(sum_of(s.body_sum for s in summaries)), rest)


def _guarded_sum(c: Chart, u: str, value: dict[str, RegExp]) -> list[RegExp]:
    return [Prod(Act(a), value[w]) for _, a, w in sorted(c.out(u), key=lambda t: (t[1], t[2]))]


def extract_with_summaries(g: Chart, w: Witness) -> tuple[RegExp, list[LoopSummary]]:
    if not check_witness(w):
        raise ExtractionError("witness does not describe a successful loop elimination")
    c = gc(g)
    summaries: dict[str, list[LoopSummary]] = {v: [] for v in c.vertices}
    recorded = []
    for level in sorted(set(w.levels.values())):
        entries = frozenset(t for t, k in w.levels.items() if k == level and t in c.transitions)
        v = next(iter(entries))[0]
        body = generated_subchart(c, v, entries)
        # Successors of v inside the body all go to the sink, which is v itself.
        edges = {u: [t for _, _, t in body.out(u) if t != v] for u in body.vertices if u != v}
        value: dict[str, RegExp] = {v: ONE}
        for u in _successors_first(edges):
            value[u] = _with_prefix(summaries[u], sum_of(_guarded_sum(body, u, value)))
        summary = LoopSummary(v, level, sum_of(Prod(Act(a), value[t])
                                                for _, a, t in sorted(entries, key=lambda t: (t[1], t[2]))))
        summaries[v].append(summary)
        recorded.append(summary)
        c = gc(c.without(entries))

    if has_infinite_trace(c):
        raise ExtractionError("residual chart still has a cycle")
    edges = {u: [t for _, _, t in c.out(u)] for u in c.vertices}
    value = {}
    for u in _successors_first(edges):
        terms = _guarded_sum(c, u, value)
        if u in c.terminating:
            terms.append(ONE)
        value[u] = _with_prefix(summaries[u], sum_of(terms))
    return value[c.start], recorded


def extract(g: Chart, w: Witness) -> RegExp:
    """An expression whose chart is bisimilar to ``g``."""
    return extract_with_summaries(g, w)[0]


@dataclass
class RoundTrip:
    expression: RegExp
    collapsed: Chart
    witness: Optional[Witness]
    extracted: Optional[RegExp]
    bisimilar: bool
    one_return_less: bool

    @property
    def ok(self) -> bool:
        return self.bisimilar and self.one_return_less

    def lines(self) -> list[str]:
        return [
            f"input: {to_string(self.expression)}",
            f"collapse: {len(self.collapsed.vertices)} vertices, {len(self.collapsed.transitions)} transitions",
            f"lee: {'holds' if self.witness else 'fails'}",
            f"extracted: {to_string(self.extracted) if self.extracted is not None else '-'}",
            f"bisimilar: {str(self.bisimilar).lower()}",
            f"one_return_less: {str(self.one_return_less).lower()}",
        ]


def roundtrip(e: RegExp, budget: int = DEFAULT_BUDGET) -> RoundTrip:
    """Collapse the chart of ``e``, decide LEE, extract again and compare."""
    c = collapse(chart_of(e)).quotient
    trace = lee_decide(c, budget)
    if trace is None:
        return RoundTrip(e, c, None, None, False, False)
    w = witness_of(c, trace)
    e2 = extract(c, w)
    return RoundTrip(e, c, w, e2, bool(bisimilar(chart_of(e2), c)), one_return_less(e2))


def star_bodies_guarded(e: RegExp) -> bool:
    """Every star body in ``e`` lacks the empty word property."""
    return all(not ewp(t.body) for t in subterms(e) if isinstance(t, Star))
