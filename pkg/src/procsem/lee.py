"""Loops, loop elimination and the loop existence and elimination condition (LEE).

A chart is a *loop* if its start has a transition, every path from the
start returns to it, and only the start may terminate.  A loop sub-chart is
generated at a vertex ``v`` by a set of entry transitions out of ``v``:
follow them and then every transition of every reached vertex, stopping
whenever ``v`` is reached again.  Eliminating a loop removes its entry
transitions and garbage-collects.  LEE holds if elimination can reach a
chart without cycles.

A witness records a successful elimination as numeric entry levels on
transitions: the entries removed in step k carry level k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .chart import Chart, Transition, gc, has_infinite_trace

DEFAULT_BUDGET = 1_000_000
MAX_SUBSET_DEGREE = 12


class SearchBudgetExceeded(RuntimeError):
    """The backtracking search for an elimination order ran out of budget."""


class InvalidStep(ValueError):
    """Entry transitions that do not generate a loop sub-chart."""


@dataclass(frozen=True)
class Step:
    vertex: str
    entries: frozenset[Transition]


@dataclass(frozen=True)
class EliminationTrace:
    steps: tuple[Step, ...] = ()


@dataclass
class Witness:
    chart: Chart
    levels: dict[Transition, int] = field(default_factory=dict)


def _split_ok(c: Chart) -> bool:
    """Split the start into a source and a sink; the rest must be acyclic and
    every maximal path from the source must end at the sink."""
    start = c.start
    # Colors: 1 = on stack, 2 = done and all its maximal paths hit the sink.
    color: dict[str, int] = {}
    stack = [(start, iter(c.out(start)))]
    color[start] = 1
    while stack:
        v, it = stack[-1]
        for _, _, w in it:
            if w == start:
                continue
            state = color.get(w)
            if state == 1:
                return False
            if state is None:
                if not c.out(w):
                    return False
                color[w] = 1
                stack.append((w, iter(c.out(w))))
                break
        else:
            color[v] = 2
            stack.pop()
    return True


def is_loop(c: Chart) -> bool:
    if not c.out(c.start):
        return False
    if not c.terminating <= {c.start}:
        return False
    return _split_ok(c)


def generated_subchart(g: Chart, v: str, entries: Iterable[Transition]) -> Chart:
    """The sub-chart reached from ``v`` through ``entries``, closed off at ``v``."""
    entries = frozenset(tuple(t) for t in entries)
    if not entries:
        raise InvalidStep("entry set is empty")
    for t in entries:
        if t[0] != v or t not in g.transitions:
            raise InvalidStep(f"{t} is not a transition out of {v!r}")
    vertices = {v}
    transitions = set(entries)
    stack = [t[2] for t in entries]
    while stack:
        w = stack.pop()
        if w in vertices:
            continue
        vertices.add(w)
        for t in g.out(w):
            transitions.add(t)
            stack.append(t[2])
    return Chart(frozenset(vertices), v, g.terminating & vertices, frozenset(transitions))


def loop_subchart(g: Chart, v: str, entries: Iterable[Transition]) -> Optional[Chart]:
    """The loop sub-chart generated by ``entries`` at ``v``, or None if it is not a loop."""
    sub = generated_subchart(g, v, entries)
    return sub if is_loop(sub) else None


def loop_entries(g: Chart, v: str) -> list[Transition]:
    """Transitions out of ``v`` that on their own generate a loop sub-chart."""
    return [t for t in g.out(v) if loop_subchart(g, v, [t]) is not None]


def eliminate_step(g: Chart, v: str, entries: Iterable[Transition]) -> Chart:
    entries = frozenset(tuple(t) for t in entries)
    if loop_subchart(g, v, entries) is None:
        raise InvalidStep(f"entries {sorted(entries)} at {v!r} do not generate a loop")
    return gc(g.without(entries))


def replay(g: Chart, trace: EliminationTrace) -> list[Chart]:
    """Charts after each step, starting with ``g`` itself."""
    charts = [g]
    for step in trace.steps:
        charts.append(eliminate_step(charts[-1], step.vertex, step.entries))
    return charts


# -- deciding LEE ----------------------------------------------------------------


def _greedy_step(g: Chart) -> Optional[Step]:
    """Innermost loop first: the single-entry loop with the fewest vertices
    (then transitions, then BFS position) wins, and is widened by every other
    entry at the same vertex whose loop stays inside it."""
    rank = {v: i for i, v in enumerate(g.order())}
    best = None
    for v in g.order():
        for t in g.out(v):
            sub = loop_subchart(g, v, [t])
            if sub is None:
                continue
            key = (len(sub.vertices), len(sub.transitions), rank[v], t[1], rank[t[2]])
            if best is None or key < best[0]:
                best = (key, v, sub)
    if best is None:
        return None
    _, v, sub = best
    entries = frozenset(
        t for t in g.out(v)
        if (s := loop_subchart(g, v, [t])) is not None and s.vertices <= sub.vertices
    )
    return Step(v, entries)


def lee_greedy(g: Chart) -> Optional[EliminationTrace]:
    """Eliminate innermost loops until none remain; None if a cycle survives."""
    g = gc(g)
    steps = []
    while has_infinite_trace(g):
        step = _greedy_step(g)
        if step is None:
            return None
        steps.append(step)
        g = eliminate_step(g, step.vertex, step.entries)
    return EliminationTrace(tuple(steps))


def lee_search(g: Chart, budget: int = DEFAULT_BUDGET) -> Optional[EliminationTrace]:
    """Complete backtracking search over all elimination steps."""
    g = gc(g)
    failed: set[frozenset] = set()
    nodes = 0

    def search(c: Chart) -> Optional[list[Step]]:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(f"LEE search exceeded {budget} nodes")
        if not has_infinite_trace(c):
            return []
        if c.transitions in failed:
            return None
        for v in c.order():
            entries = loop_entries(c, v)
            if not entries:
                continue
            if len(c.out(v)) > MAX_SUBSET_DEGREE:
                raise SearchBudgetExceeded(
                    f"vertex {v!r} has out-degree {len(c.out(v))} > {MAX_SUBSET_DEGREE}")
            # Any union of single-entry loops at v is again a loop.
            for k in range(len(entries), 0, -1):
                for subset in itertools.combinations(entries, k):
                    step = Step(v, frozenset(subset))
                    rest = search(gc(c.without(step.entries)))
                    if rest is not None:
                        return [step] + rest
        failed.add(c.transitions)
        return None

    steps = search(g)
    return None if steps is None else EliminationTrace(tuple(steps))


def lee_decide(g: Chart, budget: int = DEFAULT_BUDGET) -> Optional[EliminationTrace]:
    """An elimination trace reaching a cycle-free chart, or None if LEE fails.

    The greedy innermost-first strategy runs first; the exhaustive search
    only runs when it gets stuck.
    """
    return lee_greedy(g) or lee_search(g, budget)


# -- witnesses -------------------------------------------------------------------


def witness_of(g: Chart, trace: EliminationTrace) -> Witness:
    replay(g, trace)
    levels = {t: k for k, step in enumerate(trace.steps, 1) for t in step.entries}
    return Witness(g, levels)


def check_witness(w: Witness) -> bool:
    """Replay the levels in ascending order as elimination steps."""
    c = gc(w.chart)
    if not set(w.levels) <= w.chart.transitions:
        return False
    if any(not isinstance(k, int) or k < 1 for k in w.levels.values()):
        return False
    for level in sorted(set(w.levels.values())):
        entries = {t for t, k in w.levels.items() if k == level and t in c.transitions}
        if not entries:
            return False
        sources = {t[0] for t in entries}
        if len(sources) != 1:
            return False
        v = sources.pop()
        if loop_subchart(c, v, entries) is None:
            return False
        c = gc(c.without(entries))
    return not has_infinite_trace(c)


def trace_of_witness(w: Witness) -> EliminationTrace:
    """Recover the step sequence a valid witness encodes."""
    c = gc(w.chart)
    steps = []
    for level in sorted(set(w.levels.values())):
        entries = frozenset(t for t, k in w.levels.items() if k == level and t in c.transitions)
        if not entries:
            raise InvalidStep(f"level {level} has no remaining transitions")
        sources = {t[0] for t in entries}
        if len(sources) != 1:
            raise InvalidStep(f"level {level} entries leave more than one vertex")
        v = sources.pop()
        c = eliminate_step(c, v, entries)
        steps.append(Step(v, entries))
    return EliminationTrace(tuple(steps))
