"""Charts: finite rooted labeled transition graphs with a termination predicate.

A chart is an NFA read under bisimilarity.  There are no silent steps.
Vertex ids are opaque strings; transitions are ``(source, label, target)``
triples with set semantics.
"""

from __future__ import annotations

import graphlib
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

Transition = tuple[str, str, str]
Levels = Mapping[Transition, int]


class ChartError(ValueError):
    """Malformed chart data (dangling ids, missing start, bad JSON)."""


@dataclass(frozen=True)
class Chart:
    vertices: frozenset[str]
    start: str
    terminating: frozenset[str]
    transitions: frozenset[Transition]
    _out: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "terminating", frozenset(self.terminating))
        object.__setattr__(self, "transitions", frozenset(tuple(t) for t in self.transitions))
        if self.start not in self.vertices:
            raise ChartError(f"start vertex {self.start!r} is not a vertex")
        if not self.terminating <= self.vertices:
            raise ChartError(f"terminating vertices {sorted(self.terminating - self.vertices)} are not vertices")
        out: dict[str, list[Transition]] = {v: [] for v in self.vertices}
        for t in self.transitions:
            src, _, dst = t
            if src not in self.vertices or dst not in self.vertices:
                raise ChartError(f"transition {t} refers to an unknown vertex")
            out[src].append(t)
        for ts in out.values():
            ts.sort()
        object.__setattr__(self, "_out", out)

    @classmethod
    def build(cls, start: str, transitions: Iterable[Transition] = (),
              terminating: Iterable[str] = (), vertices: Iterable[str] = ()) -> "Chart":
        """Convenience constructor; vertices default to those mentioned anywhere."""
        transitions = [tuple(t) for t in transitions]
        vs = {start, *vertices, *terminating}
        for src, _, dst in transitions:
            vs.update((src, dst))
        return cls(frozenset(vs), start, frozenset(terminating), frozenset(transitions))

    def out(self, v: str) -> list[Transition]:
        """Outgoing transitions of ``v``, sorted by (label, target)."""
        return self._out[v]

    def is_terminating(self, v: str) -> bool:
        return v in self.terminating

    def labels(self) -> set[str]:
        return {label for _, label, _ in self.transitions}

    def order(self) -> list[str]:
        """Deterministic BFS order from the start; unreachable vertices come last, sorted."""
        seen = {self.start}
        queue = deque([self.start])
        result = []
        while queue:
            v = queue.popleft()
            result.append(v)
            for _, _, w in sorted(self._out[v], key=lambda t: (t[1], t[2])):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        result.extend(sorted(self.vertices - seen))
        return result

    def reachable(self) -> set[str]:
        seen = {self.start}
        stack = [self.start]
        while stack:
            for _, _, w in self._out[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    def without(self, removed: Iterable[Transition]) -> "Chart":
        """Same chart minus ``removed`` transitions (no garbage collection)."""
        return Chart(self.vertices, self.start, self.terminating,
                     self.transitions - frozenset(tuple(t) for t in removed))

    def relabel(self, mapping: Mapping[str, str]) -> "Chart":
        return Chart(frozenset(mapping[v] for v in self.vertices), mapping[self.start],
                     frozenset(mapping[v] for v in self.terminating),
                     frozenset((mapping[s], a, mapping[t]) for s, a, t in self.transitions))


def gc(c: Chart) -> Chart:
    """Restrict ``c`` to the vertices reachable from its start."""
    keep = c.reachable()
    if keep == c.vertices:
        return c
    return Chart(frozenset(keep), c.start, c.terminating & keep,
                 frozenset(t for t in c.transitions if t[0] in keep))


def has_infinite_trace(c: Chart) -> bool:
    """True iff the (garbage-collected) chart contains a cycle."""
    sorter = graphlib.TopologicalSorter({v: [w for _, _, w in c.out(v)] for v in c.vertices})
    try:
        sorter.prepare()
    except graphlib.CycleError:
        return True
    return False


# -- serialization -----------------------------------------------------------


def to_dict(c: Chart, levels: Optional[Levels] = None) -> dict:
    order = c.order()
    rank = {v: i for i, v in enumerate(order)}
    transitions = sorted(c.transitions, key=lambda t: (rank[t[0]], t[1], rank[t[2]]))
    doc = {
        "vertices": order,
        "start": c.start,
        "terminating": [v for v in order if v in c.terminating],
        "transitions": [{"from": s, "label": a, "to": t} for s, a, t in transitions],
    }
    if levels:
        doc["witness"] = [
            {"from": s, "label": a, "to": t, "level": levels[(s, a, t)]}
            for s, a, t in transitions if (s, a, t) in levels
        ]
    return doc


def to_json(c: Chart, levels: Optional[Levels] = None, indent: Optional[int] = 2) -> str:
    return json.dumps(to_dict(c, levels), indent=indent, ensure_ascii=False)


def _load(s) -> dict:
    if isinstance(s, dict):
        return s
    try:
        doc = json.loads(s)
    except json.JSONDecodeError as exc:
        raise ChartError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ChartError("chart document must be a JSON object")
    return doc


def _triple(item, what: str) -> Transition:
    try:
        triple = (item["from"], item["label"], item["to"])
    except (KeyError, TypeError):
        raise ChartError(f"{what} entry needs 'from', 'label' and 'to': {item!r}") from None
    if not all(isinstance(x, str) for x in triple):
        raise ChartError(f"{what} entry fields must be strings: {item!r}")
    return triple


def from_dict(doc: dict) -> Chart:
    for key in ("vertices", "start"):
        if key not in doc:
            raise ChartError(f"missing {key!r}")
    vertices = doc["vertices"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise ChartError("'vertices' must be an array of strings")
    if len(set(vertices)) != len(vertices):
        raise ChartError("duplicate vertex ids")
    start = doc["start"]
    if not isinstance(start, str):
        raise ChartError("'start' must be a string")
    terminating = doc.get("terminating", [])
    if not isinstance(terminating, list) or not all(isinstance(v, str) for v in terminating):
        raise ChartError("'terminating' must be an array of strings")
    transitions = [_triple(item, "transition") for item in doc.get("transitions", [])]
    return Chart(frozenset(vertices), start, frozenset(terminating), frozenset(transitions))


def from_json(s) -> Chart:
    """Parse a chart document (string or already-decoded dict)."""
    return from_dict(_load(s))


def levels_from_json(s) -> dict[Transition, int]:
    """Witness levels embedded in a chart document; empty if absent."""
    doc = _load(s)
    levels = {}
    for item in doc.get("witness", []) or []:
        t = _triple(item, "witness")
        level = item.get("level")
        if not isinstance(level, int) or isinstance(level, bool) or level < 1:
            raise ChartError(f"witness level must be a positive integer: {item!r}")
        levels[t] = level
    transitions = {_triple(item, "transition") for item in doc.get("transitions", [])}
    dangling = set(levels) - transitions
    if dangling:
        raise ChartError(f"witness names transitions not in the chart: {sorted(dangling)}")
    return levels


# -- DOT ---------------------------------------------------------------------


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(c: Chart, levels: Optional[Levels] = None, name: str = "chart") -> str:
    """Graphviz rendering: start arrow, double circles for terminating
    vertices, and ``label [k]`` for transitions carrying entry level k."""
    levels = levels or {}
    order = c.order()
    rank = {v: i for i, v in enumerate(order)}
    lines = [f"digraph {_quote(name)} {{", "  rankdir=TB;",
             '  __start [shape=point, style=invis];']
    for v in order:
        shape = "doublecircle" if v in c.terminating else "circle"
        lines.append(f"  {_quote(v)} [shape={shape}];")
    lines.append(f"  __start -> {_quote(c.start)};")
    for t in sorted(c.transitions, key=lambda t: (rank[t[0]], t[1], rank[t[2]])):
        s, a, d = t
        label = f"{a} [{levels[t]}]" if t in levels else a
        lines.append(f"  {_quote(s)} -> {_quote(d)} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
