"""Strong bisimilarity with termination as an observable.

``partition`` refines blocks by signature (Kanellakis-Smolka style) and is
the production decider.  ``bisimilar_naive`` computes the greatest
bisimulation between two charts by deleting violating pairs until nothing
changes; it shares no code with the partition route and is kept as an
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping, Optional

from .chart import Chart, gc


@dataclass
class BisimResult:
    related: bool
    relation: frozenset = frozenset()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.related


@dataclass
class CollapseResult:
    quotient: Chart
    mapping: dict[str, str] = field(default_factory=dict)


def partition(vertices, terminating, succ: Mapping[Hashable, list]) -> tuple[dict, list[dict]]:
    """Coarsest bisimulation on a transition graph.

    ``succ[v]`` lists ``(label, target)`` pairs.  Returns the final block
    numbering and the numbering after each refinement round (round 0 splits
    on termination only).
    """
    vertices = sorted(vertices, key=repr)
    block = {v: int(v in terminating) for v in vertices}
    history = [dict(block)]
    count = len(set(block.values()))
    while True:
        sigs = {}
        new_block = {}
        for v in vertices:
            sig = (block[v], frozenset((a, block[w]) for a, w in succ[v]))
            new_block[v] = sigs.setdefault(sig, len(sigs))
        block = new_block
        history.append(dict(block))
        if len(sigs) == count:
            return block, history
        count = len(sigs)


def _union(g: Chart, h: Chart):
    vertices = [(0, v) for v in g.vertices] + [(1, v) for v in h.vertices]
    terminating = {(0, v) for v in g.terminating} | {(1, v) for v in h.terminating}
    succ = {(0, v): [(a, (0, w)) for _, a, w in g.out(v)] for v in g.vertices}
    succ.update({(1, v): [(a, (1, w)) for _, a, w in h.out(v)] for v in h.vertices})
    return vertices, terminating, succ


def _explain(g: Chart, h: Chart, history: list[dict], succ) -> str:
    x, y = (0, g.start), (1, h.start)
    if history[0][x] != history[0][y]:
        side = "first" if g.start in g.terminating else "second"
        return f"only the {side} start vertex can terminate"
    for k in range(1, len(history)):
        if history[k][x] == history[k][y]:
            continue
        prev = history[k - 1]
        moves_x = {(a, prev[w]) for a, w in succ[x]}
        moves_y = {(a, prev[w]) for a, w in succ[y]}
        a, blk = min(moves_x ^ moves_y)
        side = "first" if (a, blk) in moves_x else "second"
        return (f"only the {side} start vertex can do {a!r} into a state of class {blk} "
                f"(refinement round {k})")
    return "start vertices lie in different classes"


def bisimilar(g: Chart, h: Chart) -> BisimResult:
    """Decide whether the start vertices of ``g`` and ``h`` are bisimilar."""
    vertices, terminating, succ = _union(g, h)
    block, history = partition(vertices, terminating, succ)
    if block[(0, g.start)] != block[(1, h.start)]:
        return BisimResult(False, reason=_explain(g, h, history, succ))
    relation = frozenset(
        (v, w) for v in g.vertices for w in h.vertices if block[(0, v)] == block[(1, w)]
    )
    return BisimResult(True, relation)


def greatest_bisimulation_naive(g: Chart, h: Chart) -> set[tuple[str, str]]:
    """Largest bisimulation between the vertices of ``g`` and ``h``, by fixpoint deletion."""
    rel = {(v, w) for v in g.vertices for w in h.vertices
           if (v in g.terminating) == (w in h.terminating)}
    changed = True
    while changed:
        changed = False
        for v, w in list(rel):
            forth = all(any(b == a and (v2, w2) in rel for _, b, w2 in h.out(w))
                        for _, a, v2 in g.out(v))
            back = forth and all(any(b == a and (v2, w2) in rel for _, b, v2 in g.out(v))
                                 for _, a, w2 in h.out(w))
            if not back:
                rel.discard((v, w))
                changed = True
    return rel


def bisimilar_naive(g: Chart, h: Chart) -> bool:
    return (g.start, h.start) in greatest_bisimulation_naive(g, h)


def is_bisimulation(rel, g: Chart, h: Chart) -> bool:
    """Check the transfer and termination conditions for every pair in ``rel``."""
    rel = set(rel)
    for v, w in rel:
        if (v in g.terminating) != (w in h.terminating):
            return False
        for _, a, v2 in g.out(v):
            if not any(b == a and (v2, w2) in rel for _, b, w2 in h.out(w)):
                return False
        for _, a, w2 in h.out(w):
            if not any(b == a and (v2, w2) in rel for _, b, v2 in g.out(v)):
                return False
    return True


def collapse(g: Chart) -> CollapseResult:
    """Quotient of ``g`` by its coarsest bisimulation.

    Each class is named after its first member in BFS order, so the start
    vertex keeps its id.
    """
    g = gc(g)
    succ = {v: [(a, w) for _, a, w in g.out(v)] for v in g.vertices}
    block, _ = partition(g.vertices, g.terminating, succ)
    rep: dict[int, str] = {}
    for v in g.order():
        rep.setdefault(block[v], v)
    mapping = {v: rep[block[v]] for v in g.vertices}
    quotient = Chart(
        frozenset(rep.values()),
        mapping[g.start],
        frozenset(mapping[v] for v in g.terminating),
        frozenset((mapping[s], a, mapping[t]) for s, a, t in g.transitions),
    )
    return CollapseResult(gc(quotient), mapping)


def is_functional_bisim(f: Mapping[str, str], g: Chart, h: Chart) -> bool:
    """Whether the vertex map ``f`` is a functional bisimulation from ``g`` onto ``h``."""
    if set(f) != set(g.vertices) or not set(f.values()) <= set(h.vertices):
        return False
    if f[g.start] != h.start:
        return False
    for v in g.vertices:
        if (v in g.terminating) != (f[v] in h.terminating):
            return False
        image = {(a, f[w]) for _, a, w in g.out(v)}
        if image != {(a, w) for _, a, w in h.out(f[v])}:
            return False
    return True


def _profile(c: Chart, v: str, indeg: dict) -> tuple:
    return (v in c.terminating, tuple(sorted(a for _, a, _ in c.out(v))), indeg[v])


def isomorphism(g: Chart, h: Chart) -> Optional[dict[str, str]]:
    """A start-preserving isomorphism from ``g`` to ``h``, or None.

    Both charts must be fully reachable from their start.  Vertices are
    matched in BFS order; each non-start vertex is searched for among the
    successors of its discovering parent's image.
    """
    if (len(g.vertices), len(g.transitions), len(g.terminating)) != \
            (len(h.vertices), len(h.transitions), len(h.terminating)):
        return None
    order = g.order()
    if g.reachable() != set(g.vertices) or h.reachable() != set(h.vertices):
        raise ValueError("isomorphism expects garbage-collected charts")
    parent: dict[str, tuple[str, str]] = {}
    for v in order:
        for _, a, w in sorted(g.out(v), key=lambda t: (t[1], t[2])):
            if w != g.start:
                parent.setdefault(w, (v, a))
    indeg_g = {v: 0 for v in g.vertices}
    indeg_h = {v: 0 for v in h.vertices}
    for _, _, t in g.transitions:
        indeg_g[t] += 1
    for _, _, t in h.transitions:
        indeg_h[t] += 1

    def consistent(v, x, m):
        for s, a, t in g.out(v):
            if t in m and (x, a, m[t]) not in h.transitions:
                return False
        for s, a, t in g.transitions:
            if t == v and s in m and (m[s], a, x) not in h.transitions:
                return False
        return True

    def search(i, m, used):
        if i == len(order):
            mapped = {(m[s], a, m[t]) for s, a, t in g.transitions}
            return dict(m) if mapped == h.transitions else None
        v = order[i]
        if i == 0:
            candidates = [h.start]
        else:
            p, a = parent[v]
            candidates = [t for _, b, t in h.out(m[p]) if b == a]
        for x in candidates:
            if x in used or _profile(g, v, indeg_g) != _profile(h, x, indeg_h):
                continue
            if not consistent(v, x, m):
                continue
            m[v] = x
            used.add(x)
            found = search(i + 1, m, used)
            if found:
                return found
            del m[v]
            used.discard(x)
        return None

    return search(0, {}, set())


def isomorphic(g: Chart, h: Chart) -> bool:
    return isomorphism(g, h) is not None
