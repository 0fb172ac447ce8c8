"""Random and exhaustive generators for expressions and charts."""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterator, Sequence

from .chart import Chart, gc
from .syntax import ONE, ZERO, Act, Prod, RegExp, Star, Sum


@lru_cache(maxsize=None)
def _exactly(n: int, alphabet: tuple[str, ...]) -> tuple[RegExp, ...]:
    if n == 1:
        return (ZERO, ONE) + tuple(Act(a) for a in alphabet)
    result = [Star(e) for e in _exactly(n - 1, alphabet)]
    for i in range(1, n - 1):
        for left in _exactly(i, alphabet):
            for right in _exactly(n - 1 - i, alphabet):
                result.append(Sum(left, right))
                result.append(Prod(left, right))
    return tuple(result)


def all_regexps(max_size: int, alphabet: Sequence[str] = ("a", "b")) -> Iterator[RegExp]:
    """Every expression with at most ``max_size`` nodes, smallest first."""
    for n in range(1, max_size + 1):
        yield from _exactly(n, tuple(alphabet))


def random_regexp_of_size(rng: random.Random, n: int, alphabet: Sequence[str] = ("a", "b", "c")) -> RegExp:
    """Random expression with exactly ``n`` nodes; constructors chosen uniformly where the size allows."""
    if n <= 1:
        choice = rng.randrange(len(alphabet) + 2)
        return ZERO if choice == 0 else ONE if choice == 1 else Act(alphabet[choice - 2])
    kind = "star" if n == 2 else rng.choice(("sum", "prod", "star"))
    if kind == "star":
        return Star(random_regexp_of_size(rng, n - 1, alphabet))
    k = rng.randint(1, n - 2)
    left = random_regexp_of_size(rng, k, alphabet)
    right = random_regexp_of_size(rng, n - 1 - k, alphabet)
    return Sum(left, right) if kind == "sum" else Prod(left, right)


def random_regexp(rng: random.Random, max_size: int, alphabet: Sequence[str] = ("a", "b", "c")) -> RegExp:
    """Random expression whose size is uniform on ``1..max_size``."""
    return random_regexp_of_size(rng, rng.randint(1, max_size), alphabet)


def random_chart(rng: random.Random, n_vertices: int, alphabet: Sequence[str] = ("a", "b"),
                 edge_prob: float = 0.25, term_prob: float = 0.3) -> Chart:
    """Random chart on ``n_vertices`` vertices, garbage-collected from ``s0``."""
    names = [f"s{i}" for i in range(n_vertices)]
    transitions = [(v, a, w) for v in names for a in alphabet for w in names if rng.random() < edge_prob]
    terminating = [v for v in names if rng.random() < term_prob]
    return gc(Chart(frozenset(names), names[0], frozenset(terminating), frozenset(transitions)))
