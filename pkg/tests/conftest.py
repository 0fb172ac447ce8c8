import random

import pytest
from hypothesis import strategies as st

from procsem.chart import Chart, gc
from procsem.syntax import ONE, ZERO, Act, Prod, Star, Sum

leaves = st.sampled_from([ZERO, ONE, Act("a"), Act("b"), Act("c")])

regexps = st.recursive(
    leaves,
    lambda inner: st.one_of(
        st.builds(Sum, inner, inner),
        st.builds(Prod, inner, inner),
        st.builds(Star, inner),
    ),
    max_leaves=8,
)


@st.composite
def charts(draw, max_vertices=6, labels=("a", "b")):
    n = draw(st.integers(1, max_vertices))
    names = [f"s{i}" for i in range(n)]
    triples = st.tuples(st.sampled_from(names), st.sampled_from(labels), st.sampled_from(names))
    transitions = draw(st.frozensets(triples, max_size=3 * n))
    terminating = draw(st.frozensets(st.sampled_from(names)))
    return gc(Chart(frozenset(names), "s0", terminating, transitions))


@pytest.fixture
def rng():
    return random.Random(20261015)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
