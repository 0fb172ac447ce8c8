"""Small reference charts used in tests, docs and the CLI."""

from .chart import Chart

#: Three-vertex bisimulation collapse shared by ``a.(a.(b+b.a))*.0`` and
#: ``(a.a.(b.a)*.b)*.0``.  Satisfies LEE but is not itself the chart of
#: any expression.
FIXTURE_C = Chart.build(
    "u0",
    [("u0", "a", "u1"), ("u1", "a", "u2"), ("u2", "b", "u1"), ("u2", "b", "u0")],
)

#: Two mutually connected terminating vertices; no loop sub-chart exists.
FIXTURE_N1 = Chart.build(
    "v0",
    [("v0", "a", "v1"), ("v1", "b", "v0")],
    terminating=["v0", "v1"],
)

#: Three vertices, all six cross transitions with distinct labels.
FIXTURE_N2 = Chart.build(
    "w0",
    [
        ("w0", "a1", "w1"), ("w0", "a2", "w2"),
        ("w1", "b1", "w0"), ("w1", "b2", "w2"),
        ("w2", "c1", "w0"), ("w2", "c2", "w1"),
    ],
)

#: Expressions whose charts collapse to FIXTURE_C.
EXPR_LEFT = "a.(a.(b+b.a))*.0"
EXPR_RIGHT = "(a.a.(b.a)*.b)*.0"
