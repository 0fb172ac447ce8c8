"""Process semantics of regular expressions: charts, bisimilarity, LEE and extraction."""

from .bisim import BisimResult, CollapseResult, bisimilar, collapse, is_functional_bisim, isomorphic
from .chart import Chart, from_json, gc, has_infinite_trace, to_dot, to_json
from .extract import extract, roundtrip
from .lee import EliminationTrace, Witness, check_witness, is_loop, lee_decide, loop_subchart, witness_of
from .semantics import chart_of, deriv, ewp, one_return_less, steps_by_rules, tm
from .syntax import Act, One, Prod, RegExp, Star, Sum, Zero, parse, size, to_string

__all__ = [
    "Act", "BisimResult", "Chart", "CollapseResult", "EliminationTrace", "One", "Prod", "RegExp",
    "Star", "Sum", "Witness", "Zero", "bisimilar", "chart_of", "check_witness", "collapse", "deriv",
    "ewp", "extract", "from_json", "gc", "has_infinite_trace", "is_functional_bisim", "is_loop",
    "isomorphic", "lee_decide", "loop_subchart", "one_return_less", "parse", "roundtrip", "size",
    "steps_by_rules", "tm", "to_dot", "to_json", "to_string", "witness_of",
]
