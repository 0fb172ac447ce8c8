"""Regular expressions with unary star: abstract syntax, parser and printer.

Concrete grammar::

    sum     := product ('+' product)*        left-associative
    product := postfix ('.' product)?        right-associative
    postfix := atom '*'*
    atom    := '0' | '1' | letter | '(' sum ')'
    letter  := [a-z][a-zA-Z0-9_]*

Whitespace between tokens is ignored.  No normalization is ever applied:
two expressions are the same state exactly when their trees are equal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union


class RegExpSyntaxError(ValueError):
    """Raised for malformed expression text; ``pos`` is a 0-based offset."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


@dataclass(frozen=True)
class Zero:
    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True)
class One:
    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class Act:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Sum:
    left: "RegExp"
    right: "RegExp"

    def __str__(self) -> str:
        return to_string(self)


@dataclass(frozen=True)
class Prod:
    left: "RegExp"
    right: "RegExp"

    def __str__(self) -> str:
        return to_string(self)


@dataclass(frozen=True)
class Star:
    body: "RegExp"

    def __str__(self) -> str:
        return to_string(self)


@dataclass(frozen=True)
class Hole:
    """Placeholder in a one-hole context; only produced by ``parse(..., allow_hole=True)``."""

    def __str__(self) -> str:
        return "_"


RegExp = Union[Zero, One, Act, Sum, Prod, Star]

ZERO = Zero()
ONE = One()

LETTER_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")
_TOKEN_RE = re.compile(r"\s*(?:([a-z][a-zA-Z0-9_]*)|([01+.*()_]))")


# -- parsing -----------------------------------------------------------------


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise RegExpSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(1) if m.group(1) else m.start(2)
        tokens.append((m.group(1) or m.group(2), start))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, allow_hole: bool):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.allow_hole = allow_hole

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def error(self, message: str):
        raise RegExpSyntaxError(message, self.text, self.tokens[self.i][1])

    def advance(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def parse(self):
        if self.peek() == "":
            self.error("empty expression")
        e = self.sum()
        if self.peek() != "":
            self.error(f"unexpected token {self.peek()!r}")
        return e

    def sum(self):
        e = self.product()
        while self.peek() == "+":
            self.advance()
            e = Sum(e, self.product())
        return e

    def product(self):
        e = self.postfix()
        if self.peek() == ".":
            self.advance()
            return Prod(e, self.product())
        return e

    def postfix(self):
        e = self.atom()
        while self.peek() == "*":
            self.advance()
            e = Star(e)
        return e

    def atom(self):
        tok = self.peek()
        if tok == "0":
            self.advance()
            return ZERO
        if tok == "1":
            self.advance()
            return ONE
        if tok == "_" and self.allow_hole:
            self.advance()
            return Hole()
        if tok == "(":
            self.advance()
            e = self.sum()
            if self.peek() != ")":
                self.error("expected ')'")
            self.advance()
            return e
        if tok and LETTER_RE.fullmatch(tok):
            self.advance()
            return Act(tok)
        if tok == "":
            self.error("unexpected end of input")
        self.error(f"unexpected token {tok!r}")


def parse(text: str, *, allow_hole: bool = False) -> RegExp:
    """Parse ``text`` into a RegExp.

    >>> parse("a.(b+1)*")
    Prod(left=Act(name='a'), right=Star(body=Sum(left=Act(name='b'), right=One())))
    """
    return _Parser(text, allow_hole).parse()


# -- printing ----------------------------------------------------------------

_SUM, _PROD, _STAR, _ATOM = range(4)


def _level(e) -> int:
    if isinstance(e, Sum):
        return _SUM
    if isinstance(e, Prod):
        return _PROD
    if isinstance(e, Star):
        return _STAR
    return _ATOM


def _wrap(e, min_level: int) -> str:
    s = to_string(e)
    return f"({s})" if _level(e) < min_level else s


def to_string(e) -> str:
    """Render with the fewest parentheses that still parse back to ``e``."""
    if isinstance(e, Sum):
        return f"{_wrap(e.left, _SUM)}+{_wrap(e.right, _PROD)}"
    if isinstance(e, Prod):
        return f"{_wrap(e.left, _STAR)}.{_wrap(e.right, _PROD)}"
    if isinstance(e, Star):
        return f"{_wrap(e.body, _STAR)}*"
    return str(e)


def size(e) -> int:
    """Number of nodes in the syntax tree."""
    if isinstance(e, (Sum, Prod)):
        return 1 + size(e.left) + size(e.right)
    if isinstance(e, Star):
        return 1 + size(e.body)
    return 1


def subterms(e) -> Iterator[RegExp]:
    """Pre-order traversal of all subterms, ``e`` included."""
    stack = [e]
    while stack:
        t = stack.pop()
        yield t
        if isinstance(t, (Sum, Prod)):
            stack.append(t.right)
            stack.append(t.left)
        elif isinstance(t, Star):
            stack.append(t.body)


def letters(e) -> list[str]:
    """Sorted distinct action names occurring in ``e``."""
    return sorted({t.name for t in subterms(e) if isinstance(t, Act)})


def letter_count(e) -> int:
    """Number of letter occurrences (with multiplicity)."""
    return sum(1 for t in subterms(e) if isinstance(t, Act))


def sum_of(terms) -> RegExp:
    """Left-nested sum of ``terms``; the empty sum is ``0``."""
    terms = list(terms)
    if not terms:
        return ZERO
    acc = terms[0]
    for t in terms[1:]:
        acc = Sum(acc, t)
    return acc
