"""Recursive-descent parser for the textual MTL syntax.

Grammar, lowest precedence first::

    impl   := disj ('->' impl)?
    disj   := conj ('|' conj)*
    conj   := temp ('&' temp)*
    temp   := unary (('U' | 'R') interval? '?'? temp)?
    unary  := '!' unary | ('F' | 'G') interval? '?'? unary | 'X' '?'? unary
            | 'true' | 'false' | ATOM | '(' impl ')'
    interval := '[' NAT ',' (NAT | 'inf') ']'

An omitted interval means ``[0,inf]``. A ``?`` after an operator marks the
interval to be weakened.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from cegiw.context import find_path
from cegiw.mtl import (
    FALSE,
    TRUE,
    UNBOUNDED,
    And,
    Atom,
    Formula,
    Interval,
    Not,
    Or,
    Release,
    Until,
    eventually,
    globally,
    implies,
    next_,
)

KEYWORDS = {"U", "R", "F", "G", "X", "true", "false", "inf"}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[!&|()\[\],?])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: frozenset[str] = frozenset()):
        self.line = line
        self.column = column
        self.expected = expected
        exp = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"{line}:{column}: {message}{exp}")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind == "ws":
            for k, ch in enumerate(tok):
                if ch == "\n":
                    line += 1
                    line_start = pos + k + 1
        else:
            if kind == "ident" and tok in KEYWORDS:
                kind = tok
            elif kind in ("sym", "arrow"):
                kind = tok
            tokens.append(Token(kind, tok, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.marked: list[tuple[Formula, Token]] = []

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, expected) -> ParseError:
        return ParseError(message, self.tok.line, self.tok.column, frozenset(expected))

    def accept(self, kind: str) -> Token | None:
        if self.tok.kind == kind:
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, kind: str) -> Token:
        t = self.accept(kind)
        if t is None:
            found = self.tok.text or "end of input"
            raise self.error(f"unexpected {found!r}", {kind})
        return t

    def parse(self) -> Formula:
        phi = self.impl()
        if self.tok.kind != "EOF":
            raise self.error(f"unexpected {self.tok.text!r}", {"->", "|", "&", "U", "R", "EOF"})
        return phi

    def impl(self) -> Formula:
        lhs = self.disj()
        if self.accept("->"):
            return implies(lhs, self.impl())
        return lhs

    def disj(self) -> Formula:
        phi = self.conj()
        while self.accept("|"):
            phi = Or(phi, self.conj())
        return phi

    def conj(self) -> Formula:
        phi = self.temp()
        while self.accept("&"):
            phi = And(phi, self.temp())
        return phi

    def temp(self) -> Formula:
        lhs = self.unary()
        op = self.accept("U") or self.accept("R")
        if op is None:
            return lhs
        interval = self.interval()
        mark = self.accept("?")
        rhs = self.temp()
        node = (Until if op.kind == "U" else Release)(lhs, interval, rhs)
        if mark:
            self.marked.append((node, mark))
        return node

    def interval(self) -> Interval:
        start = self.accept("[")
        if start is None:
            return UNBOUNDED
        lo = int(self.expect("num").text)
        self.expect(",")
        if self.accept("inf"):
            hi = None
        else:
            hi = int(self.expect("num").text)
        self.expect("]")
        try:
            return Interval(lo, hi)
        except ValueError as exc:
            raise ParseError(str(exc), start.line, start.column) from None

    def unary(self) -> Formula:
        t = self.tok
        if self.accept("!"):
            return Not(self.unary())
        if t.kind in ("F", "G", "X"):
            self.i += 1
            interval = Interval(1, 1) if t.kind == "X" else self.interval()
            mark = self.accept("?")
            body = self.unary()
            if t.kind == "G":
                node = globally(interval, body)
            elif t.kind == "F":
                node = eventually(interval, body)
            else:
                node = next_(body)
            if mark:
                self.marked.append((node, mark))
            return node
        if self.accept("true"):
            return TRUE
        if self.accept("false"):
            return FALSE
        if (a := self.accept("ident")) is not None:
            return Atom(a.text)
        if self.accept("("):
            phi = self.impl()
            self.expect(")")
            return phi
        found = t.text or "end of input"
        raise self.error(f"unexpected {found!r}", {"!", "F", "G", "X", "(", "true", "false", "atom"})


def parse_formula(text: str) -> Formula:
    """Parse a formula; a ``?`` marker is rejected here."""
    p = _Parser(text)
    phi = p.parse()
    if p.marked:
        tok = p.marked[0][1]
        raise ParseError("unexpected target marker '?'", tok.line, tok.column)
    return phi


def parse_property(text: str) -> tuple[Formula, tuple[int, ...]]:
    """Parse a formula containing exactly one ``?``-marked temporal operator.

    Returns the formula and the path of the marked node in the core AST.
    """
    p = _Parser(text)
    phi = p.parse()
    if len(p.marked) != 1:
        tok = p.marked[1][1] if p.marked else p.tokens[-1]
        raise ParseError(
            f"expected exactly one '?' target marker, found {len(p.marked)}",
            tok.line,
            tok.column,
        )
    path = find_path(phi, p.marked[0][0])
    assert path is not None
    return phi, path
