"""A tiny exact calculator over the reals and p-adics.

Grammar::

    line    := expr directive*
    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := '-' unary | atom
    atom    := NUMBER ('/' NUMBER)? | '(' expr ')'
    directive := '@eps' RATIONAL | '@padic' PRIME INT

Real mode prints the bracketing interval at precision ``eps`` (default
``1/10^6``); p-adic mode treats every literal as exact at precision ``k``
and prints the resulting ball.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .padic import PAdicBall
from .reals import CauchyReal, embed_rational

DEFAULT_EPS = Fraction(1, 10**6)


class CalcError(ValueError):
    def __init__(self, msg: str, col: int):
        self.col = col
        super().__init__(f"column {col}: {msg}")


@dataclass
class Mode:
    eps: Fraction = DEFAULT_EPS
    prime: int | None = None
    k: int | None = None


def _split_directives(text: str) -> tuple[str, Mode, int]:
    mode = Mode()
    at = text.find("@")
    expr = text if at < 0 else text[:at]
    if at < 0:
        return expr, mode, 0
    words = text[at:].split()
    col = at + 1
    i = 0
    while i < len(words):
        w = words[i]
        if w == "@eps" and i + 1 < len(words):
            try:
                eps = Fraction(words[i + 1])
            except (ValueError, ZeroDivisionError):
                raise CalcError(f"bad precision {words[i + 1]!r}", col)
            if eps <= 0:
                raise CalcError("precision must be positive", col)
            mode.eps = eps
            i += 2
        elif w == "@padic" and i + 2 < len(words):
            try:
                mode.prime, mode.k = int(words[i + 1]), int(words[i + 2])
            except ValueError:
                raise CalcError("expected '@padic <p> <k>'", col)
            i += 3
        else:
            raise CalcError(f"unknown or incomplete directive {w!r}", col)
    return expr, mode, at


class _Parser:
    def __init__(self, text: str, lit):
        self.text = text
        self.pos = 0
        self.lit = lit

    def peek(self):
        m = re.compile(r"\s*").match(self.text, self.pos)
        self.pos = m.end()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def number(self):
        m = re.compile(r"(\d+)(?:/(\d+))?").match(self.text, self.pos)
        if not m:
            raise CalcError("expected a number or '('", self.pos + 1)
        if m.group(2) is not None and int(m.group(2)) == 0:
            raise CalcError("zero denominator", self.pos + 1)
        self.pos = m.end()
        return self.lit(Fraction(int(m.group(1)), int(m.group(2) or 1)))

    def expr(self):
        acc = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek() == "*":
            self.pos += 1
            acc = acc * self.unary()
        return acc

    def unary(self):
        if self.peek() == "-":
            self.pos += 1
            return -self.unary()
        return self.atom()

    def atom(self):
        c = self.peek()
        if c == "(":
            self.pos += 1
            val = self.expr()
            if self.peek() != ")":
                raise CalcError("expected ')'", self.pos + 1)
            self.pos += 1
            return val
        if c is None:
            raise CalcError("unexpected end of expression", self.pos + 1)
        return self.number()

    def parse(self):
        val = self.expr()
        if self.peek() is not None:
            raise CalcError(f"unexpected {self.text[self.pos]!r}", self.pos + 1)
        return val


def evaluate(text: str):
    """Parse and evaluate; returns a ``CauchyReal`` with the mode, or a ``PAdicBall``."""
    expr, mode, _ = _split_directives(text)
    if not expr.strip():
        raise CalcError("empty expression", 1)
    if mode.prime is not None:
        try:
            PAdicBall(mode.prime, 0, mode.k)
        except ValueError as e:
            raise CalcError(str(e), 1)
        return _Parser(expr, lambda q: PAdicBall(mode.prime, q, mode.k)).parse(), mode
    return _Parser(expr, embed_rational).parse(), mode


def calc(text: str) -> str:
    value, mode = evaluate(text)
    if isinstance(value, CauchyReal):
        iv = value.approx(mode.eps)
        return f"[{iv.lo}, {iv.hi}]"
    return str(value)
