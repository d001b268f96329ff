"""Tokenizer and recursive-descent evaluator for the text grammar.

The grammar accepted here is a superset of the printed forms::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := power (('*'|'/') power | power)*      # juxtaposition multiplies
    power  := atom ('^' ['-'] uint)?
    atom   := uint | name | '(' expr ')'

Names are resolved through a symbol table and integers through a ``const``
callback, so the same evaluator builds field elements, polynomials,
rational functions and tower elements.
"""

from __future__ import annotations

import re
from typing import Any, Callable, Mapping

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # pragma: no cover - the pattern matches any non-space
            raise ParseError(f"unexpected input at {pos}: {text[pos:]!r}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("int", num, m.start(1)))
        elif name is not None:
            tokens.append(("name", name, m.start(2)))
        else:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} at {m.start(3)}")
            tokens.append(("op", op, m.start(3)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text, symbols, const):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.symbols = symbols
        self.const = const

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, value=None):
        tok = self.peek()
        if tok is None or (value is not None and tok[1] != value):
            where = tok[2] if tok else len(self.text)
            want = repr(value) if value else "a token"
            raise ParseError(f"expected {want} at {where} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression")
        value = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input at {self.peek()[2]} in {self.text!r}")
        return value

    def expr(self):
        tok = self.peek()
        negate = False
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.take()
            negate = tok[1] == "-"
        value = self.term()
        if negate:
            value = -value
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "+-":
            self.take()
            rhs = self.term()
            value = value + rhs if tok[1] == "+" else value - rhs
        return value

    def term(self):
        value = self.power()
        while (tok := self.peek()) is not None:
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                value = value * self.power()
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                value = value / self.power()
            elif tok[0] in ("int", "name") or tok[1] == "(":
                value = value * self.power()
            else:
                break
        return value

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok and tok[1] == "^":
            self.take()
            sign = 1
            if self.peek() and self.peek()[1] == "-":
                self.take()
                sign = -1
            tok = self.take()
            if tok[0] != "int":
                raise ParseError(f"exponent must be an integer at {tok[2]}")
            exp = sign * int(tok[1])
            return base ** exp
        return base

    def atom(self):
        tok = self.take()
        kind, val, where = tok
        if kind == "int":
            return self.const(int(val))
        if kind == "name":
            if val not in self.symbols:
                raise ParseError(f"unknown symbol {val!r} at {where}")
            return self.symbols[val]
        if val == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected {val!r} at {where} in {self.text!r}")


def evaluate(text: str, symbols: Mapping[str, Any], const: Callable[[int], Any]) -> Any:
    """Evaluate ``text`` using ``symbols`` for names and ``const`` for integers."""
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    return _Parser(text, symbols, const).parse()
