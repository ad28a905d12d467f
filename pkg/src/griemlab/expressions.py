"""Tiny arithmetic grammar for user-defined chart fields.

Grammar (used by spec files and a couple of parameterized zoo entries)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | atom
    atom   := NUMBER | NAME | NAME '(' expr (',' expr)* ')' | '(' expr ')'

Names are the coordinates ``x1 .. xn``, the constant ``pi``, and the
functions ``exp``, ``sin``, ``cos``, ``sqrt``, ``log`` (one argument) and
``pow`` (two arguments).  Expressions evaluate on floats or dual numbers,
so parsed fields get exact first derivatives for free.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence

from . import autodiff
from .errors import ExpressionError

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?"
    r"|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/(),]))")

_FUNCTIONS = {
    "exp": (1, autodiff.exp),
    "sin": (1, autodiff.sin),
    "cos": (1, autodiff.cos),
    "sqrt": (1, autodiff.sqrt),
    "log": (1, autodiff.log),
    "pow": (2, autodiff.power_),
}

_CONSTANTS = {"pi": math.pi}


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            if src[pos:].strip() == "":
                break
            raise ExpressionError(
                f"unexpected character {src[pos]!r} at position {pos}")
        pos = m.end()
        for kind in ("num", "name", "op"):
            text = m.group(kind)
            if text is not None:
                tokens.append((kind, text, m.start()))
                break
    return tokens


class _Parser:
    def __init__(self, src: str, dim: int):
        self.src = src
        self.dim = dim
        self.tokens = _tokenize(src)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, op: str | None = None):
        tok = self.peek()
        if tok is None:
            raise ExpressionError(f"unexpected end of expression {self.src!r}")
        if op is not None and (tok[0] != "op" or tok[1] != op):
            raise ExpressionError(
                f"expected {op!r} at position {tok[2]} in {self.src!r}")
        self.pos += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.peek() is not None:
            tok = self.peek()
            raise ExpressionError(
                f"trailing input at position {tok[2]} in {self.src!r}")
        return node

    def expr(self):
        node = self.term()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "+-":
            self.take()
            rhs = self.term()
            node = ("add" if tok[1] == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.unary()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "*/":
            self.take()
            rhs = self.unary()
            node = ("mul" if tok[1] == "*" else "div", node, rhs)
        return node

    def unary(self):
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "-":
            self.take()
            return ("neg", self.unary())
        return self.atom()

    def atom(self):
        tok = self.take()
        kind, text, at = tok
        if kind == "num":
            return ("num", float(text))
        if kind == "op" and text == "(":
            node = self.expr()
            self.take(")")
            return node
        if kind == "name":
            if text in _FUNCTIONS:
                arity, _ = _FUNCTIONS[text]
                self.take("(")
                args = [self.expr()]
                while (nxt := self.peek()) and nxt[0] == "op" and nxt[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.take(")")
                if len(args) != arity:
                    raise ExpressionError(
                        f"{text} takes {arity} argument(s), got {len(args)}")
                return ("call", text, args)
            if text in _CONSTANTS:
                return ("num", _CONSTANTS[text])
            m = re.fullmatch(r"x(\d+)", text)
            if m:
                index = int(m.group(1)) - 1
                if not 0 <= index < self.dim:
                    raise ExpressionError(
                        f"coordinate {text} out of range for dim {self.dim}")
                return ("var", index)
            raise ExpressionError(f"unknown name {text!r} at position {at}")
        raise ExpressionError(f"unexpected token {text!r} at position {at}")


def _evaluate(node, coords):
    op = node[0]
    if op == "num":
        return node[1]
    if op == "var":
        return coords[node[1]]
    if op == "neg":
        return -_evaluate(node[1], coords)
    if op == "call":
        _, fn = _FUNCTIONS[node[1]]
        return fn(*(_evaluate(a, coords) for a in node[2]))
    lhs = _evaluate(node[1], coords)
    rhs = _evaluate(node[2], coords)
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ExpressionError(f"corrupt AST node {node!r}")


@dataclass(frozen=True)
class Expression:
    """A compiled scalar expression in the coordinates ``x1 .. xn``."""

    src: str
    dim: int
    _ast: tuple

    def __call__(self, coords: Sequence):
        return _evaluate(self._ast, coords)


def parse_expression(src: str, dim: int) -> Expression:
    if not isinstance(src, str) or not src.strip():
        raise ExpressionError("expression must be a non-empty string")
    ast = _Parser(src, dim).parse()
    return Expression(src, dim, ast)
