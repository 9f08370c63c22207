"""Parser for the small function-expression file format.

A function file is plain text::

    # comments and blank lines are ignored
    dim = 2
    f = piecewise(x2 = x1^2 and x1 > 0, -(x1^2 + x2^2), 0)
    grad1 = -2*x1        # optional, one per coordinate
    grad2 = -2*x2

Grammar (expressions):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?
    atom    := NUMBER | VAR | '(' expr ')'
             | ('abs' | 'cbrt' | 'sqrt') '(' expr ')'
             | 'piecewise' '(' cond ',' expr ',' expr ')'
    cond    := pred ('and' pred)*           # '&' also accepted
    pred    := expr ('=' | '<' | '>') expr

Variables are ``x1 .. x<dim>``.  Predicates compare polynomial (or any)
subexpressions exactly: '=' is floating equality, which is what piecewise
guards on algebraic curves need.  Parse errors carry line and column.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError, ParseError
from .functions import ProperFunction

Array = np.ndarray

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),=<>&]))"
)

_FUNCS = {
    "abs": abs,
    "cbrt": np.cbrt,
    "sqrt": math.sqrt,
}


@dataclass
class _Token:
    kind: str  # num | name | op | end
    text: str
    column: int


def _tokenize(text: str, line: int) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1)
        pos = m.end()
        for kind in ("num", "name", "op"):
            if m.group(kind) is not None:
                tokens.append(_Token(kind, m.group(kind), m.start(kind) + 1))
                break
    tokens.append(_Token("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, line: int, dim: int):
        self.tokens = _tokenize(text, line)
        self.line = line
        self.dim = dim
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of line'!r}",
                             self.line, tok.column)
        return tok

    def fail(self, msg: str):
        tok = self.peek()
        raise ParseError(msg, self.line, tok.column)

    # Each parse method returns a closure x -> float.

    def parse(self) -> Callable[[Array], float]:
        node = self.expr()
        if self.peek().kind != "end":
            self.fail(f"trailing input {self.peek().text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            rhs = self.term()
            lhs = node
            if op == "+":
                node = lambda x, a=lhs, b=rhs: a(x) + b(x)
            else:
                node = lambda x, a=lhs, b=rhs: a(x) - b(x)
        return node

    def term(self):
        node = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.next().text
            rhs = self.unary()
            lhs = node
            if op == "*":
                node = lambda x, a=lhs, b=rhs: a(x) * b(x)
            else:
                node = lambda x, a=lhs, b=rhs: a(x) / b(x)
        return node

    def unary(self):
        if self.peek().text == "-":
            self.next()
            inner = self.unary()
            return lambda x, a=inner: -a(x)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().text == "^":
            self.next()
            expo = self.unary()
            def node(x, b=base, e=expo):
                bv, ev = b(x), e(x)
                if bv < 0 and ev != round(ev):
                    raise ConfigurationError(
                        f"negative base {bv} with non-integer exponent {ev}")
                return bv**ev
            return node
        return base

    def atom(self):
        tok = self.next()
        if tok.kind == "num":
            val = float(tok.text)
            return lambda x, v=val: v
        if tok.kind == "name":
            name = tok.text
            if name in _FUNCS:
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                fn = _FUNCS[name]
                return lambda x, a=inner, f=fn: float(f(a(x)))
            if name == "piecewise":
                self.expect("(")
                cond = self.cond()
                self.expect(",")
                then = self.expr()
                self.expect(",")
                other = self.expr()
                self.expect(")")
                return lambda x, c=cond, t=then, o=other: t(x) if c(x) else o(x)
            if name == "inf":
                return lambda x: math.inf
            m = re.fullmatch(r"x(\d+)", name)
            if m:
                idx = int(m.group(1)) - 1
                if not 0 <= idx < self.dim:
                    raise ParseError(
                        f"variable {name} out of range for dim {self.dim}",
                        self.line, tok.column)
                return lambda x, i=idx: float(x[i])
            raise ParseError(f"unknown name {name!r}", self.line, tok.column)
        if tok.text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {tok.text or 'end of line'!r}",
                         self.line, tok.column)

    def cond(self):
        node = self.pred()
        while self.peek().text in ("and", "&"):
            self.next()
            rhs = self.pred()
            lhs = node
            node = lambda x, a=lhs, b=rhs: a(x) and b(x)
        return node

    def pred(self):
        lhs = self.expr()
        tok = self.next()
        if tok.text not in ("=", "<", ">"):
            raise ParseError(f"expected comparison, found {tok.text!r}",
                             self.line, tok.column)
        rhs = self.expr()
        if tok.text == "=":
            return lambda x, a=lhs, b=rhs: a(x) == b(x)
        if tok.text == "<":
            return lambda x, a=lhs, b=rhs: a(x) < b(x)
        return lambda x, a=lhs, b=rhs: a(x) > b(x)


def parse_expression(text: str, dim: int, line: int = 1) -> Callable[[Array], float]:
    """Compile one expression string into a callable on R^dim."""
    return _Parser(text, line, dim).parse()


def parse_function_file(text: str, name: str = "user") -> ProperFunction:
    """Parse a whole function file into a ProperFunction."""
    dim: Optional[int] = None
    f_expr = None
    grads: dict[int, Callable] = {}
    box_lo = box_hi = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno, 1)
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        col = raw.index("=") + 2
        if key == "dim":
            try:
                dim = int(value)
            except ValueError:
                raise ParseError(f"bad dim {value!r}", lineno, col) from None
            if dim < 1:
                raise ParseError("dim must be >= 1", lineno, col)
        elif key == "f":
            if dim is None:
                raise ParseError("dim must come before f", lineno, 1)
            f_expr = parse_expression(value, dim, lineno)
        elif re.fullmatch(r"grad\d+", key):
            if dim is None:
                raise ParseError("dim must come before gradients", lineno, 1)
            idx = int(key[4:]) - 1
            if not 0 <= idx < dim:
                raise ParseError(f"{key} out of range for dim {dim}", lineno, 1)
            grads[idx] = parse_expression(value, dim, lineno)
        elif key == "box":
            parts = [float(v) for v in value.replace(",", " ").split()]
            if dim is None or len(parts) != 2 * dim:
                raise ParseError("box needs 2*dim numbers after dim", lineno, col)
            box_lo = np.array(parts[:dim])
            box_hi = np.array(parts[dim:])
        else:
            raise ParseError(f"unknown key {key!r}", lineno, 1)

    if dim is None or f_expr is None:
        raise ParseError("file must define dim and f", 1, 1)

    gradient = None
    if grads:
        if sorted(grads) != list(range(dim)):
            raise ParseError("gradient must define grad1..grad<dim>", 1, 1)
        comps = [grads[i] for i in range(dim)]
        gradient = lambda x: np.array([c(x) for c in comps])

    box = None
    if box_lo is not None:
        box = (box_lo, box_hi)
    return ProperFunction(name=name, dim=dim, fn=f_expr, gradient=gradient,
                          domain_box=box)
