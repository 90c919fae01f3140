"""Parser for quantum-disc expressions.

Grammar (order-preserving, noncommutative product):

    expr   := term (('+' | '-') term)*
    term   := factor (factor | '*' factor)*      juxtaposition multiplies
    factor := atom ('^' INT)?
    atom   := NUMBER | NUMBER 'i' | 'i' | 'z*' | 'z' | 'y' | '(' expr ')' | '-' atom

A '*' immediately following 'z' (no whitespace) lexes as the conjugate
generator z*; any other '*' is multiplication.  'y' expands to 1 - z z*.
Parsed token order is preserved and the result is normal-ordered by the
rewriting engine.
"""

import re

from .errors import ExprOverflowError, ExprSyntaxError
from .ncpoly import NormalPoly

_TOKEN_RE = re.compile(
    r"""
    (?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)
    | (?P<zstar>z\*)
    | (?P<name>[zyi])
    | (?P<op>[-+*^()])
    | (?P<ws>\s+)
    | (?P<bad>.)
    """,
    re.VERBOSE,
)


def _tokenize(text):
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "bad":
            raise ExprSyntaxError(f"unexpected character {m.group()!r}", m.start())
        tokens.append((kind, m.group(), m.start()))
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, q, degree_cap):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.q = q
        self.cap = degree_cap

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value):
        kind, text, at = self.next()
        if text != value:
            raise ExprSyntaxError(f"expected {value!r}, found {text!r}", at)

    def parse(self):
        result = self.expr()
        kind, text, at = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected trailing {text!r}", at)
        return result

    def expr(self):
        left = self.term()
        while True:
            kind, text, _ = self.peek()
            if text == "+":
                self.next()
                left = left + self.term()
            elif text == "-":
                self.next()
                left = left - self.term()
            else:
                return left

    def _starts_atom(self):
        kind, text, _ = self.peek()
        return kind in ("num", "zstar", "name") or text == "("

    def term(self):
        left = self.factor()
        while True:
            kind, text, _ = self.peek()
            if text == "*":
                self.next()
                left = left * self.factor()
            elif self._starts_atom():
                left = left * self.factor()
            else:
                return left

    def factor(self):
        base = self.atom()
        kind, text, at = self.peek()
        if text == "^":
            self.next()
            kind, text, at = self.next()
            if kind != "num" or not text.isdigit():
                raise ExprSyntaxError("power must be a nonnegative integer", at)
            n = int(text)
            if n > self.cap or base.degree() * n > self.cap:
                raise ExprOverflowError(
                    f"power {n} exceeds the degree cap {self.cap}"
                )
            return base ** n
        return base

    def atom(self):
        kind, text, at = self.next()
        if kind == "num":
            value = float(text)
            nkind, ntext, _ = self.peek()
            if nkind == "name" and ntext == "i":
                self.next()
                return NormalPoly.unit(self.q, 1j * value)
            return NormalPoly.unit(self.q, value)
        if kind == "zstar":
            return NormalPoly.zstar(self.q)
        if kind == "name":
            if text == "z":
                return NormalPoly.z(self.q)
            if text == "y":
                return NormalPoly.y(self.q)
            if text == "i":
                return NormalPoly.unit(self.q, 1j)
        if text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if text == "-":
            return -self.atom_or_factor()
        raise ExprSyntaxError(f"unexpected token {text!r}", at)

    def atom_or_factor(self):
        # unary minus binds a full factor so that -z^2 = -(z^2)
        return self.factor()


def parse_expr(text, q, degree_cap=128) -> NormalPoly:
    """Parse ``text`` into a normal-ordered polynomial over parameter q."""
    return _Parser(text, q, degree_cap).parse()
