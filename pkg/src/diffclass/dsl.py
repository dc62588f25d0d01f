"""Parser for the system description language.

    # comments run to the end of the line
    x1' = x2 - (1/3)*x1^3 + x1
    x2' = -x1

Statements are separated by ``;`` or newlines.  Expressions use integer
literals, ``x1``, ``x2``, ``+ - * / ^`` and parentheses; ``^`` takes a
non-negative integer exponent and ``/`` only a nonzero constant divisor, so
every right-hand side is a polynomial over Q.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Poly2
from .vectorfield import VectorField


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # NUM, VAR, OP, PRIME, SEP, EOF
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)|(?P<num>\d+)|(?P<var>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<prime>')|(?P<op>[-+*/^()=])|(?P<sep>;)"
)


def tokenize(src: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            out.append(Token("SEP", "\\n", line, col))
            line += 1
            line_start = m.end()
        elif kind == "num":
            out.append(Token("NUM", text, line, col))
        elif kind == "var":
            if text not in ("x1", "x2"):
                raise ParseError(f"unknown name {text!r} (only x1 and x2 are allowed)", line, col)
            out.append(Token("VAR", text, line, col))
        elif kind == "prime":
            out.append(Token("PRIME", text, line, col))
        elif kind == "op":
            out.append(Token("OP", text, line, col))
        elif kind == "sep":
            out.append(Token("SEP", text, line, col))
        pos = m.end()
    out.append(Token("EOF", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None):
        t = tok or self.tok
        raise ParseError(msg, t.line, t.column)

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            got = t.text or "end of input"
            self.error(f"expected {want!r}, found {got!r}")
        return self.advance()

    def skip_seps(self):
        while self.tok.kind == "SEP":
            self.advance()

    def system(self) -> dict[str, tuple[Poly2, Token]]:
        eqs: dict[str, tuple[Poly2, Token]] = {}
        self.skip_seps()
        while self.tok.kind != "EOF":
            name = self.expect("VAR")
            self.expect("PRIME")
            self.expect("OP", "=")
            if name.text in eqs:
                self.error(f"duplicate equation for {name.text}'", name)
            eqs[name.text] = (self.expr(), name)
            if self.tok.kind not in ("SEP", "EOF"):
                self.error(f"unexpected {self.tok.text!r} after expression")
            self.skip_seps()
        return eqs

    def expr(self) -> Poly2:
        acc = self.term()
        while self.tok.kind == "OP" and self.tok.text in "+-":
            op = self.advance().text
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Poly2:
        acc = self.unary()
        while self.tok.kind == "OP" and self.tok.text in "*/":
            op = self.advance()
            rhs = self.unary()
            if op.text == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant():
                    self.error("division is only allowed by a constant", op)
                if rhs.is_zero():
                    self.error("division by zero", op)
                acc = acc.scale(1 / rhs.constant_term())
        return acc

    def unary(self) -> Poly2:
        if self.tok.kind == "OP" and self.tok.text in "+-":
            op = self.advance().text
            v = self.unary()
            return -v if op == "-" else v
        return self.power()

    def power(self) -> Poly2:
        base = self.atom()
        if self.tok.kind == "OP" and self.tok.text == "^":
            self.advance()
            t = self.tok
            if t.kind != "NUM":
                self.error("exponent must be a non-negative integer literal")
            self.advance()
            return base ** int(t.text)
        return base

    def atom(self) -> Poly2:
        t = self.tok
        if t.kind == "NUM":
            self.advance()
            return Poly2.const(Fraction(int(t.text)))
        if t.kind == "VAR":
            self.advance()
            return Poly2.var(1 if t.text == "x1" else 2)
        if t.kind == "OP" and t.text == "(":
            self.advance()
            v = self.expr()
            self.expect("OP", ")")
            return v
        self.error(f"expected a number, x1, x2 or '(', found {t.text or 'end of input'!r}")


def parse_expr(src: str) -> Poly2:
    p = _Parser(tokenize(src))
    v = p.expr()
    if p.tok.kind != "EOF":
        p.error(f"unexpected {p.tok.text!r}")
    return v


def parse_system(src: str) -> VectorField:
    """Parse a two-equation system into a VectorField."""
    p = _Parser(tokenize(src))
    eqs = p.system()
    end = p.tok
    for name in ("x1", "x2"):
        if name not in eqs:
            raise ParseError(f"missing equation for {name}'", end.line, end.column)
    X1, tok = eqs["x1"]
    if X1.is_zero():
        raise ParseError(
            "x1' is identically zero; the operator requires X1 != 0 (swap the variables if needed)",
            tok.line,
            tok.column,
        )
    return VectorField(X1, eqs["x2"][0])


def format_system(vf: VectorField) -> str:
    return f"x1' = {vf.X1}; x2' = {vf.X2}"
