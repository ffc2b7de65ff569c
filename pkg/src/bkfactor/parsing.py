"""Recursive-descent parser for coefficient expressions and operators.

Grammar (operators add the atoms ``Dx`` and ``Dy``; ``*`` is composition)::

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' exponent)?
    exponent := integer | '(' '-'? integer ('/' integer)? ')'
    atom   := integer | 'sqrt2' | 'pi' | 'x' | 'y' | ident
            | func '(' expr ')' | '(' expr ')'
    func   := 'sin' | 'cos' | 'exp' | 'ln'

Unary minus binds looser than ``^`` so ``-x^2`` is ``-(x^2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import sympy

from .expr import FUNCTIONS, SQRT2, parameter, x, y

__all__ = ["ParseError", "parse_expression", "parse_operator"]

_RESERVED = {"x", "y", "sqrt2", "pi", "I", "Dx", "Dy", *FUNCTIONS}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset
        self.text = text


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    raw = text.encode("utf-8")
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            offset = len(text[:start].encode("utf-8"))
            raise ParseError(f"unexpected character {text[start]!r}", offset, text)
        kind = m.lastgroup
        start = m.start(kind)
        offset = len(text[:start].encode("utf-8"))
        value = m.group(kind)
        if kind == "num" and "." in value:
            raise ParseError(f"malformed rational {value!r}: decimals are not allowed", offset, text)
        tokens.append(_Token(kind, value, offset))
        pos = m.end()
    tokens.append(_Token("end", "", len(raw)))
    return tokens


class _Parser:
    def __init__(self, text: str, operators: bool, depends: dict[str, str] | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.operators = operators
        self.depends = {k: {"x": x, "y": y}[v] for k, v in (depends or {}).items()}

    # token helpers

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: _Token | None = None):
        raise ParseError(message, (tok or self.tok).offset, self.text)

    def accept(self, value: str) -> bool:
        if self.tok.kind == "op" and self.tok.value == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str):
        if not self.accept(value):
            found = self.tok.value or "end of input"
            self.error(f"expected {value!r}, found {found!r}")

    # value algebra: sympy expressions, or Lpdo in operator mode

    def lift(self, e):
        if self.operators:
            from .operator import Lpdo

            return Lpdo.scalar(e)
        return e

    def scalar_of(self, v, tok: _Token, what: str):
        if not self.operators:
            return v
        if v.order not in (None, 0):
            self.error(f"{what} needs a coefficient, not a differential operator", tok)
        return v[0, 0]

    # grammar

    def parse(self):
        v = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.value!r}")
        return v

    def expr(self):
        v = self.term()
        while True:
            if self.accept("+"):
                v = v + self.term()
            elif self.accept("-"):
                v = v - self.term()
            else:
                return v

    def term(self):
        v = self.unary()
        while True:
            if self.accept("*"):
                v = v * self.unary()
            elif self.tok.kind == "op" and self.tok.value == "/":
                tok = self.tok
                self.i += 1
                d = self.scalar_of(self.unary(), tok, "division")
                if d == 0:
                    self.error("division by zero", tok)
                v = v * self.lift(1 / d) if self.operators else v / d
            else:
                return v

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        return self.power()

    def exponent(self) -> sympy.Rational:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return sympy.Integer(tok.value)
        if self.accept("("):
            sign = -1 if self.accept("-") else 1
            num = self.tok
            if num.kind != "num":
                self.error("malformed rational exponent")
            self.i += 1
            den = 1
            if self.accept("/"):
                d = self.tok
                if d.kind != "num":
                    self.error("malformed rational exponent")
                self.i += 1
                den = int(d.value)
                if den == 0:
                    self.error("malformed rational exponent: zero denominator", d)
            self.expect(")")
            return sign * sympy.Rational(int(num.value), den)
        self.error("expected a rational exponent")

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.value == "^":
            tok = self.tok
            self.i += 1
            ex = self.exponent()
            if self.operators and base.order not in (None, 0):
                if not (ex.is_Integer and ex >= 0):
                    self.error("operator powers must be non-negative integers", tok)
                return base ** int(ex)
            b = self.scalar_of(base, tok, "a rational power")
            if b == 0 and ex < 0:
                self.error("division by zero", tok)
            return self.lift(b**ex)
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return self.lift(sympy.Integer(tok.value))
        if tok.kind == "op":
            if self.accept("("):
                v = self.expr()
                self.expect(")")
                return v
            self.error(f"unexpected {tok.value!r}" if tok.value else "unexpected end of input")
        if tok.kind == "end":
            self.error("unexpected end of input")
        name = tok.value
        self.i += 1
        nxt = self.tok
        if nxt.kind == "op" and nxt.value == "(":
            if name not in FUNCTIONS:
                self.error(f"unknown function {name!r}", tok)
            self.i += 1
            arg_tok = self.tok
            arg = self.scalar_of(self.expr(), arg_tok, f"{name}()")
            self.expect(")")
            if name == "ln" and arg == 0:
                self.error("ln(0) is undefined", arg_tok)
            return self.lift(FUNCTIONS[name](arg))
        if name in FUNCTIONS:
            self.error(f"function {name!r} needs an argument", tok)
        if name in ("Dx", "Dy"):
            if not self.operators:
                self.error(f"{name} is only allowed in operator text", tok)
            from .operator import Lpdo

            return Lpdo.dx() if name == "Dx" else Lpdo.dy()
        constants = {"x": x, "y": y, "sqrt2": SQRT2, "pi": sympy.pi, "I": sympy.I}
        if name in constants:
            return self.lift(constants[name])
        return self.lift(parameter(name, self.depends.get(name)))


def parse_expression(text: str, depends: dict[str, str] | None = None) -> sympy.Expr:
    """Parse coefficient text into a canonical expression.

    ``depends`` maps parameter names to the single variable they depend on,
    e.g. ``{"Y": "y"}``.
    """
    from .expr import canonical

    return canonical(_Parser(text, False, depends).parse())


def parse_operator(text: str, depends: dict[str, str] | None = None):
    """Parse operator text such as ``"Dx*Dy + x*Dx + 1"`` into an Lpdo."""
    return _Parser(text, True, depends).parse()
