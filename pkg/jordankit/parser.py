"""
Recursive-descent parser for rational-function entries.

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-"? factor
    factor  := base ("^" "-"? integer)?
    base    := "(" expr ")" | VAR | literal | "i"
    literal := integer ("/" positive-integer)? "i"?

A literal is read greedily when its parts touch: "3/2i" is (3/2)i and
"2/3^2" is (2/3)^2. Implicit multiplication is rejected. Positions in errors
are 0-based character offsets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import GaussianRational, Poly, RatFun
from .errors import DivisionByZeroFunctionError, ExpressionSyntaxError, NotPolynomialError

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int
    end: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    index = 0
    while index < len(text):
        if text[index:].strip() == "":
            break
        match = _TOKEN.match(text, index)
        if match is None:
            offset = len(text) - len(text[index:].lstrip())
            raise ExpressionSyntaxError(f"unexpected character {text[offset]!r}", offset, text)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind), match.end(kind)))
        index = match.end()
    tokens.append(Token("end", "", len(text), len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, var: str) -> None:
        self.text = text
        self.var = var
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _error(self, message: str, token: Token | None = None) -> ExpressionSyntaxError:
        token = token or self.current
        return ExpressionSyntaxError(message, token.pos, self.text)

    def _at(self, text: str) -> bool:
        return self.current.kind == "op" and self.current.text == text

    def _touching(self, kind: str, text: str | None = None) -> bool:
        previous = self.tokens[self.index - 1]
        token = self.current
        return token.kind == kind and token.pos == previous.end and (text is None or token.text == text)

    def parse(self) -> RatFun:
        if self.current.kind == "end":
            raise self._error("empty expression")
        value = self.expr()
        if self.current.kind != "end":
            raise self._error(f"unexpected {self.current.text!r}")
        return value

    def expr(self) -> RatFun:
        value = self.term()
        while self._at("+") or self._at("-"):
            op = self._advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RatFun:
        value = self.unary()
        while self._at("*") or self._at("/"):
            op = self._advance()
            rhs = self.unary()
            if op.text == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise DivisionByZeroFunctionError(f"division by zero at position {op.pos}")
                value = value / rhs
        return value

    def unary(self) -> RatFun:
        if self._at("-"):
            self._advance()
            return -self.factor()
        return self.factor()

    def factor(self) -> RatFun:
        value = self.base()
        if self._at("^"):
            self._advance()
            negative = False
            if self._at("-"):
                self._advance()
                negative = True
            if self.current.kind != "int":
                raise self._error("expected an integer exponent")
            exponent = int(self._advance().text)
            if negative:
                if value.is_zero():
                    raise DivisionByZeroFunctionError("negative power of zero")
                exponent = -exponent
            value = value**exponent
        return value

    def base(self) -> RatFun:
        token = self.current
        if self._at("("):
            self._advance()
            value = self.expr()
            if not self._at(")"):
                raise self._error("expected ')'")
            self._advance()
            return value
        if token.kind == "int":
            return RatFun.constant(self.literal())
        if token.kind == "name":
            self._advance()
            if token.text == self.var:
                return RatFun.variable()
            if token.text == "i":
                return RatFun.constant(GaussianRational(0, 1))
            raise self._error(f"unknown identifier {token.text!r}", token)
        if token.kind == "end":
            raise self._error("unexpected end of expression")
        raise self._error(f"unexpected {token.text!r}")

    def literal(self) -> GaussianRational:
        value = Fraction(int(self._advance().text))
        if self._touching("op", "/") and self.tokens[self.index + 1].kind == "int" and (
            self.tokens[self.index + 1].pos == self.current.end
        ):
            self._advance()
            token = self._advance()
            denominator = int(token.text)
            if denominator == 0:
                raise self._error("literal denominator must be a positive integer", token)
            value = value / denominator
        if self._touching("name", "i") and self.var != "i":
            self._advance()
            return GaussianRational(0, value)
        return GaussianRational(value)


def parse_ratfun(text: str, var: str = "z") -> RatFun:
    return _Parser(text, var).parse()


def parse_poly(text: str, var: str = "t") -> Poly:
    value = parse_ratfun(text, var)
    if not value.is_polynomial():
        raise NotPolynomialError(f"{text!r} is not a polynomial in {var}")
    return value.num


def parse_scalar(text: str) -> GaussianRational:
    """An exact Gaussian-rational constant such as "2", "-3/2" or "1 + 1/2i"."""
    value = parse_ratfun(str(text), var="z")
    if not value.is_constant():
        raise ExpressionSyntaxError(f"expected a constant, got {text!r}", 0, str(text))
    return value.num.coeffs[0] if value.num.coeffs else GaussianRational(0)


def parse_vector(text: str) -> tuple[GaussianRational, ...]:
    """Comma-separated scalars, as given to --phi0 and --samples."""
    parts = str(text).split(",")
    if not text or any(not part.strip() for part in parts):
        raise ExpressionSyntaxError("expected comma-separated constants", 0, str(text))
    return tuple(parse_scalar(part) for part in parts)
