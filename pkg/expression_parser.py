"""
Pratt parser for field elements, Witt vectors and symbol expressions.

Grammar:
    elem    := integer | name | "(" elem ")" | "-" elem | elem op elem | elem "^" int
    witt    := "(" elem ("," elem)* ")"
    symbol  := "[" witt "," elem ")" "_" "{" int "}"
    expr    := symbol ("*" symbol)* | "0"

Integer literals are reduced mod p; exponents are plain integers and may be
negative. The braced integer of a symbol is its degree p^m.
"""
import logging
import re
from dataclasses import dataclass
from typing import Iterator, List, Optional

from exceptions import (
    DivisionByZeroError,
    ExpressionSyntaxError,
    InvalidDegreeError,
    OmegaLengthError,
    UnknownIndeterminateError,
)
from input_validation import validate_exponent
from ring_base import FieldContext, FieldElem
from symbols import BrauerExpr, CyclicSymbol
from witt import WittVector

logger = logging.getLogger(__name__)

TOKEN_PATTERN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")

NUMBER = "number"
NAME = "name"
OP = "op"
END = "end"

# binding powers
BP_SUM = 10
BP_PRODUCT = 20
BP_PREFIX = 25
BP_POWER = 30

OPERATORS = set("+-*/^()[],_{}")


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    position: int


def tokenize(text: str) -> Iterator[Token]:
    for match in TOKEN_PATTERN.finditer(text):
        number, name, op = match.groups()
        if number:
            yield Token(NUMBER, number, match.start(1))
        elif name:
            yield Token(NAME, name, match.start(2))
        elif op:
            if op not in OPERATORS:
                raise ExpressionSyntaxError(f"Unexpected character '{op}'", position=match.start(3), text=text)
            yield Token(OP, op, match.start(3))
    yield Token(END, "", len(text))


class ExpressionParser:
    """Recursive-descent driver around a Pratt loop for field expressions."""

    def __init__(self, text: str, context: FieldContext):
        self.text = text
        self.context = context
        self.tokens: List[Token] = list(tokenize(text))
        self.index = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        current = self.tokens[self.index]
        if current.kind != END:
            self.index += 1
        return current

    def error(self, message: str, token: Optional[Token] = None) -> ExpressionSyntaxError:
        token = token or self.token
        return ExpressionSyntaxError(message, position=token.position, text=self.text)

    def expect(self, value: str) -> Token:
        if self.token.kind != OP or self.token.value != value:
            found = self.token.value or "end of input"
            raise self.error(f"Expected '{value}', found '{found}'")
        return self.advance()

    def at(self, value: str) -> bool:
        return self.token.kind == OP and self.token.value == value

    def finish(self) -> None:
        if self.token.kind != END:
            raise self.error(f"Unexpected '{self.token.value}'")

    # ------------------------------------------------------------------
    # Field elements
    # ------------------------------------------------------------------

    @staticmethod
    def _left_binding_power(token: Token) -> int:
        if token.kind != OP:
            return 0
        if token.value in "+-":
            return BP_SUM
        if token.value in "*/":
            return BP_PRODUCT
        if token.value == "^":
            return BP_POWER
        return 0

    def parse_elem(self, rbp: int = 0) -> FieldElem:
        token = self.advance()
        left = self._nud(token)
        while rbp < self._left_binding_power(self.token):
            token = self.advance()
            left = self._led(token, left)
        return left

    def _nud(self, token: Token) -> FieldElem:
        if token.kind == NUMBER:
            return self.context.from_int(int(token.value))
        if token.kind == NAME:
            if token.value not in self.context.names:
                raise UnknownIndeterminateError(
                    token.value, self.context.names, context={"position": token.position}
                )
            return self.context.gen(token.value)
        if token.kind == OP and token.value == "(":
            inner = self.parse_elem()
            self.expect(")")
            return inner
        if token.kind == OP and token.value == "-":
            return -self.parse_elem(BP_PREFIX)
        if token.kind == OP and token.value == "+":
            return self.parse_elem(BP_PREFIX)
        found = token.value or "end of input"
        raise self.error(f"Unexpected '{found}'", token)

    def _led(self, token: Token, left: FieldElem) -> FieldElem:
        op = token.value
        if op == "+":
            return left + self.parse_elem(BP_SUM)
        if op == "-":
            return left - self.parse_elem(BP_SUM)
        if op == "*":
            return left * self.parse_elem(BP_PRODUCT)
        try:
            if op == "/":
                return left / self.parse_elem(BP_PRODUCT)
            if op == "^":
                return left ** self._parse_exponent()
        except DivisionByZeroError as exc:
            raise self.error("Division by zero", token) from exc
        raise self.error(f"Unexpected '{op}'", token)

    def _parse_exponent(self) -> int:
        if self.at("("):
            self.advance()
            value = self._parse_signed_int()
            self.expect(")")
            return value
        return self._parse_signed_int()

    def _parse_signed_int(self) -> int:
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        if self.token.kind != NUMBER:
            raise self.error("Exponent must be an integer literal")
        token = self.advance()
        ok, value, message = validate_exponent(sign * int(token.value))
        if not ok:
            raise self.error(message, token)
        return value

    # ------------------------------------------------------------------
    # Witt vectors and symbols
    # ------------------------------------------------------------------

    def parse_witt(self) -> WittVector:
        self.expect("(")
        coords = [self.parse_elem()]
        while self.at(","):
            self.advance()
            coords.append(self.parse_elem())
        self.expect(")")
        return WittVector(coords, ring=self.context)

    def parse_symbol(self) -> CyclicSymbol:
        start = self.expect("[")
        omega = self.parse_witt()
        self.expect(",")
        beta = self.parse_elem()
        self.expect(")")
        self.expect("_")
        self.expect("{")
        if self.token.kind != NUMBER:
            raise self.error("Expected the symbol degree p^m")
        degree_token = self.advance()
        self.expect("}")

        level = degree_level(int(degree_token.value), int(self.context.p))
        if level is None:
            raise InvalidDegreeError(
                f"{degree_token.value} is not a positive power of {int(self.context.p)}",
                context={"position": degree_token.position},
            )
        if omega.m != level:
            raise OmegaLengthError(
                f"Witt vector of length {omega.m} in a symbol of degree {degree_token.value}",
                context={"position": start.position, "expected_length": level},
            )
        return CyclicSymbol(omega, beta)

    def parse_expression(self) -> BrauerExpr:
        if self.token.kind == NUMBER and self.token.value == "0":
            self.advance()
            return BrauerExpr((), self.context)
        factors = [self.parse_symbol()]
        while self.at("*"):
            self.advance()
            factors.append(self.parse_symbol())
        return BrauerExpr(tuple(factors), self.context)


def degree_level(degree: int, p: int) -> Optional[int]:
    """m with degree = p^m and m >= 1, or None."""
    if degree < p:
        return None
    level = 0
    while degree % p == 0:
        degree //= p
        level += 1
    return level if degree == 1 else None


def parse_elem(text: str, context: FieldContext) -> FieldElem:
    """Parse one field element; the whole text must be consumed."""
    parser = ExpressionParser(text, context)
    value = parser.parse_elem()
    parser.finish()
    return value


def parse_witt_vector(text: str, context: FieldContext) -> WittVector:
    parser = ExpressionParser(text, context)
    value = parser.parse_witt()
    parser.finish()
    return value


def parse_symbol(text: str, context: FieldContext) -> CyclicSymbol:
    parser = ExpressionParser(text, context)
    value = parser.parse_symbol()
    parser.finish()
    return value


def parse_expression(text: str, context: FieldContext) -> BrauerExpr:
    """
    Parse a tensor product of symbols.

    Args:
        text: e.g. "[(t,0), s)_{4} * [(v), w)_{2}"
        context: Field descriptor declaring p and the indeterminates

    Returns:
        The parsed BrauerExpr (levels inferred from the degrees)
    """
    parser = ExpressionParser(text, context)
    expr = parser.parse_expression()
    parser.finish()
    logger.debug(f"Parsed {len(expr)} factor(s) from {len(text)} characters")
    return expr
