import logging
from functools import lru_cache

import pyparsing as pp

from src.errors import LiteralSyntaxError
from src.scalar import BASE, FieldTower, I, Scalar
from src.symbolic import INDEX, Polynomial, RationalFunction

logger = logging.getLogger(__name__)

ALIASES = {"beta": "alpha", "a": "alpha"}


@lru_cache(maxsize=1)
def _grammar():
    integer = pp.Word(pp.nums)
    name = pp.Word(pp.alphas, pp.alphanums + "_")
    operand = integer | name
    return pp.infix_notation(
        operand,
        [
            ("^", 2, pp.OpAssoc.RIGHT),
            (pp.one_of("+ -"), 1, pp.OpAssoc.RIGHT),
            (pp.one_of("* /"), 2, pp.OpAssoc.LEFT),
            (pp.one_of("+ -"), 2, pp.OpAssoc.LEFT),
        ],
    )


class LiteralParser:
    """Evaluates scalar and polynomial literals against a scalar tower.

    ``r1`` and ``r2`` name the roots adjoined to ``tower``; every other
    identifier must be an indeterminate (``beta`` is read as ``alpha``).
    """

    def __init__(self, tower: FieldTower = BASE):
        self.tower = tower

    def parse(self, text: str) -> RationalFunction:
        try:
            tree = _grammar().parse_string(str(text), parse_all=True)
        except pp.ParseException as exc:
            raise LiteralSyntaxError(f"cannot parse literal '{text}': {exc}") from exc
        return RationalFunction.lift(self._eval(tree[0]))

    def _eval(self, node):
        if isinstance(node, str):
            return self._atom(node)
        items = list(node)
        if len(items) == 1:
            return self._eval(items[0])
        if len(items) == 2:
            value = self._eval(items[1])
            return -value if items[0] == "-" else value
        if items[1] == "^":
            # right associative: fold from the right
            value = self._eval(items[-1])
            for base in reversed(items[:-2:2]):
                value = self._power(self._eval(base), value)
            return value
        value = self._eval(items[0])
        for op, operand in zip(items[1::2], items[2::2]):
            rhs = self._eval(operand)
            if op == "+":
                value = value + rhs
            elif op == "-":
                value = value - rhs
            elif op == "*":
                value = value * rhs
            else:
                value = RationalFunction.lift(value) / RationalFunction.lift(rhs)
        return value

    def _power(self, base, exponent):
        exponent = RationalFunction.lift(exponent)
        if not exponent.is_constant():
            raise LiteralSyntaxError("exponents must be integer constants")
        value = exponent.constant_value()
        if not value.is_rational() or value.real.denominator != 1:
            raise LiteralSyntaxError(f"exponent {value} is not an integer")
        n = int(value.real)
        if n < 0:
            return RationalFunction.lift(base) ** n
        return base ** n

    def _atom(self, token: str):
        if token.isdigit():
            return Scalar(int(token), self.tower)
        if token == "i":
            return I
        if token in ("r1", "r2"):
            level = int(token[1])
            if level > self.tower.depth:
                raise LiteralSyntaxError(f"'{token}' is not adjoined in this tower")
            return self.tower.root(level)
        name = ALIASES.get(token, token)
        if name in INDEX:
            return Polynomial.var(name)
        raise LiteralSyntaxError(f"unknown symbol '{token}'")


def parse_literal(text: str, tower: FieldTower = BASE) -> RationalFunction:
    return LiteralParser(tower).parse(text)


def parse_scalar(text: str, tower: FieldTower = BASE) -> Scalar:
    value = parse_literal(text, tower)
    if not value.is_constant():
        raise LiteralSyntaxError(f"'{text}' is not a constant")
    return value.constant_value()


def parse_value(text: str, tower: FieldTower = BASE):
    """Scalar when constant, Polynomial when polynomial, RationalFunction otherwise."""
    value = parse_literal(text, tower)
    if value.is_constant():
        return value.constant_value()
    if value.is_polynomial():
        return value.to_polynomial()
    return value


def format_value(value) -> str:
    if isinstance(value, RationalFunction):
        if value.is_constant():
            return str(value.constant_value())
        if value.is_polynomial():
            return str(value.to_polynomial())
    if isinstance(value, Polynomial) and value.is_constant():
        return str(value.constant_value())
    return str(value)
