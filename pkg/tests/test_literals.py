import pytest

from src.errors import LiteralSyntaxError
from src.scalar import I, Scalar, sqrt
from src.symbolic import Polynomial, RationalFunction
from src.utils.literals import format_value, parse_literal, parse_scalar, parse_value

t = Polynomial.var("t")
alpha = Polynomial.var("alpha")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1/2", Scalar(1) / 2),
        ("-3", Scalar(-3)),
        ("i", I),
        ("2 - i", 2 - I),
        ("(1+i)^2", 2 * I),
    ],
)
def test_scalars(text, expected):
    assert parse_scalar(text) == expected


def test_polynomials():
    assert parse_value("t^2 + 2*t") == t * t + 2 * t
    assert parse_value("beta*t") == alpha * t
    assert isinstance(parse_value("t + 1"), Polynomial)


def test_division_gives_a_rational_function():
    f = parse_value("1/t^2")
    assert isinstance(f, RationalFunction)
    assert f == RationalFunction(Polynomial.constant(1), t * t)


def test_root_symbols_need_the_tower():
    r = sqrt(2)
    assert parse_scalar("r1", r.tower) == r
    with pytest.raises(LiteralSyntaxError):
        parse_scalar("r1")


@pytest.mark.parametrize("text", ["t +", "2^t", "1/2^(1/2)", "foo"])
def test_rejects(text):
    with pytest.raises(LiteralSyntaxError):
        parse_literal(text)


def test_not_a_constant():
    with pytest.raises(LiteralSyntaxError):
        parse_scalar("t")


@pytest.mark.parametrize("text", ["0", "-1", "1/2 - 3*i", "t^2*alpha - 1/2*t", "(t + 1)/(t^2)"])
def test_printing_is_inverse_to_parsing(text):
    value = parse_value(text)
    assert parse_value(format_value(value)) == value
