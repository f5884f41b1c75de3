import random
from fractions import Fraction

import pytest

from src.errors import DivisionByZero, PoleAtZero
from src.scalar import I, Scalar
from src.symbolic import Polynomial, RationalFunction, poly_gcd, rf_eval_at_zero, t_valuation

t = Polynomial.var("t")
alpha = Polynomial.var("alpha")


def test_polynomial_arithmetic():
    p = (t + 1) * (t - 1)
    assert p == t * t - 1
    assert p.degree("t") == 2
    assert (t + alpha) ** 2 == t * t + 2 * t * alpha + alpha * alpha


def test_substitute():
    p = t * t + alpha
    assert p.substitute({"t": 2}) == alpha + 4
    assert p.substitute({"alpha": t}) == t * t + t


def test_gcd_and_lowest_terms():
    g = poly_gcd((t + 1) * (t - 1), (t + 1) * t)
    assert g.monic() == t + 1
    f = RationalFunction((t + 1) * (t - 1), (t + 1) * t)
    assert f.num == t - 1
    assert f.den == t


def test_denominator_is_monic():
    f = RationalFunction(Polynomial.constant(1), 2 * t)
    assert f.den == t
    assert f.num == Polynomial.constant(Scalar(1) / 2)


def test_zero_denominator():
    with pytest.raises(DivisionByZero):
        RationalFunction(t, Polynomial())


def test_eval_at_zero():
    f = RationalFunction(t * t + 3 * t, t)
    assert rf_eval_at_zero(f) == 3
    assert rf_eval_at_zero(RationalFunction(alpha, 1 + t)) == RationalFunction.lift(alpha)


def test_pole_at_zero():
    with pytest.raises(PoleAtZero):
        rf_eval_at_zero(RationalFunction(Polynomial.constant(1), t * t))


def test_gaussian_coefficients():
    p = (t + I) * (t - I)
    assert p == t * t + 1


def test_valuation():
    assert t_valuation(t ** 3 + 2 * t ** 5) == 3
    with pytest.raises(ValueError):
        t_valuation(Polynomial())


def test_rational_function_field_ops():
    f = RationalFunction(Polynomial.constant(1), t)
    g = RationalFunction(alpha, t + 1)
    assert (f + g) - g == f
    assert (f * g) / g == f
    assert f.inverse() == RationalFunction.lift(t)


def _random_polynomial(rng, names=("t",), degree=3, terms=3):
    p = Polynomial()
    for _ in range(rng.randint(1, terms)):
        c = Scalar.gaussian(Fraction(rng.randint(-5, 5), rng.randint(1, 4)), rng.randint(-2, 2))
        mono = Polynomial.constant(c)
        for name in names:
            mono = mono * Polynomial.var(name, rng.randint(0, degree))
        p = p + mono
    return p


@pytest.mark.slow
def test_polynomial_ring_laws_on_random_inputs():
    rng = random.Random(17)
    for _ in range(1000):
        a, b, c = (_random_polynomial(rng, ("t", "alpha")) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert a - a == Polynomial()


@pytest.mark.slow
def test_exact_division_on_random_inputs():
    rng = random.Random(23)
    for _ in range(1000):
        a, b = _random_polynomial(rng), _random_polynomial(rng)
        if not b:
            continue
        q = RationalFunction(a * b, b)
        assert q == RationalFunction.lift(a)
        assert q.den.leading_coefficient() == 1
