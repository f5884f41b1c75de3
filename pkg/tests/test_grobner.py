import random
from fractions import Fraction

import pytest
import sympy

from src.errors import BudgetExceeded
from src.grobner import (
    Ideal, UnitVerdict, groebner_basis, is_unit_ideal, reduce_polynomial, s_polynomial,
    split_gaussian,
)
from src.scalar import I, Scalar
from src.symbolic import INDEX, Polynomial

x1, x2, x3 = (Polynomial.var(n) for n in ("x1", "x2", "x3"))
X1, X2, X3 = sympy.symbols("x1 x2 x3")
SYMBOLS = {"x1": X1, "x2": X2, "x3": X3}


def to_sympy(p: Polynomial, variables):
    expr = 0
    for exp, c in p.terms.items():
        mono = 1
        for name in variables:
            mono *= SYMBOLS[name] ** exp[INDEX[name]]
        expr += sympy.Rational(c.real.numerator, c.real.denominator) * mono
    return sympy.expand(expr)


def _normalized(expr):
    return sympy.Poly(expr, X1, X2, X3, domain=sympy.QQ).monic().as_expr()


@pytest.mark.parametrize(
    "gens",
    [
        [x1 * x1 - x2, x1 * x2 - 1],
        [x1 * x2 - x3, x2 * x3 - x1, x3 * x1 - x2],
        [x1 + x2 + x3, x1 * x2 + x2 * x3 + x3 * x1, x1 * x2 * x3 - 1],
    ],
)
def test_reduced_basis_matches_sympy(gens):
    variables = ("x1", "x2", "x3")
    ours = groebner_basis(Ideal(gens, variables))
    theirs = sympy.groebner([to_sympy(g, variables) for g in gens], X1, X2, X3,
                            order="grevlex", domain=sympy.QQ)
    assert {_normalized(to_sympy(p, variables)) for p in ours.polynomials} == \
        {_normalized(g) for g in theirs.exprs}


def test_unit_ideal():
    assert is_unit_ideal(Ideal([x1 * x2 - 1, x1])).verdict == UnitVerdict.YES
    assert is_unit_ideal(Ideal([x1 * x1 - x2, x2 - 1])).verdict == UnitVerdict.NO


def test_constant_generator_short_circuits():
    result = is_unit_ideal(Ideal([Polynomial.constant(3), x1]))
    assert result.verdict == UnitVerdict.YES
    assert result.steps == 0


def test_budget():
    with pytest.raises(BudgetExceeded) as info:
        groebner_basis(Ideal([x1 * x1 - x2, x1 * x2 - 1]), budget=0)
    assert info.value.partial
    result = is_unit_ideal(Ideal([x1 * x1 - x2, x1 * x2 - 1]), budget=0)
    assert result.verdict == UnitVerdict.BUDGET_EXCEEDED


def test_rejects_non_rational_coefficients():
    with pytest.raises(ValueError):
        Ideal([x1 - I])


def test_split_gaussian_keeps_the_variety():
    # x1 - i and x1 + i have no common zero; split over Q with w^2 + 1
    polys = split_gaussian([x1 - I, x1 + I])
    assert is_unit_ideal(Ideal(polys)).verdict == UnitVerdict.YES
    polys = split_gaussian([x1 * x1 + 1, x1 - I])
    assert is_unit_ideal(Ideal(polys)).verdict == UnitVerdict.NO


def test_normal_form():
    variables = ("x1", "x2", "x3")
    basis = groebner_basis(Ideal([x1 * x1 - x2, x1 * x2 - 1], variables))
    assert reduce_polynomial(x1 * x1 * x1 * x2, basis.polynomials, variables) == \
        reduce_polynomial(x1 * x1, basis.polynomials, variables)


def _random_generator(rng):
    p = Polynomial()
    while not p:
        for _ in range(rng.randint(1, 3)):
            exp = [0, 0, 0]
            for _ in range(rng.randint(0, 2)):
                exp[rng.randrange(3)] += 1
            mono = Polynomial.constant(Scalar(Fraction(rng.randint(-3, 3), rng.randint(1, 2))))
            for name, e in zip(("x1", "x2", "x3"), exp):
                mono = mono * Polynomial.var(name, e)
            p = p + mono
    return p


@pytest.mark.slow
def test_s_polynomials_reduce_to_zero_on_random_ideals():
    rng = random.Random(31)
    variables = ("x1", "x2", "x3")
    for _ in range(1000):
        gens = [_random_generator(rng) for _ in range(rng.randint(1, 3))]
        basis = groebner_basis(Ideal(gens, variables))
        polys = basis.polynomials
        for g in gens:
            assert reduce_polynomial(g, polys, basis.variables).is_zero()
        for i in range(len(polys)):
            for j in range(i + 1, len(polys)):
                s = s_polynomial(polys[i], polys[j], basis.variables)
                assert reduce_polynomial(s, polys, basis.variables).is_zero()
