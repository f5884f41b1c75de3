import random
from fractions import Fraction

import pytest

from src.algebra import Algebra, transform
from src.catalog import instantiate, parse_label, symbolic
from src.classify import classify
from src.errors import NotNil, OutsideCatalog, ParameterError
from src.scalar import I, Scalar
from src.utils import linalg

LABELS = [
    "C3-zero", "g1", "g2", "g3(0)", "g3(1)", "g3(2)", "g4", "A1(2)", "A1(1)", "A1(-1)",
    "A2", "A3", "N1", "N2", "N3", "N4", "N5", "N6(0)", "N6(2)", "rN1", "rN2(0)", "rN2(2)",
    "bN1", "bN2",
]
GAUSSIAN_LABELS = LABELS + ["g3(i)", "A1(i)", "N6(i)", "N6(1+i)", "rN2(i)", "rN2(-i)"]


def random_invertible(rng):
    while True:
        g = [[Scalar(Fraction(rng.randint(-2, 2), rng.randint(1, 3))) for _ in range(3)]
             for _ in range(3)]
        if linalg.determinant(g):
            return g



def random_gaussian_invertible(rng):
    def entry():
        return Scalar.gaussian(Fraction(rng.randint(-2, 2), rng.randint(1, 3)),
                               Fraction(rng.randint(-2, 2), rng.randint(1, 3)))

    while True:
        g = [[entry() for _ in range(3)] for _ in range(3)]
        if linalg.determinant(g):
            return g


@pytest.mark.parametrize("label", LABELS)
def test_catalog_members_classify_to_themselves(label):
    result = classify(instantiate(label))
    assert result.label == parse_label(label)
    assert transform(instantiate(label), result.basis_change) == instantiate(result.label)


@pytest.mark.parametrize("label", LABELS)
def test_classification_sees_through_basis_changes(label):
    rng = random.Random(label)
    A = transform(instantiate(label), random_invertible(rng))
    result = classify(A)
    assert result.label == parse_label(label)
    assert transform(A, result.basis_change) == instantiate(label)


def test_identified_parameters_get_one_label():
    assert classify(instantiate("N6(3)")).label == classify(transform(
        instantiate("N6(3)"), [[Scalar(1), Scalar(0), Scalar(0)], [Scalar(0), Scalar(1), Scalar(0)],
                               [Scalar(0), Scalar(0), Scalar(-1)]])).label


def test_labels_differ_across_families():
    labels = {str(classify(instantiate(label)).label) for label in LABELS}
    assert len(labels) == len(LABELS)


def test_not_nil():
    with pytest.raises(NotNil):
        classify(Algebra.from_products(3, {(1, 1): {1: 1}}))


def test_isotropic_product_is_outside_the_list():
    # ab = a + i b with b^2 = a^2
    A = Algebra.from_products(3, {
        (1, 1): {2: 1}, (3, 3): {2: 1}, (1, 3): {1: 1, 3: I}, (3, 1): {1: -1, 3: -I},
    })
    with pytest.raises(OutsideCatalog) as info:
        classify(A)
    assert info.value.table is not None


def test_needs_a_concrete_table():
    with pytest.raises(ParameterError):
        classify(symbolic("N6"))


def test_rejects_other_dimensions():
    with pytest.raises(ValueError):
        classify(Algebra(2, {(0, 0, 1): 1}))


@pytest.mark.parametrize("label", ["g3(i)", "A1(i)", "N6(i)", "rN2(i)"])
def test_gaussian_parameters_classify_to_themselves(label):
    result = classify(transform(instantiate(label), random_gaussian_invertible(random.Random(label))))
    assert result.label == parse_label(label)


@pytest.mark.slow
@pytest.mark.parametrize("label", GAUSSIAN_LABELS)
def test_many_gaussian_basis_changes(label):
    rng = random.Random(f"gaussian {label}")
    for _ in range(200):
        A = transform(instantiate(label), random_gaussian_invertible(rng))
        result = classify(A)
        assert result.label == parse_label(label)
        assert transform(A, result.basis_change) == instantiate(label)
