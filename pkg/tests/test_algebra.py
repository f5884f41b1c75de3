import pytest

from src.algebra import (
    Algebra, annihilator, basis_change_from_rows, in_basis, is_nilpotent, is_solvable,
    multiply, plus_algebra, product_subspace, square, transform,
)
from src.catalog import instantiate
from src.errors import SingularMatrix
from src.scalar import Scalar
from src.utils import linalg


def diag(*values):
    return [[Scalar(v) if i == j else Scalar(0) for j in range(3)] for i, v in enumerate(values)]


def test_from_products_is_one_based():
    A = Algebra.from_products(3, {(1, 1): {2: 1}})
    assert A.c(0, 0, 1) == 1
    assert A.table == {(0, 0, 1): Scalar(1)}


def test_index_outside_dimension():
    with pytest.raises(ValueError):
        Algebra(3, {(0, 0, 3): 1})


def test_identity_basis_change():
    A = instantiate("N5")
    assert in_basis(A, linalg.identity(3, Scalar(1))) == A


def test_transform_scales_structure_constants():
    A = Algebra.from_products(3, {(1, 1): {1: 1}})
    B = transform(A, diag(2, 1, 1))
    assert B.c(0, 0, 0) == Scalar(1) / 2


def test_transform_agrees_with_rows():
    A = instantiate("N2")
    rows = [[Scalar(1), Scalar(0), Scalar(-1)], [Scalar(0), Scalar(1), Scalar(0)],
            [Scalar(1), Scalar(1), Scalar(1)]]
    assert transform(A, basis_change_from_rows(rows)) == in_basis(A, rows)


def test_transform_composes():
    A = instantiate("A3")
    g = diag(1, 2, 3)
    h = [[Scalar(1), Scalar(1), Scalar(0)], [Scalar(0), Scalar(1), Scalar(0)],
         [Scalar(0), Scalar(0), Scalar(1)]]
    assert transform(transform(A, g), h) == transform(A, linalg.matmul(h, g))


def test_singular_rows():
    with pytest.raises(SingularMatrix):
        in_basis(instantiate("N1"), diag(1, 1, 0))


def test_multiply():
    A = instantiate("N5")
    e1, e3 = [Scalar(1), Scalar(0), Scalar(0)], [Scalar(0), Scalar(0), Scalar(1)]
    assert multiply(A, e1, e3) == [Scalar(0), Scalar(0), Scalar(1)]
    assert multiply(A, e3, e3) == [Scalar(0), Scalar(1), Scalar(0)]


@pytest.mark.parametrize("label, dim_square, square_squared", [("N2", 2, True), ("N3", 2, False), ("N4", 1, False)])
def test_square_dimensions(label, dim_square, square_squared):
    A = instantiate(label)
    sq = square(A)
    assert sq.dim == dim_square
    assert (not product_subspace(A, sq, sq).is_zero()) == square_squared


def test_annihilator_separates_n1_from_n6_zero():
    assert annihilator(instantiate("N1")).dim == 2
    assert annihilator(instantiate("N6(0)")).dim == 1
    assert annihilator(instantiate("C3-zero")).dim == 3


def test_series():
    assert not is_solvable(instantiate("g4"))
    assert is_nilpotent(instantiate("N1"))
    n5 = instantiate("N5")
    assert is_solvable(n5)
    assert not is_nilpotent(n5)


def test_plus_algebra_of_anticommutative_is_zero():
    assert plus_algebra(instantiate("g1")) == Algebra.zero()
    assert plus_algebra(instantiate("bN1")) == instantiate("bN1")


def test_commutativity_flags():
    assert instantiate("g4").is_anticommutative()
    assert instantiate("bN1").is_commutative()
    assert not instantiate("N5").is_commutative()
