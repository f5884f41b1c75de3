import random
from fractions import Fraction

import pytest
import sympy

from src.algebra import transform
from src.catalog import FAMILIES, instantiate, symbolic
from src.invariants import (
    derivation_dim, derivation_profile, derivation_system, derivations, fingerprint,
    jacobi_defect_rank, orbit_dimension,
)
from src.scalar import Scalar
from src.utils import linalg

SINGLE = sorted(fid for fid, fam in FAMILIES.items() if not fam.parametric)


def random_invertible(rng):
    while True:
        g = [[Scalar(Fraction(rng.randint(-3, 3), rng.randint(1, 2))) for _ in range(3)]
             for _ in range(3)]
        if linalg.determinant(g):
            return g


def _sympy_rank(rows):
    return sympy.Matrix([[sympy.Rational(x.real.numerator, x.real.denominator) for x in r]
                         for r in rows]).rank()


@pytest.mark.parametrize("family_id", SINGLE)
def test_derivation_rank_matches_sympy(family_id):
    A = instantiate(family_id)
    rows = derivation_system(A)
    expected = 9 - (_sympy_rank(rows) if rows else 0)
    assert derivation_dim(A) == expected


@pytest.mark.parametrize("label, dim", [("C3-zero", 9), ("g1", 6), ("g4", 3), ("N5", 1), ("N4", 4)])
def test_known_derivation_dimensions(label, dim):
    assert derivation_dim(instantiate(label)) == dim


def test_derivations_satisfy_the_leibniz_rule():
    A = instantiate("N4")
    basis = derivations(A)
    assert len(basis) == derivation_dim(A)
    for D in basis:
        # D[m][l] is the e_m coordinate of D(e_l)
        for i in range(3):
            for j in range(3):
                prod = [A.c(i, j, k) for k in range(3)]
                lhs = [sum((D[m][k] * prod[k] for k in range(3)), Scalar(0)) for m in range(3)]
                rhs = [Scalar(0)] * 3
                for l in range(3):
                    for k in range(3):
                        rhs[k] += D[l][i] * A.c(l, j, k) + D[l][j] * A.c(i, l, k)
                assert lhs == rhs


def test_orbit_dimension():
    assert orbit_dimension(instantiate("N5")) == 8
    assert orbit_dimension(instantiate("C3-zero")) == 0


def test_generic_profile_of_a_family():
    profile = derivation_profile(symbolic("A1"))
    assert profile.generic == derivation_dim(symbolic("A1")) == 1
    for dim in profile.exceptional.values():
        assert dim != profile.generic


@pytest.mark.parametrize("label", ["g1", "g2", "g3(2)", "g4"])
def test_lie_algebras_have_no_jacobi_defect(label):
    assert jacobi_defect_rank(instantiate(label)) == 0


@pytest.mark.parametrize("label", ["A1(2)", "A2", "A3"])
def test_non_lie_anticommutative_algebras(label):
    assert jacobi_defect_rank(instantiate(label)) > 0


@pytest.mark.parametrize("label", ["N2", "N5", "A1(3)", "bN2", "rN2(2)"])
def test_fingerprint_is_invariant(label):
    rng = random.Random(label)
    A = instantiate(label)
    for _ in range(3):
        assert fingerprint(transform(A, random_invertible(rng))) == fingerprint(A)


def test_fingerprints_separate_n1_and_n6_zero():
    assert fingerprint(instantiate("N1")) != fingerprint(instantiate("N6(0)"))


@pytest.mark.slow
def test_fingerprint_survives_many_basis_changes():
    labels = SINGLE + ["g3(2)", "A1(3)", "N6(2)", "rN2(2)"]
    expected = {label: fingerprint(instantiate(label)) for label in labels}
    rng = random.Random(41)
    for n in range(1000):
        label = labels[n % len(labels)]
        moved = transform(instantiate(label), random_invertible(rng))
        assert fingerprint(moved) == expected[label], label
