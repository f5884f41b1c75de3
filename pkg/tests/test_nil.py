import random

import pytest

from src.algebra import Algebra
from src.catalog import FAMILIES, instantiate, symbolic
from src.nil import (
    LEFT, NAMED_IDENTITIES, REMARK_IDENTITIES, RIGHT, bracketings, check_partial_linearizations,
    check_trilinear_identity, is_symmetric_mono_leibniz, nil_index, identity_from_coefficients,
    satisfied_identities, term,
)


def test_bracketings_are_catalan():
    assert [len(bracketings(k)) for k in range(1, 7)] == [1, 1, 2, 5, 14, 42]


@pytest.mark.parametrize("family_id", sorted(FAMILIES))
def test_catalog_nil_indices(family_id):
    result = nil_index(symbolic(family_id), 8, param_samples=[])
    assert result.index == FAMILIES[family_id].nil_index


def test_not_nil():
    A = Algebra.from_products(3, {(1, 1): {1: 1}})
    result = nil_index(A, 6)
    assert not result.is_nil
    assert str(result) == "NotNilUpTo(6)"


def test_samples_are_reported():
    result = nil_index(symbolic("rN2"), 8, param_samples=[0, -1])
    assert result.index == 4
    assert result.samples == {"0": 4, "-1": 4}


def test_k_max_lower_bound():
    with pytest.raises(ValueError):
        nil_index(instantiate("N1"), 1)


def test_n3_satisfies_the_ten_coefficient_family():
    rng = random.Random(3)
    A = instantiate("N3")
    for _ in range(20):
        alphas = [rng.randint(-5, 5) for _ in range(10)]
        assert check_trilinear_identity(A, identity_from_coefficients(alphas)).holds


def test_coefficient_identity_needs_ten_values():
    with pytest.raises(ValueError):
        identity_from_coefficients([1, 2, 3])


@pytest.mark.parametrize("name", REMARK_IDENTITIES)
def test_named_identities_of_the_family_hold_in_n3(name):
    assert satisfied_identities(instantiate("N3"))[name]


def test_identity_failure_reports_a_triple():
    # associativity fails on e1 e1 e3 in N3
    assoc = [term(1, LEFT, "xyz"), term(-1, RIGHT, "xyz")]
    check = check_trilinear_identity(instantiate("N3"), assoc)
    assert not check.holds
    assert str(check).startswith("Fails")


def test_anticommutative_algebras_satisfy_cube_identities():
    ids = satisfied_identities(instantiate("g4"))
    assert ids["linearized-left-cube"] and ids["linearized-right-cube"]


def test_partial_linearizations():
    assert check_partial_linearizations(instantiate("N5"))
    assert check_partial_linearizations(instantiate("N3"))
    assert not check_partial_linearizations(instantiate("bN1"))


def test_symmetric_mono_leibniz_is_nil_index_three():
    assert is_symmetric_mono_leibniz(instantiate("N5"))
    assert is_symmetric_mono_leibniz(instantiate("g1"))
    assert not is_symmetric_mono_leibniz(instantiate("rN1"))


def test_named_registry():
    assert set(REMARK_IDENTITIES) <= set(NAMED_IDENTITIES)
