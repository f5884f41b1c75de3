from pathlib import Path

import pytest

from src.algebra import Algebra, in_basis, transform
from src.catalog import instantiate, symbolic
from src.certificates import (
    PRINTED_ROW_ONE, PRINTED_ROW_TWO, ROW_ONE, ROW_TWO, CertificateKind, ClosedSetSpec,
    FlagCondition, LinearCondition, NonDegenerationCertificate, check_membership,
    closed_set_certificates, semicontinuity_battery, verify_borel_stability, verify_certificate,
)
from src.errors import InvalidCertificate
from src.models import CertificateFile, read_model
from src.nil import nil_index, vanishing_powers
from src.scalar import Scalar

CERTIFICATE_DIR = Path(__file__).resolve().parent.parent / "data" / "certificates"


def test_sources_lie_in_their_closed_sets():
    assert check_membership(instantiate("N2"), ROW_ONE)
    assert check_membership(instantiate("N5"), ROW_TWO)


def test_targets_lie_outside():
    assert not check_membership(instantiate("N6(1)"), ROW_ONE)
    assert not check_membership(instantiate("g2"), ROW_TWO)


def test_membership_reports_the_violated_condition():
    membership = check_membership(instantiate("N5"), ROW_ONE)
    assert not membership
    assert membership.violated


def test_printed_row_one_moves_tables_that_are_not_nil():
    stability = verify_borel_stability(PRINTED_ROW_ONE)
    assert not stability
    assert stability.nil_degree is None


@pytest.mark.slow
def test_printed_row_one_is_stable_where_cubes_vanish():
    stability = verify_borel_stability(PRINTED_ROW_ONE, nil_degree=3)
    assert stability.verdict == "Stable"


def test_anticommutative_table_leaves_printed_row_two():
    A = Algebra.from_products(3, {(2, 3): {2: 1}, (3, 2): {2: -1}})
    assert check_membership(A, PRINTED_ROW_TWO)
    assert nil_index(A).index == 2
    moved = in_basis(A, [[1, -1, 0], [0, 1, 0], [0, 0, 1]])
    assert not check_membership(moved, PRINTED_ROW_TWO)


def test_printed_row_two_is_unstable_among_nilalgebras():
    stability = verify_borel_stability(PRINTED_ROW_TWO, nil_degree=3)
    assert stability.verdict == "Unstable"
    assert stability.g is not None
    assert vanishing_powers(stability.table, 3)
    assert check_membership(stability.table, PRINTED_ROW_TWO)
    assert not check_membership(transform(stability.table, stability.g), PRINTED_ROW_TWO)


def test_symmetric_condition_is_stable_among_anticommutative_tables():
    R = ClosedSetSpec([], [LinearCondition(((Scalar(1), (1, 2, 3)), (Scalar(1), (2, 1, 3))))])
    assert not verify_borel_stability(R)
    stability = verify_borel_stability(R, nil_degree=2)
    assert stability.verdict == "Stable"
    assert stability.steps > 0


@pytest.mark.parametrize("closed_set", [ROW_ONE, ROW_TWO], ids=["one", "two"])
def test_corrected_closed_sets_are_borel_stable(closed_set):
    assert verify_borel_stability(closed_set)


def test_affine_condition_is_moved_by_scaling():
    R = ClosedSetSpec([], [LinearCondition(((Scalar(1), (1, 1, 1)),), Scalar(1))])
    stability = verify_borel_stability(R)
    assert not stability
    assert stability.g == [[Scalar(2), Scalar(0), Scalar(0)],
                           [Scalar(0), Scalar(1), Scalar(0)],
                           [Scalar(0), Scalar(0), Scalar(1)]]
    assert stability.table.c(0, 0, 0) == 1


def test_flag_conditions_are_stable():
    assert verify_borel_stability(ClosedSetSpec([FlagCondition(1, 1, 2)]))


def test_malformed_closed_sets():
    with pytest.raises(InvalidCertificate):
        ClosedSetSpec([FlagCondition(1, 1, 5)])
    with pytest.raises(InvalidCertificate):
        ClosedSetSpec([], [LinearCondition(((Scalar(1), (1, 2, 3)), (Scalar(-1), (1, 2, 3))))])
    with pytest.raises(InvalidCertificate):
        NonDegenerationCertificate("N2", "N6", CertificateKind.CLOSED_SET)


@pytest.mark.parametrize("source, target", [("g1", "bN2"), ("N4", "N2"), ("C3-zero", "N1")])
def test_battery_blocks(source, target):
    battery = semicontinuity_battery(symbolic(source), symbolic(target))
    assert battery
    assert battery.reasons


@pytest.mark.parametrize("source, target", [("N5", "N2"), ("N3", "N4"), ("bN2", "rN2")])
def test_battery_allows_real_degenerations(source, target):
    assert not semicontinuity_battery(symbolic(source), symbolic(target))


def test_invariant_gap_certificates():
    anti = NonDegenerationCertificate("g1", "bN2", "invariant-gap", invariant="anticommutative")
    assert verify_certificate(anti)
    nil = NonDegenerationCertificate("N5", "rN1", "invariant-gap", invariant="nil_index")
    assert verify_certificate(nil)


def test_false_certificate_is_rejected():
    cert = NonDegenerationCertificate("N5", "N2", CertificateKind.DER_DIMENSION)
    check = verify_certificate(cert)
    assert not check
    assert check.details


def test_unknown_invariant():
    cert = NonDegenerationCertificate("N5", "N2", "invariant-gap", invariant="colour")
    with pytest.raises(InvalidCertificate):
        verify_certificate(cert)


def test_printed_closed_set_certificate_fails_on_stability():
    cert = NonDegenerationCertificate("N5", "g2", CertificateKind.CLOSED_SET, PRINTED_ROW_TWO)
    check = verify_certificate(cert)
    assert not check
    assert check.details[-1].endswith("Unstable")


@pytest.mark.slow
@pytest.mark.parametrize("cert", closed_set_certificates(), ids=lambda c: f"{c.describe()} {c.provenance}")
def test_closed_set_certificates_are_proved(cert):
    check = verify_certificate(cert)
    assert check, check.details


@pytest.mark.slow
@pytest.mark.parametrize("path", sorted(CERTIFICATE_DIR.glob("*.json")), ids=lambda p: p.stem)
def test_stored_certificates_check(path):
    cert = read_model(path, CertificateFile).to_certificate()
    check = verify_certificate(cert)
    assert check, check.details
