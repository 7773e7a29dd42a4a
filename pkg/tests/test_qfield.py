from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import q_values, rationals
from qvir.qfield import (
    InsufficientSamplesError,
    InvalidQError,
    ModeError,
    QParam,
    certify,
    coerce,
    cubic_product,
    degree_bound,
    pit_verify,
    qangle,
    qint,
    qpascal_residual,
    sample_schedule,
    sigma,
    xi,
)
from qvir.jacobi import qjacobi_witt, vir_jacobi_residual

Q2 = QParam(2)


def test_qint_small_values():
    assert qint(0, Q2) == 0
    assert qint(1, Q2) == 1
    assert qint(2, Q2) == Fraction(5, 2)
    assert qint(3, Q2) == Fraction(21, 4)


def test_qangle_values():
    assert qangle(0, QParam("3/7")) == 2
    assert qangle(1, Q2) == Fraction(5, 2)
    assert qangle(-3, Q2) == qangle(3, Q2)


def test_xi_and_sigma_values():
    assert xi(1, Q2) == 0 and xi(0, Q2) == 0
    assert xi(2, Q2) == Fraction(105, 34)
    assert sigma(1, Q2) == 0
    assert sigma(2, Q2) * qint(2, Q2) * qint(3, Q2) == xi(2, Q2)
    # (105/34) / ((5/2)(21/4)) = 8/34
    assert sigma(2, Q2) == Fraction(4, 17)


def test_float_mode_matches_exact():
    qf = QParam(1.5)
    for m in range(-6, 7):
        assert abs(qint(m, qf) - float(qint(m, QParam("3/2")))) < 1e-12


@pytest.mark.parametrize("bad", [0, 1, -1, "1", 1.0, -1.0])
def test_invalid_q(bad):
    with pytest.raises(InvalidQError):
        QParam(bad)


def test_string_q_is_exact():
    q = QParam("3/2")
    assert q.value == Fraction(3, 2) and q.mode == "exact"
    assert QParam(0.5).mode == "float"


def test_mixed_modes_rejected():
    with pytest.raises(ModeError):
        coerce(0.5, "exact")
    with pytest.raises(ModeError):
        coerce(Fraction(1, 2), "float")
    assert coerce(3, "float") == 3 + 0j


def test_pit_zero_identity():
    assert pit_verify(lambda q: 0, 5, sample_schedule(6))


def test_pit_witt_jacobi_triple():
    assert pit_verify(lambda q: qjacobi_witt(2, 1, 0, q), 20, sample_schedule(25))


def test_pit_rejects_reduced_vir_form():
    assert not pit_verify(lambda q: vir_jacobi_residual(3, 2, -5, q).reduced, 60, sample_schedule(61))


def test_pit_preconditions():
    with pytest.raises(InsufficientSamplesError):
        pit_verify(lambda q: 0, 10, sample_schedule(10))
    with pytest.raises(InsufficientSamplesError):
        pit_verify(lambda q: 0, 1, [QParam(2), QParam(2), QParam(3)])
    with pytest.raises(InsufficientSamplesError):
        pit_verify(lambda q: 0, 1, [QParam(2.0), QParam(3.0)])


def test_pit_catches_nonzero_polynomial():
    # (q - 2)(q - 3) vanishes at two points only
    assert not pit_verify(lambda q: (q.value - 2) * (q.value - 3), 2, [QParam(2), QParam(3), QParam(5)])


def test_schedule_is_prefix_stable_and_seeded():
    a, b = sample_schedule(10, seed=4), sample_schedule(30, seed=4)
    assert [x.value for x in a] == [x.value for x in b[:10]]
    assert [x.value for x in sample_schedule(10, seed=5)] != [x.value for x in a]
    assert len({x.value for x in b}) == 30


def test_degree_bound():
    assert degree_bound(1, 2, -3) == 6 * 9


def test_qpascal_certified():
    for m in range(-5, 6):
        for n in range(-5, 6):
            assert certify(lambda q: qpascal_residual(m, n, q), m, n)


def test_oddness_on_grid():
    qs = sample_schedule(10, seed=3)
    for q in qs:
        for n in range(-32, 33):
            assert xi(-n, q) == -xi(n, q)
            assert sigma(-n, q) == -sigma(n, q)


@given(q_values, st.integers(-12, 12))
def test_qint_odd(q, m):
    assert qint(-m, q) == -qint(m, q)
    assert qangle(-m, q) == qangle(m, q)


@given(q_values, st.integers(-10, 10))
def test_cubic_product_odd(q, n):
    assert cubic_product(-n, q) == -cubic_product(n, q)


@given(rationals, rationals, rationals)
def test_exact_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
