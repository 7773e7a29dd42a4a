from fractions import Fraction

import pytest
from hypothesis import given

from conftest import fields, mono, q_values
from qvir.euler import DivergentSeriesError
from qvir.hierarchy import Dq_apply, hierarchy_rhs, relation_residuals, series_s1, series_s1_error, solve_coeffs
from qvir.laurent import DegenerateModeError, LaurentField
from qvir.qfield import QParam

Q2 = QParam(2)


def test_Dq_examples():
    assert Dq_apply(LaurentField.constant(1), Q2) == 0
    q = QParam(Fraction(5, 3))
    assert Dq_apply(mono(2), q) == mono(1, q.value + 1)
    qf = QParam(1 + 1e-8)
    for m in range(-3, 5):
        out = Dq_apply(LaurentField.monomial(m, 1.0, "float"), qf)
        assert out.coeff(m - 1) == pytest.approx(m, abs=1e-6)


def test_zero_field():
    h = solve_coeffs(LaurentField.zero(), Q2)
    assert all(getattr(h, k) == 0 for k in ("s0", "s1", "s2", "w0", "w1", "w2"))
    assert hierarchy_rhs(LaurentField.zero(), Q2) == 0


def test_constant_field():
    h = solve_coeffs(LaurentField.constant(1), Q2)
    assert h.s0 == mono(1, Fraction(1, 3))
    q = QParam(Fraction(3, 2))
    h = solve_coeffs(LaurentField.constant(1), q)
    assert h.s0 == mono(1, (q.value - 1) / (q.value + 1))
    # frozen from the exact solve
    assert hierarchy_rhs(LaurentField.constant(3), Q2) == LaurentField({3: Fraction(28, 5), 1: -7})


def test_degenerate_mode_reported():
    with pytest.raises(DegenerateModeError) as err:
        solve_coeffs(LaurentField.monomial(0, 1.0, "float"), QParam(1j))
    assert err.value.mode in (1, 2, 3)


def test_series_s1_converges():
    u = LaurentField({1: 1.0, 2: -0.5, 3: 0.25}, "float")
    q = QParam(0.5)
    errs = [series_s1_error(u, q, n) for n in (10, 20, 40)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-9


def test_series_s1_divergent_mode():
    with pytest.raises(DivergentSeriesError):
        series_s1(LaurentField({-1: 1.0}, "float"), QParam(0.5), 10)


@given(fields(), q_values)
def test_defining_relations(u, q):
    h = solve_coeffs(u, q)
    assert all(v == 0 for v in relation_residuals(h, q).values())
