import random
from fractions import Fraction

import pytest
from hypothesis import given

from conftest import fields, mono, q_values
from qvir.central import KINDS, CentralFunctional
from qvir.euler import (
    DivergentSeriesError,
    EquationVariant,
    bracket_pairing,
    classical_adjoint_gap,
    classical_coad,
    classical_cocycle_residual,
    classical_limit_check,
    coad_rhs,
    constant_preset,
    derived_rhs,
    gelfand_fuks,
    kdv_rhs,
    linear_operator,
    nonlinear_compact,
    nonlinear_expanded,
    pairing,
    printed_series_linear,
    series_linear,
    series_vs_diagonal_check,
)
from qvir.laurent import DegenerateModeError, LaurentField, dilate
from qvir.qfield import QParam, qint

Q2 = QParam(2)
QH = QParam(0.5)


def fmono(n, c=1.0):
    return LaurentField.monomial(n, c, "float")


def test_pairing_examples():
    for n in range(-3, 4):
        assert pairing(mono(n), 2, mono(-n - 1), 3, Q2) == Fraction(2) ** (n + 1) + 6
    assert pairing(mono(1), 0, LaurentField.zero(), 5, Q2) == 0
    assert pairing(LaurentField.zero(), 2, mono(4), 5, Q2) == 10


def test_coad_examples():
    psi = CentralFunctional("basic")
    assert coad_rhs(LaurentField.zero(), mono(2), 3, Q2, psi) == 0
    # (dq z) z + dq(q^2 z . q z) = z + q^3 [2] z
    assert coad_rhs(mono(1), mono(1), 0, Q2, psi) == mono(1, 1 + 8 * qint(2, Q2))


def test_rhs_zero_field():
    for kind in KINDS:
        assert kdv_rhs(LaurentField.zero(), EquationVariant(kind, 3), Q2) == 0


def test_classical_single_mode():
    c = Fraction(2)
    for n in range(-4, 6):
        got = kdv_rhs(mono(n), EquationVariant("classical_kdv", c))
        want = LaurentField({n - 3: -c * n * (n - 1) * (n - 2)}) + LaurentField({2 * n - 1: -3 * n})
        assert got == want


def test_basic_linear_part_by_hand():
    for n in range(-3, 6):
        got = linear_operator("basic", Q2)(mono(n))
        w = Fraction(2) ** (4 * n - 6) * qint(n, Q2) * qint(n - 1, Q2) * qint(n - 2, Q2)
        assert got == (mono(n - 3, w) if w else 0)


def test_canonical_single_mode_weight():
    op = linear_operator("canonical", Q2)
    for n in range(-4, 7):
        out = op(mono(n))
        assert len(out) <= 1 and set(out.support()) <= {n - 3}


def test_nonlinear_renderings_differ():
    z = mono(2)
    assert nonlinear_expanded(z, Q2) != nonlinear_compact(z, Q2)


def test_balanced_differs_from_basic_only_linearly():
    u = LaurentField({-2: 1, 1: 3, 4: Fraction(1, 2)})
    a = kdv_rhs(u, EquationVariant("basic", 0), Q2)
    b = kdv_rhs(u, EquationVariant("balanced", 0), Q2)
    assert a == b == -nonlinear_expanded(u, Q2)


def test_constant_presets():
    assert constant_preset("canonical_equation", 1, Q2) == 64 / (qint(2, Q2) * qint(3, Q2))
    assert constant_preset("balanced_matches_sigma", 1, Q2) * Fraction(1, 16) == 1 / (qint(2, Q2) * qint(3, Q2))
    with pytest.raises(ValueError):
        constant_preset("nope", 1, Q2)


def test_series_zero_and_divergence():
    assert series_vs_diagonal_check(LaurentField.zero("float"), "alternate", QH, 5) == 0
    with pytest.raises(DivergentSeriesError):
        series_linear(fmono(1), "alternate", QH, 5)
    with pytest.raises(DivergentSeriesError):
        series_linear(fmono(-3), "twisted", QH, 5)


@pytest.mark.parametrize("kind", ["alternate", "twisted"])
@pytest.mark.parametrize("n", [3, 4, 6])
@pytest.mark.parametrize("terms", [2, 3, 5])
def test_series_tail_is_geometric(kind, n, terms):
    # both inverses meet mode n - 1 with ratio q^(2(n-1)); the truncated
    # alternating sum misses a relative (q^(2(n-1)))^terms
    expected = 0.5 ** (2 * (n - 1) * terms)
    got = series_vs_diagonal_check(fmono(n), kind, QH, terms)
    assert got == pytest.approx(expected, rel=1e-9)


def test_printed_series_factors():
    for n in range(3, 8):
        d = linear_operator("alternate", QH)(fmono(n))
        p = printed_series_linear(fmono(n), "alternate", QH, 40)
        assert p.coeff(n - 3) / d.coeff(n - 3) == pytest.approx(4.0)
        d = linear_operator("twisted", QH)(fmono(n))
        p = printed_series_linear(fmono(n), "twisted", QH, 40)
        assert p.coeff(n - 3) / d.coeff(n - 3) == pytest.approx(1.0)


def test_gelfand_fuks_modes():
    for n in range(-4, 5):
        assert gelfand_fuks(mono(n), mono(-n)) == 0
        assert gelfand_fuks(mono(n), mono(2 - n)) == n * (2 - n) * (1 - n)
    f = LaurentField({-1: 2, 3: 1})
    assert gelfand_fuks(f, f) == 0


def test_classical_coad_examples():
    c = Fraction(5)
    u = LaurentField({-2: 1, 1: 3, 2: Fraction(1, 2)})
    from qvir.laurent import derivative as d

    assert classical_coad(u, u, c) == (u * d(u)).scale(3) + d(d(d(u))).scale(c)
    assert classical_coad(LaurentField.constant(4), u, c) == d(u).scale(4)
    assert classical_coad(mono(1), mono(1), 0) == mono(1, 3)
    assert kdv_rhs(u, EquationVariant("classical_kdv", c)) == -classical_coad(u, u, c)
    assert kdv_rhs(u, EquationVariant("classical_burgers", c)) == -classical_coad(u, u, 0)


def test_classical_limit_constants():
    u = LaurentField({1: 1.0, 3: 1.0, -2: 0.5}, "float")
    fits = classical_limit_check(u, EquationVariant("basic", 2.0), [1 + 1e-3, 1 + 1e-6])
    last = fits[-1]
    assert last.a.real == pytest.approx(3, abs=1e-3)
    assert last.b.real == pytest.approx(2, abs=1e-3)
    assert fits[0].distance > last.distance
    fits = classical_limit_check(u, EquationVariant("canonical", 2.0), [1 + 1e-6])
    # the 1/<n> weight halves the cubic coefficient in the limit
    assert fits[0].b.real == pytest.approx(1, abs=1e-3)
    zero = classical_limit_check(LaurentField.zero("float"), EquationVariant("basic", 1.0), [1.1])
    assert zero[0].a == 0 and zero[0].distance == 0


def test_compact_rendering_limit_is_four():
    u = LaurentField({1: 1.0, 2: 0.5}, "float")
    q = QParam(1 + 1e-7)
    from qvir.laurent import derivative as d

    uu = u * d(u)
    for n, v in nonlinear_compact(u, q).items():
        assert v == pytest.approx(4 * uu.coeff(n), rel=1e-5)
    for n, v in nonlinear_expanded(u, q).items():
        assert v == pytest.approx(3 * uu.coeff(n), rel=1e-5)


@given(fields(max_terms=4), fields(max_terms=4), fields(max_terms=4), q_values)
def test_adjointness(f, g, u, q):
    for kind in KINDS:
        psi = CentralFunctional(kind, Fraction(2, 3))
        try:
            lhs = (dilate(g, 1, q) * coad_rhs(f, u, 5, q, psi)).residue()
            assert lhs == bracket_pairing(f, g, u, 5, q, psi)
        except DegenerateModeError:
            pass


@given(fields(max_terms=4), q_values)
def test_derivation_reproduces_rhs(u, q):
    for kind in KINDS:
        v = EquationVariant(kind, Fraction(7, 2))
        try:
            assert derived_rhs(u, v, q) == kdv_rhs(u, v, q)
        except DegenerateModeError:
            pass


@given(fields(max_terms=4), fields(max_terms=4), fields(max_terms=4))
def test_classical_identities(f, g, h):
    assert classical_cocycle_residual(f, g, h) == 0
    assert classical_adjoint_gap(f, g, h, Fraction(3)) == 0
    assert gelfand_fuks(f, g) == -gelfand_fuks(g, f)


def test_unknown_variant():
    with pytest.raises(ValueError):
        EquationVariant("eq9")


def test_random_adjointness_batch():
    rng = random.Random(11)
    for _ in range(10):
        f, g, u = (LaurentField({n: rng.randint(-4, 4) for n in range(-4, 5)}) for _ in range(3))
        psi = CentralFunctional("canonical")
        assert (dilate(g, 1, Q2) * coad_rhs(f, u, 2, Q2, psi)).residue() == bracket_pairing(f, g, u, 2, Q2, psi)
