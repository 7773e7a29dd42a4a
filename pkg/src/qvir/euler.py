"""Duality pairing, coadjoint derivation and right-hand sides of the qKdV family.

The q-equations share the form

    u_t = -c L u - N(u)

where ``L`` is the bare third-order operator of a central functional (see
:func:`qvir.central.operator_stages`) and ``N`` is the nonlinear term. The
classical baseline works with the ordinary derivative on Laurent modes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .central import (
    KINDS,
    CentralFunctional,
    central_operator,
    evaluate,
    normalization,
    operator_stages,
)
from .laurent import LaurentField, derivative, dilate, q_derivative
from .qfield import QParam, Scalar, as_q, coerce, qint
from .qop import (
    DiagonalInverse,
    Pipeline,
    SkewOperator,
    dilation,
    qdiff,
    series_operator,
    series_ratio,
)

CLASSICAL = ("classical_kdv", "classical_burgers")
VARIANTS = CLASSICAL + KINDS
SERIES_KINDS = ("alternate", "twisted")


class DivergentSeriesError(ArithmeticError):
    def __init__(self, kind: str, mode: int, ratio):
        super().__init__(f"{kind} series diverges on mode z^{mode} (ratio {ratio})")
        self.kind = kind
        self.mode = mode


@dataclass(frozen=True)
class EquationVariant:
    """Equation selector. ``c`` is fixed for the whole evolution."""

    kind: str
    c: object = 1

    def __post_init__(self):
        if self.kind not in VARIANTS:
            raise ValueError(f"unknown equation {self.kind!r}; choose from {', '.join(VARIANTS)}")

    @property
    def classical(self) -> bool:
        return self.kind in CLASSICAL


# -- q-duality -----------------------------------------------------------------------


def pairing(v: LaurentField, a, u: LaurentField, c, q) -> Scalar:
    """<(v d, a), (u, c)> = residue(v tau^-1 u) + a c."""
    q = as_q(q)
    return (v * dilate(u, -1, q)).residue() + coerce(a, q.mode) * coerce(c, q.mode)


def bracket_pairing(f: LaurentField, g: LaurentField, u: LaurentField, c, q,
                    psi: CentralFunctional) -> Scalar:
    """Pairing of [(f d, a), (g d, b)] with (u, c), written out as

    residue((tau g)(dq f) u - (tau f)(dq g) u) + c psi(f, g).
    """
    q = as_q(q)
    tg, tf = dilate(g, 1, q), dilate(f, 1, q)
    flow = (tg * q_derivative(f, q) - tf * q_derivative(g, q)) * u
    return flow.residue() + coerce(c, q.mode) * evaluate(psi, f, g, q)


def coad_rhs(f: LaurentField, u: LaurentField, c, q, psi: CentralFunctional) -> LaurentField:
    """(dq f) u + dq((tau^2 f)(tau u)) + c K f, the field paired against tau g."""
    q = as_q(q)
    flow = q_derivative(f, q) * u + q_derivative(dilate(f, 2, q) * dilate(u, 1, q), q)
    return flow + central_operator(psi, q)(f).scale(coerce(c, q.mode))


# -- q right-hand sides -----------------------------------------------------------------


def linear_operator(kind: str, q) -> Pipeline:
    return Pipeline(operator_stages(kind, q), q)


def nonlinear_expanded(u: LaurentField, q) -> LaurentField:
    """(dq u) u + dq((tau^2 u)(tau u)); tends to 3 u u' as q -> 1."""
    q = as_q(q)
    return q_derivative(u, q) * u + q_derivative(dilate(u, 2, q) * dilate(u, 1, q), q)


def nonlinear_compact(u: LaurentField, q) -> LaurentField:
    """(1 + q tau)^2 applied to u dq u; tends to 4 u u' as q -> 1."""
    q = as_q(q)
    w = u * q_derivative(u, q)
    once = w + dilate(w, 1, q).scale(q.value)
    return once + dilate(once, 1, q).scale(q.value)


def classical_rhs(u: LaurentField, c) -> LaurentField:
    """-3 u u' - c u'''."""
    du = derivative(u)
    out = (u * du).scale(-3)
    if c != 0:
        out = out - derivative(derivative(du)).scale(coerce(c, u.mode))
    return out


def kdv_rhs(u: LaurentField, variant: EquationVariant, q=None) -> LaurentField:
    if variant.kind == "classical_kdv":
        return classical_rhs(u, variant.c)
    if variant.kind == "classical_burgers":
        return classical_rhs(u, 0)
    q = as_q(q)
    c = coerce(variant.c, q.mode)
    out = -nonlinear_expanded(u, q)
    if c != 0:
        out = out - linear_operator(variant.kind, q)(u).scale(c)
    return out


def derived_rhs(u: LaurentField, variant: EquationVariant, q) -> LaurentField:
    """-coad_rhs(u, u, c) with the functional matching ``variant``.

    The functional's constant is chosen so that ``c K`` equals ``c L``,
    which makes this an independent route to :func:`kdv_rhs`.
    """
    q = as_q(q)
    psi = CentralFunctional(variant.kind, q.one() / normalization(variant.kind, q))
    return -coad_rhs(u, u, variant.c, q, psi)


# named constant reparametrizations; each maps the free constant to the one used above
CONSTANT_PRESETS = {
    "balanced_matches_sigma": "c = c' q^4 / ([2][3])",
    "alternate_matches_sigma": "c' = c'' q^-6 / ([2][3])",
    "canonical_equation": "c'' = c q^6 / ([2][3])",
}


def constant_preset(name: str, value, q) -> Scalar:
    q = as_q(q)
    v = coerce(value, q.mode)
    b23 = qint(2, q) * qint(3, q)
    if name == "balanced_matches_sigma":
        return v * q.pow(4) / b23
    if name == "alternate_matches_sigma":
        return v * q.pow(-6) / b23
    if name == "canonical_equation":
        return v * q.pow(6) / b23
    raise ValueError(f"unknown preset {name!r}")


# -- series renderings ----------------------------------------------------------------------


def _series_pipeline(kind: str, q: QParam, terms: int) -> Pipeline:
    stages = []
    for s in linear_operator(kind, q).stages:
        if isinstance(s, DiagonalInverse):
            stages.append(series_operator(s.kind, terms, q))
        else:
            stages.append(s)
    return Pipeline(stages, q)


def _check_convergence(kind: str, u: LaurentField, q: QParam):
    stages = linear_operator(kind, q).stages
    f = u
    for s in reversed(stages):
        if isinstance(s, DiagonalInverse):
            for n in f.support():
                r = series_ratio(s.kind, n, q)
                if abs(r) >= 1:
                    raise DivergentSeriesError(kind, n, r)
            return
        f = s(f)


def series_linear(u: LaurentField, kind: str, q, terms: int) -> LaurentField:
    """Linear operator of ``kind`` with its diagonal inverse expanded to ``terms`` terms."""
    q = as_q(q)
    if kind not in SERIES_KINDS:
        raise ValueError(f"no series rendering for {kind!r}")
    _check_convergence(kind, u, q)
    return _series_pipeline(kind, q, terms)(u)


def printed_series_linear(u: LaurentField, kind: str, q, terms: int) -> LaurentField:
    """The series exactly as printed.

    alternate: tau^-4 dq tau dq tau sum (-1)^n tau^(2n+3) dq tau u
    twisted:   tau^-4 dq tau dq tau dq sum (-1)^n q^(-2n-1) tau^(2n+4) u

    The alternate rendering moves tau^2 across dq without the q^2 it costs,
    so it equals q^-2 times the diagonal form; the twisted one matches.
    """
    q = as_q(q)
    _check_convergence(kind, u, q)
    t, dq = (lambda k: dilation(k, q)), qdiff(q)
    body: dict = {}
    for n in range(terms):
        sign = 1 if n % 2 == 0 else -1
        if kind == "alternate":
            key, c = (2 * n + 3, 0), sign
        elif kind == "twisted":
            key, c = (2 * n + 4, 0), sign * q.pow(-2 * n - 1)
        else:
            raise ValueError(f"no series rendering for {kind!r}")
        body[key] = LaurentField.constant(c, q.mode)
    series = SkewOperator(body, q)
    if kind == "alternate":
        stages = [t(-4), dq, t(1), dq, t(1), series, dq, t(1)]
    else:
        stages = [t(-4), dq, t(1), dq, t(1), dq, series]
    return Pipeline(stages, q)(u)


def _max_relative(a: LaurentField, b: LaurentField) -> float:
    worst = 0.0
    for n in set(a.support()) | set(b.support()):
        x, y = a.coeff(n), b.coeff(n)
        scale = abs(y) if y != 0 else 1.0
        worst = max(worst, abs(x - y) / scale)
    return worst


def series_vs_diagonal_check(u: LaurentField, kind: str, q, terms: int) -> float:
    """Max mode-wise relative gap between series and diagonal-inverse renderings."""
    q = as_q(q)
    return _max_relative(series_linear(u, kind, q, terms), linear_operator(kind, q)(u))


# -- classical baseline -------------------------------------------------------------------


def classical_pairing(g: LaurentField, u: LaurentField) -> Scalar:
    return (g * u).residue()


def gelfand_fuks(f: LaurentField, g: LaurentField) -> Scalar:
    """residue(f' g'')."""
    return (derivative(f) * derivative(derivative(g))).residue()


def classical_bracket(f: LaurentField, g: LaurentField) -> LaurentField:
    """f' g - f g'."""
    return derivative(f) * g - f * derivative(g)


def classical_cocycle_residual(f: LaurentField, g: LaurentField, h: LaurentField) -> Scalar:
    return (
        gelfand_fuks(classical_bracket(f, g), h)
        + gelfand_fuks(classical_bracket(g, h), f)
        + gelfand_fuks(classical_bracket(h, f), g)
    )


def classical_coad(f: LaurentField, u: LaurentField, c) -> LaurentField:
    """2 f' u + f u' + c f'''."""
    df = derivative(f)
    out = (df * u).scale(2) + f * derivative(u)
    if c != 0:
        out = out + derivative(derivative(df)).scale(coerce(c, f.mode))
    return out


def classical_adjoint_gap(f: LaurentField, g: LaurentField, u: LaurentField, c) -> Scalar:
    """residue(g coad) - residue(u (g f' - f g') + c f' g'')."""
    left = classical_pairing(g, classical_coad(f, u, c))
    right = (u * (g * derivative(f) - f * derivative(g))).residue()
    right += coerce(c, f.mode) * (derivative(f) * derivative(derivative(g))).residue()
    return left - right


# -- q -> 1 --------------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitFit:
    q: complex
    a: complex  # fitted coefficient of -u u'
    b: complex  # fitted coefficient of -u'''
    distance: float  # max mode distance after the fit


def classical_limit_check(u: LaurentField, variant: EquationVariant, q_schedule) -> list:
    """Fit kdv_rhs(u) ~ -(a u u' + b u''') at each q of the schedule.

    Float mode. The fit is a complex least-squares over the modes of the two
    classical shapes; ``distance`` is what the best fit leaves unexplained.
    """
    u = u.to_float()
    du = derivative(u)
    shapes = [u * du, derivative(derivative(du))]
    out = []
    for qv in q_schedule:
        q = QParam(complex(qv))
        rhs = kdv_rhs(u, variant, q)
        modes = sorted(set(rhs.support()) | set(shapes[0].support()) | set(shapes[1].support()))
        if not modes:
            out.append(LimitFit(q.value, 0j, 0j, 0.0))
            continue
        A = np.array([[-s.coeff(n) for s in shapes] for n in modes], dtype=complex)
        y = np.array([rhs.coeff(n) for n in modes], dtype=complex)
        cols = [j for j in range(2) if np.any(A[:, j])]
        coef = np.zeros(2, dtype=complex)
        if cols:
            sol, *_ = np.linalg.lstsq(A[:, cols], y, rcond=None)
            coef[cols] = sol
        dist = float(np.max(np.abs(A @ coef - y)))
        out.append(LimitFit(q.value, complex(coef[0]), complex(coef[1]), dist))
    return out
