"""Coefficients and right-hand side of the qKdV hierarchy flow.

Here D_q is the Jackson derivative f -> (f(qx) - f(x)) / ((q-1) x) and x is
identified with z. The dressing coefficients s0, s1, s2 solve equations of
the shape s + tau s = f; each is solved mode by mode as s_m = f_m / (1 + q^m)
instead of through the alternating series sum (-1)^n f(q^n x).
"""
from __future__ import annotations

from dataclasses import dataclass

from .euler import DivergentSeriesError
from .laurent import LaurentField, diag_inverse, dilate
from .qfield import QParam, as_q


def Dq_apply(f: LaurentField, q) -> LaurentField:
    """z^m -> (q^m - 1)/(q - 1) z^(m-1)."""
    q = as_q(q)
    one = q.one()
    return f.map_modes(lambda m: (q.pow(m) - one) / (q.value - one), -1)


def _solve(f: LaurentField, q: QParam) -> LaurentField:
    # s + tau s = f
    return diag_inverse(f, "one_plus_tau", q)


@dataclass(frozen=True)
class HierarchyCoeffs:
    u: LaurentField
    u1: LaurentField
    s0: LaurentField
    s1: LaurentField
    s2: LaurentField
    w0: LaurentField
    w1: LaurentField
    w2: LaurentField

    def to_json(self) -> dict:
        return {k: getattr(self, k).to_json() for k in ("u", "u1", "s0", "s1", "s2", "w0", "w1", "w2")}


def solve_coeffs(u: LaurentField, q) -> HierarchyCoeffs:
    q = as_q(q)
    t = lambda f, k=1: dilate(f, k, q)  # noqa: E731
    D = lambda f: Dq_apply(f, q)  # noqa: E731
    qp1 = q.value + q.one()  # printed as q + 1, kept literally

    u1 = (u * LaurentField.monomial(1, 1, u.mode)).scale(q.value - q.one())
    s0 = _solve(u1, q)
    s1 = _solve(u - D(s0) - s0 * s0, q)
    s2 = _solve(-D(s1) - s0 * s1 - s1 * t(s0, -1), q)

    w2 = t(s0, 2) + u1
    w1 = t(D(s0)).scale(qp1) + t(s1, 2) + (t(s0) + s0) * t(s0) + u
    w0 = (
        D(D(s0))
        + t(D(s1)).scale(qp1)
        + u1 * D(s0)
        + u1 * t(s1)
        + u * s0
        + t(s2, 2)
    )
    return HierarchyCoeffs(u, u1, s0, s1, s2, w0, w1, w2)


def hierarchy_rhs(u: LaurentField, q, coeffs: HierarchyCoeffs | None = None) -> LaurentField:
    """D^3 u + w2 D^2 u + w1 D u - (D^2 w0 + u1 D w0)."""
    q = as_q(q)
    h = coeffs or solve_coeffs(u, q)
    D = lambda f: Dq_apply(f, q)  # noqa: E731
    Du = D(u)
    DDu = D(Du)
    Dw0 = D(h.w0)
    return D(DDu) + h.w2 * DDu + h.w1 * Du - (D(Dw0) + h.u1 * Dw0)


def relation_residuals(h: HierarchyCoeffs, q) -> dict:
    """Re-substitute the defining relations; every entry is zero when they hold."""
    q = as_q(q)
    t = lambda f, k=1: dilate(f, k, q)  # noqa: E731
    D = lambda f: Dq_apply(f, q)  # noqa: E731
    return {
        "w2": h.w2 - (t(h.s0, 2) + t(h.s0) + h.s0),
        "s0": t(h.s0) + h.s0 - h.u1,
        "s1": h.s1 + t(h.s1) - (h.u - D(h.s0) - h.s0 * h.s0),
        "s2": t(h.s2) + h.s2 - (-D(h.s1) - h.s0 * h.s1 - h.s1 * t(h.s0, -1)),
    }


def series_s1(u: LaurentField, q, terms: int) -> LaurentField:
    """s1 = sum_(n < terms) (-1)^n f(q^n x) with f = u - D_q s0 - s0^2.

    Converges on mode m only when |q^m| < 1.
    """
    q = as_q(q)
    h = solve_coeffs(u, q)
    f = h.u - Dq_apply(h.s0, q) - h.s0 * h.s0
    for m in f.support():
        if abs(q.pow(m)) >= 1:
            raise DivergentSeriesError("one_plus_tau", m, q.pow(m))
    out = LaurentField.zero(u.mode)
    term = f
    for n in range(terms):
        out = out + (term if n % 2 == 0 else -term)
        term = dilate(term, 1, q)
    return out


def series_s1_error(u: LaurentField, q, terms: int) -> float:
    """Max mode-wise gap between :func:`series_s1` and the diagonal solve."""
    q = as_q(q)
    gap = series_s1(u, q, terms) - solve_coeffs(u, q).s1
    return max((abs(v) for _, v in gap.items()), default=0.0)
