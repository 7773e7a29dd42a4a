"""Bilinear central terms on q-vector fields and their property checks.

Every functional has the shape ``psi(f, g) = residue((tau g) * K f)`` for an
operator pipeline ``K`` built from the dilation tau, the shifted derivative
d = dq tau and diagonal inverses. The central operator c^ = tau^2 is folded
into ``K`` acting on ``f``; the trailing c^ of the generator formulas is
reported as metadata only.

Kinds:

``basic``      K = tau d^3 (c^ inserted as tau d^3 tau^-2 c^ = tau d^3)
``balanced``   K = tau d^3 tau^-3
``canonical``  K = q^6/([2][3]) tau d^2 tau^2 (tau+tau^-1)^-1 d tau^-5
``alternate``  K = tau^-4 d^2 (tau+tau^-1)^-1 d tau^2
``twisted``    K = tau^-4 d^3 tau^2 Gamma^-1, Gamma = q^-1 tau + q tau^-1

each times the functional's ``constant``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .laurent import LaurentField, dilate
from .qfield import Scalar, as_q, coerce, cubic_product, qint, sigma, xi
from .qop import DiagonalInverse, Pipeline, dilation, qbracket_vf, scalar_op, shifted_d

KINDS = ("basic", "balanced", "canonical", "alternate", "twisted")
ANTISYMMETRIC_KINDS = ("balanced", "canonical", "alternate", "twisted")

CENTRAL_PLACEMENT = {
    "basic": "c^ = tau^2 absorbed: tau d^3 tau^-2 c^ f = tau d^3 f",
    "balanced": "c^ reinserted on generators only; trailing c^ after the scalar",
    "canonical": "c^ = (q^6/[2][3]) c tau^2 acting between d^2 and the diagonal inverse",
    "alternate": "c^ = c tau^2 acting first on f",
    "twisted": "c^ = c tau^2 acting after Gamma^-1",
}


@dataclass(frozen=True)
class CentralFunctional:
    kind: str
    constant: object = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown central functional {self.kind!r}")

    @property
    def placement(self) -> str:
        return CENTRAL_PLACEMENT[self.kind]

    def operator(self, q) -> Pipeline:
        return central_operator(self, q)

    def __call__(self, f: LaurentField, g: LaurentField, q) -> Scalar:
        return evaluate(self, f, g, q)


def operator_stages(kind: str, q) -> list:
    """The pipeline stages of ``K`` for ``kind``, without any constant."""
    q = as_q(q)
    d = shifted_d(q)
    t = lambda k: dilation(k, q)  # noqa: E731
    inv = DiagonalInverse("tau_plus_tauinv")
    if kind == "basic":
        return [t(1), d, d, d]
    if kind == "balanced":
        return [t(1), d, d, d, t(-3)]
    if kind == "canonical":
        return [t(1), d, d, t(2), inv, d, t(-5)]
    if kind == "alternate":
        return [t(-4), d, d, inv, d, t(2)]
    if kind == "twisted":
        return [t(-4), d, d, d, t(2), DiagonalInverse("gamma")]
    raise ValueError(f"unknown central functional {kind!r}")


def normalization(kind: str, q) -> Scalar:
    """Extra factor in front of the stages: q^6/([2][3]) for canonical, else 1."""
    q = as_q(q)
    if kind == "canonical":
        return q.pow(6) / (qint(2, q) * qint(3, q))
    return q.one()


def central_operator(psi: CentralFunctional, q) -> Pipeline:
    q = as_q(q)
    c = coerce(psi.constant, q.mode) * normalization(psi.kind, q)
    return Pipeline([scalar_op(c, q)] + operator_stages(psi.kind, q), q)


def evaluate(psi: CentralFunctional, f: LaurentField, g: LaurentField, q) -> Scalar:
    q = as_q(q)
    return (dilate(g, 1, q) * central_operator(psi, q)(f)).residue()


def generator_closed_form(psi: CentralFunctional, n: int, m: int, q) -> Scalar:
    """psi(l_n, l_m) in closed form, without the trailing c^.

    basic      c q^(3n-1) [n+1][n][n-1]
    balanced   c q^-4 [n+1][n][n-1]
    canonical  c [n+1][n][n-1] / (<n>[2][3])
    alternate  c q^11 [n+1][n][n-1] / <n>
    twisted    c q^11 [n+1][n][n-1] / <n>

    all times delta(m+n, 0).
    """
    q = as_q(q)
    if m + n != 0:
        return q.zero()
    c = coerce(psi.constant, q.mode)
    if psi.kind == "basic":
        return c * q.pow(3 * n - 1) * cubic_product(n, q)
    if psi.kind == "balanced":
        return c * q.pow(-4) * cubic_product(n, q)
    if psi.kind == "canonical":
        return c * sigma(n, q)
    return c * q.pow(11) * xi(n, q)


def trailing_central_power(psi: CentralFunctional) -> int:
    """Power of tau carried by the c^ factor dropped from the scalar value."""
    return 0 if psi.kind == "basic" else 2


def antisymmetry_residual(psi: CentralFunctional, f, g, q) -> Scalar:
    return evaluate(psi, f, g, q) + evaluate(psi, g, f, q)


def cocycle_residual(psi: CentralFunctional, f, g, h, q) -> Scalar:
    """psi(f, [g,h]) + psi(h, [f,g]) + psi(g, [h,f]) with the vector-field q-bracket."""
    q = as_q(q)
    return (
        evaluate(psi, f, qbracket_vf(g, h, q), q)
        + evaluate(psi, h, qbracket_vf(f, g, q), q)
        + evaluate(psi, g, qbracket_vf(h, f, q), q)
    )


def cocycle_residual_generators(psi: CentralFunctional, n: int, m: int, s: int, q) -> Scalar:
    """Closed form of :func:`cocycle_residual` on z^(n+1), z^(m+1), z^(s+1).

    With [l_m, l_s] = [m-s] l_(m+s) the cyclic sum is
    C(n)[m-s] + C(s)[n-m] + C(m)[s-n] where C(k) = psi(l_k, l_-k).
    """
    q = as_q(q)
    if n + m + s != 0:
        return q.zero()

    def C(k):
        return generator_closed_form(psi, k, -k, q)

    return C(n) * qint(m - s, q) + C(s) * qint(n - m, q) + C(m) * qint(s - n, q)


def hat_functional(q) -> CentralFunctional:
    """residue(g d^3 f): the basic functional without its q^-1."""
    q = as_q(q)
    return CentralFunctional("basic", q.value)


def basic_antisymmetry_modes(f: LaurentField, g: LaurentField, q) -> Scalar:
    """Mode-sum form of basic(f,g) + basic(g,f).

    With f = sum f_(n+1) z^(n+1), g = sum g_(m+1) z^(m+1):
    basic(f,g) = q^-1 sum f_(n+1) g_(1-n) [n+1][n][n-1] q^(3n) and
    basic(g,f) = q^-1 sum f_(n+1) g_(1-n) [1-n][-n][-n-1] q^(-3n).
    """
    q = as_q(q)
    total = q.zero()
    for k, a in f.items():
        n = k - 1
        b = g.coeff(1 - n)
        if b == 0:
            continue
        forward = cubic_product(n, q) * q.pow(3 * n)
        backward = cubic_product(-n, q) * q.pow(-3 * n)
        total += a * b * (forward + backward)
    return total / q.value

