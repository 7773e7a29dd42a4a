"""q-Jacobi identities for the q-Witt algebra and its central extension.

Elements of the extension are kept as sparse combinations of generators
l_k plus a multiple of the central element c^, with the q-bracket

    [l_a, l_b]_q = [a-b] l_(a+b) + delta(a+b, 0) sigma(a) c^,    [c^, l_p]_q = 0,

and Gamma(l_p) = <p> l_p.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .qfield import Scalar, as_q, cubic_product, qangle, qint, sigma


def qjacobi_witt(m: int, n: int, p: int, q) -> Scalar:
    """[m-n][m+n-p]<p> + [n-p][n+p-m]<m> + [p-m][p+m-n]<n>."""
    return (
        qint(m - n, q) * qint(m + n - p, q) * qangle(p, q)
        + qint(n - p, q) * qint(n + p - m, q) * qangle(m, q)
        + qint(p - m, q) * qint(p + m - n, q) * qangle(n, q)
    )


@dataclass
class VirElement:
    gens: dict = field(default_factory=dict)
    central: Scalar = 0

    @classmethod
    def generator(cls, k: int, coeff=1) -> "VirElement":
        return cls({k: coeff}, 0)

    def __add__(self, other: "VirElement") -> "VirElement":
        g = dict(self.gens)
        for k, v in other.gens.items():
            g[k] = g.get(k, 0) + v
        return VirElement({k: v for k, v in g.items() if v != 0}, self.central + other.central)


def vir_bracket(x: VirElement, y: VirElement, q, sigma_fn: Callable = sigma) -> VirElement:
    """Bilinear q-bracket; the central parts of x and y drop out."""
    out = VirElement()
    for a, u in x.gens.items():
        for b, v in y.gens.items():
            coeff = u * v
            term = VirElement({a + b: coeff * qint(a - b, q)})
            if a + b == 0:
                term.central = coeff * sigma_fn(a, q)
            out = out + term
    return out


def gamma(x: VirElement, q) -> VirElement:
    return VirElement({k: qangle(k, q) * v for k, v in x.gens.items()}, 0)


def gamma_bracket_residual(m: int, n: int, p: int, q, sigma_fn: Callable = sigma) -> tuple:
    """Cyclic sum of [[l_m, l_n]_q, Gamma(l_p)]_q split as (l-part, c^-part).

    The l-part is the coefficient of l_(m+n+p).
    """
    q = as_q(q)
    L = VirElement.generator
    total = VirElement()
    for a, b, c in ((m, n, p), (n, p, m), (p, m, n)):
        inner = vir_bracket(L(a), L(b), q, sigma_fn)
        total = total + vir_bracket(inner, gamma(L(c), q), q, sigma_fn)
    ell = total.gens.get(m + n + p, q.zero())
    return ell, total.central + q.zero()


@dataclass(frozen=True)
class JacobiResidual:
    weighted: Scalar  # sigma_(m+n)[m-n]<p> + cyclic
    reduced: Scalar  # [m+n+1][m+n][m+n-1] - [m+1][m][m-1] - [n+1][n][n-1]
    on_shell: bool  # m + n + p == 0
    forms_agree: bool  # weighted * [2][3] == reduced


def vir_jacobi_residual(m: int, n: int, p: int, q, sigma_fn: Callable = sigma) -> JacobiResidual:
    """Central residual of the Gamma-twisted Jacobi sum, in two renderings.

    ``weighted`` keeps the <.> weights and the [.-.] brackets; ``reduced``
    is the shortened cubic-product expression. They are coded independently
    and compared, not assumed equal. Off shell both are reported as 0.
    """
    q = as_q(q)
    if m + n + p != 0:
        z = q.zero()
        return JacobiResidual(z, z, False, True)
    weighted = (
        sigma_fn(m + n, q) * qint(m - n, q) * qangle(p, q)
        + sigma_fn(n + p, q) * qint(n - p, q) * qangle(m, q)
        + sigma_fn(p + m, q) * qint(p - m, q) * qangle(n, q)
    )
    reduced = cubic_product(m + n, q) - cubic_product(m, q) - cubic_product(n, q)
    agree = weighted * qint(2, q) * qint(3, q) == reduced
    return JacobiResidual(weighted, reduced, True, agree)
