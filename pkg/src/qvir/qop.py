"""Skew operators sum f_j(z) tau^b_j dq^a_j and the q-bracket of vector fields.

Normal form puts the multiplication coefficient on the left, then the
dilation power, then the q-derivative power. Words are brought to normal
form with three commutation rules only:

    dq . f      = (tau f) . dq + (dq f) . tau^-1
    dq . tau^c  = q^c tau^c . dq
    tau^b . f   = (tau^b f) . tau^b

Operators that are not polynomial in these generators (the diagonal
inverses) live in :class:`Pipeline` stages instead.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .laurent import (
    DIAGONAL_KINDS,
    LaurentField,
    diag_inverse,
    dilate,
    q_derivative,
)
from .qfield import FLOAT, ModeError, QParam, Scalar, as_q, coerce, format_scalar, qint

Key = tuple  # (tau_power, dq_power)


class SkewOperator:
    __slots__ = ("terms", "q")

    def __init__(self, terms: Mapping[Key, LaurentField], q):
        self.q = as_q(q)
        clean = {}
        for (b, a), f in terms.items():
            if a < 0:
                raise ValueError("negative q-derivative powers are not supported")
            if f.mode != self.q.mode:
                raise ModeError(f"{f.mode} coefficient in {self.q.mode} operator")
            if f:
                clean[(int(b), int(a))] = f
        self.terms = clean

    @property
    def mode(self) -> str:
        return self.q.mode

    def _same(self, other: "SkewOperator"):
        if self.q.mode != other.q.mode or self.q.value != other.q.value:
            raise ModeError("operators built over different q")

    def __add__(self, other):
        self._same(other)
        t = dict(self.terms)
        for k, f in other.terms.items():
            t[k] = t[k] + f if k in t else f
        return SkewOperator(t, self.q)

    def __neg__(self):
        return SkewOperator({k: -f for k, f in self.terms.items()}, self.q)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SkewOperator":
        c = coerce(c, self.mode)
        return SkewOperator({k: f.scale(c) for k, f in self.terms.items()}, self.q)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, SkewOperator):
            return NotImplemented
        return self.q.value == other.q.value and self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def __matmul__(self, other):
        if isinstance(other, SkewOperator):
            return compose(self, other)
        if isinstance(other, Pipeline):
            return Pipeline((self,) + other.stages)
        return NotImplemented

    def __call__(self, f: LaurentField) -> LaurentField:
        return apply(self, f)

    def __repr__(self):
        return f"SkewOperator({self.pretty()})"

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(_pretty_term(f, b, a) for (b, a), f in sorted(self.terms.items()))


def _pretty_term(f: LaurentField, b: int, a: int) -> str:
    if len(f) == 1:
        (n, c), = f.items()
        parts = [format_scalar(c)]
        if n:
            parts.append(f"z^{n}")
    else:
        parts = [f"({f.pretty()})"]
    if b:
        parts.append(f"τ^{b}")
    if a:
        parts.append(f"∂_q^{a}")
    return "·".join(parts)


# -- primitives ---------------------------------------------------------------


def identity(q) -> SkewOperator:
    q = as_q(q)
    return SkewOperator({(0, 0): LaurentField.constant(1, q.mode)}, q)


def scalar_op(c, q) -> SkewOperator:
    return identity(q).scale(c)


def multiplication(f: LaurentField, q) -> SkewOperator:
    return SkewOperator({(0, 0): f}, q)


def dilation(k: int, q) -> SkewOperator:
    q = as_q(q)
    return SkewOperator({(k, 0): LaurentField.constant(1, q.mode)}, q)


def qdiff(q) -> SkewOperator:
    q = as_q(q)
    return SkewOperator({(0, 1): LaurentField.constant(1, q.mode)}, q)


def shifted_d(q) -> SkewOperator:
    """dq . tau."""
    return compose(qdiff(q), dilation(1, q))


def dual_shifted_d(q) -> SkewOperator:
    """dq . tau^-1."""
    return compose(qdiff(q), dilation(-1, q))


# -- rewriting -----------------------------------------------------------------


def _push_dq(op: SkewOperator) -> dict:
    q = op.q
    out: dict = {}

    def put(k, f):
        out[k] = out[k] + f if k in out else f

    for (c, d), g in op.terms.items():
        qc = q.pow(c)
        put((c, d + 1), g.map_modes(lambda n: qc * q.pow(n)))
        dg = q_derivative(g, q)
        if dg:
            put((c - 1, d), dg)
    return out


def _left_term(f: LaurentField, b: int, a: int, op: SkewOperator) -> dict:
    q = op.q
    cur = op
    for _ in range(a):
        cur = SkewOperator(_push_dq(cur), q)
    return {(c + b, d): f * dilate(g, b, q) for (c, d), g in cur.terms.items()}


def compose(left: SkewOperator, right: SkewOperator) -> SkewOperator:
    left._same(right)
    out: dict = {}
    for (b, a), f in left.terms.items():
        for k, g in _left_term(f, b, a, right).items():
            out[k] = out[k] + g if k in out else g
    return SkewOperator(out, left.q)


def normalize(*factors: SkewOperator) -> SkewOperator:
    """Normal form of the product of ``factors`` (leftmost applied last)."""
    if not factors:
        raise ValueError("empty word")
    result = factors[-1]
    for f in reversed(factors[:-1]):
        result = compose(f, result)
    return result


def apply(op: SkewOperator, f: LaurentField) -> LaurentField:
    if f.mode != op.mode:
        raise ModeError(f"{op.mode} operator applied to {f.mode} field")
    q = op.q
    out = LaurentField.zero(f.mode)
    derivs = [f]
    for (b, a), g in sorted(op.terms.items()):
        while len(derivs) <= a:
            derivs.append(q_derivative(derivs[-1], q))
        out = out + g * dilate(derivs[a], b, q)
    return out


# -- pipelines ------------------------------------------------------------------


@dataclass(frozen=True)
class DiagonalInverse:
    kind: str

    def __post_init__(self):
        if self.kind not in DIAGONAL_KINDS:
            raise ValueError(f"unknown diagonal kind {self.kind!r}")

    def pretty(self) -> str:
        return {
            "tau_plus_tauinv": "(τ+τ^-1)^-1",
            "one_plus_tau": "(1+τ)^-1",
            "gamma": "(q^-1·τ+q·τ^-1)^-1",
        }[self.kind]


Stage = Union[SkewOperator, DiagonalInverse]


class Pipeline:
    """Product of stages written left to right; the rightmost acts first."""

    def __init__(self, stages: Iterable[Stage], q=None):
        self.stages = tuple(stages)
        ops = [s for s in self.stages if isinstance(s, SkewOperator)]
        if q is None:
            if not ops:
                raise ValueError("pipeline without operators needs an explicit q")
            q = ops[0].q
        self.q = as_q(q)
        for s in ops:
            if s.q.value != self.q.value or s.mode != self.q.mode:
                raise ModeError("pipeline stages built over different q")

    def __call__(self, f: LaurentField) -> LaurentField:
        for s in reversed(self.stages):
            if isinstance(s, DiagonalInverse):
                f = diag_inverse(f, s.kind, self.q)
            else:
                f = apply(s, f)
        return f

    def __matmul__(self, other):
        if isinstance(other, Pipeline):
            return Pipeline(self.stages + other.stages, self.q)
        if isinstance(other, (SkewOperator, DiagonalInverse)):
            return Pipeline(self.stages + (other,), self.q)
        return NotImplemented

    def __rmatmul__(self, other):
        if isinstance(other, (SkewOperator, DiagonalInverse)):
            return Pipeline((other,) + self.stages, self.q)
        return NotImplemented

    def scale(self, c) -> "Pipeline":
        return Pipeline((scalar_op(c, self.q),) + self.stages, self.q)

    def pretty(self) -> str:
        return " ∘ ".join(
            s.pretty() if isinstance(s, DiagonalInverse) else f"[{s.pretty()}]"
            for s in self.stages
        )


def pipeline(*stages, q) -> Pipeline:
    return Pipeline(stages, q)


# -- mode weights ------------------------------------------------------------------


def _offset(s: int) -> str:
    return "n" if s == 0 else f"n{s:+d}"


def mode_weight_formula(p: Pipeline) -> str:
    """Closed-form action of a single-mode pipeline on z^n, as text.

    Only stages with one term and a monomial coefficient are accepted;
    those map z^n to a multiple of z^(n+shift).
    """
    expo_n, expo_c, shift = 0, 0, 0
    const = p.q.one()
    factors: list = []
    for s in reversed(p.stages):
        if isinstance(s, DiagonalInverse):
            inv = {
                "tau_plus_tauinv": f"<{_offset(shift)}>",
                "one_plus_tau": f"(1+q^({_offset(shift)}))",
                "gamma": f"<{_offset(shift - 1)}>",
            }[s.kind]
            factors.append("/" + inv)
            continue
        if len(s.terms) != 1:
            raise ValueError("stage is not a single term")
        ((b, a), f), = s.terms.items()
        if len(f) != 1:
            raise ValueError("stage coefficient is not a monomial")
        (e, c), = f.items()
        for _ in range(a):
            factors.append(f"[{_offset(shift)}]")
            shift -= 1
        expo_n += b
        expo_c += b * shift
        const *= c
        shift += e
    head = format_scalar(const)
    if expo_n or expo_c:
        if expo_n == 0:
            power = f"{expo_c}"
        else:
            lead = "n" if expo_n == 1 else ("-n" if expo_n == -1 else f"{expo_n}n")
            power = lead + (f"{expo_c:+d}" if expo_c else "")
        head += f"·q^({power})"
    factors.sort(key=lambda x: x.startswith("/"))
    body = "".join("·" + x if not x.startswith("/") else x for x in factors)
    return f"z^n -> {head}{body}·z^({_offset(shift)})"


def mode_weight(p: Pipeline, n: int) -> tuple[int, Scalar]:
    """(target exponent, weight) of the pipeline on z^n."""
    out = p(LaurentField.monomial(n, 1, p.q.mode))
    if len(out) == 0:
        return None, p.q.zero()
    if len(out) != 1:
        raise ValueError("pipeline does not map monomials to monomials")
    ((m, w),) = out.items()
    return m, w


# -- vector fields and generators ------------------------------------------------------


def vector_field_operator(v: LaurentField, q) -> SkewOperator:
    """Operator realization v -> -v . dq . tau of a vector field.

    The sign makes the generator z^(k+1) act as -z^(k+1) dq tau, the
    convention under which the generator q-commutator closes with
    coefficient [m-n].
    """
    return -compose(multiplication(v, q), shifted_d(q))


def generator_operator(m: int, q) -> SkewOperator:
    """l_m realized as -z^(m+1) dq tau."""
    return _generator(m, as_q(q).value)


@lru_cache(maxsize=4096, typed=True)
def _generator(m: int, qv) -> SkewOperator:
    q = as_q(qv)
    return vector_field_operator(LaurentField.monomial(m + 1, 1, q.mode), q)


def generator_bracket(m: int, n: int, q) -> tuple[Scalar, int]:
    """[l_m, l_n]_q = [m-n] l_(m+n), returned as ([m-n], m+n)."""
    return qint(m - n, q), m + n


def generator_closure_residual(m: int, n: int, q) -> SkewOperator:
    """q^(m-n) l_m l_n - q^(n-m) l_n l_m - [m-n] l_(m+n) as a normal-formed operator."""
    q = as_q(q)
    lm, ln = generator_operator(m, q), generator_operator(n, q)
    coeff, k = generator_bracket(m, n, q)
    lhs = compose(lm, ln).scale(q.pow(m - n)) - compose(ln, lm).scale(q.pow(n - m))
    return lhs - generator_operator(k, q).scale(coeff)


def qbracket_operator(v: LaurentField, w: LaurentField, q) -> SkewOperator:
    """(tau v) d (tau^-1 w) d - (tau w) d (tau^-1 v) d with d = dq tau."""
    q = as_q(q)
    d = shifted_d(q)

    def word(a, b):
        return normalize(multiplication(dilate(a, 1, q), q), d,
                         multiplication(dilate(b, -1, q), q), d)

    return word(v, w) - word(w, v)


def qbracket_vf(v: LaurentField, w: LaurentField, q) -> LaurentField:
    """Coefficient field of the q-bracket [v d, w d]_q.

    On monomials z^n, z^m this is [n-m] z^(n+m-1). Computed by normal-forming
    the twisted operator commutator and reading off the vector field that
    realizes it.
    """
    q = as_q(q)
    op = qbracket_operator(v, w, q)
    if not op.terms:
        return LaurentField.zero(q.mode)
    if set(op.terms) != {(1, 1)}:
        raise ArithmeticError(f"q-bracket left the vector-field form: {op.pretty()}")
    # h . dq . tau = q h tau dq, and the realization carries a minus sign
    return op.terms[(1, 1)].scale(-1 / q.value)


def qbracket_double_sum(v: LaurentField, w: LaurentField, q) -> LaurentField:
    """sum_(n,m) a_n b_m [n-m] z^(n+m-1), straight from the coefficients."""
    q = as_q(q)
    c: dict = {}
    for n, a in v.items():
        for m, b in w.items():
            c[n + m - 1] = c.get(n + m - 1, 0) + a * b * qint(n - m, q)
    return LaurentField(c, v.mode)


def qbracket_leibniz(v: LaurentField, w: LaurentField, q) -> LaurentField:
    """(tau v)(dq w) - (tau w)(dq v); equal to minus :func:`qbracket_vf`."""
    return dilate(v, 1, q) * q_derivative(w, q) - dilate(w, 1, q) * q_derivative(v, q)


def central_commutation_residual(m: int, q) -> SkewOperator:
    """tau^2 l_m - q^(2m) l_m tau^2."""
    q = as_q(q)
    t2, lm = dilation(2, q), generator_operator(m, q)
    return compose(t2, lm) - compose(lm, t2).scale(q.pow(2 * m))


def series_operator(kind: str, terms: int, q) -> SkewOperator:
    """Truncated geometric expansion of a diagonal inverse in dilation powers.

    tau_plus_tauinv: sum (-1)^k tau^(2k+1); gamma: sum (-1)^k q^(-2k-1) tau^(2k+1);
    one_plus_tau: sum (-1)^k tau^k.
    """
    q = as_q(q)
    out = {}
    for k in range(terms):
        sign = 1 if k % 2 == 0 else -1
        if kind == "tau_plus_tauinv":
            key, c = (2 * k + 1, 0), sign
        elif kind == "gamma":
            key, c = (2 * k + 1, 0), sign * q.pow(-2 * k - 1)
        elif kind == "one_plus_tau":
            key, c = (k, 0), sign
        else:
            raise ValueError(f"unknown diagonal kind {kind!r}")
        out[key] = LaurentField.constant(c, q.mode)
    return SkewOperator(out, q)


def series_ratio(kind: str, n: int, q: QParam) -> Scalar:
    """Per-mode ratio of the geometric expansion; convergent iff |ratio| < 1."""
    if kind == "tau_plus_tauinv":
        return q.pow(2 * n)
    if kind == "gamma":
        return q.pow(2 * (n - 1))
    if kind == "one_plus_tau":
        return q.pow(n)
    raise ValueError(f"unknown diagonal kind {kind!r}")
