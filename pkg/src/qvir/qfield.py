"""Scalars, the deformation parameter q, q-numbers, and identity certification.

Two scalar modes exist. Exact mode uses :class:`fractions.Fraction` and is
what every verifier runs on; float mode uses ``complex`` and exists for the
simulator and the q -> 1 limit studies. Values of the two modes are never
mixed silently: :func:`coerce` raises :class:`ModeError` instead.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Integral
from typing import Callable, Sequence, Union

Scalar = Union[Fraction, complex]

EXACT = "exact"
FLOAT = "float"


class ModeError(TypeError):
    """Raised when exact and float scalars meet in one computation."""


class InvalidQError(ValueError):
    pass


class InsufficientSamplesError(ValueError):
    pass


def mode_of(x) -> str:
    if isinstance(x, bool):
        raise ModeError("booleans are not scalars")
    if isinstance(x, (Fraction, Integral)):
        return EXACT
    if isinstance(x, (float, complex)):
        return FLOAT
    raise ModeError(f"unsupported scalar type {type(x).__name__}")


def coerce(x, mode: str) -> Scalar:
    """Convert ``x`` to a scalar of ``mode``.

    Integers are welcome in both modes. A Fraction is refused in float mode
    and a float/complex is refused in exact mode.
    """
    if isinstance(x, bool):
        raise ModeError("booleans are not scalars")
    if isinstance(x, Integral):
        return Fraction(int(x)) if mode == EXACT else complex(int(x))
    src = mode_of(x)
    if src != mode:
        raise ModeError(f"cannot use {src} scalar {x!r} in {mode} mode")
    return x if mode == EXACT else complex(x)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/r"`` (or an integer) into a Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidQError(f"not a rational: {text!r}") from exc


def format_scalar(x: Scalar) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if x.imag == 0:
        return repr(x.real)
    return repr(x)


@dataclass(frozen=True)
class QParam:
    """The deformation parameter. Rational values give exact mode.

    Strings are parsed as rationals, so ``QParam("3/2")`` is exact. Values
    0, 1 and -1 are refused; a rational q other than +-1 is never a root of
    unity, so nothing else needs checking in exact mode.
    """

    value: Scalar
    mode: str = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        v = self.value
        if isinstance(v, str):
            v = parse_rational(v)
        elif isinstance(v, Integral) and not isinstance(v, bool):
            v = Fraction(int(v))
        elif isinstance(v, float):
            v = complex(v)
        mode_of(v)
        if v == 0 or v == 1 or v == -1:
            raise InvalidQError(f"q must avoid 0, 1, -1 (got {v})")
        object.__setattr__(self, "value", v)
        object.__setattr__(self, "mode", EXACT if isinstance(v, Fraction) else FLOAT)

    def pow(self, k: int) -> Scalar:
        return _qpow(self.value, k)

    def one(self) -> Scalar:
        return Fraction(1) if self.mode == EXACT else 1 + 0j

    def zero(self) -> Scalar:
        return Fraction(0) if self.mode == EXACT else 0j

    def __str__(self):
        return format_scalar(self.value)


def as_q(q) -> QParam:
    return q if isinstance(q, QParam) else QParam(q)


@lru_cache(maxsize=65536, typed=True)
def _qpow(v: Scalar, k: int) -> Scalar:
    return v**k


@lru_cache(maxsize=65536, typed=True)
def _qint(v: Scalar, m: int) -> Scalar:
    if m < 0:
        return -_qint(v, -m)
    if m == 0:
        return v * 0
    if isinstance(v, Fraction):
        return (v**m - v**-m) / (v - 1 / v)
    # q^(m-1) + q^(m-3) + ... + q^(1-m); no cancellation near q = 1
    return sum((_qpow(v, m - 1 - 2 * k) for k in range(m)), 0j)


def qint(m: int, q) -> Scalar:
    """The symmetric q-integer (q^m - q^-m) / (q - q^-1)."""
    return _qint(as_q(q).value, m)


def qangle(m: int, q) -> Scalar:
    """q^m + q^-m."""
    q = as_q(q)
    return q.pow(m) + q.pow(-m)


def cubic_product(n: int, q) -> Scalar:
    """[n+1][n][n-1], the numerator shared by all central terms."""
    return qint(n + 1, q) * qint(n, q) * qint(n - 1, q)


def xi(n: int, q) -> Scalar:
    """[n+1][n][n-1] / <n>; odd in n."""
    return cubic_product(n, q) / qangle(n, q)


def sigma(m: int, q) -> Scalar:
    """xi(m) / ([2][3]), the central coefficient of the q-Virasoro relations."""
    return xi(m, q) / (qint(2, q) * qint(3, q))


def qpascal_residual(m: int, n: int, q) -> Scalar:
    """[m+n] - q^n [m] - q^-m [n]; identically zero."""
    q = as_q(q)
    return qint(m + n, q) - q.pow(n) * qint(m, q) - q.pow(-m) * qint(n, q)


# -- polynomial identity testing ------------------------------------------------


def degree_bound(*indices: int) -> int:
    """Exponent-span bound used for generator identities in q.

    Every identity certified here is a Laurent polynomial (after clearing
    the q-number denominators) whose exponent span grows linearly in the
    generator indices; ``6 * (sum |i| + 3)`` dominates all of them.
    """
    return 6 * (sum(abs(i) for i in indices) + 3)


@lru_cache(maxsize=64)
def _schedule(count: int, seed: int) -> tuple:
    # heights grow with position, so shorter schedules are prefixes of longer ones
    rng = random.Random(seed)
    seen = set()
    out = []
    while len(out) < count:
        height = 8 + len(out)
        num = rng.randint(1, height) * rng.choice((1, -1))
        den = rng.randint(1, height)
        v = Fraction(num, den)
        if v in (0, 1, -1) or v in seen:
            continue
        seen.add(v)
        out.append(v)
    return tuple(out)


def sample_schedule(count: int, seed: int = 0) -> list:
    """``count`` distinct rational q values from a seeded schedule."""
    return [QParam(v) for v in _schedule(count, seed)]


def pit_verify(
    identity: Callable[[QParam], Scalar],
    degree_bound: int,
    samples: Sequence,
) -> bool:
    """Certify that ``identity`` vanishes as a function of q.

    ``degree_bound`` bounds the exponent span of the identity's numerator
    as a Laurent polynomial in q. A nonzero Laurent polynomial of span D has
    at most D nonzero roots, so vanishing at more than D distinct valid
    points proves the identity.
    """
    qs = [as_q(s) for s in samples]
    values = {s.value for s in qs}
    if len(values) != len(qs):
        raise InsufficientSamplesError("samples must be distinct")
    if len(qs) <= degree_bound:
        raise InsufficientSamplesError(
            f"need more than {degree_bound} samples, got {len(qs)}"
        )
    if any(s.mode != EXACT for s in qs):
        raise InsufficientSamplesError("certification needs rational samples")
    return all(identity(s) == 0 for s in qs)


def certify(identity: Callable[[QParam], Scalar], *indices: int, seed: int = 0,
            minimum: int = 0) -> bool:
    """pit_verify with the standard bound for ``indices`` and the seeded schedule."""
    bound = degree_bound(*indices)
    return pit_verify(identity, bound, sample_schedule(max(bound + 1, minimum), seed))
