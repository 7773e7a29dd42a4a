"""Finitely supported Laurent series f(z) = sum f_n z^n on the unit circle."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .qfield import EXACT, FLOAT, ModeError, QParam, Scalar, as_q, coerce, qangle, qint

# float-mode denominators below this are treated as degenerate
FLOAT_DEGENERACY_TOL = 1e-12

DIAGONAL_KINDS = ("tau_plus_tauinv", "one_plus_tau", "gamma")


class DegenerateModeError(ZeroDivisionError):
    def __init__(self, kind: str, mode: int):
        super().__init__(f"{kind} inverse is singular on mode z^{mode}")
        self.kind = kind
        self.mode = mode


class LaurentField:
    """Immutable sparse Laurent polynomial with coefficients of one scalar mode.

    Zero coefficients are never stored, so two fields are equal exactly when
    their coefficient dicts are.
    """

    __slots__ = ("_c", "mode", "lo", "hi")

    def __init__(self, coeffs: Mapping[int, object] | Iterable = (), mode: str = EXACT):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c = {}
        for n, v in items:
            v = coerce(v, mode)
            if v != 0:
                c[int(n)] = c.get(int(n), 0) + v
                if c[int(n)] == 0:
                    del c[int(n)]
        self._init(c, mode)

    def _init(self, c: dict, mode: str):
        self._c = c
        self.mode = mode
        self.lo = min(c) if c else None
        self.hi = max(c) if c else None

    @classmethod
    def _raw(cls, c: dict, mode: str) -> "LaurentField":
        f = cls.__new__(cls)
        f._init({n: v for n, v in c.items() if v != 0}, mode)
        return f

    @classmethod
    def monomial(cls, n: int, coeff=1, mode: str = EXACT) -> "LaurentField":
        return cls({n: coeff}, mode)

    @classmethod
    def zero(cls, mode: str = EXACT) -> "LaurentField":
        return cls._raw({}, mode)

    @classmethod
    def constant(cls, value, mode: str = EXACT) -> "LaurentField":
        return cls({0: value}, mode)

    # -- access ------------------------------------------------------------

    def coeff(self, n: int) -> Scalar:
        return self._c.get(n, Fraction(0) if self.mode == EXACT else 0j)

    def items(self):
        return sorted(self._c.items())

    def support(self) -> list:
        return sorted(self._c)

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, LaurentField):
            return self.mode == other.mode and self._c == other._c
        if other == 0:
            return not self._c
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"LaurentField({self.pretty()})"

    def pretty(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for n, v in sorted(self._c.items(), reverse=True):
            s = str(v) if self.mode == EXACT else f"({v:.6g})"
            parts.append(s if n == 0 else f"{s}·z^{n}")
        return " + ".join(parts)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "LaurentField"):
        if other.mode != self.mode:
            raise ModeError(f"cannot combine {self.mode} and {other.mode} fields")

    def __add__(self, other):
        if not isinstance(other, LaurentField):
            return NotImplemented
        self._check(other)
        c = dict(self._c)
        for n, v in other._c.items():
            c[n] = c.get(n, 0) + v
        return LaurentField._raw(c, self.mode)

    def __neg__(self):
        return LaurentField._raw({n: -v for n, v in self._c.items()}, self.mode)

    def __sub__(self, other):
        if not isinstance(other, LaurentField):
            return NotImplemented
        return self + (-other)

    def scale(self, k) -> "LaurentField":
        k = coerce(k, self.mode)
        return LaurentField._raw({n: k * v for n, v in self._c.items()}, self.mode)

    def __mul__(self, other):
        if isinstance(other, LaurentField):
            self._check(other)
            c: dict = {}
            for n, a in self._c.items():
                for m, b in other._c.items():
                    c[n + m] = c.get(n + m, 0) + a * b
            return LaurentField._raw(c, self.mode)
        try:
            return self.scale(other)
        except ModeError:
            raise
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        return self.scale(other)

    def map_modes(self, weight: Callable[[int], Scalar], shift: int = 0) -> "LaurentField":
        """z^n -> weight(n) z^(n+shift)."""
        return LaurentField._raw(
            {n + shift: weight(n) * v for n, v in self._c.items()}, self.mode
        )

    def residue(self) -> Scalar:
        return self.coeff(-1)

    def truncate(self, lo: int, hi: int) -> tuple["LaurentField", float]:
        """Restrict to modes in [lo, hi]; also returns the dropped squared norm."""
        kept = {n: v for n, v in self._c.items() if lo <= n <= hi}
        dropped = sum(abs(v) ** 2 for n, v in self._c.items() if not lo <= n <= hi)
        return LaurentField._raw(kept, self.mode), float(dropped)

    def norm2(self) -> float:
        return float(sum(abs(v) ** 2 for v in self._c.values()))

    def to_float(self) -> "LaurentField":
        if self.mode == FLOAT:
            return self
        return LaurentField._raw({n: complex(v) for n, v in self._c.items()}, FLOAT)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        if self.mode == EXACT:
            modes = [[n, str(v), "0"] for n, v in self.items()]
        else:
            modes = [[n, v.real, v.imag] for n, v in self.items()]
        return {"modes": modes}

    @classmethod
    def from_json(cls, data) -> "LaurentField":
        if isinstance(data, str):
            data = json.loads(data)
        modes = data["modes"]
        exact = all(isinstance(re, str) and isinstance(im, str) for _, re, im in modes)
        if exact:
            c = {}
            for n, re, im in modes:
                if Fraction(im) != 0:
                    raise ValueError("exact fields are real")
                c[int(n)] = Fraction(re)
            return cls(c, EXACT)
        return cls({int(n): complex(float(re), float(im)) for n, re, im in modes}, FLOAT)


def _qcheck(f: LaurentField, q) -> QParam:
    q = as_q(q)
    if q.mode != f.mode:
        raise ModeError(f"{q.mode} q applied to {f.mode} field")
    return q


def add(f: LaurentField, g: LaurentField) -> LaurentField:
    return f + g


def scale(f: LaurentField, k) -> LaurentField:
    return f.scale(k)


def mul(f: LaurentField, g: LaurentField) -> LaurentField:
    return f * g


def residue_integral(f: LaurentField) -> Scalar:
    """The circle integral (1/2 pi i) of f dz, i.e. the z^-1 coefficient."""
    return f.residue()


def dilate(f: LaurentField, k: int, q) -> LaurentField:
    """f(z) -> f(q^k z)."""
    q = _qcheck(f, q)
    return f.map_modes(lambda n: q.pow(k * n))


def q_derivative(f: LaurentField, q) -> LaurentField:
    """Symmetric q-derivative: z^n -> [n] z^(n-1)."""
    q = _qcheck(f, q)
    return f.map_modes(lambda n: qint(n, q), -1)


def shifted_derivative(f: LaurentField, q) -> LaurentField:
    """The q-derivative after a dilation: z^n -> q^n [n] z^(n-1)."""
    q = _qcheck(f, q)
    return f.map_modes(lambda n: q.pow(n) * qint(n, q), -1)


def dual_shifted_derivative(f: LaurentField, q) -> LaurentField:
    """The q-derivative after an inverse dilation: z^n -> q^-n [n] z^(n-1).

    Minus the residue-adjoint of :func:`shifted_derivative`.
    """
    q = _qcheck(f, q)
    return f.map_modes(lambda n: q.pow(-n) * qint(n, q), -1)


def derivative(f: LaurentField) -> LaurentField:
    """Ordinary d/dz."""
    return f.map_modes(lambda n: n, -1)


def diagonal_symbol(kind: str, n: int, q: QParam) -> Scalar:
    """Eigenvalue of the forward diagonal operator on z^n."""
    if kind == "tau_plus_tauinv":
        return qangle(n, q)
    if kind == "one_plus_tau":
        return q.one() + q.pow(n)
    if kind == "gamma":
        # q^-1 tau + q tau^-1 on z^n
        return qangle(n - 1, q)
    raise ValueError(f"unknown diagonal kind {kind!r}")


def diag_forward(f: LaurentField, kind: str, q) -> LaurentField:
    q = _qcheck(f, q)
    return f.map_modes(lambda n: diagonal_symbol(kind, n, q))


def diag_inverse(f: LaurentField, kind: str, q) -> LaurentField:
    """Mode-wise inverse of tau + tau^-1, 1 + tau, or q^-1 tau + q tau^-1."""
    q = _qcheck(f, q)
    out = {}
    for n, v in f.items():
        d = diagonal_symbol(kind, n, q)
        if d == 0 or (q.mode == FLOAT and abs(d) < FLOAT_DEGENERACY_TOL):
            raise DegenerateModeError(kind, n)
        out[n] = v / d
    return LaurentField._raw(out, f.mode)
