"""Truncated Laurent-mode time integration of the qKdV family.

The state is the coefficient vector of u = sum_(|n| <= N) u_n z^n, complex
because tau with real q != 1 does not preserve real values on the circle.
Each right-hand side is evaluated exactly on the truncated field and then cut
back to [-N, N]; the squared norm that falls outside is reported as the tail
fraction.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .euler import EquationVariant, kdv_rhs, linear_operator
from .laurent import FLOAT, LaurentField, derivative
from .qfield import QParam

# RK4 stays stable for lambda*dt on the imaginary axis up to 2*sqrt(2) and on the
# negative real axis up to about 2.785; the smaller keeps both
RK4_STABILITY = 2.78

# largest mode deviation between the basic q-equation at q = 1 + 1e-6 and the
# classical run of REFERENCE_RUN, measured once (6.76e-7) and padded about 3x
TRACKING_TOLERANCE = 2e-6

# the configuration the tolerance above was measured on
REFERENCE_RUN = {
    "c": 0.5,
    "N": 16,
    "dt": 1e-3,
    "t_end": 0.05,
    "initial": {1: 0.5, 2: 0.3, 3: 0.2, 4: 0.1},
    "q": 1 + 1e-6,
}


class StabilityError(ValueError):
    pass


@dataclass(frozen=True)
class SimConfig:
    variant: EquationVariant
    N: int
    dt: float
    t_end: float
    q: complex | None = None
    dealias: str = "truncate"
    cadence: int = 1
    override_stability: bool = False

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("mode cutoff N must be at least 1")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if self.cadence < 1:
            raise ValueError("cadence must be at least 1")
        if self.dealias != "truncate":
            raise ValueError(f"unsupported dealias policy {self.dealias!r}")
        if not self.variant.classical:
            if self.q is None:
                raise ValueError(f"{self.variant.kind} needs q")
            QParam(complex(self.q))

    @property
    def qparam(self) -> QParam | None:
        return None if self.q is None else QParam(complex(self.q))

    def to_json(self) -> dict:
        d = {
            "variant": self.variant.kind,
            "c": _num(self.variant.c),
            "q": None if self.q is None else _num(self.q),
            "N": self.N,
            "dt": self.dt,
            "t_end": self.t_end,
            "dealias": self.dealias,
            "cadence": self.cadence,
            "override_stability": self.override_stability,
        }
        return d

    @classmethod
    def from_json(cls, d: dict) -> "SimConfig":
        q = d.get("q")
        if isinstance(q, list):
            q = complex(q[0], q[1])
        elif q is not None:
            q = complex(float(q))
        c = d.get("c", 1.0)
        c = complex(c[0], c[1]) if isinstance(c, list) else complex(float(c))
        return cls(
            variant=EquationVariant(d["variant"], c),
            N=int(d["N"]),
            dt=float(d["dt"]),
            t_end=float(d["t_end"]),
            q=q,
            dealias=d.get("dealias", "truncate"),
            cadence=int(d.get("cadence", 1)),
            override_stability=bool(d.get("override_stability", False)),
        )


def _num(x):
    x = complex(x)
    return x.real if x.imag == 0 else [x.real, x.imag]


@dataclass
class Diagnostics:
    mode_norm: float
    u0: complex
    residue: complex
    tail_fraction: float


@dataclass
class SimState:
    modes: np.ndarray  # index k holds u_(k-N)
    t: float = 0.0
    step: int = 0
    diagnostics: Diagnostics | None = None

    @property
    def N(self) -> int:
        return (len(self.modes) - 1) // 2

    def field(self) -> LaurentField:
        N = self.N
        return LaurentField._raw({k - N: complex(v) for k, v in enumerate(self.modes)}, FLOAT)


def state_from_field(u: LaurentField, N: int) -> SimState:
    if u.lo is not None and (u.lo < -N or u.hi > N):
        raise ValueError(f"initial support [{u.lo}, {u.hi}] exceeds cutoff {N}")
    modes = np.zeros(2 * N + 1, dtype=complex)
    for n, v in u.to_float().items():
        modes[n + N] = v
    s = SimState(modes)
    s.diagnostics = _diagnostics(modes, 0.0)
    return s


def _diagnostics(modes: np.ndarray, tail: float) -> Diagnostics:
    N = (len(modes) - 1) // 2
    return Diagnostics(
        mode_norm=float(np.sum(np.abs(modes) ** 2)),
        u0=complex(modes[N]),
        residue=complex(modes[N - 1]) if N >= 1 else 0j,
        tail_fraction=tail,
    )


def _rhs(modes: np.ndarray, config: SimConfig) -> tuple[np.ndarray, float]:
    N = config.N
    u = LaurentField._raw({k - N: complex(v) for k, v in enumerate(modes)}, FLOAT)
    r = kdv_rhs(u, config.variant, config.qparam)
    kept, dropped = r.truncate(-N, N)
    out = np.zeros_like(modes)
    for n, v in kept.items():
        out[n + N] = v
    total = kept.norm2() + dropped
    return out, (dropped / total if total > 0 else 0.0)


def step_rk4(state: SimState, config: SimConfig) -> SimState:
    dt = config.dt
    u = state.modes
    k1, t1 = _rhs(u, config)
    k2, t2 = _rhs(u + 0.5 * dt * k1, config)
    k3, t3 = _rhs(u + 0.5 * dt * k2, config)
    k4, t4 = _rhs(u + dt * k3, config)
    new = u + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    if not np.all(np.isfinite(new)):
        raise FloatingPointError(f"non-finite modes at step {state.step + 1}")
    s = SimState(new, state.t + dt, state.step + 1)
    s.diagnostics = _diagnostics(new, max(t1, t2, t3, t4))
    return s


# -- stability advisory ----------------------------------------------------------------


def linear_mode_weights(config: SimConfig) -> dict:
    """|c| times the magnitude of the linear operator's weight on each z^n, |n| <= N."""
    v = config.variant
    c = abs(complex(v.c))
    out = {}
    if v.kind == "classical_burgers":
        return {n: 0.0 for n in range(-config.N, config.N + 1)}
    if v.classical:
        for n in range(-config.N, config.N + 1):
            w = derivative(derivative(derivative(LaurentField.monomial(n, 1.0, FLOAT))))
            out[n] = c * (abs(w.coeff(n - 3)))
        return out
    op = linear_operator(v.kind, config.qparam)
    for n in range(-config.N, config.N + 1):
        w = op(LaurentField.monomial(n, 1.0, FLOAT))
        out[n] = c * max((abs(x) for _, x in w.items()), default=0.0)
    return out


def stability_advisory(config: SimConfig) -> dict:
    weights = linear_mode_weights(config)
    top = max(weights.values(), default=0.0)
    limit = math.inf if top == 0 else RK4_STABILITY / top
    return {
        "constant": RK4_STABILITY,
        "max_weight": top,
        "dt_limit": None if math.isinf(limit) else limit,
        "dt": config.dt,
        "ok": config.dt <= limit,
        "overridden": config.override_stability and config.dt > limit,
    }


# -- runs --------------------------------------------------------------------------------


@dataclass
class RunRecord:
    states: list
    status: str
    manifest: dict = field(default_factory=dict)

    def final(self) -> SimState:
        return self.states[-1]

    def write(self, out_dir, fmt: str = "csv") -> list:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = [out / "manifest.json"]
        paths[0].write_text(json.dumps(self.manifest, indent=2, sort_keys=True) + "\n")
        if fmt == "json":
            p = out / "run.json"
            p.write_text(json.dumps(self.to_json(), indent=1) + "\n")
            return paths + [p]
        modes_path, diag_path = out / "modes.csv", out / "diagnostics.csv"
        with modes_path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "n", "re", "im"])
            for s in self.states:
                for k, v in enumerate(s.modes):
                    w.writerow([repr(s.t), k - s.N, repr(v.real), repr(v.imag)])
        with diag_path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "mode_norm", "u0_re", "u0_im", "residue_re", "residue_im", "tail_fraction"])
            for s in self.states:
                d = s.diagnostics
                w.writerow([repr(s.t), repr(d.mode_norm), repr(d.u0.real), repr(d.u0.imag),
                            repr(d.residue.real), repr(d.residue.imag), repr(d.tail_fraction)])
        return paths + [modes_path, diag_path]

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "manifest": self.manifest,
            "states": [
                {
                    "t": s.t,
                    "step": s.step,
                    "modes": [[k - s.N, v.real, v.imag] for k, v in enumerate(s.modes)],
                    "diagnostics": {
                        **asdict(s.diagnostics),
                        "u0": _num(s.diagnostics.u0),
                        "residue": _num(s.diagnostics.residue),
                    },
                }
                for s in self.states
            ],
        }


def run(config: SimConfig, initial: LaurentField) -> RunRecord:
    """Integrate from ``initial`` to ``config.t_end`` with fixed-step RK4.

    Steps are counted, not accumulated, so the last time is exactly
    ``steps * dt``. A non-finite state stops the run with status "diverged".
    """
    advisory = stability_advisory(config)
    if not advisory["ok"] and not config.override_stability:
        raise StabilityError(
            f"dt={config.dt} exceeds the stability limit {advisory['dt_limit']:.3g} "
            f"(max linear weight {advisory['max_weight']:.3g}); pass the override to run anyway"
        )
    steps = int(round(config.t_end / config.dt))
    state = state_from_field(initial, config.N)
    states = [state]
    status = "completed"
    for i in range(steps):
        try:
            state = step_rk4(state, config)
        except (FloatingPointError, OverflowError):
            status = "diverged"
            break
        state.t = (i + 1) * config.dt
        if (i + 1) % config.cadence == 0 or i + 1 == steps:
            states.append(state)
    manifest = {
        "config": config.to_json(),
        "initial": initial.to_float().to_json(),
        "steps": steps,
        "status": status,
        "stability": advisory,
        "tracking_tolerance": TRACKING_TOLERANCE,
    }
    return RunRecord(states, status, manifest)


def max_mode_deviation(a: RunRecord, b: RunRecord) -> float:
    """Largest |u_n(t) - v_n(t)| over the states both records share."""
    worst = 0.0
    for x, y in zip(a.states, b.states):
        if x.t != y.t:
            raise ValueError("records sampled at different times")
        worst = max(worst, float(np.max(np.abs(x.modes - y.modes))))
    return worst


def self_convergence_order(config: SimConfig, initial: LaurentField) -> tuple:
    """Observed order from runs at dt, dt/2, dt/4: log2(|u1 - u2| / |u2 - u4|)."""
    finals = []
    for k in (1, 2, 4):
        c = SimConfig(**{**config.__dict__, "dt": config.dt / k, "cadence": 10**9})
        rec = run(c, initial)
        if rec.status != "completed":
            raise FloatingPointError(f"run at dt={c.dt} {rec.status}")
        finals.append(rec.final().modes)
    e1 = float(np.max(np.abs(finals[0] - finals[1])))
    e2 = float(np.max(np.abs(finals[1] - finals[2])))
    if e2 == 0:
        return (math.inf if e1 else math.nan), e1, e2
    return math.log2(e1 / e2), e1, e2
