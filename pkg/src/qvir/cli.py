"""Command-line driver.

Exit codes: 0 success, 1 a property was violated (or a run diverged),
2 usage or configuration error.
"""
from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .euler import (
    VARIANTS,
    linear_operator,
    nonlinear_compact,
    nonlinear_expanded,
)
from .hierarchy import hierarchy_rhs, solve_coeffs
from .laurent import DegenerateModeError, LaurentField
from .qfield import InvalidQError, QParam, format_scalar, parse_rational
from .qop import mode_weight, mode_weight_formula
from .sim import SimConfig, StabilityError, run
from .verify import SUITES, corrupted_sigma, run_suites

EXIT_OK, EXIT_VIOLATION = 0, 1  # usage errors exit 2 through click


def _parse_qs(text: str) -> list:
    try:
        return [QParam(parse_rational(t)) for t in text.split(",") if t.strip()]
    except InvalidQError as exc:
        raise click.BadParameter(str(exc), param_hint="--q") from exc


def _write(path: str | None, text: str):
    if path is None:
        click.echo(text, nl=False)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise click.UsageError(f"cannot write {path}: {exc}") from exc


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read {path}: {exc}") from exc


@click.group()
def main():
    """Exact q-Virasoro calculus: verifiers, derivations, hierarchy and simulation."""


@main.command()
@click.argument("suite", type=click.Choice(SUITES + ("all",)))
@click.option("--q", "q_text", default="2,3/2,-1/3", show_default=True,
              help="Comma-separated rational q values, e.g. 2,3/2.")
@click.option("--degree", default=4, show_default=True, type=click.IntRange(0, 12),
              help="Largest generator index checked.")
@click.option("--seed", default=0, show_default=True, type=int,
              help="Seed of the identity-testing sample schedule (QVIR_SEED wins).")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Report file; stdout when omitted.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--mutate", type=click.Choice(["sigma"]), default=None, hidden=True)
def verify(suite, q_text, degree, seed, out, fmt, mutate):
    """Run a verification suite and write its report."""
    qs = _parse_qs(q_text)
    if not qs:
        raise click.BadParameter("no q values given", param_hint="--q")
    env = os.environ.get("QVIR_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError as exc:
            raise click.UsageError(f"QVIR_SEED must be an integer, got {env!r}") from exc
    names = SUITES if suite == "all" else (suite,)
    kwargs = {"sigma_fn": corrupted_sigma} if mutate == "sigma" else {}
    report = run_suites(names, qs, degree, seed, **kwargs)
    _write(out, report.to_json() if fmt == "json" else report.to_csv())
    s = report.summary()
    click.echo(f"{s['passed']}/{s['checked']} checks passed", err=True)
    for name in s["failing_properties"]:
        click.echo(f"FAILED {name}", err=True)
    sys.exit(EXIT_OK if report.ok else EXIT_VIOLATION)


@main.command()
@click.argument("equation", type=click.Choice([v for v in VARIANTS if not v.startswith("classical")]))
@click.option("--n", "n", default=3, show_default=True, type=int, help="Mode z^n to evaluate on.")
@click.option("--q", "q_text", default="2", show_default=True, help="Rational q.")
def derive(equation, n, q_text):
    """Print the linear operator's mode weights and both nonlinear renderings."""
    q = _parse_qs(q_text)[0]
    op = linear_operator(equation, q)
    try:
        target, weight = mode_weight(op, n)
    except DegenerateModeError as exc:
        raise click.UsageError(str(exc)) from exc
    z = LaurentField.monomial(n, 1)
    expanded, compact = nonlinear_expanded(z, q), nonlinear_compact(z, q)
    out = {
        "equation": equation,
        "q": str(q),
        "n": n,
        "linear": {
            "pipeline": op.pretty(),
            "mode_weight": mode_weight_formula(op),
            "on_mode": {"target": target, "weight": format_scalar(weight)},
        },
        "nonlinear_on_mode": {
            "expanded": expanded.to_json(),
            "compact": compact.to_json(),
            "difference": (compact - expanded).to_json(),
        },
    }
    click.echo(json.dumps(out, indent=2, ensure_ascii=False))


@main.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(file_okay=False), default="sim_out", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv", show_default=True)
@click.option("--override-stability", is_flag=True, help="Run even when dt breaks the advisory.")
def simulate(config, out, fmt, override_stability):
    """Integrate the equation described by a JSON config file."""
    data = _load_json(config)
    try:
        if override_stability:
            data["override_stability"] = True
        cfg = SimConfig.from_json(data)
        initial = LaurentField.from_json(data["initial"]).to_float()
        record = run(cfg, initial)
    except StabilityError as exc:
        raise click.UsageError(str(exc)) from exc
    except (KeyError, ValueError, TypeError, InvalidQError, DegenerateModeError) as exc:
        raise click.UsageError(f"bad config: {exc}") from exc
    try:
        paths = record.write(out, fmt)
    except OSError as exc:
        raise click.UsageError(f"cannot write {out}: {exc}") from exc
    for p in paths:
        click.echo(str(p))
    sys.exit(EXIT_OK if record.status == "completed" else EXIT_VIOLATION)


@main.command()
@click.argument("input_path", metavar="INPUT", type=click.Path(exists=True, dir_okay=False))
@click.option("--q", "q_text", default=None, help="Rational q; overrides the input's \"q\".")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def hierarchy(input_path, q_text, out):
    """Solve the hierarchy coefficients for u and evaluate the flow."""
    data = _load_json(input_path)
    q_src = q_text if q_text is not None else data.get("q")
    if q_src is None:
        raise click.UsageError("q missing: pass --q or put \"q\" in the input")
    q = _parse_qs(str(q_src))[0]
    try:
        u = LaurentField.from_json(data["u"] if "u" in data else data)
        if u.mode != q.mode:
            raise click.UsageError("u must use exact (string) coefficients")
        coeffs = solve_coeffs(u, q)
        rhs = hierarchy_rhs(u, q, coeffs)
    except DegenerateModeError as exc:
        raise click.UsageError(str(exc)) from exc
    except (KeyError, ValueError) as exc:
        raise click.UsageError(f"bad input: {exc}") from exc
    result = {"q": str(q), "coefficients": coeffs.to_json(), "rhs": rhs.to_json()}
    _write(out, json.dumps(result, indent=1) + "\n")
