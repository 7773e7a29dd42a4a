"""Verification suites behind ``qvir verify``.

Each suite returns report rows. A row either demands a zero residual, or
belongs to a group in which at least one nonzero residual has to be
exhibited (the negative results: failed antisymmetry, failed cocycle
conditions, the Vir_q Jacobi sum). Identities in q are certified with the
seeded polynomial-identity schedule; everything else is checked exactly at
the listed q values.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

from .central import (
    ANTISYMMETRIC_KINDS,
    KINDS,
    CentralFunctional,
    antisymmetry_residual,
    cocycle_residual,
    cocycle_residual_generators,
    evaluate,
    generator_closed_form,
    hat_functional,
)
from .euler import (
    EquationVariant,
    classical_adjoint_gap,
    classical_coad,
    classical_cocycle_residual,
    kdv_rhs,
)
from .jacobi import gamma_bracket_residual, qjacobi_witt, vir_jacobi_residual
from .laurent import EXACT, LaurentField
from .qfield import QParam, certify, degree_bound, qint, sample_schedule, sigma
from .qop import (
    central_commutation_residual,
    generator_bracket,
    generator_closure_residual,
    qbracket_double_sum,
    qbracket_vf,
)
from .report import INFO, NONZERO, ZERO, Report, row

SUITES = ("bracket", "central", "cocycle", "jacobi", "classical")


def random_field(rng: random.Random, lo: int = -6, hi: int = 6, density: float = 0.5) -> LaurentField:
    c = {}
    for n in range(lo, hi + 1):
        if rng.random() < density:
            c[n] = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    return LaurentField(c, EXACT)


def monomial(n: int) -> LaurentField:
    return LaurentField.monomial(n, 1, EXACT)


def _pit_label(*indices, seed: int) -> str:
    return f"pit:{degree_bound(*indices) + 1}@seed{seed}"


def _exhibit(suite, prop, subject, found, note="") -> list:
    """One NONZERO row carrying the first nonzero witness, if any."""
    if found:
        idx, q, value = found
        return [row(suite, prop, subject, idx, q, value, NONZERO, note=note)]
    return [row(suite, prop, subject, (), "-", 0, NONZERO, note=note or "no nonzero witness found")]


# -- suites --------------------------------------------------------------------------


def suite_bracket(qs, degree: int, seed: int, rng: random.Random) -> list:
    rows = []
    for m in range(-degree, degree + 1):
        for n in range(-degree, degree + 1):
            ok = certify(lambda q: 0 if generator_closure_residual(m, n, q).is_zero() else 1,
                         m, n, seed=seed)
            rows.append(row("bracket", "generator_closure", "operators", (m, n),
                            _pit_label(m, n, seed=seed), 0 if ok else 1, ZERO))
    for q in qs:
        for m in range(-degree, degree + 1):
            for n in range(-degree, degree + 1):
                coeff, k = generator_bracket(m, n, q)
                field = qbracket_vf(monomial(m + 1), monomial(n + 1), q)
                gap = field - LaurentField.monomial(k + 1, coeff, EXACT)
                rows.append(row("bracket", "generator_vs_field", "qbracket_vf", (m, n), q,
                                max((abs(v) for _, v in gap.items()), default=0), ZERO))
        for t in range(10):
            v, w = random_field(rng), random_field(rng)
            gap = qbracket_vf(v, w, q) - qbracket_double_sum(v, w, q)
            rows.append(row("bracket", "field_vs_double_sum", "random", (t,), q,
                            max((abs(x) for _, x in gap.items()), default=0), ZERO))
        for m in range(-degree, degree + 1):
            r = central_commutation_residual(m, q)
            rows.append(row("bracket", "central_commutation", "tau^2", (m,), q,
                            0 if r.is_zero() else 1, ZERO))
    return rows


def suite_central(qs, degree: int, seed: int, rng: random.Random) -> list:
    rows = []
    for kind in KINDS:
        psi = CentralFunctional(kind)
        for n in range(-degree, degree + 1):
            ok = certify(
                lambda q: evaluate(psi, monomial(n + 1), monomial(1 - n), q)
                - generator_closed_form(psi, n, -n, q),
                n, -n, seed=seed,
            )
            rows.append(row("central", "closed_form", kind, (n, -n), _pit_label(n, -n, seed=seed),
                            0 if ok else 1, ZERO))
        for q in qs:
            for n in range(-degree, degree + 1):
                for m in range(-degree, degree + 1):
                    if m == -n:
                        continue
                    gap = evaluate(psi, monomial(n + 1), monomial(m + 1), q) - generator_closed_form(psi, n, m, q)
                    rows.append(row("central", "closed_form", kind, (n, m), q, gap, ZERO))
    for kind in ANTISYMMETRIC_KINDS:
        psi = CentralFunctional(kind)
        for q in qs:
            for n in range(-degree, degree + 1):
                for m in range(-degree, degree + 1):
                    r = antisymmetry_residual(psi, monomial(n + 1), monomial(m + 1), q)
                    rows.append(row("central", "antisymmetry", kind, (n, m), q, r, ZERO))
            for t in range(5):
                r = antisymmetry_residual(psi, random_field(rng), random_field(rng), q)
                rows.append(row("central", "antisymmetry", kind, ("random", t), q, r, ZERO))
    psi0 = CentralFunctional("basic")
    found = None
    for q in qs:
        for n in range(-degree, degree + 1):
            r = antisymmetry_residual(psi0, monomial(n + 1), monomial(1 - n), q)
            if r != 0 and found is None:
                found = ((n + 1, 1 - n), q, r)
    rows += _exhibit("central", "antisymmetry_fails", "basic", found,
                     note="pair of exponents (f, g)")
    return rows


def _cocycle_subjects(q):
    return {
        "hat": hat_functional(q),
        "balanced": CentralFunctional("balanced"),
        "canonical": CentralFunctional("canonical"),
        "alternate": CentralFunctional("alternate"),
        "twisted": CentralFunctional("twisted"),
    }


def cocycle_triples(degree: int) -> list:
    out = []
    for n in range(-degree, degree + 1):
        for m in range(-degree, degree + 1):
            s = -n - m
            if abs(s) <= degree:
                out.append((n, m, s))
    return out


def suite_cocycle(qs, degree: int, seed: int, rng: random.Random) -> list:
    rows = []
    found: dict = {}
    for q in qs:
        for name, psi in _cocycle_subjects(q).items():
            for n, m, s in cocycle_triples(degree):
                by_field = cocycle_residual(psi, monomial(n + 1), monomial(m + 1), monomial(s + 1), q)
                by_gens = cocycle_residual_generators(psi, n, m, s, q)
                rows.append(row("cocycle", "paths_agree", name, (n, m, s), q, by_field - by_gens, ZERO))
                if by_field != 0 and name not in found:
                    found[name] = ((n, m, s), q, by_field)
    for name in _cocycle_subjects(QParam(2)):
        rows += _exhibit("cocycle", "cocycle_fails", name, found.get(name))
    return rows


def suite_jacobi(qs, degree: int, seed: int, rng: random.Random,
                 sigma_fn: Callable = sigma) -> list:
    rows = []
    rng_idx = range(-degree, degree + 1)
    for m in rng_idx:
        for n in rng_idx:
            for p in rng_idx:
                ok = certify(lambda q: qjacobi_witt(m, n, p, q), m, n, p, seed=seed)
                rows.append(row("jacobi", "witt_identity", "witt_q", (m, n, p),
                                _pit_label(m, n, p, seed=seed), 0 if ok else 1, ZERO))
    found_weighted = found_reduced = None
    for q in qs:
        for m in range(-degree, degree + 1):
            odd = sigma_fn(-m, q) + sigma_fn(m, q)
            rows.append(row("jacobi", "sigma_odd", "sigma", (m,), q, odd, ZERO))
            scaled = sigma_fn(m, q) * qint(2, q) * qint(3, q) - sigma(m, q) * qint(2, q) * qint(3, q)
            rows.append(row("jacobi", "sigma_definition", "sigma", (m,), q, scaled, ZERO))
        for m in rng_idx:
            for n in rng_idx:
                for p in rng_idx:
                    ell, chat = gamma_bracket_residual(m, n, p, q, sigma_fn)
                    rows.append(row("jacobi", "gamma_bracket_l_part", "witt_q", (m, n, p), q, ell, ZERO))
                    res = vir_jacobi_residual(m, n, p, q, sigma_fn)
                    rows.append(row("jacobi", "gamma_bracket_c_part", "vir_q", (m, n, p), q,
                                    chat - res.weighted, ZERO))
                    if not res.on_shell:
                        continue
                    rows.append(row("jacobi", "weighted_vs_reduced", "vir_q", (m, n, p), q,
                                    res.weighted * qint(2, q) * qint(3, q) - res.reduced, INFO,
                                    note="agree" if res.forms_agree else "forms disagree"))
                    if res.weighted != 0 and found_weighted is None:
                        found_weighted = ((m, n, p), q, res.weighted)
                    if res.reduced != 0 and found_reduced is None:
                        found_reduced = ((m, n, p), q, res.reduced)
    rows += _exhibit("jacobi", "vir_residual_nonzero", "weighted", found_weighted)
    if found_reduced:
        idx, q, v = found_reduced
        rows.append(row("jacobi", "vir_residual_nonzero", "reduced", idx, q, v, INFO,
                        note="shortened cubic form; reported only"))
    return rows


def suite_classical(qs, degree: int, seed: int, rng: random.Random, trials: int = 20) -> list:
    rows = []
    for t in range(trials):
        f, g, h = random_field(rng), random_field(rng), random_field(rng)
        rows.append(row("classical", "gelfand_fuks_cocycle", "classical", (t,), "1",
                        classical_cocycle_residual(f, g, h), ZERO))
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        rows.append(row("classical", "coadjoint_pairing", "classical", (t,), "1",
                        classical_adjoint_gap(f, g, h, c), ZERO))
        u = random_field(rng)
        gap = kdv_rhs(u, EquationVariant("classical_kdv", c)) + classical_coad(u, u, c)
        rows.append(row("classical", "euler_gives_kdv", "classical_kdv", (t,), "1",
                        max((abs(v) for _, v in gap.items()), default=0), ZERO))
        gap = kdv_rhs(u, EquationVariant("classical_burgers", c)) + classical_coad(u, u, 0)
        rows.append(row("classical", "euler_gives_burgers", "classical_burgers", (t,), "1",
                        max((abs(v) for _, v in gap.items()), default=0), ZERO))
    return rows


def run_suites(names, qs, degree: int = 4, seed: int = 0, sigma_fn: Callable = sigma) -> Report:
    qs = [q if isinstance(q, QParam) else QParam(q) for q in qs]
    rows = []
    for name in names:
        rng = random.Random(f"{seed}:{name}")
        if name == "bracket":
            rows += suite_bracket(qs, degree, seed, rng)
        elif name == "central":
            rows += suite_central(qs, degree, seed, rng)
        elif name == "cocycle":
            rows += suite_cocycle(qs, degree, seed, rng)
        elif name == "jacobi":
            rows += suite_jacobi(qs, degree, seed, rng, sigma_fn)
        elif name == "classical":
            rows += suite_classical(qs, degree, seed, rng)
        else:
            raise ValueError(f"unknown suite {name!r}")
    config = {
        "suites": list(names),
        "q": [str(q) for q in qs],
        "degree": degree,
        "seed": seed,
        "schedule_head": [str(q) for q in sample_schedule(3, seed)],
    }
    return Report(rows, config)


def corrupted_sigma(m: int, q) -> Fraction:
    """sigma with a small even perturbation; used to check that verify catches it."""
    return sigma(m, q) + Fraction(1, 1000) * (1 if m % 2 == 0 else 0)
