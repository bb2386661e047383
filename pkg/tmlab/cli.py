"""Command-line front end: one subcommand per experiment.

Usage:
    tmlab complexity --max-n 64 --out p.csv
    tmlab pressure --potential vu --alpha -1 --gamma-grid 0:20:0.5 --out vu.csv
    tmlab transition --a 0.5 --gamma-max 400 --nmax 64 --out t.json

Every run writes its table to --out and a manifest next to it
(``<out>.manifest.json``). Flags may also come from ``--config file.json``
whose keys are the flag destinations (``max_n``, ``gamma_grid``, ...);
flags given on the command line win.

Exit codes:
    0  success
    1  usage or input error
    2  an invariant suite reported violations
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from tmlab.config import get_settings
from tmlab.errors import ConvergenceError, LabError, OutOfRangeError, ValidationFailure
from tmlab.interval_map import (
    FA_HEADER,
    build_fa,
    build_w,
    conformal_measure,
    depth_drift,
    derivative_check,
    fa_rows,
    semi_conjugacy_error,
)
from tmlab.manifest import RunManifest, write_csv, write_manifest
from tmlab.potentials import (
    V0,
    CylinderUc,
    DistancePower,
    MuK,
    Potential,
    UnboundedVu,
    integral_mu_k,
    parse_potential,
    perturbation_certificate,
)
from tmlab.renorm import (
    CESARO_HEADER,
    cesaro_rows,
    fixed_point_residual,
    power_scaling_check,
    renorm_apply,
    renorm_apply_recursive,
)
from tmlab.subshift_core import (
    accident_violations,
    accidents,
    complexity_formula,
    disjoint_decomposition_check,
    expected_bispecials,
    feigenbaum_violations,
    fixed_point_prefix,
    get_language,
    order_lemma_violations,
    overlap_bound,
    point_with_level,
    rauzy_defect,
    sliding_block_pi,
    special_words,
)
from tmlab.thermo import (
    CURVE_HEADER,
    build_return_system,
    excursion_bounds,
    excursion_majorant,
    gamma_certificate,
    locate_transition,
    pressure_curve,
    zc_estimate,
    zc_lower_bound_vu,
)
from tmlab.workers import configure_logging

logger = logging.getLogger(__name__)

PI_RHO0_PREFIX = "1011101010111011"


class UsageError(Exception):
    """Raised by the parser instead of exiting."""


class LabArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class Outcome:
    """Table produced by a subcommand plus manifest material."""

    header: list[str]
    rows: list[list[Any]]
    results: dict[str, Any] = field(default_factory=dict)
    language_hash: str | None = None
    violations: list[str] = field(default_factory=list)
    document: dict[str, Any] | None = None


# ============================================================================
# Argument helpers
# ============================================================================

def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (stop included) or a comma-separated list."""
    if ":" in text:
        try:
            start, stop, step = (float(part) for part in text.split(":"))
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"bad grid {text!r}") from e
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError(f"bad grid {text!r}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from e


def _potential(args: argparse.Namespace) -> Potential:
    if getattr(args, "potential_json", None):
        return parse_potential(Path(args.potential_json).read_text(encoding="utf-8"))
    match args.potential:
        case "distance":
            return DistancePower(a=args.a)
        case "v0":
            return V0
        case "uc":
            return CylinderUc(c=args.c)
        case "vu":
            return UnboundedVu(alpha=args.alpha, sign=args.sign, reading=args.reading)
    raise OutOfRangeError(f"unknown potential {args.potential!r}")


def _thermo_potential(args: argparse.Namespace) -> Potential:
    potential = _potential(args)
    # the induced system reads V_u through its locally constant block depth
    if isinstance(potential, UnboundedVu) and potential.reading == "aligned":
        potential = potential.model_copy(update={"reading": "block"})
    return potential


def _sample_points(rng: np.random.Generator, count: int, min_level: int, max_level: int):
    lang = get_language(max_level + 1)
    points = []
    for i in range(count):
        m = int(rng.integers(min_level, max_level + 1))
        points.append((f"x{i}", point_with_level(m, rng, lang)))
    return points


# ============================================================================
# Subcommands
# ============================================================================

def cmd_language(args: argparse.Namespace) -> Outcome:
    lang = get_language(args.max_len)
    rows = [[n, lang.count(n)] for n in range(1, args.max_len + 1)]
    return Outcome(
        header=["n", "factors"],
        rows=rows,
        results={"max_len": lang.max_len, "automaton_states": lang.automaton.size},
        language_hash=lang.content_hash,
    )


def cmd_complexity(args: argparse.Namespace) -> Outcome:
    lang = get_language(args.max_n)
    rows = []
    for n in range(1, args.max_n + 1):
        p, formula = lang.count(n), complexity_formula(n)
        rows.append([n, p, formula, int(p == formula)])
    violations = [f"p({r[0]}) = {r[1]} but formula gives {r[2]}" for r in rows if not r[3]]
    return Outcome(
        header=["n", "p", "formula", "match"],
        rows=rows,
        language_hash=lang.content_hash,
        violations=violations,
    )


def cmd_special_words(args: argparse.Namespace) -> Outcome:
    lang = get_language(args.max_n + 1)
    rows = []
    violations = []
    for n in range(1, args.max_n + 1):
        sw = special_words(lang, n)
        expected = sw.bispecial == expected_bispecials(n)
        defect = rauzy_defect(lang, n)
        rows.append([n, len(sw.left), len(sw.right), len(sw.bispecial), int(expected), defect])
        if not expected:
            violations.append(f"bispecials of length {n}: {sorted(sw.bispecial)}")
        if defect:
            violations.append(f"Rauzy defect {defect} at length {n}")
    return Outcome(
        header=["n", "left_special", "right_special", "bispecial", "bispecial_expected", "rauzy_defect"],
        rows=rows,
        language_hash=lang.content_hash,
        violations=violations,
    )


def cmd_accidents(args: argparse.Namespace) -> Outcome:
    rng = np.random.default_rng(args.seed)
    lang = get_language(args.max_level + 1)
    rows = []
    violations = []
    for x_id, x in _sample_points(rng, args.samples, args.min_level, args.max_level):
        horizon = args.horizon or 3 * int(lang.admissible_level(x))
        for record in accidents(x, horizon, lang):
            problems = accident_violations(x, record, lang)
            violations.extend(f"{x_id}@{record.position}: {p}" for p in problems)
            rows.append([x_id, record.position, record.b, record.d_before, record.d_after, int(not problems)])
    return Outcome(
        header=["x_id", "position", "b", "d_before", "d_after", "well_formed"],
        rows=rows,
        results={"accidents": len(rows)},
        language_hash=lang.content_hash,
        violations=violations,
    )


def cmd_decomposition(args: argparse.Namespace) -> Outcome:
    rows = []
    violations = []
    for k in range(1, args.k_max + 1):
        depth = (1 << k) * args.depth_factor
        holds = disjoint_decomposition_check(k, depth)
        overlap = overlap_bound(k) if 2 <= k <= 8 else None
        rows.append([k, depth, int(holds), overlap, (1 << (k - 1))])
        if not holds:
            violations.append(f"decomposition fails at k={k}")
        if overlap is not None and overlap > 1 << (k - 1):
            violations.append(f"overlap {overlap} exceeds {1 << (k - 1)} at k={k}")
    return Outcome(
        header=["k", "depth", "disjoint", "overlap", "overlap_bound"],
        rows=rows,
        results={"full_shift_decomposes": disjoint_decomposition_check(1, 8, full_shift=True)},
        violations=violations,
    )


def cmd_renorm(args: argparse.Namespace) -> Outcome:
    rng = np.random.default_rng(args.seed)
    potential = _potential(args)
    rows = []
    violations = []
    for x_id, x in _sample_points(rng, args.samples, args.min_level, args.max_level):
        for n in range(args.n + 1):
            evaluation = renorm_apply(potential, x, n)
            rows.append([x_id, n, evaluation.value, len(evaluation.accidents_seen)])
            if args.check_recursive and n <= args.check_recursive:
                recursive = renorm_apply_recursive(potential, x, n)
                if not math.isclose(recursive, evaluation.value, rel_tol=1e-12, abs_tol=1e-12):
                    violations.append(f"{x_id} n={n}: birkhoff {evaluation.value!r} vs recursive {recursive!r}")
    return Outcome(
        header=["x_id", "n", "value", "accidents"],
        rows=rows,
        results={"potential": potential.model_dump()},
        violations=violations,
    )


def cmd_cesaro(args: argparse.Namespace) -> Outcome:
    rng = np.random.default_rng(args.seed)
    lang = get_language()
    samples = _sample_points(rng, args.samples, max(args.min_level, 3), args.max_level)
    rows = cesaro_rows(samples, [args.n], lang)
    widen = 1.0 + args.slack
    violations = [
        f"{x_id}: mean {value:.6g} outside [{lo:.6g}, {hi:.6g}]"
        for _, x_id, value, lo, hi in rows
        if not lo / widen <= value <= hi * widen
    ]
    return Outcome(header=CESARO_HEADER, rows=rows, language_hash=lang.content_hash, violations=violations)


def cmd_power_scaling(args: argparse.Namespace) -> Outcome:
    rng = np.random.default_rng(args.seed)
    _, x = _sample_points(rng, 1, args.level, args.level)[0]
    rows = power_scaling_check(args.a, x, range(args.n_max + 1))
    target = 2.0 ** (1.0 - args.a)
    last = rows[-1].ratio
    violations = []
    if last is None or abs(last - target) > args.rtol * target:
        violations.append(f"final ratio {last} not within {args.rtol:.0%} of {target:.6g}")
    return Outcome(
        header=["n", "value", "ratio", "target"],
        rows=[[r.n, r.value, r.ratio, target] for r in rows],
        results={"point": {"prefix": x.prefix, "tail": x.tail}},
        violations=violations,
    )


def cmd_fixed_residual(args: argparse.Namespace) -> Outcome:
    rng = np.random.default_rng(args.seed)
    potential = _potential(args)
    rows = []
    for x_id, x in _sample_points(rng, args.samples, args.min_level, args.max_level):
        report = fixed_point_residual(potential, [x])
        if report.samples_used:
            rows.append([x_id, report.max_residual])
    overall = fixed_point_residual(potential, [], rho_digits=args.rho_digits)
    worst = max((r[1] for r in rows), default=0.0)
    violations = [f"residual {worst!r} above {args.tol!r}"] if worst > args.tol else []
    return Outcome(
        header=["x_id", "residual"],
        rows=rows,
        results={"max_residual": worst, "identities": overall.identities, "samples_used": len(rows)},
        violations=violations,
    )


def cmd_pressure(args: argparse.Namespace) -> Outcome:
    rs = build_return_system(args.j, args.nmax)
    potential = _thermo_potential(args)
    settings = get_settings()
    epsilon0 = settings.EPSILON0 if args.epsilon0 is None else args.epsilon0
    n0 = settings.N0 if args.n0 is None else args.n0
    curve = pressure_curve(rs, potential, args.gamma_grid, threads=args.threads, epsilon0=epsilon0)
    certified = None
    if isinstance(potential, DistancePower) and potential.perturbation is not None:
        certified = perturbation_certificate(potential, epsilon0, n0)
    results = {
        "potential": potential.model_dump(),
        "perturbation_certified": certified,
        "transition": curve.transition.to_dict() if curve.transition else None,
        "monotonicity_violations": curve.monotonicity_violations(),
        "convexity_violations": curve.convexity_violations(),
        "positivity_violations": curve.positivity_violations(),
        "lower": curve.lower,
        "upper": curve.upper,
        "failures": curve.failures,
    }
    # roots only decrease in gamma for nonnegative potentials
    violations = list(results["monotonicity_violations"]) if isinstance(potential, DistancePower) else []
    violations += results["convexity_violations"] + results["positivity_violations"]
    return Outcome(
        header=CURVE_HEADER,
        rows=curve.rows(),
        results=results,
        language_hash=rs.lang.content_hash,
        violations=violations,
    )


def cmd_transition(args: argparse.Namespace) -> Outcome:
    rs = build_return_system(args.j, args.nmax)
    potential = DistancePower(a=args.a)
    doublings = max(0, math.ceil(math.log2(args.gamma_max / args.gamma_start)))
    found = locate_transition(rs, potential, args.gamma_start, max_doublings=doublings)
    document = {
        "a": args.a,
        "nmax": args.nmax,
        "j": rs.j_word,
        "transition": found.to_dict() if found else None,
        "gamma_1": 0.5 * (found.lo + found.hi) if found else None,
    }
    return Outcome(
        header=["lo", "hi", "evaluations"],
        rows=[[found.lo, found.hi, found.evaluations]] if found else [],
        results=document,
        language_hash=rs.lang.content_hash,
        document=document,
    )


def cmd_excursion_bounds(args: argparse.Namespace) -> Outcome:
    rows = []
    for gamma in args.gamma_grid:
        b = excursion_bounds(args.a, gamma, args.z)
        rows.append([gamma, b.b0, b.c0, b.total, b.closed_bound, excursion_majorant(args.a, gamma), int(b.converged)])
    try:
        certificate = gamma_certificate(args.a).to_dict()
    except ConvergenceError as e:
        logger.warning(f"[ExcursionBounds] {e}")
        certificate = None
    return Outcome(
        header=["gamma", "b0", "c0", "total", "closed_bound", "majorant", "converged"],
        rows=rows,
        results={"certificate": certificate},
    )


def cmd_vu_check(args: argparse.Namespace) -> Outcome:
    rs = build_return_system(args.j, args.nmax)
    potential = UnboundedVu(alpha=args.alpha, sign=args.sign, reading="block")
    rows = []
    violations = []
    for gamma in args.gamma_grid:
        zc = zc_estimate(rs, potential, gamma).value
        bound = zc_lower_bound_vu(args.alpha, gamma)
        ok = zc >= bound - args.slack
        rows.append([gamma, zc, bound, int(ok)])
        if not ok:
            violations.append(f"z_c {zc:.6g} below {bound:.6g} at gamma={gamma:g}")
    integral = integral_mu_k(UnboundedVu(alpha=args.alpha, sign=args.sign), MuK())
    if abs(integral) > 1e-12:
        violations.append(f"integral against the subshift measure is {integral!r}")
    return Outcome(
        header=["gamma", "z_c", "lower_bound", "ok"],
        rows=rows,
        results={"integral_mu_k": integral},
        language_hash=rs.lang.content_hash,
        violations=violations,
    )


def cmd_interval_map(args: argparse.Namespace) -> Outcome:
    gamma1 = args.gamma1
    results: dict[str, Any] = {}
    if gamma1 is None:
        rs = build_return_system(args.j, args.nmax)
        found = locate_transition(rs, DistancePower(a=args.a), 1.0)
        if found is None:
            raise LabError(f"no transition found for a={args.a}; pass --gamma1")
        gamma1 = 0.5 * (found.lo + found.hi)
        results["transition"] = found.to_dict()
    w = build_w(args.a, args.depth)
    nu = conformal_measure(w, gamma1)
    fa = build_fa(nu, args.grid_size)
    report = derivative_check(nu, w)
    results |= {
        "gamma_1": gamma1,
        "conformal": nu.to_dict(),
        "eigenvalue_gap": nu.eigenvalue_gap,
        "depth_drift": depth_drift(args.a, args.depth, gamma1) if args.depth >= 2 else None,
        "derivative": report.to_dict(),
        "semi_conjugacy_error": semi_conjugacy_error(fa, nu, seed=args.seed),
        "continuity_gap": w.continuity_gap(),
        "modified_pairs": w.modified_pairs,
    }
    violations = []
    if not fa.is_monotone() or not fa.is_onto():
        violations.append("map is not two monotone full branches")
    if nu.residual > args.residual_tol:
        violations.append(f"conformality residual {nu.residual:.3e}")
    eigen_tol = get_settings().CONFORMAL_EIGEN_TOL if args.eigen_tol is None else args.eigen_tol
    if 0.0 < args.a < 1.0 and nu.eigenvalue_gap > eigen_tol:
        violations.append(f"eigenvalue {nu.eigenvalue:.6g} at gamma_1 is not within {eigen_tol:g} of 1")
    return Outcome(header=FA_HEADER, rows=fa_rows(fa, w), results=results, violations=violations)


def cmd_pi_code(args: argparse.Namespace) -> Outcome:
    rng = np.random.default_rng(args.seed)
    image = sliding_block_pi(fixed_point_prefix("0", args.length + 1), args.length)
    words = ["".join(rng.choice(["0", "1"], size=int(rng.integers(2, 24)))) for _ in range(args.words)]
    feig = feigenbaum_violations(words)
    order0 = order_lemma_violations(rng, "0", args.pairs)
    order1 = order_lemma_violations(rng, "1", args.pairs)
    expected = PI_RHO0_PREFIX[: args.length]
    rows = [
        ["pi_rho0_prefix", image, int(image.startswith(expected))],
        ["feigenbaum_violations", len(feig), int(not feig)],
        ["order_lemma_violations_0", order0, int(order0 == 0)],
        ["order_lemma_violations_1", order1, int(order1 == 0)],
    ]
    violations = [f"{name}: {value}" for name, value, ok in rows if not ok]
    return Outcome(header=["check", "value", "ok"], rows=rows, violations=violations)


COMMANDS: dict[str, Callable[[argparse.Namespace], Outcome]] = {
    "language": cmd_language,
    "complexity": cmd_complexity,
    "special-words": cmd_special_words,
    "accidents": cmd_accidents,
    "decomposition": cmd_decomposition,
    "renorm": cmd_renorm,
    "cesaro": cmd_cesaro,
    "power-scaling": cmd_power_scaling,
    "fixed-residual": cmd_fixed_residual,
    "pressure": cmd_pressure,
    "transition": cmd_transition,
    "excursion-bounds": cmd_excursion_bounds,
    "vu-check": cmd_vu_check,
    "interval-map": cmd_interval_map,
    "pi-code": cmd_pi_code,
}


# ============================================================================
# Parser
# ============================================================================

def _add_potential_flags(p: argparse.ArgumentParser, default: str) -> None:
    p.add_argument("--potential", choices=["distance", "v0", "uc", "vu"], default=default)
    p.add_argument("--potential-json", default=None, help="Path to a JSON potential spec")
    p.add_argument("--a", type=float, default=0.5, help="Distance exponent")
    p.add_argument("--c", type=float, default=1.0, help="Cylinder constant")
    p.add_argument("--alpha", type=float, default=-1.0, help="Depth slope of V_u")
    p.add_argument("--sign", choices=["k_minus_one", "one_minus_k"], default="k_minus_one")
    p.add_argument("--reading", choices=["aligned", "block"], default="aligned")


def _add_sample_flags(p: argparse.ArgumentParser, samples: int, min_level: int, max_level: int) -> None:
    p.add_argument("--samples", type=int, default=samples)
    p.add_argument("--min-level", type=int, default=min_level)
    p.add_argument("--max-level", type=int, default=max_level)


def _add_return_flags(p: argparse.ArgumentParser) -> None:
    settings = get_settings()
    p.add_argument("--nmax", type=int, default=settings.THERMO_NMAX, help="Truncation order NMax")
    p.add_argument("--j", default=settings.DEFAULT_J, help="Return cylinder word")


def build_parser() -> tuple[LabArgumentParser, dict[str, LabArgumentParser]]:
    """Top-level parser and the subparser of each command."""
    common = LabArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, required=True, help="Output file")
    common.add_argument("--config", type=Path, default=None, help="JSON file of flag defaults")
    common.add_argument("--seed", type=int, default=0, help="Seed of randomized suites")
    common.add_argument("--threads", type=int, default=None, help="Sweep threads (default: all cores)")
    common.add_argument("--verbose", "-v", action="store_true", help="Enable verbose (DEBUG) logging")
    common.add_argument("--quiet", "-q", action="store_true", help="Reduce logging to warnings only")

    parser = LabArgumentParser(
        prog="tmlab",
        description="Thue-Morse renormalization and thermodynamic formalism lab",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    subs: dict[str, LabArgumentParser] = {}

    def add(name: str, help_text: str) -> LabArgumentParser:
        subs[name] = sub.add_parser(name, parents=[common], help=help_text)
        return subs[name]

    p = add("language", "factor counts and language hash")
    p.add_argument("--max-len", type=int, default=64)

    p = add("complexity", "factor complexity against its closed form")
    p.add_argument("--max-n", type=int, default=64)

    p = add("special-words", "left/right/bispecial factors per length")
    p.add_argument("--max-n", type=int, default=64)

    p = add("accidents", "accident shapes on random points")
    _add_sample_flags(p, 1000, 8, 16)
    p.add_argument("--horizon", type=int, default=None, help="Shifts scanned (default: 3 * level)")

    p = add("decomposition", "disjoint shifted H^k decomposition and overlap bound")
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--depth-factor", type=int, default=8)

    p = add("renorm", "iterates of the renormalization operator")
    _add_potential_flags(p, "v0")
    _add_sample_flags(p, 20, 3, 12)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--check-recursive", type=int, default=0, help="Compare with the recursive form up to this n")

    p = add("cesaro", "Cesaro means of R^k V0 against level bounds")
    _add_sample_flags(p, 50, 3, 12)
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--slack", type=float, default=0.1)

    p = add("power-scaling", "ratios of R^n level**-a")
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--level", type=int, default=8)
    p.add_argument("--rtol", type=float, default=0.1)

    p = add("fixed-residual", "residual of R V = V")
    _add_potential_flags(p, "uc")
    _add_sample_flags(p, 1000, 3, 12)
    p.add_argument("--tol", type=float, default=0.0)
    p.add_argument("--rho-digits", type=int, default=256)

    p = add("pressure", "pressure curve over a gamma grid")
    _add_potential_flags(p, "distance")
    _add_return_flags(p)
    p.add_argument("--gamma-grid", type=parse_grid, default=parse_grid("0:4:0.5"))
    p.add_argument("--epsilon0", type=float, default=None, help="Relative perturbation allowance")
    p.add_argument("--n0", type=int, default=None, help="Level from which the allowance holds")

    p = add("transition", "bracket the phase transition of level**-a")
    _add_return_flags(p)
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--gamma-start", type=float, default=1.0)
    p.add_argument("--gamma-max", type=float, default=400.0)

    p = add("excursion-bounds", "excursion series and the gamma_0 certificate")
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--gamma-grid", type=parse_grid, default=parse_grid("1:8:1"))
    p.add_argument("--z", type=float, default=0.0)

    p = add("vu-check", "critical exponent of V_u against its lower bound")
    _add_return_flags(p)
    p.add_argument("--alpha", type=float, default=-1.0)
    p.add_argument("--sign", choices=["k_minus_one", "one_minus_k"], default="k_minus_one")
    p.add_argument("--gamma-grid", type=parse_grid, default=parse_grid("0.25,0.5,1"))
    p.add_argument("--slack", type=float, default=0.02)

    p = add("interval-map", "interval map from the conformal measure")
    _add_return_flags(p)
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--depth", type=int, default=get_settings().INTERVAL_DEPTH)
    p.add_argument("--gamma1", type=float, default=None, help="Inverse temperature (default: located transition)")
    p.add_argument("--grid-size", type=int, default=1024)
    p.add_argument("--residual-tol", type=float, default=1e-10)
    p.add_argument("--eigen-tol", type=float, default=None)

    p = add("pi-code", "sliding-block coding to the Feigenbaum subshift")
    p.add_argument("--length", type=int, default=16)
    p.add_argument("--words", type=int, default=1000)
    p.add_argument("--pairs", type=int, default=10_000)

    return parser, subs


def parse_args(argv: list[str] | None) -> argparse.Namespace:
    """Parse flags, then re-parse with the ``--config`` file as defaults."""
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    try:
        config = json.loads(args.config.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read config {args.config}: {e}") from e
    if not isinstance(config, dict):
        raise UsageError("config must be a JSON object")
    known = set(vars(args))
    unknown = sorted(set(config) - known)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    sub = subs[args.command]
    for key, value in config.items():
        action = next((a for a in sub._actions if a.dest == key), None)
        if action is not None and action.type is not None and isinstance(value, str):
            value = action.type(value)
        sub.set_defaults(**{key: value})
    return parser.parse_args(argv)


def _tolerances() -> dict[str, float]:
    settings = get_settings()
    return {
        "root_margin": settings.ROOT_MARGIN,
        "transition_rel_width": settings.TRANSITION_REL_WIDTH,
        "excursion_rel_tail": settings.EXCURSION_REL_TAIL,
        "conformal_tol": settings.CONFORMAL_TOL,
        "conformal_eigen_tol": settings.CONFORMAL_EIGEN_TOL,
    }


def _parameters(args: argparse.Namespace) -> dict[str, Any]:
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items()) if k not in ("verbose", "quiet")}


def run(args: argparse.Namespace) -> Outcome:
    """Run one parsed command and write its outputs."""
    start = time.perf_counter()
    outcome = COMMANDS[args.command](args)
    out: Path = args.out
    out.parent.mkdir(parents=True, exist_ok=True)
    if outcome.document is not None:
        out.write_text(json.dumps(outcome.document, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    else:
        write_csv(out, outcome.header, outcome.rows)
    manifest = RunManifest(
        subcommand=args.command,
        parameters=_parameters(args),
        language_hash=outcome.language_hash,
        tolerances=_tolerances(),
        wall_time_s=time.perf_counter() - start,
        results=outcome.results | {"violations": outcome.violations},
    )
    write_manifest(manifest, out)
    return outcome


def main(argv: list[str] | None = None) -> int:
    """Entry point of the ``tmlab`` command."""
    try:
        args = parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return 1

    if args.verbose:
        configure_logging(logging.DEBUG)
    elif args.quiet:
        configure_logging(logging.WARNING)
    else:
        configure_logging(logging.INFO)

    try:
        outcome = run(args)
    except ValidationFailure as e:
        print(f"tmlab {args.command}: {e}", file=sys.stderr)
        return 2
    except (LabError, ValidationError, OSError) as e:
        print(f"tmlab {args.command}: {e}", file=sys.stderr)
        logger.debug("command failed", exc_info=True)
        return 1

    if outcome.violations:
        failure = ValidationFailure(f"{args.command}: {len(outcome.violations)} violations", outcome.violations)
        print(failure, file=sys.stderr)
        for line in failure.violations[:20]:
            print(f"  - {line}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
