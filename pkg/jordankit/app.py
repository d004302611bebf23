"""
Command-line entrypoint for jordankit.
"""

from __future__ import annotations

import argparse
import functools
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Iterable

from .algebra import GaussianRational, RatFun
from .config import DEFAULT_SETTINGS, ROOT_METHODS, Config, NumericSettings
from .errors import (
    InputError,
    JordanKitError,
    MissingFlagError,
    MixedPointError,
    PreconditionError,
    SampleAtSingularityError,
    SchemaError,
)
from .jordan import (
    JordanChain,
    NumericChain,
    build_root_function,
    canonical_chain,
    extend_chain_greedy,
    is_jordan_chain,
    maximal_chain,
    numeric_chain,
    product_valuation,
    verify_zero_order,
)
from .models import load_candidate, load_chain, load_matpoly, load_matrix, load_recip_system, load_vector_function
from .odes import (
    ExpRationalSolution,
    ReciprocalSystem,
    assoc_matrix,
    eigen_solutions,
    jordan_candidate,
    linear_solution,
    numeric_residual,
    verify_linear_residual,
    verify_recip_candidate,
)
from .parser import parse_scalar, parse_vector
from .ratmat import RatMat
from .report import FORMATS, Report, emit_report, exact, exact_vector, numeric, numeric_vector
from .spectra import Classification, ZeroPoleReport, char_function, classify_point, rational_roots, zero_pole_report
from .utils import file_digest, get_logger, set_log_level

logger = get_logger("app")

COMMANDS: dict[str, Callable[[argparse.Namespace, NumericSettings], dict[str, Any]]] = {}


def command(name: str) -> Callable:
    def decorator(handler: Callable) -> Callable:
        COMMANDS[name] = handler
        return handler

    return decorator


def flags_required(names: Iterable[str]) -> Callable:
    """
    Decorator refusing to run a command when one of its flags is missing.
    """
    names = tuple(names)

    def decorator(handler: Callable) -> Callable:
        @functools.wraps(handler)
        def wrapped(flags: argparse.Namespace, settings: NumericSettings):
            missing = [name for name in names if getattr(flags, name, None) is None]
            if missing:
                logger.warning("missing flag(s) %s", ", ".join(missing))
                raise MissingFlagError("missing required flag(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))
            return handler(flags, settings)

        return wrapped

    return decorator


# -- shared helpers ----------------------------------------------------------


def _chain_dict(chain: "JordanChain | NumericChain") -> dict[str, Any]:
    if isinstance(chain, NumericChain):
        return {
            "vectors": [numeric_vector(v) for v in chain.vectors],
            "termination": chain.termination.value,
            "provenance": "numeric",
        }
    return {
        "vectors": [exact_vector(v) for v in chain.vectors],
        "termination": chain.termination.value,
        "provenance": "exact",
    }


def _point_dict(report: ZeroPoleReport) -> dict[str, Any]:
    return {
        "point": exact(report.point) if report.is_exact else numeric(report.point),
        "classification": report.classification.value,
        "provenance": report.provenance.value,
        "chi_zero_order": report.chi_zero_order,
        "chi_pole_order": report.chi_pole_order,
        "entry_pole_order": report.entry_pole_order,
        "cleared_det_order": report.cleared_det_order,
        "local_exponents": list(report.local_exponents),
    }


def _require_chain_point(matrix: RatMat, alpha: GaussianRational) -> ZeroPoleReport:
    """Chains are only built at holomorphy points; poles and mixed points are refused."""
    point = classify_point(matrix, alpha)
    if point.classification is Classification.MIXED:
        raise MixedPointError(f"{alpha} is both a pole and a zero of Q; chain equations do not apply")
    matrix.require_holomorphic(alpha)
    return point


def _alpha(flags: argparse.Namespace) -> GaussianRational:
    return parse_scalar(flags.alpha)


def _samples(flags: argparse.Namespace) -> tuple[GaussianRational, ...]:
    return parse_vector(flags.samples or Config.SAMPLES)


def _residual_over_samples(target, candidate, samples) -> float | None:
    """Max residual over the regular samples; singular ones are skipped."""
    values = []
    for t in samples:
        try:
            values.append(numeric_residual(target, candidate, [t]))
        except SampleAtSingularityError as exc:
            logger.warning("skipping sample t = %s: %s", t, exc.message)
    return max(values) if values else None


def _uses_numeric(value: Any) -> bool:
    if isinstance(value, dict):
        if value.get("provenance") == "numeric" or value.get("numeric_residual") is not None:
            return True
        return any(_uses_numeric(v) for v in value.values())
    if isinstance(value, list):
        return any(_uses_numeric(v) for v in value)
    return False


def _rational_strings(functions: Iterable[RatFun], var: str) -> list[str]:
    return [f.format(var) for f in functions]


# -- commands ----------------------------------------------------------------


@command("analyze")
@flags_required(["input"])
def analyze(flags: argparse.Namespace, settings: NumericSettings) -> dict[str, Any]:
    matrix = load_matrix(flags.input)
    points = []
    for report in zero_pole_report(matrix, settings):
        entry = _point_dict(report)
        if flags.chains and report.classification is Classification.ZERO:
            if report.is_exact:
                chain = extend_chain_greedy(matrix, report.point, flags.max_len)
            else:
                chain = numeric_chain(matrix, report.point, flags.max_len, settings)
            entry["chain"] = _chain_dict(chain)
        points.append(entry)
    return {"chi": char_function(matrix).format(), "points": points}


@command("chain")
@flags_required(["input", "alpha"])
def chain(flags: argparse.Namespace, settings: NumericSettings) -> dict[str, Any]:
    matrix = load_matrix(flags.input)
    alpha = _alpha(flags)
    _require_chain_point(matrix, alpha)
    greedy = extend_chain_greedy(matrix, alpha, flags.max_len)
    maximal = maximal_chain(matrix, alpha)
    if greedy.length < maximal.length:
        logger.warning("greedy chain (%d) is shorter than the maximum (%d)", greedy.length, maximal.length)
    results = {
        "alpha": exact(alpha),
        "greedy": _chain_dict(greedy),
        "max_partial_multiplicity": maximal.length,
    }
    if flags.exhaustive:
        results["maximal"] = _chain_dict(maximal)
    if flags.phi0:
        results["canonical"] = _chain_dict(canonical_chain(matrix, alpha, parse_vector(flags.phi0)))
    return results


@command("rootfn")
@flags_required(["input", "alpha"])
def rootfn(flags: argparse.Namespace, settings: NumericSettings) -> dict[str, Any]:
    matrix = load_matrix(flags.input)
    alpha = _alpha(flags)
    _require_chain_point(matrix, alpha)
    chain = maximal_chain(matrix, alpha) if flags.exhaustive else extend_chain_greedy(matrix, alpha, flags.max_len)
    phi = build_root_function(chain)
    check = verify_zero_order(matrix, phi, chain.length)
    return {
        "alpha": exact(alpha),
        "chain": _chain_dict(chain),
        "root_function": phi.format(),
        "order": chain.length,
        "ok": check.ok,
        "exact_order": check.exact_order,
    }


@command("verify")
@flags_required(["input", "alpha", "rootfn", "order"])
def verify(flags: argparse.Namespace, settings: NumericSettings) -> dict[str, Any]:
    matrix = load_matrix(flags.input)
    alpha = _alpha(flags)
    vector = load_vector_function(flags.rootfn)
    point = classify_point(matrix, alpha)
    if point.classification in (Classification.POLE, Classification.MIXED):
        order = product_valuation(matrix, vector, alpha)
        ok = order >= flags.order
    else:
        ok, order = verify_zero_order(matrix, vector, flags.order, alpha=alpha)
    return {
        "alpha": exact(alpha),
        "classification": point.classification.value,
        "vector": _rational_strings(vector, "z"),
        "order": flags.order,
        "ok": ok,
        "exact_order": order,
    }


def _recip_entry(system: ReciprocalSystem, candidate: ExpRationalSolution, samples) -> dict[str, Any]:
    residual = verify_recip_candidate(system, candidate)
    return {
        "alpha": exact(candidate.alpha),
        "p": [p.format("t") for p in candidate.p],
        "residual": _rational_strings(residual, "t"),
        "solves": all(r.is_zero() for r in residual),
        "numeric_residual": _residual_over_samples(system, candidate, samples),
    }


@command("ode-recip")
@flags_required(["input"])
def ode_recip(flags: argparse.Namespace, settings: NumericSettings) -> dict[str, Any]:
    system = load_recip_system(flags.input)
    samples = _samples(flags)
    matrix = assoc_matrix(system)
    chi = char_function(matrix)

    solutions = []
    for outcome in eigen_solutions(system):
        if outcome.solution is None:
            solutions.append({"alpha": exact(outcome.alpha), "u": None, "reason": outcome.reason})
            continue
        entry = _recip_entry(system, outcome.solution, samples)
        entry["u"] = outcome.solution.format("t")
        solutions.append(entry)

    candidates = []
    roots = rational_roots(chi.num).roots if chi.num.degree >= 1 else ()
    for alpha, order in roots:
        if order < 2 or matrix.entry_pole_order(alpha) > 0:
            continue
        chain = extend_chain_greedy(matrix, alpha, flags.max_len)
        if chain.length < 2:
            candidates.append({"alpha": exact(alpha), "p": None, "reason": "chain of length 1"})
            continue
        try:
            candidates.append(_recip_entry(system, jordan_candidate(chain), samples))
        except PreconditionError as exc:
            candidates.append({"alpha": exact(alpha), "p": None, "reason": exc.message})

    results = {
        "associated_matrix": matrix.format(),
        "chi": chi.format(),
        "eigen_solutions": solutions,
        "jordan_candidates": candidates,
    }
    if flags.candidate:
        results["candidate"] = _recip_entry(system, load_candidate(flags.candidate), samples)
    return results


@command("ode-linear")
@flags_required(["input"])
def ode_linear(flags: argparse.Namespace, settings: NumericSettings) -> dict[str, Any]:
    L = load_matpoly(flags.input)
    if flags.chain:
        chain = load_chain(flags.chain)
        if flags.alpha is not None and parse_scalar(flags.alpha) != chain.alpha:
            raise SchemaError(f"--alpha {flags.alpha} differs from the chain's alpha {chain.alpha}")
    elif flags.alpha is None:
        raise MissingFlagError("ode-linear needs --alpha or --chain")
    else:
        alpha = _alpha(flags)
        chain = extend_chain_greedy(L, alpha, flags.max_len)
    solution = linear_solution(L, chain)
    residual = verify_linear_residual(L, solution)
    return {
        "alpha": exact(chain.alpha),
        "chain": _chain_dict(chain),
        "chain_relations_hold": is_jordan_chain(L, chain.alpha, chain.vectors),
        "P": [p.format("t") for p in solution.P],
        "residual": [r.format("t") for r in residual],
        "solves": all(r.is_zero() for r in residual),
        "numeric_residual": _residual_over_samples(L, solution, _samples(flags)),
    }


# -- dispatch ----------------------------------------------------------------


def _settings(flags: argparse.Namespace) -> NumericSettings:
    try:
        return DEFAULT_SETTINGS.override(
            tol=getattr(flags, "tol", None),
            cluster_radius=getattr(flags, "cluster_radius", None),
            max_iter=getattr(flags, "max_iter", None),
            rank_threshold=getattr(flags, "rank_threshold", None),
            method=getattr(flags, "root_method", None),
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _check_counts(flags: argparse.Namespace) -> None:
    max_len = getattr(flags, "max_len", None)
    if max_len is not None and max_len < 1:
        raise InputError(f"--max-len must be at least 1, got {max_len}")
    order = getattr(flags, "order", None)
    if order is not None and order < 0:
        raise InputError(f"--order must be non-negative, got {order}")


def _input_paths(flags: argparse.Namespace) -> list[Path]:
    names = ("input", "rootfn", "chain", "candidate")
    return [Path(getattr(flags, n)) for n in names if getattr(flags, n, None)]


def _flag_echo(flags: argparse.Namespace) -> dict[str, str]:
    """The options a command ran with, as strings; unset ones are left out."""
    skip = {"command", "format", "output", "verbose"}
    echo = {}
    for name, value in sorted(vars(flags).items()):
        if name in skip or value is None or value is False:
            continue
        echo[name] = "true" if value is True else str(value)
    return echo


def run(name: str, flags: argparse.Namespace) -> Report:
    if name not in COMMANDS:
        raise InputError(f"Invalid command '{name}'. Valid commands: {', '.join(COMMANDS)}")
    logger.info("running %s", name)
    _check_counts(flags)
    settings = _settings(flags)
    results = COMMANDS[name](flags, settings)
    digest = file_digest(_input_paths(flags))
    numeric_used = _uses_numeric(results)
    return Report(
        command=name,
        input_digest=digest,
        results=results,
        provenance=["exact", "numeric"] if numeric_used else ["exact"],
        flags=_flag_echo(flags),
    )


def create_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", type=Path, help="input JSON document")
    common.add_argument("--format", choices=FORMATS, default=Config.REPORT_FORMAT)
    common.add_argument("--output", type=Path, help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--tol", type=float)
    common.add_argument("--cluster-radius", type=float)
    common.add_argument("--max-iter", type=int)
    common.add_argument("--rank-threshold", type=float)
    common.add_argument("--root-method", choices=ROOT_METHODS)
    common.add_argument("--max-len", type=int, default=Config.MAX_LEN)

    parser = argparse.ArgumentParser(prog="jordankit", description="Jordan chains of rational matrix functions")
    sub = parser.add_subparsers(dest="command")

    analyze_cmd = sub.add_parser("analyze", parents=[common], help="zeros and poles of det Q")
    analyze_cmd.add_argument("--chains", action="store_true", help="attach a greedy chain to every zero")

    chain_cmd = sub.add_parser("chain", parents=[common], help="Jordan chains at a point")
    chain_cmd.add_argument("--alpha")
    chain_cmd.add_argument("--exhaustive", action="store_true", help="also print a maximal chain")
    chain_cmd.add_argument("--phi0", help="comma-separated eigenvector to start from")

    rootfn_cmd = sub.add_parser("rootfn", parents=[common], help="root function from a chain")
    rootfn_cmd.add_argument("--alpha")
    rootfn_cmd.add_argument("--exhaustive", action="store_true", help="use a maximal chain")

    verify_cmd = sub.add_parser("verify", parents=[common], help="order of Q(z) phi(z) at a point")
    verify_cmd.add_argument("--alpha")
    verify_cmd.add_argument("--rootfn", type=Path)
    verify_cmd.add_argument("--order", type=int)

    recip_cmd = sub.add_parser("ode-recip", parents=[common], help="reciprocal ODE systems")
    recip_cmd.add_argument("--candidate", type=Path)
    recip_cmd.add_argument("--samples", help=f"comma-separated sample times (default {Config.SAMPLES})")

    linear_cmd = sub.add_parser("ode-linear", parents=[common], help="linear ODE systems L(d/dt) u = 0")
    linear_cmd.add_argument("--alpha")
    linear_cmd.add_argument("--chain", type=Path)
    linear_cmd.add_argument("--samples", help=f"comma-separated sample times (default {Config.SAMPLES})")
    return parser


def _error_report(flags: argparse.Namespace, exc: JordanKitError) -> Report:
    try:
        digest = file_digest(_input_paths(flags))
    except JordanKitError:
        digest = None
    return Report(
        command=flags.command,
        input_digest=digest,
        results={},
        provenance=[],
        flags=_flag_echo(flags),
        error=exc.to_dict(),
    )


def _write(text: str, flags: argparse.Namespace) -> None:
    if flags.output:
        flags.output.write_text(text, encoding="utf-8")
        logger.info("report written to %s", flags.output)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = create_parser()
    flags = parser.parse_args(argv)
    if flags.command is None:
        parser.print_help(sys.stderr)
        return 2
    if flags.verbose:
        set_log_level(logging.DEBUG if flags.verbose > 1 else logging.INFO)
    try:
        report = run(flags.command, flags)
        _write(emit_report(report, flags.format), flags)
    except JordanKitError as exc:
        logger.error("%s failed: %s", flags.command, exc.message)
        print(f"error[{exc.code}]: {exc.message}", file=sys.stderr)
        if flags.format == "structured":
            _write(emit_report(_error_report(flags, exc), "structured"), flags)
        return exc.exit_status
    except OSError as exc:
        print(f"error[FILE_ERROR]: {exc}", file=sys.stderr)
        return 2
    return 0
