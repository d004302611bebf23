"""
Reports produced by every command, rendered for people or as versioned JSON.

Exact quantities are always carried as strings ("3/2", "1 - 2i", "(z - 2)/(z - 3)");
floats appear only in entries tagged numeric.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Sequence

from . import __version__
from .algebra import GaussianRational
from .utils import get_logger

logger = get_logger("report")

SCHEMA = "jordankit.report/1"
FORMATS = ("human", "structured")


@dataclass
class Report:
    """
    One command run. ``flags`` echoes the options it ran with; a failed run
    carries ``error`` (code and detail) and empty results.
    """

    command: str
    input_digest: str | None
    results: dict[str, Any]
    provenance: list[str] = field(default_factory=lambda: ["exact"])
    flags: dict[str, str] = field(default_factory=dict)
    error: dict[str, Any] | None = None
    version: str = __version__
    schema: str = SCHEMA

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


# -- value encoders used by the command handlers -----------------------------


def exact(value: GaussianRational) -> str:
    return str(value)


def numeric(value: complex) -> dict[str, float]:
    return {"re": float(value.real), "im": float(value.imag)}


def exact_vector(vector: Sequence[GaussianRational]) -> list[str]:
    return [str(x) for x in vector]


def numeric_vector(vector: Sequence[complex]) -> list[dict[str, float]]:
    return [numeric(x) for x in vector]


# -- human rendering ---------------------------------------------------------


def _scalar_text(value: Any) -> str:
    if isinstance(value, dict) and set(value) == {"re", "im"}:
        re, im = value["re"], value["im"]
        return f"{re:.10g}" if im == 0 else f"{re:.10g}{im:+.10g}i"
    return str(value)


def _vector_text(vector: Sequence[Any]) -> str:
    return "(" + ", ".join(_scalar_text(x) for x in vector) + ")"


def _tag(entry: dict) -> str:
    return " [numeric]" if entry.get("provenance") == "numeric" else ""


def _chain_lines(title: str, chain: dict) -> list[str]:
    lines = [f"{title} (length {len(chain['vectors'])}, {chain['termination']}){_tag(chain)}"]
    lines.extend(f"  phi_{j} = {_vector_text(v)}" for j, v in enumerate(chain["vectors"]))
    return lines


def _point_table(title: str, points: list[dict], order_key: str, empty: str) -> list[str]:
    if not points:
        return [empty]
    lines = [f"{title}:"]
    lines.extend(f"  {_scalar_text(p['point'])}  order {p[order_key]}{_tag(p)}" for p in points)
    return lines


def _render_analyze(results: dict) -> list[str]:
    points = results["points"]
    lines = [f"det Q(z) = {results['chi']}"]
    lines += _point_table("zeros", [p for p in points if p["classification"] == "zero"], "chi_zero_order", "no zeros found")
    poles = [p for p in points if p["classification"] == "pole"]
    lines += _point_table("poles", poles, "chi_pole_order", "no poles found")
    lines.extend(
        f"  {_scalar_text(p['point'])}  entry pole order {p['entry_pole_order']}{_tag(p)}"
        for p in poles
        if p["entry_pole_order"] != p["chi_pole_order"]
    )
    mixed = [p for p in points if p["classification"] == "mixed-candidate"]
    if mixed:
        lines.append("mixed zero/pole candidates:")
        lines.extend(
            f"  {_scalar_text(p['point'])}  pole order {p['entry_pole_order']}, "
            f"det N order {p['cleared_det_order']}{_tag(p)}"
            for p in mixed
        )
    for p in points:
        if "chain" in p:
            lines += _chain_lines(f"chain at {_scalar_text(p['point'])}", p["chain"])
    return lines


def _render_chain(results: dict) -> list[str]:
    lines = [f"alpha = {results['alpha']}"]
    lines += _chain_lines("greedy chain", results["greedy"])
    lines.append(f"max partial multiplicity = {results['max_partial_multiplicity']}")
    if "maximal" in results:
        lines += _chain_lines("maximal chain", results["maximal"])
    if "canonical" in results:
        lines += _chain_lines("chain from phi_0", results["canonical"])
    return lines


def _render_check(results: dict) -> list[str]:
    status = "ok" if results["ok"] else "FAILED"
    return [f"Q(z) phi(z) vanishes to order {results['exact_order']} at {results['alpha']} (need {results['order']}): {status}"]


def _render_rootfn(results: dict) -> list[str]:
    lines = [f"alpha = {results['alpha']}"]
    lines += _chain_lines("chain", results["chain"])
    lines.append("phi(z) = " + _vector_text(results["root_function"]))
    return lines + _render_check(results)


def _render_verify(results: dict) -> list[str]:
    lines = [f"alpha = {results['alpha']} ({results['classification']})", "phi(z) = " + _vector_text(results["vector"])]
    return lines + _render_check(results)


def _residual_lines(entry: dict) -> list[str]:
    lines = [f"  residual = {_vector_text(entry['residual'])}: {'solves' if entry['solves'] else 'does not solve'}"]
    if entry.get("numeric_residual") is not None:
        lines.append(f"  max |residual| over samples = {entry['numeric_residual']:.6g} [numeric]")
    return lines


def _render_ode_recip(results: dict) -> list[str]:
    lines = [f"det Q(z) = {results['chi']}"]
    if not results["eigen_solutions"]:
        lines.append("no zeros found")
    for entry in results["eigen_solutions"]:
        if entry.get("u") is None:
            lines.append(f"alpha = {entry['alpha']}: no solution ({entry['reason']})")
            continue
        lines.append(f"alpha = {entry['alpha']}: u(t) = {_vector_text(entry['u'])} e^({entry['alpha']} t)")
        lines += _residual_lines(entry)
    for entry in results["jordan_candidates"]:
        if entry.get("p") is None:
            lines.append(f"jordan candidate at {entry['alpha']}: skipped ({entry['reason']})")
            continue
        lines.append(f"jordan candidate at {entry['alpha']}: p(t) = {_vector_text(entry['p'])}")
        lines += _residual_lines(entry)
    if "candidate" in results:
        entry = results["candidate"]
        lines.append(f"candidate at {entry['alpha']}: p(t) = {_vector_text(entry['p'])}")
        lines += _residual_lines(entry)
    return lines


def _render_ode_linear(results: dict) -> list[str]:
    lines = [f"alpha = {results['alpha']}"]
    lines += _chain_lines("chain", results["chain"])
    lines.append(f"u(t) = {_vector_text(results['P'])} e^({results['alpha']} t)")
    return lines + _residual_lines(results)


_RENDERERS: dict[str, Callable[[dict], list[str]]] = {
    "analyze": _render_analyze,
    "chain": _render_chain,
    "rootfn": _render_rootfn,
    "verify": _render_verify,
    "ode-recip": _render_ode_recip,
    "ode-linear": _render_ode_linear,
}


def emit_report(report: Report, fmt: str = "human") -> str:
    if fmt == "structured":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if fmt != "human":
        raise ValueError(f"Invalid format '{fmt}'. Valid formats: {', '.join(FORMATS)}")
    lines = [f"jordankit {report.version}: {report.command}"]
    if report.error is not None:
        lines.append(f"error[{report.error['code']}]: {report.error['detail']}")
    else:
        lines += _RENDERERS[report.command](report.results)
    return "\n".join(lines) + "\n"
