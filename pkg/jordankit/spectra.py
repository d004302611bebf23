"""
Candidate points of a rational matrix function: zeros and poles of
chi(z) = det Q(z), entry poles, exact rational roots and a numeric fallback
for the rest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .algebra import GaussianRational, Poly, RatFun, Scalar, _gr
from .config import DEFAULT_SETTINGS, Config, NumericSettings
from .errors import ConvergenceFailureError, NonSquareError, SingularMatrixFunctionError, ZeroPolynomialError
from .ratmat import RatMat, bareiss_det, clear_denominators, determinant, smith_diagonal
from .utils import get_logger

logger = get_logger("spectra")

_GUIDED_NEWTON_STEPS = 8


class Classification(str, Enum):
    ZERO = "zero"
    POLE = "pole"
    REGULAR = "holomorphic-regular"
    MIXED = "mixed-candidate"


class Provenance(str, Enum):
    EXACT = "exact"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class ZeroPoleReport:
    """
    One candidate point. ``cleared_det_order`` is the order of det N at the
    point, N = d * Q being Q with all denominators cleared. ``local_exponents``
    are the local Smith-McMillan exponents, known for exact points only.
    """

    point: "GaussianRational | complex"
    chi_zero_order: int
    entry_pole_order: int
    classification: Classification
    provenance: Provenance
    chi_pole_order: int = 0
    cleared_det_order: int = 0
    local_exponents: tuple[int, ...] = ()

    @property
    def is_exact(self) -> bool:
        return self.provenance is Provenance.EXACT


@dataclass(frozen=True)
class RationalRoots:
    roots: tuple[tuple[GaussianRational, int], ...]
    remainder: Poly


@dataclass(frozen=True)
class NumericRoot:
    value: complex
    multiplicity: int


def char_function(matrix: RatMat) -> RatFun:
    if not matrix.is_square():
        raise NonSquareError(f"characteristic function of a {matrix.rows}x{matrix.cols} matrix")
    chi = determinant(matrix)
    if chi.is_zero():
        raise SingularMatrixFunctionError("det Q(z) vanishes identically; Q is not regular")
    return chi


# -- exact roots -------------------------------------------------------------


def _divisors(value: int) -> list[int]:
    value = abs(value)
    small, large = [], []
    for k in range(1, math.isqrt(value) + 1):
        if value % k == 0:
            small.append(k)
            if k != value // k:
                large.append(value // k)
    return small + large[::-1]


def _convergents(x: Fraction, max_den: int) -> Iterable[Fraction]:
    """Continued-fraction convergents of x with denominator at most max_den."""
    h0, h1, k0, k1 = 0, 1, 1, 0
    while True:
        a = math.floor(x)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_den:
            return
        yield Fraction(h1, k1)
        if x == a:
            return
        x = 1 / (x - a)


def _integer_coeffs(poly: Poly) -> list[int]:
    coeffs = [c.re for c in poly.coeffs]
    scale = math.lcm(*(c.denominator for c in coeffs))
    return [int(c * scale) for c in coeffs]


def _guided_candidates(poly: Poly) -> list[Fraction]:
    """
    Nonzero candidates for coefficients too large to factor: convergents of the
    polished real roots of the squarefree part, kept when the numerator divides
    the constant term and the denominator the leading one. Every candidate is
    still confirmed exactly by deflation.
    """
    squarefree = poly.exact_div(poly.gcd(poly.derivative()))
    ints = _integer_coeffs(squarefree)
    while ints[0] == 0:
        ints.pop(0)
    if len(ints) < 2:
        return []
    top = max(abs(c) for c in ints)
    coeffs = np.array([float(Fraction(c, top)) for c in ints])
    deriv = P.polyder(coeffs)
    candidates: list[Fraction] = []
    for z in _companion_roots(coeffs.astype(np.complex128)):
        if abs(z.imag) > 1e-6 * max(1.0, abs(z)):
            continue
        x = float(z.real)
        for _ in range(_GUIDED_NEWTON_STEPS):
            slope = P.polyval(x, deriv)
            if slope == 0:
                break
            x -= P.polyval(x, coeffs) / slope
        if not math.isfinite(x):
            continue
        for value in _convergents(Fraction(x), abs(ints[-1])):
            if value and ints[0] % value.numerator == 0 and ints[-1] % value.denominator == 0:
                if value not in candidates:
                    candidates.append(value)
    return candidates


def _rational_candidates(poly: Poly) -> list[Fraction]:
    """Rational-root-theorem candidates of a polynomial with rational coefficients."""
    ints = _integer_coeffs(poly)
    candidates: list[Fraction] = []
    if ints[0] == 0:
        candidates.append(Fraction(0))
    while ints and ints[0] == 0:
        ints.pop(0)
    if len(ints) < 2:
        return candidates
    if max(math.isqrt(abs(ints[0])), math.isqrt(abs(ints[-1]))) > Config.DIVISOR_SEARCH_LIMIT:
        logger.debug("coefficients too large for a divisor search; using root-guided candidates")
        return candidates + _guided_candidates(poly)
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            for value in (Fraction(p, q), Fraction(-p, q)):
                if value not in candidates:
                    candidates.append(value)
    return candidates


def point_sort_key(point: GaussianRational) -> tuple:
    return (point.norm(), -point.re, -point.im)


def rational_roots(poly: Poly) -> RationalRoots:
    """
    All roots of ``poly`` lying in Q, with exact multiplicities, and the
    deflated remainder. Non-real coefficients are handled through
    gcd(p, conj p), whose roots include every real root of p.
    """
    if poly.is_zero():
        raise ZeroPolynomialError("rational roots of the zero polynomial")
    search = poly if poly.is_real() else poly.gcd(poly.conjugate())
    remainder = poly
    found: list[tuple[GaussianRational, int]] = []
    if search.degree >= 1:
        for candidate in _rational_candidates(search):
            root = GaussianRational(candidate)
            multiplicity = 0
            while remainder.degree >= 1:
                quotient, rest = remainder.deflate(root)
                if rest:
                    break
                remainder = quotient
                multiplicity += 1
            if multiplicity:
                found.append((root, multiplicity))
    found.sort(key=lambda item: point_sort_key(item[0]))
    return RationalRoots(tuple(found), remainder)


# -- numeric roots -----------------------------------------------------------


def _scale_at(coeffs: np.ndarray, z: complex) -> float:
    return float(np.sum(np.abs(coeffs) * np.abs(z) ** np.arange(len(coeffs))))


def _companion_roots(coeffs: np.ndarray) -> np.ndarray:
    monic = coeffs / coeffs[-1]
    degree = len(coeffs) - 1
    companion = np.diag(np.ones(degree - 1, dtype=np.complex128), -1)
    companion[:, -1] = -monic[:-1]
    return np.linalg.eigvals(companion)


def _aberth_roots(coeffs: np.ndarray, settings: NumericSettings) -> np.ndarray:
    degree = len(coeffs) - 1
    deriv = P.polyder(coeffs)
    radius = 1.0 + float(np.max(np.abs(coeffs[:-1] / coeffs[-1])))
    angles = 2 * np.pi * np.arange(degree) / degree + 0.4
    x = radius * np.exp(1j * angles)
    for _ in range(settings.max_iter):
        converged = True
        for i in range(degree):
            pv = P.polyval(x[i], coeffs)
            dpv = P.polyval(x[i], deriv)
            others = np.delete(x, i)
            correction = pv / dpv if dpv != 0 else pv
            denom = 1.0 - correction * np.sum(1.0 / (x[i] - others))
            delta = correction / denom if denom != 0 else correction
            if abs(delta) > settings.tol * max(1.0, abs(x[i])):
                converged = False
            x[i] -= delta
        if converged:
            break
    return x


def _polish(coeffs: np.ndarray, z: complex, settings: NumericSettings) -> complex:
    deriv = P.polyder(coeffs)
    for _ in range(settings.max_iter + 1):
        value = P.polyval(z, coeffs)
        if abs(value) <= settings.tol * max(_scale_at(coeffs, z), 1e-300):
            return complex(z)
        slope = P.polyval(z, deriv)
        if slope == 0:
            break
        z = z - value / slope
    raise ConvergenceFailureError(f"root near {complex(z):.6g} did not reach residual tolerance {settings.tol}")


def _cluster(values: Iterable[tuple[complex, int]], radius: float) -> list[NumericRoot]:
    clusters: list[list] = []
    for value, weight in sorted(values, key=lambda item: (item[0].real, item[0].imag)):
        for cluster in clusters:
            if abs(cluster[0] - value) <= radius * max(1.0, abs(value)):
                total = cluster[1] + weight
                cluster[0] = (cluster[0] * cluster[1] + value * weight) / total
                cluster[1] = total
                break
        else:
            clusters.append([value, weight])
    return [NumericRoot(complex(value), count) for value, count in clusters]


def numeric_roots(poly: Poly, settings: NumericSettings = DEFAULT_SETTINGS) -> list[NumericRoot]:
    """
    Floating roots with multiplicity estimates. The squarefree decomposition is
    exact, so each numeric solve only sees simple roots; nearby roots are then
    merged by the cluster radius.
    """
    if poly.is_zero():
        raise ZeroPolynomialError("numeric roots of the zero polynomial")
    approximations: list[tuple[complex, int]] = []
    for factor, multiplicity in poly.squarefree_factors():
        coeffs = np.array(factor.complex_coeffs(), dtype=np.complex128)
        if factor.degree == 1:
            raw = np.array([-coeffs[0] / coeffs[1]])
        elif settings.method == "aberth":
            raw = _aberth_roots(coeffs, settings)
        else:
            raw = _companion_roots(coeffs)
        for z in raw:
            approximations.append((_polish(coeffs, complex(z), settings), multiplicity))
    roots = _cluster(approximations, settings.cluster_radius)
    roots.sort(key=lambda r: (round(abs(r.value), 9), -round(r.value.real, 9), -round(r.value.imag, 9)))
    logger.debug("numeric roots of degree-%d polynomial: %s", poly.degree, roots)
    return roots


# -- classification ----------------------------------------------------------


@dataclass(frozen=True)
class _Context:
    chi: RatFun
    common_den: Poly
    cleared_det: Poly
    invariants: tuple[Poly, ...]


def _context(matrix: RatMat) -> _Context:
    chi = char_function(matrix)
    cleared, d = clear_denominators(matrix)
    grid = cleared.entries()
    return _Context(chi, d, bareiss_det(grid), tuple(smith_diagonal(grid)))


def _classify(has_zero: bool, has_pole: bool) -> Classification:
    if has_pole:
        return Classification.MIXED if has_zero else Classification.POLE
    return Classification.ZERO if has_zero else Classification.REGULAR


def classify_point(matrix: RatMat, point: Scalar, context: _Context | None = None) -> ZeroPoleReport:
    """Exact report for any point, including ordinary holomorphic points."""
    point = _gr(point)
    context = context or _context(matrix)
    chi_zero = context.chi.num.valuation(point)
    chi_pole = context.chi.den.valuation(point)
    entry_pole = context.common_den.valuation(point)
    det_order = context.cleared_det.valuation(point)
    # N = d * Q, so Q's exponents are those of N shifted by the order of d
    exponents = tuple(sorted(f.valuation(point) - entry_pole for f in context.invariants))
    return ZeroPoleReport(
        point=point,
        chi_zero_order=chi_zero,
        entry_pole_order=entry_pole,
        classification=_classify(any(e > 0 for e in exponents), entry_pole > 0),
        provenance=Provenance.EXACT,
        chi_pole_order=chi_pole,
        cleared_det_order=det_order,
        local_exponents=exponents,
    )


def _numeric_remainder_roots(poly: Poly, settings: NumericSettings) -> list[NumericRoot]:
    if poly.degree < 1:
        return []
    remainder = rational_roots(poly).remainder
    if remainder.degree < 1:
        return []
    logger.warning("falling back to numeric roots for a degree-%d factor", remainder.degree)
    return numeric_roots(remainder, settings)


def _multiplicity_near(value: complex, roots: Sequence[NumericRoot], radius: float) -> int:
    return sum(r.multiplicity for r in roots if abs(r.value - value) <= radius * max(1.0, abs(value)))


def zero_pole_report(matrix: RatMat, settings: NumericSettings = DEFAULT_SETTINGS) -> list[ZeroPoleReport]:
    context = _context(matrix)
    exact_points: list[GaussianRational] = []
    for poly in (context.chi.num, context.common_den):
        if poly.degree >= 1:
            for root, _ in rational_roots(poly).roots:
                if root not in exact_points:
                    exact_points.append(root)
    exact_points.sort(key=point_sort_key)
    reports = [classify_point(matrix, point, context) for point in exact_points]

    zeros = _numeric_remainder_roots(context.chi.num, settings)
    chi_poles = _numeric_remainder_roots(context.chi.den, settings)
    entry_poles = _numeric_remainder_roots(context.common_den, settings)
    det_zeros = _numeric_remainder_roots(context.cleared_det, settings)
    radius = settings.cluster_radius
    numeric_points: list[complex] = []
    for root in zeros + entry_poles:
        if all(abs(root.value - seen) > radius * max(1.0, abs(seen)) for seen in numeric_points):
            numeric_points.append(root.value)
    # no local Smith form at inexact points: a zero is seen only through chi
    for value in numeric_points:
        chi_zero = _multiplicity_near(value, zeros, radius)
        entry_pole = _multiplicity_near(value, entry_poles, radius)
        det_order = _multiplicity_near(value, det_zeros, radius)
        reports.append(
            ZeroPoleReport(
                point=value,
                chi_zero_order=chi_zero,
                entry_pole_order=entry_pole,
                classification=_classify(chi_zero > 0, entry_pole > 0),
                provenance=Provenance.NUMERIC,
                chi_pole_order=_multiplicity_near(value, chi_poles, radius),
                cleared_det_order=det_order,
            )
        )
    logger.info(
        "zero/pole report: %d exact point(s), %d numeric point(s)",
        len(exact_points),
        len(numeric_points),
    )
    return reports
