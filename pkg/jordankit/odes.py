"""
Exponential solutions of two ODE families built from a matrix function:

* linear systems sum_j A_j u^(j)(t) = 0 with L(z) = sum_j A_j z^j, solved by
  u(t) = P(t) e^{alpha t} from a Jordan chain of L;
* reciprocal systems whose equations are sums of a / u_m^(k)(t), tried with
  u_m(t) = e^{alpha t} / p_m(t). Substituting constant p_m gives the
  associated matrix Q_{im}(z) = sum_k a_{imk} z^{-k}.

Residuals are returned with the exponential factored out, so a candidate is a
solution exactly when every residual is the zero function.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

from .algebra import ONE, GaussianRational, Poly, RatFun, Scalar, _gr
from .errors import (
    DegenerateDerivativeError,
    DimensionMismatchError,
    IndexOutOfRangeError,
    NotAnEigenpairError,
    SampleAtSingularityError,
    SchemaError,
    ZeroComponentError,
)
from .jordan import JordanChain
from .ratmat import MatPoly, RatMat, Vector, as_vector, is_zero_vector, nullspace, vec_add, vec_scale, zero_vector
from .spectra import char_function, rational_roots
from .utils import get_logger

logger = get_logger("odes")


@dataclass(frozen=True)
class RecipTerm:
    """a / u_unknown^(order) in equation ``equation``; indices are 1-based."""

    equation: int
    unknown: int
    order: int
    coefficient: GaussianRational


@dataclass(frozen=True)
class ReciprocalSystem:
    n: int
    terms: tuple[RecipTerm, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise SchemaError("a reciprocal system needs at least one unknown")
        for term in self.terms:
            if not 1 <= term.equation <= self.n:
                raise IndexOutOfRangeError(f"equation index {term.equation} outside 1..{self.n}")
            if not 1 <= term.unknown <= self.n:
                raise IndexOutOfRangeError(f"unknown index {term.unknown} outside 1..{self.n}")
            if term.order < 0:
                raise SchemaError(f"derivative order {term.order} is negative")
            if not term.coefficient:
                raise SchemaError(f"zero coefficient for u_{term.unknown}^({term.order}) in equation {term.equation}")

    @property
    def max_order(self) -> int:
        return max((t.order for t in self.terms), default=0)


@dataclass(frozen=True)
class ExpPolySolution:
    """u(t) = P(t) e^{alpha t}."""

    alpha: GaussianRational
    P: tuple[Poly, ...]

    def __post_init__(self) -> None:
        if all(p.is_zero() for p in self.P):
            raise ValueError("P(t) must not vanish identically")


@dataclass(frozen=True)
class ExpRationalSolution:
    """u_i(t) = e^{alpha t} / p_i(t)."""

    alpha: GaussianRational
    p: tuple[Poly, ...]

    def __post_init__(self) -> None:
        for index, poly in enumerate(self.p):
            if poly.is_zero():
                raise ZeroComponentError(index + 1)

    def format(self, var: str = "t") -> list[str]:
        return [RatFun(ONE, poly).format(var) for poly in self.p]


@dataclass(frozen=True)
class EigenSolution:
    alpha: GaussianRational
    solution: ExpRationalSolution | None
    reason: str = ""


def assoc_matrix(system: ReciprocalSystem) -> RatMat:
    entries = [[RatFun() for _ in range(system.n)] for _ in range(system.n)]
    for term in system.terms:
        i, m = term.equation - 1, term.unknown - 1
        entries[i][m] = entries[i][m] + RatFun(Poly.constant(term.coefficient), Poly.monomial(term.order))
    return RatMat(entries, cols=system.n)


def recip_solution(system: ReciprocalSystem, alpha: Scalar, phi: Sequence[Scalar]) -> ExpRationalSolution:
    alpha = _gr(alpha)
    phi = as_vector(phi)
    if len(phi) != system.n:
        raise DimensionMismatchError(f"eigenvector of length {len(phi)} for {system.n} unknowns")
    for index, component in enumerate(phi):
        if not component:
            raise ZeroComponentError(index + 1)
    matrix = assoc_matrix(system)
    matrix.require_holomorphic(alpha)
    if not is_zero_vector(matrix.evaluate(alpha).matvec(phi)):
        raise NotAnEigenpairError(f"Q({alpha}) phi is not zero")
    return ExpRationalSolution(alpha, tuple(Poly.constant(c) for c in phi))


def derivative_numerators(p: Poly, alpha: Scalar, count: int) -> list[Poly]:
    """
    q_0..q_count with (e^{alpha t}/p)^(k) = e^{alpha t} q_k / p^(k+1), from
    q_{k+1} = alpha q_k p + q_k' p - (k+1) q_k p'.
    """
    alpha = _gr(alpha)
    dp = p.derivative()
    q = [Poly.one()]
    for k in range(count):
        current = q[-1]
        q.append(current * p * alpha + current.derivative() * p - current * dp * (k + 1))
    return q


def _numerators_by_unknown(system: ReciprocalSystem, candidate: ExpRationalSolution) -> list[list[Poly]]:
    if len(candidate.p) != system.n:
        raise DimensionMismatchError(f"candidate with {len(candidate.p)} components for {system.n} unknowns")
    return [derivative_numerators(p, candidate.alpha, system.max_order) for p in candidate.p]


def verify_recip_candidate(system: ReciprocalSystem, candidate: ExpRationalSolution) -> list[RatFun]:
    """
    R_i(t) with equation i evaluating to e^{-alpha t} R_i(t) on the candidate,
    since 1/u^(k) = e^{-alpha t} p^(k+1) / q_k.
    """
    numerators = _numerators_by_unknown(system, candidate)
    residuals = [RatFun() for _ in range(system.n)]
    for term in system.terms:
        m, k = term.unknown - 1, term.order
        q_k = numerators[m][k]
        if q_k.is_zero():
            raise DegenerateDerivativeError(term.unknown, k)
        p = candidate.p[m]
        residuals[term.equation - 1] = residuals[term.equation - 1] + RatFun(p ** (k + 1), q_k) * term.coefficient
    logger.debug("reciprocal residuals: %s", [r.format("t") for r in residuals])
    return residuals


def _chain_polynomials(chain: JordanChain) -> tuple[Poly, ...]:
    k = chain.length
    width = len(chain.vectors[0])
    components = []
    for i in range(width):
        poly = Poly()
        for j, vector in enumerate(chain.vectors):
            power = k - 1 - j
            poly = poly + Poly.monomial(power, vector[i] / math.factorial(power))
        components.append(poly)
    return tuple(components)


def jordan_candidate(chain: JordanChain) -> ExpRationalSolution:
    """p(t) = sum_j t^(k-1-j)/(k-1-j)! phi_j, the chain's linear-solution polynomial."""
    return ExpRationalSolution(chain.alpha, _chain_polynomials(chain))


def _nonvanishing_combination(basis: Sequence[Vector]) -> Vector | None:
    """
    A combination with every component nonzero, or None when some component
    vanishes on the whole space. Each component of sum_b s^b v_b is a nonzero
    polynomial in s of degree < len(basis), so one of the first
    n*(len(basis)-1)+1 integers works.
    """
    if not basis:
        return None
    size = len(basis[0])
    if any(all(not v[c] for v in basis) for c in range(size)):
        return None
    for s in range(size * (len(basis) - 1) + 1):
        vector = zero_vector(size)
        for power, v in enumerate(basis):
            vector = vec_add(vector, vec_scale(v, s**power))
        if all(vector):
            return vector
    return None


def eigen_solutions(system: ReciprocalSystem) -> list[EigenSolution]:
    """One exponential solution, or the reason there is none, per exact eigenvalue."""
    matrix = assoc_matrix(system)
    chi = char_function(matrix)
    outcomes = []
    roots = rational_roots(chi.num).roots if chi.num.degree >= 1 else ()
    for alpha, _ in roots:
        if matrix.entry_pole_order(alpha) > 0:
            outcomes.append(EigenSolution(alpha, None, "pole of the associated matrix"))
            continue
        vector = _nonvanishing_combination(nullspace(matrix.evaluate(alpha)))
        if vector is None:
            outcomes.append(EigenSolution(alpha, None, "every eigenvector has a zero component"))
            continue
        outcomes.append(EigenSolution(alpha, recip_solution(system, alpha, vector)))
    logger.info("eigen-solutions: %d eigenvalue(s) examined", len(outcomes))
    return outcomes


# -- linear systems ----------------------------------------------------------


def linear_solution(L: MatPoly, chain: JordanChain) -> ExpPolySolution:
    if len(chain.vectors[0]) != L.cols:
        raise DimensionMismatchError(f"chain vectors of length {len(chain.vectors[0])} for {L.cols} columns")
    return ExpPolySolution(chain.alpha, _chain_polynomials(chain))


def _exp_poly_derivative(P: Sequence[Poly], alpha: GaussianRational, order: int) -> list[Poly]:
    """(P e^{alpha t})^(order) = e^{alpha t} * sum_i C(order, i) alpha^(order-i) P^(i)."""
    out = []
    for poly in P:
        total = Poly()
        for i in range(order + 1):
            total = total + poly.derivative(i).scale(alpha ** (order - i) * math.comb(order, i))
        out.append(total)
    return out


def verify_linear_residual(L: MatPoly, solution: ExpPolySolution) -> tuple[Poly, ...]:
    if len(solution.P) != L.cols:
        raise DimensionMismatchError(f"solution of length {len(solution.P)} for {L.cols} columns")
    residual = [Poly() for _ in range(L.rows)]
    for j, coefficient in enumerate(L.coeff_mats):
        derived = _exp_poly_derivative(solution.P, solution.alpha, j)
        for r in range(L.rows):
            row = coefficient.entries[r]
            residual[r] = residual[r] + sum((d.scale(a) for a, d in zip(row, derived) if a), Poly())
    return tuple(residual)


# -- floating cross-check ----------------------------------------------------


def _recip_residual_at(system: ReciprocalSystem, candidate: ExpRationalSolution, numerators, t: GaussianRational) -> float:
    growth = cmath.exp(complex(candidate.alpha) * complex(t))
    totals = [0j] * system.n
    for term in system.terms:
        m, k = term.unknown - 1, term.order
        if numerators[m][k].is_zero():
            raise DegenerateDerivativeError(term.unknown, k)
        # singularity is decided on exact values, before rounding
        p_t = candidate.p[m](t)
        q_t = numerators[m][k](t)
        if not p_t or not q_t:
            raise SampleAtSingularityError(f"u_{term.unknown}^({k}) is singular or vanishes at t = {t}")
        derivative = growth * complex(q_t) / complex(p_t) ** (k + 1)
        totals[term.equation - 1] += complex(term.coefficient) / derivative
    return max(abs(x) for x in totals)


def _linear_residual_at(L: MatPoly, solution: ExpPolySolution, t: GaussianRational) -> float:
    growth = cmath.exp(complex(solution.alpha) * complex(t))
    totals = [0j] * L.rows
    for j, coefficient in enumerate(L.coeff_mats):
        derived = [growth * complex(p(t)) for p in _exp_poly_derivative(solution.P, solution.alpha, j)]
        for r in range(L.rows):
            totals[r] += sum(complex(a) * d for a, d in zip(coefficient.entries[r], derived))
    return max((abs(x) for x in totals), default=0.0)


def numeric_residual(
    target: "ReciprocalSystem | MatPoly",
    candidate: "ExpRationalSolution | ExpPolySolution",
    samples: Sequence[Scalar],
) -> float:
    """Largest |residual| over the sample times, in floating complex arithmetic."""
    times = [_gr(s) for s in samples]
    if isinstance(target, ReciprocalSystem):
        if not isinstance(candidate, ExpRationalSolution):
            raise TypeError("a reciprocal system needs an ExpRationalSolution candidate")
        numerators = _numerators_by_unknown(target, candidate)
        worst = max((_recip_residual_at(target, candidate, numerators, t) for t in times), default=0.0)
    else:
        if not isinstance(candidate, ExpPolySolution):
            raise TypeError("a linear system needs an ExpPolySolution candidate")
        worst = max((_linear_residual_at(target, candidate, t) for t in times), default=0.0)
    logger.debug("numeric residual over %d sample(s): %.3e", len(times), worst)
    return worst
