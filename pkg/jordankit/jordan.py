"""
Jordan chains and root functions of a rational matrix function at a
holomorphy point.

A chain phi_0..phi_{l-1} at alpha satisfies, for j = 0..l-1,

    sum_{p=0}^{j} Q^(p)(alpha)/p! * phi_{j-p} = 0,

and the vector polynomial phi(z) = sum_s (z - alpha)^s phi_s is then a root
function: Q(z) phi(z) vanishes at alpha to order at least l.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .algebra import ZERO, GaussianRational, Poly, RatFun, Scalar, _gr
from .config import DEFAULT_SETTINGS, Config, NumericSettings
from .errors import (
    DimensionMismatchError,
    InputError,
    JordanKitError,
    NonSquareError,
    NotAnEigenpairError,
    NotAnEigenvalueError,
    PoleAtPointError,
    RemovablePointError,
    SingularMatrixFunctionError,
    ZeroEigenvectorCandidateError,
)
from .ratmat import (
    LinSolveResult,
    MatPoly,
    RatMat,
    ScalarMat,
    Vector,
    as_vector,
    bareiss_det,
    clear_denominators_at,
    is_zero_vector,
    local_smith,
    nullspace,
    solve_linear,
    vec_add,
    vec_scale,
    zero_vector,
)
from .utils import get_logger

logger = get_logger("jordan")


class Termination(str, Enum):
    INCONSISTENT = "inconsistent"
    MAX_LEN = "max-len"
    MAXIMAL = "maximal"
    ROOT_FUNCTION = "root-function"
    GIVEN = "given"


@dataclass(frozen=True)
class JordanChain:
    alpha: GaussianRational
    vectors: tuple[Vector, ...]
    termination: Termination = Termination.GIVEN

    def __post_init__(self) -> None:
        if not self.vectors:
            raise InputError("a Jordan chain needs at least one vector")
        width = len(self.vectors[0])
        if any(len(v) != width for v in self.vectors):
            raise DimensionMismatchError("chain vectors have different lengths")
        if is_zero_vector(self.vectors[0]):
            raise ZeroEigenvectorCandidateError("phi_0 of a Jordan chain must be nonzero")

    @property
    def length(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class RootFunction:
    """phi(z) = sum_s (z - alpha)^s coeffs[s]; phi^(s)(alpha) = s! coeffs[s]."""

    alpha: GaussianRational
    coeffs: tuple[Vector, ...]

    def as_functions(self) -> tuple[RatFun, ...]:
        shift = Poly.linear(self.alpha)
        width = len(self.coeffs[0]) if self.coeffs else 0
        components = []
        for i in range(width):
            poly = Poly()
            for s, vector in enumerate(self.coeffs):
                poly = poly + (shift**s).scale(vector[i])
            components.append(RatFun(poly))
        return tuple(components)

    def derivative_at(self, order: int) -> Vector:
        if order >= len(self.coeffs):
            return zero_vector(len(self.coeffs[0]))
        return vec_scale(self.coeffs[order], math.factorial(order))

    def format(self, var: str = "z") -> list[str]:
        return [f.format(var) for f in self.as_functions()]


@dataclass(frozen=True)
class ChainStep:
    index: int
    rhs: Vector
    solve_result: LinSolveResult


class ZeroOrderCheck(NamedTuple):
    ok: bool
    exact_order: int


@dataclass(frozen=True)
class NumericChain:
    alpha: complex
    vectors: tuple[tuple[complex, ...], ...]
    termination: Termination

    @property
    def length(self) -> int:
        return len(self.vectors)


def _as_ratmat(matrix: "RatMat | MatPoly") -> RatMat:
    return matrix.to_ratmat() if isinstance(matrix, MatPoly) else matrix


def _require_square(matrix: RatMat) -> None:
    if not matrix.is_square():
        raise NonSquareError(f"Jordan chains of a {matrix.rows}x{matrix.cols} matrix")


def scaled_derivs_at(matrix: "RatMat | MatPoly", alpha: Scalar, count: int) -> list[ScalarMat]:
    return _as_ratmat(matrix).taylor_matrices(_gr(alpha), count)


def chain_step(derivs: Sequence[ScalarMat], existing: Sequence[Vector], j: int) -> ChainStep:
    if len(existing) != j:
        raise DimensionMismatchError(f"step {j} needs {j} earlier vectors, got {len(existing)}")
    if len(derivs) < j + 1:
        raise DimensionMismatchError(f"step {j} needs {j + 1} derivative matrices, got {len(derivs)}")
    rhs = zero_vector(derivs[0].rows)
    for p in range(1, j + 1):
        rhs = vec_add(rhs, derivs[p].matvec(existing[j - p]))
    rhs = vec_scale(rhs, -1)
    result = solve_linear(derivs[0], rhs)
    logger.debug("chain step %d: consistent=%s rank=%d", j, result.consistent, result.rank)
    return ChainStep(j, rhs, result)


def extend_chain_greedy(matrix: "RatMat | MatPoly", alpha: Scalar, max_len: int = Config.MAX_LEN) -> JordanChain:
    """
    phi_0 is the first nullspace basis vector of Q(alpha); each later vector is
    the particular solution of its step with free variables set to zero.
    """
    matrix = _as_ratmat(matrix)
    alpha = _gr(alpha)
    _require_square(matrix)
    if max_len < 1:
        raise InputError(f"max_len must be at least 1, got {max_len}")
    derivs = scaled_derivs_at(matrix, alpha, max_len)
    basis = nullspace(derivs[0])
    if not basis:
        raise NotAnEigenvalueError(f"Q({alpha}) is nonsingular")
    vectors = [basis[0]]
    termination = Termination.MAX_LEN
    while len(vectors) < max_len:
        step = chain_step(derivs, vectors, len(vectors))
        if not step.solve_result.consistent:
            termination = Termination.INCONSISTENT
            break
        vectors.append(step.solve_result.particular)
    logger.info("greedy chain at %s: length %d (%s)", alpha, len(vectors), termination.value)
    return JordanChain(alpha, tuple(vectors), termination)


# -- exhaustive search on the block Toeplitz system --------------------------


def _cleared_det_order(matrix: RatMat, alpha: GaussianRational) -> tuple[MatPoly, int]:
    cleared, _ = clear_denominators_at(matrix, alpha)
    det = bareiss_det(cleared.entries())
    if det.is_zero():
        raise SingularMatrixFunctionError("det Q(z) vanishes identically; chains are unbounded")
    return cleared, det.valuation(alpha)


def _block_toeplitz(derivs: Sequence[ScalarMat], blocks: int) -> ScalarMat:
    n, m = derivs[0].rows, derivs[0].cols
    grid = [[ZERO] * (m * blocks) for _ in range(n * blocks)]
    for bi in range(blocks):
        for bj in range(bi + 1):
            block = derivs[bi - bj].entries
            for r in range(n):
                grid[bi * n + r][bj * m : (bj + 1) * m] = block[r]
    return ScalarMat(grid, cols=m * blocks)


def _split(vector: Sequence[GaussianRational], width: int) -> tuple[Vector, ...]:
    return tuple(tuple(vector[k : k + width]) for k in range(0, len(vector), width))


def _chain_of_length(derivs: Sequence[ScalarMat], length: int) -> Vector | None:
    """A null vector of the length-block system whose leading block is nonzero."""
    width = derivs[0].cols
    for vector in nullspace(_block_toeplitz(derivs, length)):
        if not is_zero_vector(vector[:width]):
            return vector
    return None


def maximal_chain(
    matrix: "RatMat | MatPoly", alpha: Scalar, cross_check: bool | None = None
) -> JordanChain:
    """
    A chain of the greatest possible length over all admissible choices of
    earlier vectors. Lengths are tried up to ord det N + 1, N being Q with its
    denominators cleared, since no partial multiplicity exceeds that order.
    """
    matrix = _as_ratmat(matrix)
    alpha = _gr(alpha)
    _require_square(matrix)
    cleared, bound = _cleared_det_order(matrix, alpha)
    if bound == 0:
        raise NotAnEigenvalueError(f"Q({alpha}) is nonsingular")
    derivs = scaled_derivs_at(matrix, alpha, bound + 1)
    witness: Vector | None = None
    best = 0
    for length in range(1, bound + 2):
        candidate = _chain_of_length(derivs, length)
        if candidate is None:
            break
        witness, best = candidate, length
    if witness is None:
        raise NotAnEigenvalueError(f"Q({alpha}) is nonsingular")

    if Config.CROSS_CHECK if cross_check is None else cross_check:
        multiplicities = local_smith(cleared, alpha)
        if max(multiplicities, default=0) != best:
            logger.error("chain length %d disagrees with local Smith form %s at %s", best, multiplicities, alpha)
            raise JordanKitError(f"maximal chain length {best} disagrees with local Smith form {multiplicities}")
    logger.info("maximal chain at %s: length %d", alpha, best)
    return JordanChain(alpha, _split(witness, matrix.cols), Termination.MAXIMAL)


def max_partial_multiplicity(matrix: "RatMat | MatPoly", alpha: Scalar, cross_check: bool | None = None) -> int:
    return maximal_chain(matrix, alpha, cross_check).length


def canonical_chain(matrix: "RatMat | MatPoly", alpha: Scalar, phi0: Sequence[Scalar]) -> JordanChain:
    """
    Longest chain starting from a given eigenvector. With phi_0 fixed, the
    remaining vectors solve an affine block Toeplitz system.
    """
    matrix = _as_ratmat(matrix)
    alpha = _gr(alpha)
    _require_square(matrix)
    phi0 = as_vector(phi0)
    if len(phi0) != matrix.cols:
        raise DimensionMismatchError(f"phi_0 has {len(phi0)} components, Q has {matrix.cols} columns")
    if is_zero_vector(phi0):
        raise ZeroEigenvectorCandidateError("phi_0 must be nonzero")
    _, bound = _cleared_det_order(matrix, alpha)
    if bound == 0:
        raise NotAnEigenvalueError(f"Q({alpha}) is nonsingular")
    derivs = scaled_derivs_at(matrix, alpha, bound + 1)
    if not is_zero_vector(derivs[0].matvec(phi0)):
        raise NotAnEigenpairError(f"Q({alpha}) phi_0 is not zero")

    vectors: tuple[Vector, ...] = (phi0,)
    for unknowns in range(1, bound + 1):
        rhs: list[GaussianRational] = []
        for i in range(1, unknowns + 1):
            rhs.extend(vec_scale(derivs[i].matvec(phi0), -1))
        result = solve_linear(_block_toeplitz(derivs, unknowns), rhs)
        if not result.consistent:
            break
        vectors = (phi0,) + _split(result.particular, matrix.cols)
    return JordanChain(alpha, vectors, Termination.MAXIMAL)


# -- root functions ----------------------------------------------------------


def build_root_function(chain: JordanChain) -> RootFunction:
    return RootFunction(chain.alpha, chain.vectors)


def product_valuation(
    matrix: "RatMat | MatPoly",
    phi: Sequence[object],
    alpha: Scalar,
    cap: int = Config.ZERO_ORDER_CAP,
) -> int:
    """
    (z - alpha)-valuation of Q(z) phi(z): the minimum over nonzero components,
    ``cap`` when the product vanishes identically. Works at poles too.
    """
    alpha = _gr(alpha)
    product = _as_ratmat(matrix).apply(phi)
    valuations = [f.valuation(alpha) for f in product if not f.is_zero()]
    return min(min(valuations), cap) if valuations else cap


def _functions_of(phi: "RootFunction | Sequence[RatFun]", alpha: Scalar | None) -> tuple[GaussianRational, tuple]:
    if isinstance(phi, RootFunction):
        return phi.alpha, phi.as_functions()
    if alpha is None:
        raise InputError("alpha is required for a plain vector function")
    return _gr(alpha), tuple(phi)


def verify_zero_order(
    matrix: "RatMat | MatPoly",
    phi: "RootFunction | Sequence[RatFun]",
    order: int,
    alpha: Scalar | None = None,
) -> ZeroOrderCheck:
    matrix = _as_ratmat(matrix)
    alpha, functions = _functions_of(phi, alpha)
    functions = tuple(f if isinstance(f, RatFun) else RatFun(f) for f in functions)
    matrix.require_holomorphic(alpha)
    try:
        value = [f.evaluate(alpha) for f in functions]
    except RemovablePointError as exc:
        raise PoleAtPointError(f"vector function is not holomorphic at {alpha}") from exc
    if is_zero_vector(value):
        raise ZeroEigenvectorCandidateError(f"phi({alpha}) = 0")
    exact_order = product_valuation(matrix, functions, alpha)
    logger.debug("Q*phi vanishes to order %d at %s (need %d)", exact_order, alpha, order)
    return ZeroOrderCheck(exact_order >= order, exact_order)


def chain_from_root_function(phi: Sequence[RatFun], alpha: Scalar, length: int) -> JordanChain:
    """Taylor coefficients of phi at alpha as a candidate chain of the given length."""
    alpha = _gr(alpha)
    if length < 1:
        raise InputError(f"chain length must be at least 1, got {length}")
    columns = [f.taylor_coeffs(alpha, length - 1) for f in phi]
    vectors = tuple(tuple(col[s] for col in columns) for s in range(length))
    return JordanChain(alpha, vectors, Termination.ROOT_FUNCTION)


def chain_residuals(matrix: "RatMat | MatPoly", alpha: Scalar, vectors: Sequence[Sequence[Scalar]]) -> list[Vector]:
    """sum_{p<=j} Q^(p)(alpha)/p! phi_{j-p} for every j."""
    vectors = [as_vector(v) for v in vectors]
    derivs = scaled_derivs_at(matrix, alpha, len(vectors))
    residuals = []
    for j in range(len(vectors)):
        total = zero_vector(derivs[0].rows)
        for p in range(j + 1):
            total = vec_add(total, derivs[p].matvec(vectors[j - p]))
        residuals.append(total)
    return residuals


def is_jordan_chain(matrix: "RatMat | MatPoly", alpha: Scalar, vectors: Sequence[Sequence[Scalar]]) -> bool:
    if not vectors or is_zero_vector(as_vector(vectors[0])):
        return False
    return all(is_zero_vector(r) for r in chain_residuals(matrix, alpha, vectors))


# -- floating-point chains ---------------------------------------------------


def _complex_taylor(f: RatFun, alpha: complex, count: int) -> list[complex]:
    def shifted(poly: Poly) -> list[complex]:
        coeffs = np.array(poly.complex_coeffs() or [0j], dtype=np.complex128)
        out = []
        for p in range(count):
            derived = np.polynomial.polynomial.polyder(coeffs, p) if p else coeffs
            out.append(complex(np.polynomial.polynomial.polyval(alpha, derived)) / math.factorial(p))
        return out

    a, b = shifted(f.num), shifted(f.den)
    if abs(b[0]) == 0:
        raise PoleAtPointError(f"pole at {alpha}")
    c: list[complex] = []
    for p in range(count):
        c.append((a[p] - sum(b[q] * c[p - q] for q in range(1, p + 1))) / b[0])
    return c


def numeric_chain(
    matrix: "RatMat | MatPoly",
    alpha: complex,
    max_len: int = Config.MAX_LEN,
    settings: NumericSettings = DEFAULT_SETTINGS,
) -> NumericChain:
    """
    Greedy chain at a floating eigenvalue. Rank decisions use the singular
    values of Q(alpha) against ``settings.rank_threshold``.
    """
    matrix = _as_ratmat(matrix)
    _require_square(matrix)
    if max_len < 1:
        raise InputError(f"max_len must be at least 1, got {max_len}")
    n = matrix.rows
    expansions = [[_complex_taylor(f, alpha, max_len) for f in row] for row in matrix.entries]
    derivs = [np.array([[cell[p] for cell in row] for row in expansions], dtype=np.complex128) for p in range(max_len)]
    u, singular, vh = np.linalg.svd(derivs[0])
    threshold = settings.rank_threshold * (max(1.0, float(singular[0])) if singular.size else 1.0)
    rank = int(np.sum(singular > threshold))
    if rank == n:
        raise NotAnEigenvalueError(f"Q({alpha:.6g}) is numerically nonsingular")
    # pseudo-inverse restricted to the numerically nonzero singular values
    inverse = np.where(singular > threshold, 1.0 / np.where(singular > threshold, singular, 1.0), 0.0)
    pseudo = vh.conj().T @ np.diag(inverse) @ u.conj().T
    vectors = [vh[rank].conj()]
    termination = Termination.MAX_LEN
    while len(vectors) < max_len:
        j = len(vectors)
        rhs = -sum(derivs[p] @ vectors[j - p] for p in range(1, j + 1))
        solution = pseudo @ rhs
        if np.linalg.norm(derivs[0] @ solution - rhs) > threshold * max(1.0, float(np.linalg.norm(rhs))):
            termination = Termination.INCONSISTENT
            break
        vectors.append(solution)
    logger.info("numeric chain at %s: length %d", alpha, len(vectors))
    return NumericChain(complex(alpha), tuple(tuple(complex(x) for x in v) for v in vectors), termination)
