"""
Matrices over the rational-function field, scalar matrices over the Gaussian
rationals and matrix polynomials, with exact determinants, exact linear solves
and the local Smith form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import ONE, ZERO, GaussianRational, Poly, RatFun, Scalar, _gr
from .errors import (
    DimensionMismatchError,
    EntryPoleError,
    NonSquareError,
    NotPolynomialError,
    PoleAtPointError,
    RemovablePointError,
    SingularMatrixFunctionError,
)
from .utils import get_logger

logger = get_logger("ratmat")

Vector = tuple[GaussianRational, ...]


def as_vector(values: Iterable[Scalar]) -> Vector:
    return tuple(_gr(v) for v in values)


def zero_vector(size: int) -> Vector:
    return (ZERO,) * size


def vec_add(u: Sequence[GaussianRational], v: Sequence[GaussianRational]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_scale(u: Sequence[GaussianRational], factor: Scalar) -> Vector:
    factor = _gr(factor)
    return tuple(a * factor for a in u)


def is_zero_vector(u: Sequence[GaussianRational]) -> bool:
    return not any(u)


def _shape_of(entries: Sequence[Sequence[object]], cols: int | None) -> tuple[int, int]:
    rows = len(entries)
    width = len(entries[0]) if rows else (cols or 0)
    for index, row in enumerate(entries):
        if len(row) != width:
            raise DimensionMismatchError(f"row {index + 1} has {len(row)} entries, expected {width}")
    return rows, width


class ScalarMat:
    """Dense matrix of Gaussian rationals."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[Scalar]], cols: int | None = None) -> None:
        rows, width = _shape_of(entries, cols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "entries", tuple(tuple(_gr(x) for x in row) for row in entries))

    def __setattr__(self, name, value):
        raise AttributeError("ScalarMat is immutable")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ScalarMat":
        return cls([[ZERO] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, size: int) -> "ScalarMat":
        return cls([[ONE if i == j else ZERO for j in range(size)] for i in range(size)], cols=size)

    def __getitem__(self, index: tuple[int, int]) -> GaussianRational:
        i, j = index
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarMat):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.entries)

    def _check_same_shape(self, other: "ScalarMat") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError(f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __add__(self, other: "ScalarMat") -> "ScalarMat":
        self._check_same_shape(other)
        return ScalarMat([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], cols=self.cols)

    def __sub__(self, other: "ScalarMat") -> "ScalarMat":
        self._check_same_shape(other)
        return ScalarMat([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], cols=self.cols)

    def __neg__(self) -> "ScalarMat":
        return self.scale(-1)

    def scale(self, factor: Scalar) -> "ScalarMat":
        factor = _gr(factor)
        return ScalarMat([[a * factor for a in row] for row in self.entries], cols=self.cols)

    def __mul__(self, other):
        if isinstance(other, (GaussianRational, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, ScalarMat):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        columns = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return ScalarMat(
            [[sum((a * b for a, b in zip(row, col)), ZERO) for col in columns] for row in self.entries],
            cols=other.cols,
        )

    def __rmul__(self, other):
        if isinstance(other, (GaussianRational, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def matvec(self, vector: Sequence[Scalar]) -> Vector:
        if len(vector) != self.cols:
            raise DimensionMismatchError(f"vector of length {len(vector)} for a matrix with {self.cols} columns")
        vector = as_vector(vector)
        return tuple(sum((a * x for a, x in zip(row, vector)), ZERO) for row in self.entries)

    def format(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries) + "]"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"ScalarMat({self.format()})"


def _ratfun(value) -> RatFun:
    if isinstance(value, RatFun):
        return value
    if isinstance(value, Poly):
        return RatFun.from_poly(value)
    return RatFun.constant(value)


class RatMat:
    """Matrix whose entries are normalized rational functions of z."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[object]], cols: int | None = None) -> None:
        rows, width = _shape_of(entries, cols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "entries", tuple(tuple(_ratfun(x) for x in row) for row in entries))

    def __setattr__(self, name, value):
        raise AttributeError("RatMat is immutable")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMat":
        return cls([[RatFun()] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, size: int) -> "RatMat":
        return cls([[RatFun.constant(1 if i == j else 0) for j in range(size)] for i in range(size)], cols=size)

    @classmethod
    def from_scalar(cls, matrix: ScalarMat) -> "RatMat":
        return cls(matrix.entries, cols=matrix.cols)

    def __getitem__(self, index: tuple[int, int]) -> RatFun:
        i, j = index
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMat):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_polynomial(self) -> bool:
        return all(f.is_polynomial() for row in self.entries for f in row)

    def _check_same_shape(self, other: "RatMat") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError(f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __add__(self, other: "RatMat") -> "RatMat":
        self._check_same_shape(other)
        return RatMat([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], cols=self.cols)

    def __sub__(self, other: "RatMat") -> "RatMat":
        self._check_same_shape(other)
        return RatMat([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], cols=self.cols)

    def scale(self, factor) -> "RatMat":
        factor = _ratfun(factor)
        return RatMat([[a * factor for a in row] for row in self.entries], cols=self.cols)

    def __mul__(self, other):
        if isinstance(other, (RatFun, Poly, GaussianRational, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, RatMat):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        columns = list(zip(*other.entries))
        return RatMat(
            [[sum((a * b for a, b in zip(row, col)), RatFun()) for col in columns] for row in self.entries],
            cols=other.cols,
        )

    def __rmul__(self, other):
        if isinstance(other, (RatFun, Poly, GaussianRational, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def apply(self, vector: Sequence[object]) -> tuple[RatFun, ...]:
        """Matrix times a vector of rational functions."""
        if len(vector) != self.cols:
            raise DimensionMismatchError(f"vector of length {len(vector)} for a matrix with {self.cols} columns")
        vector = [_ratfun(v) for v in vector]
        return tuple(sum((a * v for a, v in zip(row, vector)), RatFun()) for row in self.entries)

    def transpose(self) -> "RatMat":
        return RatMat([list(col) for col in zip(*self.entries)], cols=self.rows)

    def evaluate(self, alpha: Scalar) -> ScalarMat:
        return mat_eval(self, alpha)

    def derivative(self, times: int = 1) -> "RatMat":
        return mat_derivative(self, times)

    def common_denominator(self) -> Poly:
        d = Poly.one()
        for row in self.entries:
            for f in row:
                if f.den.degree > 0:
                    d = d.lcm(f.den)
        return d

    def entry_pole_order(self, alpha: Scalar) -> int:
        """Largest pole order of any entry at alpha (0 at a holomorphy point)."""
        return max((f.den.valuation(alpha) for row in self.entries for f in row), default=0)

    def require_holomorphic(self, alpha: Scalar) -> None:
        alpha = _gr(alpha)
        for i, row in enumerate(self.entries):
            for j, f in enumerate(row):
                if not f.den(alpha):
                    raise EntryPoleError(i + 1, j + 1, alpha)

    def taylor_matrices(self, alpha: Scalar, count: int) -> list[ScalarMat]:
        """
        Q^(p)(alpha)/p! for p = 0..count-1, read off the local expansion of
        every entry.
        """
        alpha = _gr(alpha)
        if count <= 0:
            return []
        expansions = []
        for i, row in enumerate(self.entries):
            expanded_row = []
            for j, f in enumerate(row):
                try:
                    expanded_row.append(f.taylor_coeffs(alpha, count - 1))
                except (PoleAtPointError, RemovablePointError) as exc:
                    raise EntryPoleError(i + 1, j + 1, alpha) from exc
            expansions.append(expanded_row)
        return [
            ScalarMat([[cell[p] for cell in row] for row in expansions], cols=self.cols)
            for p in range(count)
        ]

    def format(self, var: str = "z") -> list[list[str]]:
        return [[f.format(var) for f in row] for row in self.entries]

    def __repr__(self) -> str:
        return f"RatMat({self.format()})"


class MatPoly:
    """
    Matrix polynomial L(z) = A_0 + A_1 z + ... + A_l z^l, coefficient matrices
    in ascending order.
    """

    __slots__ = ("coeff_mats",)

    def __init__(self, coeff_mats: Sequence[ScalarMat]) -> None:
        mats = list(coeff_mats)
        if not mats:
            raise DimensionMismatchError("a matrix polynomial needs at least one coefficient matrix")
        shape = (mats[0].rows, mats[0].cols)
        for index, mat in enumerate(mats):
            if (mat.rows, mat.cols) != shape:
                raise DimensionMismatchError(f"coefficient A_{index} is {mat.rows}x{mat.cols}, expected {shape[0]}x{shape[1]}")
        while len(mats) > 1 and mats[-1].is_zero():
            mats.pop()
        object.__setattr__(self, "coeff_mats", tuple(mats))

    def __setattr__(self, name, value):
        raise AttributeError("MatPoly is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeff_mats) - 1

    @property
    def rows(self) -> int:
        return self.coeff_mats[0].rows

    @property
    def cols(self) -> int:
        return self.coeff_mats[0].cols

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatPoly):
            return NotImplemented
        return self.coeff_mats == other.coeff_mats

    def __hash__(self) -> int:
        return hash(self.coeff_mats)

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[Poly]]) -> "MatPoly":
        rows, cols = _shape_of(entries, None)
        degree = max((p.degree for row in entries for p in row), default=0)
        degree = max(degree, 0)
        mats = []
        for k in range(degree + 1):
            mats.append(
                ScalarMat(
                    [[p.coeffs[k] if k < len(p.coeffs) else ZERO for p in row] for row in entries],
                    cols=cols,
                )
            )
        return cls(mats)

    @classmethod
    def from_ratmat(cls, matrix: RatMat) -> "MatPoly":
        for i, row in enumerate(matrix.entries):
            for j, f in enumerate(row):
                if not f.is_polynomial():
                    raise NotPolynomialError(f"entry ({i + 1}, {j + 1}) = {f} is not a polynomial")
        return cls.from_entries([[f.num for f in row] for row in matrix.entries])

    def entries(self) -> list[list[Poly]]:
        return [
            [Poly(mat.entries[i][j] for mat in self.coeff_mats) for j in range(self.cols)]
            for i in range(self.rows)
        ]

    def to_ratmat(self) -> RatMat:
        return RatMat(self.entries(), cols=self.cols)

    def evaluate(self, alpha: Scalar) -> ScalarMat:
        alpha = _gr(alpha)
        acc = ScalarMat.zeros(self.rows, self.cols)
        for mat in reversed(self.coeff_mats):
            acc = acc.scale(alpha) + mat
        return acc

    def derivative(self, times: int = 1) -> "MatPoly":
        entries = [[p.derivative(times) for p in row] for row in self.entries()]
        return MatPoly.from_entries(entries)

    def __repr__(self) -> str:
        return f"MatPoly(degree={self.degree}, size={self.rows}x{self.cols})"


@dataclass(frozen=True)
class LinSolveResult:
    """
    Outcome of M x = rhs: consistency, rank, the particular solution with free
    variables set to zero, and a nullspace basis ordered by free variable.
    """

    consistent: bool
    rank: int
    particular: Vector | None
    nullspace_basis: tuple[Vector, ...]
    pivots: tuple[int, ...] = ()


def mat_eval(matrix: RatMat, alpha: Scalar) -> ScalarMat:
    alpha = _gr(alpha)
    values = []
    for i, row in enumerate(matrix.entries):
        current = []
        for j, f in enumerate(row):
            try:
                current.append(f.evaluate(alpha))
            except (PoleAtPointError, RemovablePointError) as exc:
                raise EntryPoleError(i + 1, j + 1, alpha) from exc
        values.append(current)
    return ScalarMat(values, cols=matrix.cols)


def mat_derivative(matrix: RatMat, times: int) -> RatMat:
    if times < 0:
        raise ValueError("derivative order must be non-negative")
    if times == 0:
        return matrix
    return RatMat([[f.derivative(times) for f in row] for row in matrix.entries], cols=matrix.cols)


def bareiss_det(grid: Sequence[Sequence[Poly]]) -> Poly:
    """
    Fraction-free elimination on a square polynomial matrix; every division is
    exact.
    """
    a = [list(row) for row in grid]
    n = len(a)
    if n == 0:
        return Poly.one()
    negate = False
    previous = Poly.one()
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return Poly()
            a[k], a[swap] = a[swap], a[k]
            negate = not negate
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]).exact_div(previous)
        previous = pivot
    det = a[n - 1][n - 1]
    return -det if negate else det


def determinant(matrix: RatMat) -> RatFun:
    """
    Clear each row by the lcm of its denominators, run Bareiss on the
    polynomial matrix and divide by the product of the row multipliers.
    """
    if not matrix.is_square():
        raise NonSquareError(f"determinant of a {matrix.rows}x{matrix.cols} matrix")
    grid = []
    multiplier = Poly.one()
    for row in matrix.entries:
        row_lcm = Poly.one()
        for f in row:
            if f.den.degree > 0:
                row_lcm = row_lcm.lcm(f.den)
        grid.append([f.num * row_lcm.exact_div(f.den) for f in row])
        multiplier = multiplier * row_lcm
    return RatFun(bareiss_det(grid), multiplier)


def solve_linear(matrix: ScalarMat, rhs: Sequence[Scalar]) -> LinSolveResult:
    """
    Exact reduced row echelon solve; the pivot is the first nonzero entry in
    column order.
    """
    if len(rhs) != matrix.rows:
        raise DimensionMismatchError(f"right-hand side of length {len(rhs)} for {matrix.rows} equations")
    rows, cols = matrix.rows, matrix.cols
    aug = [list(matrix.entries[i]) + [_gr(rhs[i])] for i in range(rows)]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot_row = next((i for i in range(r, rows) if aug[i][c]), None)
        if pivot_row is None:
            continue
        aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
        inverse = ONE / aug[r][c]
        aug[r] = [x * inverse for x in aug[r]]
        for i in range(rows):
            factor = aug[i][c]
            if i != r and factor:
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    rank = r
    consistent = all(not aug[i][cols] for i in range(rank, rows))
    particular = None
    if consistent:
        x = [ZERO] * cols
        for row_index, c in enumerate(pivots):
            x[c] = aug[row_index][cols]
        particular = tuple(x)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v = [ZERO] * cols
        v[free] = ONE
        for row_index, c in enumerate(pivots):
            v[c] = -aug[row_index][free]
        basis.append(tuple(v))
    return LinSolveResult(consistent, rank, particular, tuple(basis), tuple(pivots))


def nullspace(matrix: ScalarMat) -> tuple[Vector, ...]:
    return solve_linear(matrix, zero_vector(matrix.rows)).nullspace_basis


def clear_denominators(matrix: RatMat) -> tuple[MatPoly, Poly]:
    """N, d with Q = N / d entrywise and d the monic lcm of all denominators."""
    d = matrix.common_denominator()
    entries = [[f.num * d.exact_div(f.den) for f in row] for row in matrix.entries]
    return MatPoly.from_entries(entries), d


def clear_denominators_at(matrix: RatMat, alpha: Scalar) -> tuple[MatPoly, Poly]:
    alpha = _gr(alpha)
    matrix.require_holomorphic(alpha)
    return clear_denominators(matrix)


def smith_diagonal(grid: Sequence[Sequence[Poly]]) -> list[Poly]:
    """
    Invariant factors of a polynomial matrix by gcd-driven elementary row and
    column operations. Zero invariant factors are returned as the zero polynomial.
    """
    a = [list(row) for row in grid]
    n = len(a)
    m = len(a[0]) if n else 0
    diagonal: list[Poly] = []
    for t in range(min(n, m)):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, m):
                    if a[i][j] and (best is None or a[i][j].degree < a[best[0]][best[1]].degree):
                        best = (i, j)
            if best is None:
                diagonal.extend(Poly() for _ in range(min(n, m) - t))
                return diagonal
            bi, bj = best
            a[t], a[bi] = a[bi], a[t]
            for row in a:
                row[t], row[bj] = row[bj], row[t]
            pivot = a[t][t]
            clean = True
            for i in range(t + 1, n):
                if a[i][t]:
                    q, r = divmod(a[i][t], pivot)
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    clean = clean and r.is_zero()
            for j in range(t + 1, m):
                if a[t][j]:
                    q, r = divmod(a[t][j], pivot)
                    for i in range(t, n):
                        a[i][j] = a[i][j] - q * a[i][t]
                    clean = clean and r.is_zero()
            if not clean:
                continue
            offender = next(
                (i for i in range(t + 1, n) for j in range(t + 1, m) if a[i][j] % pivot),
                None,
            )
            if offender is None:
                break
            logger.debug("Smith step %d: folding row %d into the pivot row", t, offender)
            a[t] = [x + y for x, y in zip(a[t], a[offender])]
        diagonal.append(a[t][t].monic())
    return diagonal


def local_smith(matrix: "MatPoly | RatMat", alpha: Scalar) -> tuple[int, ...]:
    """
    Partial multiplicities at alpha: the positive (z - alpha)-valuations of the
    invariant factors, ascending.
    """
    alpha = _gr(alpha)
    if isinstance(matrix, RatMat):
        matrix = MatPoly.from_ratmat(matrix)
    if matrix.rows != matrix.cols:
        raise NonSquareError(f"local Smith form of a {matrix.rows}x{matrix.cols} matrix")
    grid = matrix.entries()
    if bareiss_det(grid).is_zero():
        raise SingularMatrixFunctionError("det N vanishes identically")
    valuations = (p.valuation(alpha) for p in smith_diagonal(grid))
    return tuple(sorted(v for v in valuations if v > 0))


def local_exponents(matrix: RatMat, alpha: Scalar) -> tuple[int, ...]:
    """
    Exponents of (z - alpha) in the local Smith-McMillan form of Q, ascending.
    Negative exponents are poles and positive ones zeros; both may occur at
    the same point.
    """
    alpha = _gr(alpha)
    if not matrix.is_square():
        raise NonSquareError(f"local Smith-McMillan form of a {matrix.rows}x{matrix.cols} matrix")
    cleared, d = clear_denominators(matrix)
    grid = cleared.entries()
    if bareiss_det(grid).is_zero():
        raise SingularMatrixFunctionError("det Q vanishes identically")
    shift = d.valuation(alpha)
    return tuple(sorted(f.valuation(alpha) - shift for f in smith_diagonal(grid)))
