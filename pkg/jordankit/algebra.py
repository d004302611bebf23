"""
Exact arithmetic kernel: Gaussian-rational scalars, dense univariate
polynomials and reduced rational functions.

All values are immutable; every operation returns a new canonical object, so
structural equality is mathematical equality.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence, Union

from .errors import (
    DivisionByZeroFunctionError,
    DivisionByZeroPolyError,
    PoleAtPointError,
    RemovablePointError,
    ZeroPolynomialError,
)


class GaussianRational:
    """
    Complex number with exact rational real and imaginary parts.

    ``Fraction`` keeps each part with a positive denominator coprime to its
    numerator, which makes the representation unique.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: "int | Fraction | str" = 0, im: "int | Fraction | str" = 0) -> None:
        if isinstance(re, float) or isinstance(im, float):
            raise TypeError("GaussianRational takes exact values only, not floats")
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, value: "Scalar") -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, (GaussianRational, int, Fraction)):
            return NotImplemented
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (GaussianRational, int, Fraction)):
            return NotImplemented
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        if not isinstance(other, (GaussianRational, int, Fraction)):
            return NotImplemented
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (GaussianRational, int, Fraction)):
            return NotImplemented
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (GaussianRational, int, Fraction)):
            return NotImplemented
        other = GaussianRational.coerce(other)
        norm = other.norm()
        if norm == 0:
            raise ZeroDivisionError("division by the zero scalar")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def __rtruediv__(self, other):
        if not isinstance(other, (GaussianRational, int, Fraction)):
            return NotImplemented
        return GaussianRational.coerce(other) / self

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __pos__(self) -> "GaussianRational":
        return self

    def __pow__(self, exponent: int) -> "GaussianRational":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return ONE / (self ** -exponent)
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # comparisons and conversions

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "-" if self.im < 0 else "+"
        return f"{self.re} {sign} {abs(self.im)}i"

    def __repr__(self) -> str:
        return f"GaussianRational({self.re}, {self.im})"


Scalar = Union[GaussianRational, int, Fraction]

ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def _gr(value: Scalar) -> GaussianRational:
    return value if isinstance(value, GaussianRational) else GaussianRational.coerce(value)


def _synthetic_division(coeffs: Sequence[GaussianRational], alpha: GaussianRational):
    """
    Divide the ascending coefficient list by (z - alpha).

    Returns (quotient coefficients, remainder).
    """
    if not coeffs:
        return [], ZERO
    quotient = [ZERO] * (len(coeffs) - 1)
    carry = coeffs[-1]
    for k in range(len(coeffs) - 2, -1, -1):
        quotient[k] = carry
        carry = coeffs[k] + alpha * carry
    return quotient, carry


class Poly:
    """
    Dense univariate polynomial, coefficients in ascending degree.

    The zero polynomial is the empty coefficient tuple and has degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()) -> None:
        items = [_gr(c) for c in coeffs]
        while items and not items[-1]:
            items.pop()
        object.__setattr__(self, "coeffs", tuple(items))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # constructors

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def one(cls) -> "Poly":
        return cls((ONE,))

    @classmethod
    def constant(cls, value: Scalar) -> "Poly":
        return cls((value,))

    @classmethod
    def monomial(cls, degree: int, coefficient: Scalar = 1) -> "Poly":
        return cls([ZERO] * degree + [_gr(coefficient)])

    @classmethod
    def variable(cls) -> "Poly":
        return cls((ZERO, ONE))

    @classmethod
    def linear(cls, alpha: Scalar) -> "Poly":
        """The monic factor (z - alpha)."""
        return cls((-_gr(alpha), ONE))

    # structure

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> GaussianRational:
        return self.coeffs[-1] if self.coeffs else ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_real(self) -> bool:
        return all(c.im == 0 for c in self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (GaussianRational, int, Fraction)):
            return self.coeffs == Poly.constant(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # ring operations

    @staticmethod
    def _lift(value) -> "Poly | None":
        if isinstance(value, Poly):
            return value
        if isinstance(value, (GaussianRational, int, Fraction)):
            return Poly.constant(value)
        return None

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __add__(self, other):
        other = Poly._lift(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __sub__(self, other):
        other = Poly._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = Poly._lift(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (GaussianRational, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if not x:
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] = out[i + j] + x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result, base = Poly.one(), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, factor: Scalar) -> "Poly":
        factor = _gr(factor)
        if not factor:
            return Poly()
        return Poly(c * factor for c in self.coeffs)

    def __divmod__(self, other: "Poly"):
        other = Poly._lift(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZeroPolyError("polynomial division by the zero polynomial")
        remainder = list(self.coeffs)
        divisor = other.coeffs
        shift = len(remainder) - len(divisor)
        if shift < 0:
            return Poly(), self
        quotient = [ZERO] * (shift + 1)
        lead = divisor[-1]
        for k in range(shift, -1, -1):
            factor = remainder[k + len(divisor) - 1] / lead
            quotient[k] = factor
            if factor:
                for i, d in enumerate(divisor):
                    remainder[k + i] = remainder[k + i] - factor * d
        return Poly(quotient), Poly(remainder[: len(divisor) - 1])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        quotient, remainder = divmod(self, other)
        if remainder:
            raise ArithmeticError(f"{other} does not divide {self}")
        return quotient

    def monic(self) -> "Poly":
        if not self.coeffs or self.lc == ONE:
            return self
        return self.scale(ONE / self.lc)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def lcm(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly()
        return (self * other).exact_div(self.gcd(other)).monic()

    # calculus and evaluation

    def derivative(self, times: int = 1) -> "Poly":
        coeffs = list(self.coeffs)
        for _ in range(times):
            coeffs = [c * k for k, c in enumerate(coeffs)][1:]
        return Poly(coeffs)

    def __call__(self, point: Scalar) -> GaussianRational:
        point = _gr(point)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def evaluate_complex(self, point: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * point + complex(c)
        return acc

    def complex_coeffs(self) -> list[complex]:
        return [complex(c) for c in self.coeffs]

    def deflate(self, alpha: Scalar) -> tuple["Poly", GaussianRational]:
        """Quotient and remainder of division by (z - alpha)."""
        quotient, remainder = _synthetic_division(self.coeffs, _gr(alpha))
        return Poly(quotient), remainder

    def taylor_shift(self, alpha: Scalar) -> "Poly":
        """
        Coefficients of p(alpha + w) as a polynomial in w, by repeated
        synthetic division; coefficient j equals p^(j)(alpha) / j!.
        """
        alpha = _gr(alpha)
        coeffs = list(self.coeffs)
        out = []
        while coeffs:
            coeffs, remainder = _synthetic_division(coeffs, alpha)
            out.append(remainder)
        return Poly(out)

    def valuation(self, alpha: Scalar) -> int:
        """Multiplicity of (z - alpha) as a factor."""
        if self.is_zero():
            raise ZeroPolynomialError("the zero polynomial has infinite valuation")
        alpha = _gr(alpha)
        coeffs = list(self.coeffs)
        order = 0
        while True:
            quotient, remainder = _synthetic_division(coeffs, alpha)
            if remainder:
                return order
            coeffs = quotient
            order += 1

    def conjugate(self) -> "Poly":
        return Poly(c.conjugate() for c in self.coeffs)

    def squarefree_factors(self) -> list[tuple["Poly", int]]:
        """
        Yun's decomposition: self = lc * prod(f_i ** i) with every f_i monic,
        squarefree and pairwise coprime. Constants give an empty list.
        """
        if self.degree < 1:
            return []
        f = self.monic()
        df = f.derivative()
        a = f.gcd(df)
        b = f.exact_div(a)
        d = df.exact_div(a) - b.derivative()
        factors = []
        multiplicity = 1
        while b.degree >= 1:
            a = b.gcd(d)
            b = b.exact_div(a)
            d = d.exact_div(a) - b.derivative()
            if a.degree >= 1:
                factors.append((a, multiplicity))
            multiplicity += 1
        return factors

    # rendering

    def format(self, var: str = "z") -> str:
        if not self.coeffs:
            return "0"
        terms = [_format_term(c, k, var) for k, c in enumerate(self.coeffs) if c]
        text = terms[0]
        for term in terms[1:]:
            text += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return text

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Poly({self.format()})"


def _format_term(c: GaussianRational, k: int, var: str) -> str:
    if k == 0:
        return str(c) if c.is_real() else f"({c})"
    mono = var if k == 1 else f"{var}^{k}"
    if c == 1:
        return mono
    if c == -1:
        return f"-{mono}"
    if c.is_real():
        return f"{c}*{mono}"
    return f"({c})*{mono}"


def poly_arith(a: Poly, b: Poly, op: str):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "divrem":
        return divmod(a, b)
    if op == "gcd":
        return a.gcd(b)
    raise ValueError(f"unknown polynomial operation '{op}'")


class RatFun:
    """
    Reduced rational function num/den: gcd(num, den) = 1, den monic, and the
    zero function stored as 0/1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: "Poly | Scalar" = 0, den: "Poly | Scalar | None" = None) -> None:
        num = num if isinstance(num, Poly) else Poly.constant(num)
        den = Poly.one() if den is None else (den if isinstance(den, Poly) else Poly.constant(den))
        num, den = _normalize(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFun is immutable")

    @classmethod
    def _reduced(cls, num: Poly, den: Poly) -> "RatFun":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "num", num)
        object.__setattr__(obj, "den", den)
        return obj

    @classmethod
    def variable(cls) -> "RatFun":
        return cls._reduced(Poly.variable(), Poly.one())

    @classmethod
    def constant(cls, value: Scalar) -> "RatFun":
        return cls._reduced(Poly.constant(value), Poly.one())

    @classmethod
    def from_poly(cls, poly: Poly) -> "RatFun":
        return cls._reduced(poly, Poly.one())

    # structure

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.is_polynomial() and self.num.is_constant()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFun):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (Poly, GaussianRational, int, Fraction)):
            return self == RatFun(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # field operations

    @staticmethod
    def _lift(value) -> "RatFun | None":
        if isinstance(value, RatFun):
            return value
        if isinstance(value, Poly):
            return RatFun.from_poly(value)
        if isinstance(value, (GaussianRational, int, Fraction)):
            return RatFun.constant(value)
        return None

    def __neg__(self) -> "RatFun":
        return RatFun._reduced(-self.num, self.den)

    def __add__(self, other):
        other = RatFun._lift(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = RatFun._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = RatFun._lift(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = RatFun._lift(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RatFun()
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RatFun._lift(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZeroFunctionError("division by the zero function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = RatFun._lift(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int) -> "RatFun":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            if self.is_zero():
                raise DivisionByZeroFunctionError("negative power of the zero function")
            return RatFun(self.den ** -exponent, self.num ** -exponent)
        return RatFun._reduced(self.num ** exponent, self.den ** exponent)

    # calculus and evaluation

    def derivative(self, times: int = 1) -> "RatFun":
        result = self
        for _ in range(times):
            num, den = result.num, result.den
            if den.degree == 0:
                result = RatFun._reduced(num.derivative(), den)
            else:
                result = RatFun(num.derivative() * den - num * den.derivative(), den * den)
        return result

    def __call__(self, point: Scalar) -> GaussianRational:
        return self.evaluate(point)

    def evaluate(self, point: Scalar) -> GaussianRational:
        point = _gr(point)
        den = self.den(point)
        num = self.num(point)
        if not den:
            if not num:
                raise RemovablePointError(f"{self} is 0/0 at {point}")
            raise PoleAtPointError(f"{self} has a pole at {point}")
        return num / den

    def evaluate_complex(self, point: complex) -> complex:
        den = self.den.evaluate_complex(point)
        if den == 0:
            raise PoleAtPointError(f"{self} has a pole at {point}")
        return self.num.evaluate_complex(point) / den

    def taylor_coeffs(self, alpha: Scalar, order: int) -> list[GaussianRational]:
        """
        c_0..c_order with f(z) = sum c_j (z - alpha)^j + O((z - alpha)^(order+1)).
        """
        alpha = _gr(alpha)
        num = self.num.taylor_shift(alpha).coeffs
        den = self.den.taylor_shift(alpha).coeffs
        if not den[0]:
            if not num or not num[0]:
                raise RemovablePointError(f"{self} is 0/0 at {alpha}")
            raise PoleAtPointError(f"{self} has a pole at {alpha}")
        lead = den[0]
        out: list[GaussianRational] = []
        for j in range(order + 1):
            acc = num[j] if j < len(num) else ZERO
            for i in range(1, min(j, len(den) - 1) + 1):
                acc = acc - den[i] * out[j - i]
            out.append(acc / lead)
        return out

    def derivative_at(self, alpha: Scalar, times: int) -> GaussianRational:
        return self.taylor_coeffs(alpha, times)[times] * factorial(times)

    def valuation(self, alpha: Scalar) -> int | None:
        """(z - alpha)-adic valuation; None for the zero function."""
        if self.is_zero():
            return None
        return self.num.valuation(alpha) - self.den.valuation(alpha)

    def pole_order(self, alpha: Scalar) -> int:
        return self.den.valuation(alpha)

    # rendering

    def format(self, var: str = "z") -> str:
        num = self.num.format(var)
        if self.den.degree == 0:
            return num
        den = self.den.format(var)
        if " " in num:
            num = f"({num})"
        if " " in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"RatFun({self.format()})"


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if den.is_zero():
        raise DivisionByZeroPolyError("rational function with zero denominator")
    if num.is_zero():
        return Poly(), Poly.one()
    if den.degree > 0:
        common = num.gcd(den)
        if common.degree > 0:
            num = num.exact_div(common)
            den = den.exact_div(common)
    lead = den.lc
    if lead != ONE:
        num = num.scale(ONE / lead)
        den = den.scale(ONE / lead)
    return num, den


def ratfun_normalize(num: Poly, den: Poly) -> RatFun:
    return RatFun(num, den)


def ratfun_arith(a: RatFun, b: RatFun, op: str) -> RatFun:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown rational function operation '{op}'")
