"""Small constructors shared by the test modules."""

from fractions import Fraction

import sympy

from jordankit.algebra import GaussianRational, Poly, RatFun
from jordankit.parser import parse_ratfun
from jordankit.ratmat import RatMat, ScalarMat


def gr(re, im=0):
    return GaussianRational(Fraction(re), Fraction(im))


def vec(*values):
    return tuple(gr(v) for v in values)


def poly(*coeffs):
    """Ascending coefficients."""
    return Poly(coeffs)


def rf(text, var="z"):
    return parse_ratfun(text, var)


def rmat(grid, var="z"):
    return RatMat([[parse_ratfun(cell, var) for cell in row] for row in grid])


def smat(grid):
    return ScalarMat([[gr(x) for x in row] for row in grid])


def linear_power(alpha, k):
    return Poly.linear(alpha) ** k


def to_sympy_scalar(c):
    return sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)


def to_sympy(f, symbol):
    if isinstance(f, Poly):
        return sum((to_sympy_scalar(c) * symbol**k for k, c in enumerate(f.coeffs)), sympy.Integer(0))
    return to_sympy(f.num, symbol) / to_sympy(f.den, symbol)


def sympy_equal(f, expr, symbol):
    return sympy.cancel(to_sympy(f, symbol) - expr) == 0


def ratfun_of(num, den=None):
    return RatFun(num, den)
