import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from jordankit.algebra import GaussianRational, Poly, RatFun, poly_arith, ratfun_arith, ratfun_normalize
from jordankit.errors import (
    DivisionByZeroFunctionError,
    DivisionByZeroPolyError,
    PoleAtPointError,
    ZeroPolynomialError,
)

from helpers import gr, poly, rf, to_sympy
from strategies import gaussian_rationals, nonzero_polys, polys, ratfuns, real_rationals, safe_ratfuns

z = sympy.Symbol("z")


# -- scalars -----------------------------------------------------------------


def test_gaussian_rational_arithmetic():
    a = GaussianRational(1, 2)
    b = GaussianRational(Fraction(1, 2), -1)
    assert a + b == GaussianRational(Fraction(3, 2), 1)
    assert a * b == GaussianRational(Fraction(5, 2), 0)
    assert (a / b) * b == a
    assert a**-1 * a == 1
    assert a.conjugate() == GaussianRational(1, -2)
    assert a.norm() == 5


def test_gaussian_rational_rendering():
    assert str(gr(Fraction(3, 2))) == "3/2"
    assert str(GaussianRational(1, -2)) == "1 - 2i"
    assert str(GaussianRational(0, Fraction(1, 3))) == "1/3i"
    assert str(gr(-1)) == "-1"


def test_gaussian_rational_rejects_floats():
    with pytest.raises(TypeError):
        GaussianRational(0.5)


def test_gaussian_rational_is_immutable():
    with pytest.raises(AttributeError):
        gr(1).re = 2


@given(gaussian_rationals, gaussian_rationals)
def test_scalar_division_inverts_multiplication(a, b):
    if b:
        assert (a * b) / b == a


# -- polynomials -------------------------------------------------------------


def test_poly_normalizes_trailing_zeros():
    assert Poly((1, 2, 0, 0)) == Poly((1, 2))
    assert Poly((0, 0)).is_zero()
    assert Poly().degree == -1


def test_poly_division_and_gcd():
    p = poly(-1, 0, 1)  # z^2 - 1
    q, r = divmod(p, poly(-1, 1))
    assert q == poly(1, 1)
    assert r.is_zero()
    assert p.gcd(poly(2, 2)) == poly(1, 1)
    assert poly(-1, 1).lcm(poly(1, 1)) == p


def test_poly_division_by_zero():
    with pytest.raises(DivisionByZeroPolyError):
        divmod(poly(1, 1), Poly())


def test_poly_taylor_shift_gives_scaled_derivatives():
    p = poly(1, -3, 0, 2)
    shifted = p.taylor_shift(2)
    assert shifted.coeffs[0] == p(2)
    assert shifted.coeffs[1] == p.derivative()(2)
    assert shifted.coeffs[2] * 2 == p.derivative(2)(2)


def test_poly_valuation():
    p = Poly.linear(2) ** 3 * poly(1, 1)
    assert p.valuation(2) == 3
    assert p.valuation(-1) == 1
    assert p.valuation(0) == 0
    with pytest.raises(ZeroPolynomialError):
        Poly().valuation(0)


def test_poly_format():
    assert poly(-3, 3).format() == "-3 + 3*z"
    assert poly(1, 0, 1).format("t") == "1 + t^2"
    assert Poly().format() == "0"


def test_squarefree_factors_of_known_product():
    p = (Poly.linear(1) ** 2 * Poly.linear(-2)).scale(3)
    assert p.squarefree_factors() == [(Poly.linear(-2), 1), (Poly.linear(1), 2)]
    assert Poly.constant(5).squarefree_factors() == []


@given(nonzero_polys, nonzero_polys)
def test_squarefree_factors_recompose(a, b):
    p = a * b * b
    if p.degree < 1:
        return
    product = Poly.constant(p.lc)
    for factor, multiplicity in p.squarefree_factors():
        assert factor.lc == 1
        assert factor.gcd(factor.derivative()).degree == 0
        product = product * factor**multiplicity
    assert product == p


@given(polys, nonzero_polys)
def test_poly_division_identity(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


def test_poly_arith_dispatch():
    assert poly_arith(poly(1), poly(0, 1), "add") == poly(1, 1)
    with pytest.raises(ValueError):
        poly_arith(poly(1), poly(1), "pow")


# -- rational functions ------------------------------------------------------


def test_ratfun_is_reduced_with_monic_denominator():
    f = RatFun(poly(-2, 2), poly(-2, 0, 2))  # (2z - 2)/(2z^2 - 2)
    assert f.num == poly(1)
    assert f.den == poly(1, 1)
    assert RatFun(Poly(), poly(3, 1)) == RatFun()
    assert RatFun().den == Poly.one()


def test_ratfun_zero_denominator():
    with pytest.raises(DivisionByZeroPolyError):
        RatFun(poly(1), Poly())
    with pytest.raises(DivisionByZeroFunctionError):
        rf("z") / RatFun()


def test_ratfun_evaluate_and_poles():
    f = rf("(z-2)/(z-3)")
    assert f(2) == 0
    assert f(4) == 2
    with pytest.raises(PoleAtPointError):
        f(3)
    assert f.pole_order(3) == 1
    assert f.valuation(2) == 1
    assert f.valuation(3) == -1
    assert RatFun().valuation(0) is None


def test_ratfun_taylor_coeffs_at_two():
    assert rf("(z-2)/(z-3)").taylor_coeffs(2, 2) == [gr(0), gr(-1), gr(-1)]
    assert rf("(z+3)/(z-3)").taylor_coeffs(2, 2) == [gr(-5), gr(-6), gr(-6)]


def test_ratfun_format():
    assert rf("(z-2)/(z-3)").format() == "(-2 + z)/(-3 + z)"
    assert rf("3/z").format() == "3/z"


@given(ratfuns, ratfuns, ratfuns)
def test_ratfun_field_axioms(a, b, c):
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == RatFun()
    if b:
        assert (a / b) * b == a


@given(ratfuns)
def test_ratfun_derivative_matches_sympy(f):
    expected = sympy.diff(to_sympy(f, z), z)
    assert sympy.cancel(to_sympy(f.derivative(), z) - expected) == 0


@given(safe_ratfuns(), st.fractions(min_value=-2, max_value=2, max_denominator=4))
def test_ratfun_derivative_matches_central_difference(f, t):
    h = 1e-5
    x = float(t)
    approx = (f.evaluate_complex(x + h) - f.evaluate_complex(x - h)) / (2 * h)
    exact = complex(f.derivative()(gr(t)))
    assert abs(approx - exact) <= 1e-6 * max(1.0, abs(exact))


def test_ratfun_arith_dispatch():
    assert ratfun_arith(rf("z"), rf("z"), "div") == RatFun.constant(1)
    with pytest.raises(ValueError):
        ratfun_arith(rf("z"), rf("z"), "mod")


def test_ratfun_normalize():
    f = ratfun_normalize(poly(-2, 2), poly(-2, 0, 2))
    assert (f.num, f.den) == (poly(1), poly(1, 1))
    assert ratfun_normalize(Poly(), poly(3, 1)) == RatFun()
    with pytest.raises(DivisionByZeroPolyError):
        ratfun_normalize(poly(1), Poly())


@given(ratfuns, nonzero_polys)
def test_normalization_is_idempotent_and_drops_common_factors(f, g):
    assert ratfun_normalize(f.num, f.den) == f
    scaled = ratfun_normalize(f.num * g, f.den * g)
    assert (scaled.num, scaled.den) == (f.num, f.den)


@given(ratfuns, ratfuns)
def test_ratfun_product_rule(f, g):
    assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


@given(safe_ratfuns(), safe_ratfuns(), real_rationals)
def test_evaluation_respects_sum_and_product(f, g, t):
    assert (f + g)(t) == f(t) + g(t)
    assert (f * g)(t) == f(t) * g(t)


@given(safe_ratfuns(), real_rationals, st.integers(min_value=0, max_value=3))
def test_taylor_coefficients_are_scaled_derivatives(f, alpha, j):
    coeffs = f.taylor_coeffs(alpha, j)
    assert len(coeffs) == j + 1
    assert coeffs[j] * gr(math.factorial(j)) == f.derivative(j)(alpha)


def test_taylor_coeffs_of_double_zero_over_simple_pole():
    assert rf("(z-2)^2/(z-3)").taylor_coeffs(2, 2) == [gr(0), gr(0), gr(-1)]
