from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import nonzero_rationals, rationals
from prs.elliptic import (EllipticFunction, EllipticParams, InvalidParametersError, OrderOnePoleError,
                          elliptic_to_series, format_elliptic, realize_principal_part, residue,
                          wp_derivative_series, wp_expansion, wp_principal_coefficient)
from prs.exactalg import LaurentSeries, UntrustedWindowError

params = st.tuples(rationals(-20, 20, 5), rationals(-20, 20, 5)).filter(
    lambda g: g[0] ** 3 != 27 * g[1] ** 2).map(lambda g: EllipticParams(*g))


def ode_residual(p: EllipticParams, order: int) -> LaurentSeries:
    w = wp_expansion(p, order)
    d = w.derivative()
    return d * d - (w * w * w).scale(4) + w.scale(p.g2) + p.g3


@given(params, st.integers(4, 30))
def test_ode_residual_vanishes_through_window(p, order):
    r = ode_residual(p, order)
    assert r.hi is not None and r.hi >= order - 6
    for e in range(r.lo, r.hi + 1):
        assert r.coeff(e) == 0


def test_ode_residual_with_sympy_arithmetic():
    # the same identity evaluated by sympy on the truncated polynomial
    u = sympy.Symbol("u")
    p = EllipticParams(Fraction(3, 2), Fraction(-5, 7))
    order = 16
    w = sum(sympy.Rational(v.numerator, v.denominator) * u ** e for e, v in wp_expansion(p, order).items())
    g2 = sympy.Rational(3, 2)
    g3 = sympy.Rational(-5, 7)
    res = sympy.expand((sympy.diff(w, u) ** 2 - 4 * w ** 3 + g2 * w + g3) * u ** 6)
    # trusted through u^(order - 6) before the shift, i.e. u^order after it
    poly = sympy.Poly(res, u)
    assert all(poly.coeff_monomial(u ** k) == 0 for k in range(order + 1))


def test_low_coefficients_match_classical_values():
    g2, g3 = Fraction(7, 3), Fraction(-2, 5)
    w = wp_expansion(EllipticParams(g2, g3), 9)
    assert w.as_dict() == {-2: 1, 2: g2 / 20, 4: g3 / 28, 6: g2 ** 2 / 1200, 8: 3 * g2 * g3 / 6160}


def test_expansion_is_even_with_no_constant_term():
    w = wp_expansion(EllipticParams(), 20)
    assert all(e % 2 == 0 for e, _ in w.items())
    assert w.coeff(0) == 0 and w.coeff(-1) == 0


def test_singular_curve_rejected():
    with pytest.raises(InvalidParametersError):
        EllipticParams(3, 1)


@pytest.mark.parametrize("k", range(6))
def test_principal_coefficients(k):
    s = wp_derivative_series(EllipticParams(), k, 4)
    assert s.coeff(-k - 2) == wp_principal_coefficient(k)
    assert all(s.coeff(e) == 0 for e in range(-k - 1, 0))


@given(params, st.lists(rationals(), max_size=5), rationals())
def test_every_elliptic_expansion_has_zero_residue(p, coeffs, c):
    f = EllipticFunction(c, tuple(coeffs))
    assert residue(elliptic_to_series(f, p, 3)) == 0


@given(params, st.dictionaries(st.integers(-7, -2), nonzero_rationals(), max_size=4))
def test_realize_is_right_inverse_of_principal_part(p, pp):
    s = LaurentSeries(pp)
    f = realize_principal_part(s, p)
    assert f.constant == 0
    assert elliptic_to_series(f, p, 2).principal_part().as_dict() == s.as_dict()


@given(params, st.dictionaries(st.integers(-7, -2), rationals(), max_size=4), nonzero_rationals())
def test_nonzero_residue_raises(p, pp, r):
    s = LaurentSeries({**pp, -1: r})
    with pytest.raises(OrderOnePoleError):
        realize_principal_part(s, p)


def test_realize_rejects_holomorphic_terms_and_short_windows():
    with pytest.raises(ValueError):
        realize_principal_part(LaurentSeries({-2: 1, 0: 1}), EllipticParams())
    with pytest.raises(UntrustedWindowError):
        realize_principal_part(LaurentSeries({-3: 1}, hi=-3), EllipticParams())


def test_realize_examples():
    e = EllipticParams()
    assert realize_principal_part(LaurentSeries({-2: 1}), e) == EllipticFunction.wp(0)
    assert realize_principal_part(LaurentSeries({-3: 4}), e) == EllipticFunction.wp(1, -2)
    assert realize_principal_part(LaurentSeries(), e).is_zero()


def test_format_elliptic():
    f = EllipticFunction(Fraction(1, 2), (0, -1, 3))
    assert format_elliptic(f) == "1/2 - wp^(1) + 3*wp^(2)"
    assert format_elliptic(EllipticFunction()) == "0"
    assert EllipticFunction.wp(1).pole_order == 3
