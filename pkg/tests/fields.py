"""Random field strategies and a sympy bridge shared by the bracket tests."""
from fractions import Fraction

import sympy
from hypothesis import strategies as st

from conftest import laurent_dicts, rationals
from prs.exactalg import LaurentSeries, TwistedLaurent
from prs.polyvector import Bivector, ChartFunction, VectorField

U, X = sympy.symbols("u xi")


def twisted_coeffs(twisted: bool):
    if not twisted:
        return laurent_dicts().map(lambda d: TwistedLaurent.lift(LaurentSeries(d)))
    return st.dictionaries(st.integers(-1, 1), laurent_dicts(max_terms=2), max_size=2).map(
        lambda parts: TwistedLaurent({m: LaurentSeries(d) for m, d in parts.items()}))


def chart_functions(degree: int, twist=0):
    return st.lists(twisted_coeffs(bool(twist)), min_size=degree + 1, max_size=degree + 1).map(
        lambda cs: ChartFunction(cs, twist))


def vector_fields(twist=0):
    return st.builds(VectorField, chart_functions(2, twist), chart_functions(0, twist))


def bivectors(twist=0):
    return chart_functions(2, twist).map(Bivector)


def u_functions(twist=0):
    """xi-free functions (for Leibniz rules)."""
    return twisted_coeffs(bool(twist))


def q(v: Fraction):
    return sympy.Rational(v.numerator, v.denominator)


def tl_to_sympy(c: TwistedLaurent, twist: Fraction):
    out = sympy.Integer(0)
    for m, s in c.parts.items():
        body = sum((q(v) * U ** e for e, v in s.items()), sympy.Integer(0))
        out += body * (sympy.exp(m * q(twist) / U) if m else 1)
    return out


def cf_to_sympy(f: ChartFunction):
    return sum((tl_to_sympy(c, f.twist) * X ** j for j, c in enumerate(f.coeffs)), sympy.Integer(0))


def vf_to_sympy(v: VectorField):
    """Components ``(V^xi, V^u)``."""
    return cf_to_sympy(v.xi_part), cf_to_sympy(v.u_part)


def same(a, b) -> bool:
    return sympy.expand(sympy.powsimp(sympy.expand(a - b))) == 0
