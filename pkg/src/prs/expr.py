"""Text syntax for local fields.

    expr   := term (('+'|'-') term)*
    term   := rational? factor* gen
    factor := 'u1^'int | 'xi^'int | 'wp^(' int ')' | 'E^'int
    gen    := 'd_xi' | 'd_u' | 'd_xi^d_u'

Whitespace is ignored.  A few conveniences are accepted on input: ``*``
between pieces, ``xi``/``u1``/``E`` without exponent, ``wp`` for ``wp^(0)``,
negative exponents such as ``u1^-2`` or ``u1^(-2)``.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .elliptic import EllipticParams, wp_derivative_series
from .exactalg import LaurentSeries, TwistedLaurent, as_rat
from .polyvector import Bivector, ChartFunction, VectorField


class ExpressionError(ValueError):
    """Malformed field expression."""


_TOKEN = re.compile(r"""
    (?P<gen>d_xi\^d_u|d_xi|d_u)
  | (?P<wp>wp(?:\^\((?P<wpk>\d+)\)|'+)?)
  | (?P<var>u1|xi|E)(?:\^(?:\((?P<pexp>[+-]?\d+)\)|(?P<exp>[+-]?\d+)))?
  | (?P<num>\d+(?:/\d+)?)
  | (?P<op>[+\-*])
""", re.VERBOSE)


def _tokens(text: str):
    s = re.sub(r"\s+", "", text)
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ExpressionError(f"unexpected input at {s[pos:pos + 12]!r}")
        yield m
        pos = m.end()


def parse_field(text: str, params: EllipticParams | None = None, order: int = 10, twist=0):
    """Parse an expression into a :class:`VectorField` or :class:`Bivector`.

    ``wp^(k)`` factors are expanded to ``u1**order``.
    """
    if not text.strip():
        raise ExpressionError("empty expression")
    params = params or EllipticParams()
    twist = as_rat(twist)
    xi_terms: dict[int, TwistedLaurent] = {}
    u_terms: dict[int, TwistedLaurent] = {}
    biv_terms: dict[int, TwistedLaurent] = {}
    sign = 1
    coef: Fraction | None = None
    series = TwistedLaurent.lift(1)
    xdeg = 0
    pending = False     # a '+'/'-' is waiting for its term
    need_op = False     # a term just ended
    for m in _tokens(text):
        if m.group("op"):
            op = m.group("op")
            if op == "*":
                continue
            if coef is not None or xdeg or not _is_one(series):
                raise ExpressionError(f"dangling '{op}': every term must end with d_xi, d_u or d_xi^d_u")
            sign = -sign if op == "-" else sign
            pending, need_op = True, False
            continue
        if need_op:
            raise ExpressionError("terms must be separated by '+' or '-'")
        if m.group("num"):
            if coef is not None or xdeg or not _is_one(series):
                raise ExpressionError("the rational coefficient must come first in a term")
            coef = Fraction(m.group("num"))
            continue
        if m.group("wp"):
            tok = m.group("wp")
            k = int(m.group("wpk")) if m.group("wpk") else tok.count("'")
            series = series * wp_derivative_series(params, k, order)
            continue
        if m.group("var"):
            e = m.group("pexp") or m.group("exp")
            e = 1 if e is None else int(e)
            var = m.group("var")
            if var == "u1":
                series = series * LaurentSeries.monomial(e)
            elif var == "E":
                series = series * TwistedLaurent.e_power(e)
            else:
                if e < 0:
                    raise ExpressionError("negative powers of xi are not sections")
                xdeg += e
            continue
        gen = m.group("gen")
        c = series * (sign * (coef if coef is not None else 1))
        target = {"d_xi": xi_terms, "d_u": u_terms, "d_xi^d_u": biv_terms}[gen]
        if gen == "d_u" and xdeg:
            raise ExpressionError("d_u coefficients cannot depend on xi")
        if xdeg > 2:
            raise ExpressionError(f"xi-degree {xdeg} exceeds 2")
        target[xdeg] = target[xdeg] + c if xdeg in target else c
        sign, coef, series, xdeg = 1, None, TwistedLaurent.lift(1), 0
        pending, need_op = False, True
    if pending or coef is not None or xdeg or not _is_one(series):
        raise ExpressionError("expression must end with a generator")
    if biv_terms and (xi_terms or u_terms):
        raise ExpressionError("cannot mix vector and bivector terms")
    if biv_terms:
        return Bivector(ChartFunction([biv_terms.get(j, 0) for j in range(3)], twist))
    return VectorField(ChartFunction([xi_terms.get(j, 0) for j in range(3)], twist),
                       ChartFunction([u_terms.get(0, 0)], twist))


def _is_one(s: TwistedLaurent) -> bool:
    return s.agrees(TwistedLaurent.lift(1)) and all(p.exact for p in s.parts.values())


def format_terms(f) -> str:
    """Render a field in the input syntax (windows shown as ``O(u1^k)``)."""
    if isinstance(f, Bivector):
        entries = [(f.h.coeff(j), j, "d_xi^d_u") for j in range(3)]
    else:
        entries = [(f.xi_part.coeff(j), j, "d_xi") for j in range(3)] + [(f.u_part.coeff(0), 0, "d_u")]
    out: list[str] = []
    windows: set[int] = set()
    for c, j, gen in entries:
        for m in c.e_degrees():
            s = c.part(m)
            if s.hi is not None:
                windows.add(s.hi + 1)
            for e, v in s.items():
                pieces = []
                if e:
                    pieces.append(f"u1^{e}")
                if j:
                    pieces.append("xi" if j == 1 else f"xi^{j}")
                if m:
                    pieces.append(f"E^{m}")
                pieces.append(gen)
                body = "*".join(pieces)
                if v == 1:
                    out.append(f"+ {body}")
                elif v == -1:
                    out.append(f"- {body}")
                elif v < 0:
                    out.append(f"- {-v}*{body}")
                else:
                    out.append(f"+ {v}*{body}")
    if not out:
        text = "0"
    else:
        text = " ".join(out)
        text = text[2:] if text.startswith("+ ") else "-" + text[2:]
    if windows:
        text += f" + O(u1^{min(windows)})"
    return text
