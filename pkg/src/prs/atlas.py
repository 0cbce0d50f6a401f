"""Ruled surfaces over an elliptic curve as two-chart gluings.

Chart 0 is ``(X - p) x P^1`` with coordinates ``(u, xi)``, chart 1 is a disc
around ``p`` times ``P^1`` with coordinates ``(u1, xi1)`` and ``u = p + u1``.
The fibre coordinates are related by a Moebius map
``xi = (alpha xi1 + beta) / (gamma xi1 + delta)`` whose entries are functions of
``u1``.  Everything on the overlap is written as a Laurent series in ``u1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .elliptic import EllipticParams
from .exactalg import LaurentSeries, TwistedLaurent, as_rat
from .polyvector import Bivector, ChartFunction, VectorField


class SingularTransitionError(ValueError):
    """Moebius data with non-invertible determinant."""


class Variant(str, Enum):
    S0 = "s0"
    TWISTED = "twisted"
    SN = "sn"
    A0 = "a0"
    AM1 = "am1"


@dataclass(frozen=True)
class SurfaceFamily:
    variant: Variant
    n: int | None = None
    t0: Fraction | None = None
    elliptic: EllipticParams = field(default_factory=EllipticParams)

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.variant is Variant.TWISTED:
            if self.t0 is None or as_rat(self.t0) == 0:
                raise ValueError("twisted surfaces need t0 != 0")
            object.__setattr__(self, "t0", as_rat(self.t0))
        elif self.t0 is not None:
            raise ValueError("t0 only applies to twisted surfaces")
        if self.variant is Variant.SN:
            if self.n is None or int(self.n) < 1:
                raise ValueError("S_n needs n >= 1")
            object.__setattr__(self, "n", int(self.n))
        elif self.n is not None:
            raise ValueError("n only applies to S_n")

    @classmethod
    def s0(cls, elliptic: EllipticParams | None = None) -> "SurfaceFamily":
        return cls(Variant.S0, elliptic=elliptic or EllipticParams())

    @classmethod
    def twisted(cls, t0, elliptic: EllipticParams | None = None) -> "SurfaceFamily":
        return cls(Variant.TWISTED, t0=as_rat(t0), elliptic=elliptic or EllipticParams())

    @classmethod
    def sn(cls, n: int, elliptic: EllipticParams | None = None) -> "SurfaceFamily":
        return cls(Variant.SN, n=n, elliptic=elliptic or EllipticParams())

    @classmethod
    def a0(cls, elliptic: EllipticParams | None = None) -> "SurfaceFamily":
        return cls(Variant.A0, elliptic=elliptic or EllipticParams())

    @classmethod
    def am1(cls, elliptic: EllipticParams | None = None) -> "SurfaceFamily":
        return cls(Variant.AM1, elliptic=elliptic or EllipticParams())

    @property
    def twist(self) -> Fraction:
        return self.t0 if self.variant is Variant.TWISTED else Fraction(0)

    @property
    def n_eff(self) -> int:
        return self.n if self.variant is Variant.SN else 1

    @property
    def label(self) -> str:
        if self.variant is Variant.SN:
            return f"S{self.n}"
        if self.variant is Variant.TWISTED:
            return f"S0(t0={self.t0})"
        return {Variant.S0: "S0", Variant.A0: "A0", Variant.AM1: "A-1"}[self.variant]


@dataclass(frozen=True)
class Transition:
    """``xi = (alpha xi1 + beta) / (gamma xi1 + delta)`` on the overlap, ``[u] = p + u1``."""

    alpha: TwistedLaurent
    beta: TwistedLaurent
    gamma: TwistedLaurent
    delta: TwistedLaurent
    twist: Fraction = Fraction(0)

    @classmethod
    def of(cls, alpha, beta, gamma, delta, twist=0) -> "Transition":
        L = TwistedLaurent.lift
        return cls(L(alpha), L(beta), L(gamma), L(delta), as_rat(twist))

    @property
    def det(self) -> TwistedLaurent:
        return self.alpha * self.delta - self.beta * self.gamma

    def inverse(self) -> "Transition":
        """``xi1`` as a Moebius function of ``xi``."""
        return Transition(self.delta, -self.beta, -self.gamma, self.alpha, self.twist)

    def numerator(self) -> ChartFunction:
        return ChartFunction([self.beta, self.alpha], self.twist)

    def denominator(self) -> ChartFunction:
        return ChartFunction([self.delta, self.gamma], self.twist)

    def agrees(self, other: "Transition") -> bool:
        # Moebius data is only defined up to a common factor
        a = (self.alpha, self.beta, self.gamma, self.delta)
        b = (other.alpha, other.beta, other.gamma, other.delta)
        return all((x * b[j] - a[j] * y).is_zero() for i, (x, y) in enumerate(zip(a, b)) for j in range(i + 1, 4))


def transition(family: SurfaceFamily) -> Transition:
    u = LaurentSeries.monomial
    v = family.variant
    if v is Variant.S0:
        return Transition.of(1, 0, 0, 1)
    if v is Variant.TWISTED:
        return Transition.of(TwistedLaurent.e_power(1), 0, 0, 1, family.t0)
    if v is Variant.SN:
        return Transition.of(u(family.n), 0, 0, 1)
    if v is Variant.A0:
        return Transition.of(1, u(-1), 0, 1)
    return Transition.of(u(1), u(-1), 0, 1)


def _substitute(coeffs: ChartFunction, tr: Transition) -> ChartFunction:
    """Cleared substitution ``sum_j F_j P^j Q^(2-j)`` for a degree <= 2 polynomial."""
    P, Q = tr.numerator(), tr.denominator()
    powers_p = [ChartFunction.constant(1, tr.twist), P, P * P]
    powers_q = [ChartFunction.constant(1, tr.twist), Q, Q * Q]
    out = ChartFunction([], tr.twist)
    for j in range(3):
        c = coeffs.coeff(j)
        if not c.is_zero():
            out = out + powers_p[j] * powers_q[2 - j] * c
    return out


def _moving_frame(tr: Transition) -> ChartFunction:
    """Cleared ``d xi/d u1`` at fixed ``xi1``: ``P_u Q - P Q_u``."""
    P, Q = tr.numerator(), tr.denominator()
    return P.d_u() * Q - P * Q.d_u()


def _det_inverse(tr: Transition, order: int | None) -> TwistedLaurent:
    d = tr.det
    if d.is_zero():
        raise SingularTransitionError("alpha*delta - beta*gamma vanishes")
    try:
        return d.inverse(order)
    except (ZeroDivisionError, ValueError) as exc:
        raise SingularTransitionError(str(exc)) from exc


def _source_map(tr: Transition, to_chart: int) -> Transition:
    if to_chart == 1:
        return tr
    if to_chart == 0:
        return tr.inverse()
    raise ValueError("to_chart must be 0 or 1")


def push_vector(tr: Transition, v: VectorField, to_chart: int = 0, order: int | None = None) -> VectorField:
    """Rewrite a vector field in the frame of the other chart.

    ``to_chart=0`` takes a chart-1 field to chart-0 coordinates; ``to_chart=1``
    goes the other way.
    """
    mob = _source_map(tr, to_chart)
    g, f = v.xi_part, v.u_part.coeff(0)
    num = _substitute(g, mob) - _moving_frame(mob) * f
    xi = num * _det_inverse(mob, order)
    return VectorField(xi.trimmed(2), ChartFunction([f], tr.twist))


def push_bivector(tr: Transition, L: Bivector, to_chart: int = 0, order: int | None = None) -> Bivector:
    """Rewrite a bivector field in the frame of the other chart.

    ``d_xi1 ^ d_u1 = (d xi/d xi1) d_xi ^ d_u``, and the coefficient is
    substituted through the Moebius map.
    """
    mob = _source_map(tr, to_chart)
    h = _substitute(L.h, mob) * _det_inverse(mob, order)
    return Bivector(h.trimmed(2))


def push_bivector_cleared(tr: Transition, L: Bivector, to_chart: int = 1) -> tuple[ChartFunction, TwistedLaurent]:
    """Numerator and determinant of :func:`push_bivector` before division."""
    mob = _source_map(tr, to_chart)
    return _substitute(L.h, mob), mob.det


def frame_factor(tr: Transition) -> tuple[TwistedLaurent, ChartFunction]:
    """``d xi / d xi1 = det / Q^2`` returned as ``(det, Q^2)``."""
    Q = tr.denominator()
    return tr.det, Q * Q
