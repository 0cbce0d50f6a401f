"""Vector fields and bivector fields on one chart ``(u, xi)`` of a ruled surface.

Coefficients are polynomials in the fibre coordinate ``xi`` whose coefficients
are :class:`~prs.exactalg.TwistedLaurent` functions of ``u1``.  Sections obey
the degree caps of ``Theta_{P^1} = O(2)``: ``d_xi`` and bivector coefficients
have ``xi``-degree at most 2, ``d_u`` coefficients are ``xi``-free.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exactalg import TwistedLaurent, as_rat


class IllFormedSectionError(ValueError):
    """A field violates the xi-degree caps of its sheaf."""


class ChartFunction:
    """Polynomial in ``xi`` with twisted-Laurent coefficients in ``u1``."""

    __slots__ = ("coeffs", "twist")

    def __init__(self, coeffs: Sequence[object] = (), twist=0):
        self.coeffs = tuple(TwistedLaurent.lift(c) for c in coeffs)
        self.twist = as_rat(twist)

    @classmethod
    def constant(cls, c, twist=0) -> "ChartFunction":
        return cls([c], twist)

    @classmethod
    def xi(cls, j: int = 1, c=1, twist=0) -> "ChartFunction":
        return cls([0] * j + [c], twist)

    def coeff(self, j: int) -> TwistedLaurent:
        return self.coeffs[j] if j < len(self.coeffs) else TwistedLaurent()

    @property
    def degree(self) -> int:
        """Largest xi-degree with a nonzero coefficient (-1 for zero)."""
        for j in range(len(self.coeffs) - 1, -1, -1):
            if not self.coeffs[j].is_zero():
                return j
        return -1

    def is_zero(self) -> bool:
        return self.degree < 0

    def _check(self, other: "ChartFunction"):
        if self.twist != other.twist:
            raise ValueError(f"twist mismatch: {self.twist} vs {other.twist}")

    def _lift(self, other) -> "ChartFunction":
        if isinstance(other, ChartFunction):
            self._check(other)
            return other
        return ChartFunction.constant(other, self.twist)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return ChartFunction([self.coeff(j) + other.coeff(j) for j in range(n)], self.twist)

    __radd__ = __add__

    def __neg__(self):
        return ChartFunction([-c for c in self.coeffs], self.twist)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, ChartFunction):
            return ChartFunction([c * other for c in self.coeffs], self.twist)
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return ChartFunction([], self.twist)
        out = [TwistedLaurent() for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return ChartFunction(out, self.twist)

    __rmul__ = __mul__

    def d_xi(self) -> "ChartFunction":
        return ChartFunction([c * j for j, c in enumerate(self.coeffs)][1:], self.twist)

    def d_u(self) -> "ChartFunction":
        return ChartFunction([c.derivative(self.twist) for c in self.coeffs], self.twist)

    def trimmed(self, cap: int) -> "ChartFunction":
        d = self.degree
        if d > cap:
            raise IllFormedSectionError(f"xi-degree {d} exceeds cap {cap}")
        return ChartFunction(self.coeffs[: cap + 1], self.twist)

    def agrees(self, other: "ChartFunction") -> bool:
        return (self - other).is_zero()

    def __repr__(self):
        return f"ChartFunction({list(self.coeffs)}, twist={self.twist})"


class VectorField:
    """``xi_part * d_xi + u_part * d_u``."""

    __slots__ = ("xi_part", "u_part")

    def __init__(self, xi_part: ChartFunction | None = None, u_part: ChartFunction | None = None,
                 twist=0):
        if xi_part is not None:
            twist = xi_part.twist
        elif u_part is not None:
            twist = u_part.twist
        xi_part = xi_part if xi_part is not None else ChartFunction([], twist)
        u_part = u_part if u_part is not None else ChartFunction([], twist)
        xi_part._check(u_part)
        self.xi_part = xi_part.trimmed(2)
        self.u_part = u_part.trimmed(0)

    @classmethod
    def from_coeffs(cls, xi_coeffs: Sequence[object] = (), u_coeff: object = 0, twist=0) -> "VectorField":
        return cls(ChartFunction(xi_coeffs, twist), ChartFunction([u_coeff], twist))

    @property
    def twist(self) -> Fraction:
        return self.xi_part.twist

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.xi_part + other.xi_part, self.u_part + other.u_part)

    def __neg__(self):
        return VectorField(-self.xi_part, -self.u_part)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a) -> "VectorField":
        return VectorField(self.xi_part * a, self.u_part * a)

    def is_zero(self) -> bool:
        return self.xi_part.is_zero() and self.u_part.is_zero()

    def agrees(self, other: "VectorField") -> bool:
        return (self - other).is_zero()

    def __repr__(self):
        return f"VectorField(xi={self.xi_part!r}, u={self.u_part!r})"


class Bivector:
    """``h * d_xi ^ d_u``."""

    __slots__ = ("h",)

    def __init__(self, h: ChartFunction | None = None, twist=0):
        h = h if h is not None else ChartFunction([], twist)
        self.h = h.trimmed(2)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[object], twist=0) -> "Bivector":
        return cls(ChartFunction(coeffs, twist))

    @property
    def twist(self) -> Fraction:
        return self.h.twist

    def __add__(self, other: "Bivector") -> "Bivector":
        return Bivector(self.h + other.h)

    def __neg__(self):
        return Bivector(-self.h)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a) -> "Bivector":
        return Bivector(self.h * a)

    def is_zero(self) -> bool:
        return self.h.is_zero()

    def agrees(self, other: "Bivector") -> bool:
        return (self - other).is_zero()

    def __repr__(self):
        return f"Bivector({self.h!r})"


class _ZeroTrivector:
    """On a surface every 3-vector vanishes."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def is_zero(self) -> bool:
        return True

    def __repr__(self):
        return "0"


ZERO_TRIVECTOR = _ZeroTrivector()


def lie_bracket(v: VectorField, w: VectorField) -> VectorField:
    """Coordinate Lie bracket ``[v, w]``."""
    if v.twist != w.twist:
        raise ValueError("fields live on charts with different twists")
    g1, f1, g2, f2 = v.xi_part, v.u_part, w.xi_part, w.u_part
    xi = g1 * g2.d_xi() + f1 * g2.d_u() - g2 * g1.d_xi() - f2 * g1.d_u()
    u = f1 * f2.d_u() - f2 * f1.d_u()
    return VectorField(xi.trimmed(2), u.trimmed(0))


def schouten_bv(L: Bivector, v: VectorField) -> Bivector:
    """``[L, v]`` for ``L = h d_xi^d_u`` and ``v = g d_xi + f d_u``."""
    if L.twist != v.twist:
        raise ValueError("fields live on charts with different twists")
    h, g, f = L.h, v.xi_part, v.u_part
    out = h * (g.d_xi() + f.d_u()) - f * h.d_u() - g * h.d_xi()
    return Bivector(out.trimmed(2))


def schouten_bb(L1: Bivector, L2: Bivector):
    return ZERO_TRIVECTOR

