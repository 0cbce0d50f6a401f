"""Elliptic functions with poles only at the base point ``p``.

The curve enters only through the Weierstrass invariants ``(g2, g3)``.  An
:class:`EllipticFunction` is a finite combination of ``1`` and the derivatives
``wp^(k)``; it is turned into a Laurent series in ``u1 = u - p`` on demand.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .exactalg import LaurentSeries, UntrustedWindowError, as_rat


class InvalidParametersError(ValueError):
    """Weierstrass invariants with vanishing discriminant."""


class OrderOnePoleError(ValueError):
    """A principal part with nonzero residue: no elliptic function has it."""


@dataclass(frozen=True)
class EllipticParams:
    g2: Fraction = Fraction(2)
    g3: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "g2", as_rat(self.g2))
        object.__setattr__(self, "g3", as_rat(self.g3))
        if self.discriminant == 0:
            raise InvalidParametersError(f"g2^3 - 27 g3^2 = 0 for (g2, g3) = ({self.g2}, {self.g3})")

    @property
    def discriminant(self) -> Fraction:
        return self.g2 ** 3 - 27 * self.g3 ** 2


@lru_cache(maxsize=64)
def _wp_coefficients(g2: Fraction, g3: Fraction, count: int) -> tuple[Fraction, ...]:
    # c[k] multiplies u^(2k-2); c[0] = 1 is the double pole, c[1] = 0
    c = [Fraction(1), Fraction(0), g2 / 20, g3 / 28]
    for k in range(4, count + 1):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c.append(3 * s / ((2 * k + 1) * (k - 3)))
    return tuple(c[: count + 1])


def wp_expansion(params: EllipticParams, order: int) -> LaurentSeries:
    """Laurent expansion of ``wp(u1)`` through ``u1**order``."""
    if order < -2:
        raise ValueError("order must be >= -2")
    kmax = max(1, (order + 2) // 2)
    c = _wp_coefficients(params.g2, params.g3, kmax)
    terms = {2 * k - 2: c[k] for k in range(kmax + 1) if 2 * k - 2 <= order}
    return LaurentSeries(terms, lo=-2, hi=order)


@lru_cache(maxsize=4096)
def wp_derivative_series(params: EllipticParams, k: int, order: int) -> LaurentSeries:
    """Expansion of ``wp^(k)`` through ``u1**order``."""
    s = wp_expansion(params, order + k)
    for _ in range(k):
        s = s.derivative()
    return s


def wp_principal_coefficient(k: int) -> int:
    """Coefficient of ``u1^-(k+2)`` in ``wp^(k)``."""
    return (-1) ** k * factorial(k + 1)


@dataclass(frozen=True)
class EllipticFunction:
    constant: Fraction = Fraction(0)
    wp_coeffs: tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "constant", as_rat(self.constant))
        cs = [as_rat(c) for c in self.wp_coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "wp_coeffs", tuple(cs))

    @classmethod
    def wp(cls, k: int = 0, c=1) -> "EllipticFunction":
        return cls(0, (0,) * k + (c,))

    @classmethod
    def const(cls, c) -> "EllipticFunction":
        return cls(c)

    @property
    def pole_order(self) -> int:
        return len(self.wp_coeffs) + 1 if self.wp_coeffs else 0

    def is_zero(self) -> bool:
        return not self.constant and not self.wp_coeffs

    def __add__(self, other: "EllipticFunction") -> "EllipticFunction":
        n = max(len(self.wp_coeffs), len(other.wp_coeffs))
        a = self.wp_coeffs + (0,) * (n - len(self.wp_coeffs))
        b = other.wp_coeffs + (0,) * (n - len(other.wp_coeffs))
        return EllipticFunction(self.constant + other.constant, tuple(x + y for x, y in zip(a, b)))

    def scale(self, a) -> "EllipticFunction":
        a = as_rat(a)
        return EllipticFunction(a * self.constant, tuple(a * c for c in self.wp_coeffs))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __str__(self):
        return format_elliptic(self)


def format_elliptic(f: EllipticFunction) -> str:
    parts = []
    if f.constant:
        parts.append(str(f.constant))
    for k, c in enumerate(f.wp_coeffs):
        if not c:
            continue
        name = "wp" if k == 0 else f"wp^({k})"
        parts.append(name if c == 1 else ("-" + name if c == -1 else f"{c}*{name}"))
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def elliptic_to_series(f: EllipticFunction, params: EllipticParams, order: int) -> LaurentSeries:
    if order < -1:
        raise ValueError("order must reach at least u1^-1")
    out = LaurentSeries.constant(f.constant, hi=order)
    for k, c in enumerate(f.wp_coeffs):
        if c:
            out = out + wp_derivative_series(params, k, order).scale(c)
    return out


def residue(pp: LaurentSeries) -> Fraction:
    """Coefficient of ``u1^-1`` (zero when the valuation floor lies above it)."""
    if pp.lo > -1 and (pp.hi is None or pp.hi >= -1):
        return Fraction(0)
    return pp.coeff(-1)


def realize_principal_part(pp: LaurentSeries, params: EllipticParams) -> EllipticFunction:
    """Elliptic function (constant term 0) with the given principal part.

    Raises :class:`OrderOnePoleError` on a nonzero residue.
    """
    if any(e >= 0 for e, _ in pp.items()):
        raise ValueError("principal part must contain only negative exponents")
    if pp.hi is not None and pp.hi < -1:
        raise UntrustedWindowError("residue of the principal part is not known")
    terms = dict(pp.items())
    if terms.get(-1):
        raise OrderOnePoleError(f"residue {terms[-1]} != 0: no elliptic function has a single simple pole")
    depth = max((-e for e in terms), default=0)
    coeffs = [Fraction(0)] * max(0, depth - 1)
    for e, v in terms.items():
        k = -e - 2
        coeffs[k] = v / wp_principal_coefficient(k)
    return EllipticFunction(0, tuple(coeffs))
