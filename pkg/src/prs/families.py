"""Explicit Poisson analytic families and their Kodaira-Spencer classes.

A family deforms the base Poisson surface in the parameters ``tau`` (the
elliptic modulus), ``t`` and ``t1``.  Each parameter acts either through the
gluing (its class is a ``Theta``-valued 1-cocycle in ``ker(H^1 map)``) or
through the bivector with fixed gluing (its class is a global bivector modulo
the image of the ``H^0`` map).  The ``tau`` direction is carried by the
standard class ``(1/u1) d_u1`` of the elliptic modular family.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .atlas import Transition, Variant, push_bivector_cleared, transition
from .cech import GlobalSection, Sheaf, Truncation, h0_coordinates, present, reduce_class
from .elliptic import EllipticFunction, elliptic_to_series
from .exactalg import LaurentSeries, RatMatrix, TwistedLaurent
from .poissonco import (PoissonStructure, coker_coordinates, coefficient_class, ker_coordinates,
                        poisson_cohomology)
from .polyvector import Bivector, ChartFunction, VectorField


class InconsistentFamilyError(ValueError):
    """A gluing direction whose class is not killed by ``[L0, -]``."""


@dataclass(frozen=True)
class Direction:
    """How one deformation parameter enters the family.

    ``kind`` is ``"tau"``, ``"gluing"`` (first-order change of the Moebius data,
    ``jet`` = derivatives of ``(alpha, beta, gamma, delta)`` at the origin) or
    ``"bivector"`` (``jet`` = derivative of the chart-0 bivector at the origin,
    a global section of the base surface).
    """

    name: str
    kind: str
    jet: object = None


@dataclass
class FamilyDefinition:
    base: PoissonStructure
    title: str
    directions: tuple[Direction, ...]
    full_transition: Callable[[dict], Transition]
    lambda_chart0: Callable[[dict, int], Bivector]
    lambda_chart1: Callable[[dict, int], Bivector]
    degree_bounds: dict[str, int]
    literal_checks: Callable[[dict], bool] | None = None

    @property
    def params(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.directions)

    @property
    def sampled(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.directions if d.name != "tau")


def _u(e: int, c=1) -> LaurentSeries:
    return LaurentSeries.monomial(e, c)


def _const_biv(coeffs, twist=0) -> Bivector:
    return Bivector.from_coeffs(coeffs, twist)


# ---------------------------------------------------------------------------
# registered families


def _s0_family(P: PoissonStructure, tr: Truncation) -> FamilyDefinition:
    A, B, C = P.coeffs
    pc = poisson_cohomology(P, tr)
    # a direction in H^0(wedge^2) complementary to the image of the H^0 map
    (j,) = pc.coker_indices
    wd = present(P.family, Sheaf.WEDGE2, tr)
    F = [wd.h0_basis[j].part(("biv", k)).constant for k in range(3)]

    def primed(v):
        t1 = v.get("t1", 0)
        return A + t1 * F[0], B + t1 * F[1], C + t1 * F[2]

    def full(v):
        t = v.get("t", 0)
        a, b, c = primed(v)
        return Transition.of(_u(1) + b * t, a * t, -c * t, _u(1))

    def lam(v, order):
        return _const_biv(list(primed(v)))

    def literal(v):
        t = v.get("t", 0)
        a, b, c = primed(v)
        T = full(v)
        det_ok = T.det.agrees(TwistedLaurent.lift(_u(2) + _u(1, b * t) + a * c * t * t))
        q_ok = T.denominator().agrees(ChartFunction([_u(1), -c * t]))
        return det_ok and q_ok

    gluing = (TwistedLaurent.lift(B), TwistedLaurent.lift(A), TwistedLaurent.lift(-C), TwistedLaurent.lift(0))
    dirs = (Direction("tau", "tau"), Direction("t", "gluing", gluing),
            Direction("t1", "bivector", GlobalSection.of(Sheaf.WEDGE2, {("biv", k): F[k] for k in range(3)})))
    return FamilyDefinition(P, "Moebius deformation of the product surface", dirs, full, lam, lam,
                            {"t": 2, "t1": 3}, literal)


def _twisted_family(P: PoissonStructure, tr: Truncation) -> FamilyDefinition:
    (A,) = P.coeffs
    t0 = P.family.t0

    def full(v):
        # exp((t0 + t)/u1) is the formal generator of the deformed twist
        return Transition.of(TwistedLaurent.e_power(1), 0, 0, 1, t0 + v.get("t", 0))

    def lam(v, order):
        return _const_biv([0, A + v.get("t1", 0)], t0 + v.get("t", 0))

    # d/dt exp((t0+t)/u1) at t = 0 is (1/u1) E
    gluing = (TwistedLaurent.e_power(1, _u(-1)), TwistedLaurent(), TwistedLaurent(), TwistedLaurent())
    dirs = (Direction("tau", "tau"), Direction("t", "gluing", gluing),
            Direction("t1", "bivector", GlobalSection.of(Sheaf.WEDGE2, {("biv", 1): 1})))
    return FamilyDefinition(P, "deformed twist", dirs, full, lam, lam, {"t": 0, "t1": 1})


def _sn_family(P: PoissonStructure, tr: Truncation) -> FamilyDefinition:
    n = P.family.n
    a0 = P.coeffs[0]
    A = EllipticFunction(P.coeffs[1], P.coeffs[2:])
    params = P.family.elliptic

    def full(v):
        return transition(P.family)

    def lam0(v, order):
        return Bivector.from_coeffs([0, a0 + v.get("t", 0), elliptic_to_series(A, params, order)])

    def lam1(v, order):
        return Bivector.from_coeffs([0, a0 + v.get("t", 0), elliptic_to_series(A, params, order).shift(n)])

    dirs = (Direction("tau", "tau"),
            Direction("t", "bivector", GlobalSection.of(Sheaf.WEDGE2, {("biv", 1): 1})))
    title = "deformed linear coefficient" if a0 else "linear coefficient switched on"
    return FamilyDefinition(P, title, dirs, full, lam0, lam1, {"t": 1})


def _a0_family(P: PoissonStructure, tr: Truncation) -> FamilyDefinition:
    (a0,) = P.coeffs

    def full(v):
        t = v.get("t", 0)
        return Transition.of(_u(1), 1, t, _u(1))

    def lam(v, order):
        t, t1 = v.get("t", 0), v.get("t1", 0)
        return _const_biv([a0 + t1, 0, -(a0 + t1) * t])

    def literal(v):
        t = v.get("t", 0)
        T = full(v)
        P_, Q_ = T.numerator(), T.denominator()
        lhs = Q_ * Q_ - P_ * P_ * t
        rhs = ChartFunction([1, 0, -t]) * (_u(2) - t)
        return lhs.agrees(rhs) and T.det.agrees(TwistedLaurent.lift(_u(2) - t))

    gluing = (TwistedLaurent(), TwistedLaurent(), TwistedLaurent.lift(1), TwistedLaurent())
    dirs = (Direction("tau", "tau"), Direction("t", "gluing", gluing),
            Direction("t1", "bivector", GlobalSection.of(Sheaf.WEDGE2, {("biv", 0): 1})))
    return FamilyDefinition(P, "Moebius deformation of the affine surface", dirs, full, lam, lam,
                            {"t": 3, "t1": 1}, literal)


def _am1_family(P: PoissonStructure, tr: Truncation) -> FamilyDefinition:
    def full(v):
        return transition(P.family)

    def lam(v, order):
        return _const_biv([])

    return FamilyDefinition(P, "modular family of the base curve", (Direction("tau", "tau"),),
                            full, lam, lam, {})


def registered_family(P: PoissonStructure, tr: Truncation | None = None) -> FamilyDefinition | None:
    """The explicit family known for the structure's class, if any."""
    tr = tr or Truncation.default(P.family)
    v = P.family.variant
    cls = coefficient_class(P)
    if v is Variant.S0:
        return None if cls == "0" else _s0_family(P, tr)
    if v is Variant.TWISTED:
        return _twisted_family(P, tr)
    if v is Variant.SN:
        return _sn_family(P, tr) if cls in ("a0!=0", "a0=0,c0!=0") else None
    if v is Variant.A0:
        return _a0_family(P, tr)
    return _am1_family(P, tr) if P.is_zero() else None


# ---------------------------------------------------------------------------
# well-definedness


def sample_points(F: FamilyDefinition, samples: int | None = None) -> list[dict]:
    """Grid of parameter values, ``degree + 1`` distinct rationals per parameter.

    A polynomial identity of degree at most ``d`` in each variable that holds on
    such a grid holds identically.
    """
    axes = []
    for name in F.sampled:
        need = F.degree_bounds.get(name, 0) + 1
        k = need if samples is None else samples
        if k < need:
            raise ValueError(f"{name} needs at least {need} samples")
        axes.append([Fraction(j + 1, 3) for j in range(k)])
    return [dict(zip(F.sampled, vals)) for vals in itertools.product(*axes)]


def lambda_matches(F: FamilyDefinition, values: dict, order: int = 12) -> bool:
    """Cleared identity ``L0(P/Q) Q^2 == det * L1`` at one parameter value."""
    T = F.full_transition(values)
    L0 = F.lambda_chart0(values, order)
    L1 = F.lambda_chart1(values, order)
    num, det = push_bivector_cleared(T, L0, to_chart=1)
    return num.agrees(L1.h * det)


def verify_lambda_welldefined(F: FamilyDefinition, samples: int | None = None) -> bool:
    for v in sample_points(F, samples):
        if not lambda_matches(F, v):
            return False
        if F.literal_checks is not None and not F.literal_checks(v):
            return False
    origin = {name: Fraction(0) for name in F.sampled}
    return lambda_matches(F, origin)


def origin_consistent(F: FamilyDefinition, tr: Truncation | None = None) -> bool:
    """At the parameter origin the family is the base Poisson surface."""
    tr = tr or Truncation.default(F.base.family)
    origin = {name: Fraction(0) for name in F.sampled}
    if not F.full_transition(origin).agrees(transition(F.base.family)):
        return False
    order = tr.N
    base = F.base.section().chart0_field(F.base.family, order)
    return F.lambda_chart0(origin, order).agrees(base)


# ---------------------------------------------------------------------------
# Kodaira-Spencer


def gluing_cocycle(T: Transition, jet: tuple) -> VectorField:
    """``(dT/dt) / (dT/dxi1) d_xi1`` written in the chart-1 frame.

    ``[(a' xi1 + b')(c xi1 + d) - (a xi1 + b)(c' xi1 + d')] / det``.
    """
    da, db, dc, dd = (TwistedLaurent.lift(x) for x in jet)
    tw = T.twist
    num = (ChartFunction([db, da], tw) * T.denominator()
           - T.numerator() * ChartFunction([dd, dc], tw))
    return VectorField((num * T.det.inverse()).trimmed(2), None, tw)


def tau_cocycle(P: PoissonStructure) -> VectorField:
    return VectorField.from_coeffs([], _u(-1), P.family.twist)


@dataclass
class KSMatrix:
    matrix: RatMatrix
    params: tuple[str, ...]
    hp1: int

    @property
    def rank(self) -> int:
        return self.matrix.rank()


def ks_matrix(F: FamilyDefinition, tr: Truncation | None = None) -> KSMatrix:
    """Kodaira-Spencer map into ``HP^1 = coker(H^0 map) + ker(H^1 map)``.

    Rows follow ``hp1_basis``; bivector directions fill the cokernel rows and
    gluing/``tau`` directions the kernel rows (the map is block triangular for
    this split, so its rank is read off these blocks).
    """
    P = F.base
    tr = tr or Truncation.default(P.family)
    pc = poisson_cohomology(P, tr)
    th = present(P.family, Sheaf.THETA, tr)
    wd = present(P.family, Sheaf.WEDGE2, tr)
    nc = len(pc.coker_indices)
    nk = len(pc.ker_h1)
    # jets are taken relative to the family's own normalisation of the Moebius data
    base_T = F.full_transition({name: Fraction(0) for name in F.sampled})
    cols = []
    for d in F.directions:
        col = [Fraction(0)] * (nc + nk)
        if d.kind == "bivector":
            w = h0_coordinates(wd, d.jet.chart0_field(P.family, tr.N))
            col[:nc] = coker_coordinates(pc, w)
        else:
            cocycle = tau_cocycle(P) if d.kind == "tau" else gluing_cocycle(base_T, d.jet)
            v = reduce_class(th, cocycle)
            k = ker_coordinates(pc, v)
            if k is None:
                raise InconsistentFamilyError(f"direction {d.name}: class {v} is not in ker(H^1 map)")
            col[nc:] = k
        cols.append(col)
    m = RatMatrix.from_columns(cols, nc + nk) if cols else RatMatrix(nc + nk, 0)
    return KSMatrix(m, F.params, pc.hp1)


def ks_is_isomorphism(F: FamilyDefinition, tr: Truncation | None = None) -> bool:
    ks = ks_matrix(F, tr)
    return ks.rank == ks.hp1 == len(ks.params)


@dataclass
class FamilyReport:
    family: FamilyDefinition
    well_defined: bool
    origin_ok: bool
    ks_rank: int
    hp1: int
    samples: int
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.well_defined and self.origin_ok and self.error is None and self.ks_rank == self.hp1


def verify_family(F: FamilyDefinition, tr: Truncation | None = None, samples: int | None = None) -> FamilyReport:
    tr = tr or Truncation.default(F.base.family)
    wd = verify_lambda_welldefined(F, samples)
    org = origin_consistent(F, tr)
    n = len(sample_points(F, samples))
    try:
        ks = ks_matrix(F, tr)
    except InconsistentFamilyError as exc:
        return FamilyReport(F, wd, org, 0, poisson_cohomology(F.base, tr).hp1, n, str(exc))
    return FamilyReport(F, wd, org, ks.rank, ks.hp1, n)
