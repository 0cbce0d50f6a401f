"""Poisson cohomology of a Poisson ruled surface ``(S, L0)``.

With ``H^2(S, Theta) = 0`` the hypercohomology of ``Theta -> wedge^2 Theta``
splits into kernels and cokernels of the maps induced by ``[L0, -]`` on
``H^0`` and ``H^1``:

    HP^0 = ker(H^0 map)
    HP^1 = coker(H^0 map) + ker(H^1 map)
    HP^2 = coker(H^1 map)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .atlas import SurfaceFamily, Variant
from .cech import (CohomologyPresentation, GlobalSection, Sheaf, Truncation, h0_coordinates,
                   present, reduce_class)
from .elliptic import EllipticFunction
from .exactalg import RatMatrix, as_rat, cokernel_complement, in_column_space, kernel_basis, solve
from .polyvector import Bivector, VectorField, schouten_bv


class ArityError(ValueError):
    """Coefficient vector of the wrong length for the surface."""


def coefficient_names(family: SurfaceFamily) -> tuple[str, ...]:
    v = family.variant
    if v is Variant.S0:
        return ("A", "B", "C")
    if v is Variant.TWISTED:
        return ("A",)
    if v is Variant.SN:
        return ("a0",) + tuple(f"c{k}" for k in range(family.n))
    if v is Variant.A0:
        return ("a0",)
    return ()


@dataclass(frozen=True)
class PoissonStructure:
    """A holomorphic Poisson structure in the normal form of its surface.

    ``coeffs`` are: ``(A, B, C)`` for ``S0`` giving ``(A + B xi + C xi^2)``;
    ``(A,)`` for twisted surfaces giving ``A xi``; ``(a0, c0, ..., c_{n-1})``
    for ``S_n`` giving ``a0 xi + (c0 + c1 wp + ... + c_{n-1} wp^(n-2)) xi^2``;
    ``(a0,)`` for ``A0``; nothing for ``A-1``.
    """

    family: SurfaceFamily
    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = tuple(as_rat(c) for c in self.coeffs)
        names = coefficient_names(self.family)
        if len(cs) != len(names):
            raise ArityError(f"{self.family.label} takes coefficients ({', '.join(names) or 'none'}), "
                             f"got {len(cs)}")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_mapping(cls, family: SurfaceFamily, values: dict[str, object]) -> "PoissonStructure":
        names = coefficient_names(family)
        unknown = set(values) - set(names)
        if unknown:
            raise ArityError(f"unknown coefficient(s) {sorted(unknown)} for {family.label}; "
                             f"expected ({', '.join(names) or 'none'})")
        return cls(family, tuple(values.get(k, 0) for k in names))

    def section(self) -> GlobalSection:
        """``L0`` as a global section of ``wedge^2 Theta``."""
        c = self.coeffs
        v = self.family.variant
        if v is Variant.S0:
            parts = {("biv", j): c[j] for j in range(3)}
        elif v is Variant.TWISTED:
            parts = {("biv", 1): c[0]}
        elif v is Variant.SN:
            parts = {("biv", 1): c[0], ("biv", 2): EllipticFunction(c[1], c[2:])}
        elif v is Variant.A0:
            parts = {("biv", 0): c[0]}
        else:
            parts = {}
        return GlobalSection.of(Sheaf.WEDGE2, parts)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def scaled(self, a) -> "PoissonStructure":
        a = as_rat(a)
        return PoissonStructure(self.family, tuple(a * c for c in self.coeffs))

    def __add__(self, other: "PoissonStructure") -> "PoissonStructure":
        return PoissonStructure(self.family, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))


def coefficient_class(P: PoissonStructure) -> str:
    """Label of the row of the classification the structure falls in."""
    v = P.family.variant
    c = P.coeffs
    if v is Variant.S0:
        return "0" if P.is_zero() else "(A,B,C)!=0"
    if v is Variant.TWISTED:
        return "any"
    if v is Variant.SN:
        if c[0]:
            return "a0!=0"
        if not any(c[1:]):
            return "0"
        return "a0=0,c0!=0" if P.family.n == 1 else "a0=0,A!=0"
    if v is Variant.A0:
        return "any"
    return "0"


def _order(tr: Truncation) -> int:
    return tr.N + 6


def induced_map_h0(P: PoissonStructure, tr: Truncation | None = None) -> RatMatrix:
    """``[L0, -]: H^0(Theta) -> H^0(wedge^2 Theta)`` in the presentation bases."""
    tr = tr or Truncation.default(P.family)
    th = present(P.family, Sheaf.THETA, tr)
    wd = present(P.family, Sheaf.WEDGE2, tr)
    order = _order(tr)
    L = P.section().chart0_field(P.family, order)
    cols = []
    for sec in th.h0_basis:
        v = sec.chart0_field(P.family, order)
        cols.append(h0_coordinates(wd, schouten_bv(L, v)))
    return RatMatrix.from_columns(cols, wd.dim_h0) if cols else RatMatrix(wd.dim_h0, 0)


def lambda_on_overlap(P: PoissonStructure, tr: Truncation | None = None) -> Bivector:
    tr = tr or Truncation.default(P.family)
    return P.section().chart1_field(P.family, _order(tr))


def induced_map_h1(P: PoissonStructure, tr: Truncation | None = None) -> RatMatrix:
    """``[L0, -]: H^1(Theta) -> H^1(wedge^2 Theta)`` in the representative bases."""
    tr = tr or Truncation.default(P.family)
    th = present(P.family, Sheaf.THETA, tr)
    wd = present(P.family, Sheaf.WEDGE2, tr)
    L1 = lambda_on_overlap(P, tr)
    cols = [reduce_class(wd, schouten_bv(L1, rep)) for rep in th.h1_reps]
    return RatMatrix.from_columns(cols, wd.dim_h1) if cols else RatMatrix(wd.dim_h1, 0)


@dataclass
class HP1Class:
    """A basis element of ``HP^1``: either a global bivector modulo the image of
    the ``H^0`` map, or a combination of ``H^1(Theta)`` representatives."""

    kind: str                     # "coker" or "ker"
    coords: tuple[Fraction, ...]  # in h0_basis(wedge^2) or h1_reps(Theta)


@dataclass
class PoissonCohomology:
    structure: PoissonStructure
    hp0: int
    hp1: int
    hp2: int
    hp1_basis: list[HP1Class]
    map_h0: RatMatrix
    map_h1: RatMatrix
    coker_indices: list[int]                         # complement of im(map_h0) in H^0(wedge^2)
    ker_h1: list[tuple[Fraction, ...]] = field(default_factory=list)

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.hp0, self.hp1, self.hp2)


def poisson_cohomology(P: PoissonStructure, tr: Truncation | None = None) -> PoissonCohomology:
    tr = tr or Truncation.default(P.family)
    A = induced_map_h0(P, tr)
    B = induced_map_h1(P, tr)
    rank_a, coker = cokernel_complement(A)
    ker_a = kernel_basis(A)
    ker_b = kernel_basis(B)
    rank_b = B.cols - len(ker_b)
    basis = [HP1Class("coker", tuple(Fraction(int(i == j)) for i in range(A.rows))) for j in coker]
    basis += [HP1Class("ker", k) for k in ker_b]
    return PoissonCohomology(P, len(ker_a), (A.rows - rank_a) + len(ker_b), B.rows - rank_b,
                             basis, A, B, coker, ker_b)


@dataclass
class Witness:
    a_index: int                     # position in h0_basis(wedge^2)
    a: GlobalSection
    b_coords: tuple[Fraction, ...]   # in h1_reps(Theta); lies in ker(map_h1)
    b: VectorField
    bracket_class: tuple[Fraction, ...]


def _combine(reps: Sequence[VectorField], coords: Sequence[Fraction]) -> VectorField:
    out = None
    for r, c in zip(reps, coords):
        if c:
            term = r.scale(c)
            out = term if out is None else out + term
    return out if out is not None else reps[0].scale(0)


def obstruction_witness(P: PoissonStructure, tr: Truncation | None = None) -> Witness | None:
    """First basis pair ``(a, b)`` whose bracket class leaves the image of the ``H^1`` map.

    ``a`` runs over ``h0_basis(wedge^2)`` and ``b`` over a kernel basis of the
    ``H^1`` map, lexicographically.  ``None`` means no basis pair qualifies; that
    alone does not show the structure is unobstructed.
    """
    tr = tr or Truncation.default(P.family)
    th = present(P.family, Sheaf.THETA, tr)
    wd = present(P.family, Sheaf.WEDGE2, tr)
    B = induced_map_h1(P, tr)
    kers = kernel_basis(B)
    order = _order(tr)
    for i, a in enumerate(wd.h0_basis):
        a1 = a.chart1_field(P.family, order)
        for k in kers:
            b = _combine(th.h1_reps, k)
            cls = reduce_class(wd, schouten_bv(a1, b))
            if not in_column_space(B, cls):
                return Witness(i, a, k, b, cls)
    return None


class Verdict(str, Enum):
    OBSTRUCTED = "obstructed"
    UNOBSTRUCTED = "unobstructed"
    INCONCLUSIVE = "inconclusive"


def verdict(P: PoissonStructure, tr: Truncation | None = None) -> Verdict:
    if obstruction_witness(P, tr) is not None:
        return Verdict.OBSTRUCTED
    from .families import registered_family, verify_family

    fam = registered_family(P, tr)
    if fam is not None and verify_family(fam, tr).ok:
        return Verdict.UNOBSTRUCTED
    return Verdict.INCONCLUSIVE


def coker_coordinates(pc: PoissonCohomology, w: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Coordinates of ``w`` (in h0_basis(wedge^2)) modulo the image of the ``H^0`` map."""
    A = pc.map_h0
    E = RatMatrix(A.rows, len(pc.coker_indices), {(i, k): 1 for k, i in enumerate(pc.coker_indices)})
    x = solve(A.hstack(E), list(w))
    if x is None:
        raise ArithmeticError("vector outside H^0(wedge^2)")
    return tuple(x[A.cols:])


def ker_coordinates(pc: PoissonCohomology, v: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
    """Coordinates of ``v`` (in h1_reps(Theta)) in the kernel basis; ``None`` if not in the kernel."""
    n = pc.map_h1.cols
    if not pc.ker_h1:
        return () if not any(v) else None
    K = RatMatrix.from_columns(pc.ker_h1, n)
    return solve(K, list(v))
