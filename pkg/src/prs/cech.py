"""Cech cohomology of the tangent sheaf and of its second exterior power.

The cover is ``{U x P^1, U1 x P^1}``.  A 0-cochain is a pair of sections, a
1-cochain a field on the overlap written in the chart-1 frame as a Laurent
series in ``u1``.  Chart-0 sections have coefficients in the span of
``1, wp, wp', ..., wp^(K)``; chart-1 sections are holomorphic in ``u1``.

Chart-1 sections fill every non-negative power of ``u1``, so both cohomology
groups are read off the *polar* part of the coboundary: ``H^0`` is the kernel
of the chart-0 -> polar-part map and ``H^1`` its cokernel inside the polar
monomials of depth at most ``M``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .atlas import SurfaceFamily, Variant, push_bivector, push_vector, transition
from .elliptic import EllipticFunction, elliptic_to_series, format_elliptic
from .exactalg import (LaurentSeries, RatMatrix, TwistedLaurent, UntrustedWindowError,
                       cokernel_complement, format_series, kernel_basis, solve)
from .polyvector import Bivector, ChartFunction, VectorField

Field = Union[VectorField, Bivector]
Block = tuple[str, int]


class Sheaf(str, Enum):
    THETA = "theta"
    WEDGE2 = "wedge2"


@dataclass(frozen=True)
class Truncation:
    """``M``: pole depth of overlap classes, ``N``: holomorphic order on chart 1,
    ``K``: highest ``wp`` derivative on chart 0."""

    M: int
    N: int
    K: int

    @classmethod
    def default(cls, family: SurfaceFamily) -> "Truncation":
        n = family.n_eff
        M = 2 * n + 6
        return cls(M, M, M + n + 2)

    def doubled(self) -> "Truncation":
        return Truncation(2 * self.M, 2 * self.N, 2 * self.K)

    def check(self, family: SurfaceFamily):
        n = family.n_eff
        if self.M < n + 3 or self.N < self.M or self.K < n:
            raise ValueError(f"truncation {self} below the minimum for {family.label} "
                             f"(M >= {n + 3}, N >= M, K >= {n})")


def blocks(family: SurfaceFamily, sheaf: Sheaf) -> list[Block]:
    """xi-monomial blocks carried by the cochains.

    For twisted surfaces only the blocks where the ``exp(t0/u1)`` factors cancel
    are kept; the others contribute nothing to either cohomology group.
    """
    sheaf = Sheaf(sheaf)
    twisted = family.variant is Variant.TWISTED
    if sheaf is Sheaf.THETA:
        return [("xi", 1), ("u", 0)] if twisted else [("xi", 0), ("xi", 1), ("xi", 2), ("u", 0)]
    return [("biv", 1)] if twisted else [("biv", 0), ("biv", 1), ("biv", 2)]


# ---------------------------------------------------------------------------
# field <-> block helpers


def field_from_blocks(parts: dict[Block, object], sheaf: Sheaf, twist=0) -> Field:
    """Assemble a field from per-block coefficients (series, rationals, ...)."""
    if Sheaf(sheaf) is Sheaf.THETA:
        xi = [parts.get(("xi", j), 0) for j in range(3)]
        return VectorField.from_coeffs(xi, parts.get(("u", 0), 0), twist)
    return Bivector.from_coeffs([parts.get(("biv", j), 0) for j in range(3)], twist)


def block_coefficient(f: Field, block: Block) -> TwistedLaurent:
    kind, j = block
    if kind == "xi":
        return f.xi_part.coeff(j)
    if kind == "u":
        return f.u_part.coeff(0)
    return f.h.coeff(j)


def _all_blocks(sheaf: Sheaf) -> list[Block]:
    if Sheaf(sheaf) is Sheaf.THETA:
        return [("xi", 0), ("xi", 1), ("xi", 2), ("u", 0)]
    return [("biv", 0), ("biv", 1), ("biv", 2)]


@dataclass(frozen=True)
class GlobalSection:
    """A global section, stored by its chart-0 expression."""

    sheaf: Sheaf
    chart0: tuple[tuple[Block, EllipticFunction], ...]

    @classmethod
    def of(cls, sheaf: Sheaf, parts: dict[Block, object]) -> "GlobalSection":
        items = []
        for b in _all_blocks(sheaf):
            f = parts.get(b)
            if f is None:
                continue
            if not isinstance(f, EllipticFunction):
                f = EllipticFunction.const(f)
            if not f.is_zero():
                items.append((b, f))
        return cls(Sheaf(sheaf), tuple(items))

    def part(self, block: Block) -> EllipticFunction:
        return dict(self.chart0).get(block, EllipticFunction())

    def chart0_field(self, family: SurfaceFamily, order: int) -> Field:
        """Chart-0 expression with coefficients expanded around ``p``."""
        parts = {b: elliptic_to_series(f, family.elliptic, order) for b, f in self.chart0}
        return field_from_blocks(parts, self.sheaf, family.twist)

    def chart1_field(self, family: SurfaceFamily, order: int) -> Field:
        return push_to_chart1(family, self.chart0_field(family, order + _margin(family)))

    def __str__(self):
        return format_section(self)


def format_section(sec: GlobalSection) -> str:
    gens = {"xi": ("d_xi", True), "u": ("d_u", False), "biv": ("d_xi^d_u", True)}
    parts = []
    for (kind, j), f in sec.chart0:
        gen, has_xi = gens[kind]
        mono = ("" if j == 0 else ("xi" if j == 1 else f"xi^{j}")) if has_xi else ""
        coef = format_elliptic(f)
        if " " in coef:
            coef = f"({coef})"
        pieces = [x for x in (None if coef == "1" else coef, mono or None, gen) if x]
        parts.append("*".join(pieces))
    return " + ".join(parts) if parts else "0"


def format_field(f: Field) -> str:
    if isinstance(f, VectorField):
        terms = [(f.xi_part.coeff(j), j, "d_xi1") for j in range(3)] + [(f.u_part.coeff(0), 0, "d_u1")]
    else:
        terms = [(f.h.coeff(j), j, "d_xi1^d_u1") for j in range(3)]
    out = []
    for c, j, gen in terms:
        if c.is_zero():
            continue
        mono = "" if j == 0 else ("xi1" if j == 1 else f"xi1^{j}")
        for m in c.e_degrees():
            s = format_series(c.part(m))
            e = "" if m == 0 else (f"E^{m}*" if m != 1 else "E*")
            out.append(f"{e}({s})" + (f"*{mono}" if mono else "") + f"*{gen}")
    return " + ".join(out) if out else "0"


def _margin(family: SurfaceFamily) -> int:
    return 2 * family.n_eff + 4


def push_to_chart1(family: SurfaceFamily, f: Field) -> Field:
    tr = transition(family)
    if isinstance(f, VectorField):
        return push_vector(tr, f, to_chart=1)
    return push_bivector(tr, f, to_chart=1)


def push_to_chart0(family: SurfaceFamily, f: Field) -> Field:
    tr = transition(family)
    if isinstance(f, VectorField):
        return push_vector(tr, f, to_chart=0)
    return push_bivector(tr, f, to_chart=0)


# ---------------------------------------------------------------------------
# the polar coboundary


def _function_basis(K: int) -> list[EllipticFunction]:
    return [EllipticFunction.const(1)] + [EllipticFunction.wp(k) for k in range(K + 1)]


def _function_label(i: int) -> str:
    return "1" if i == 0 else ("wp" if i == 1 else f"wp^({i - 1})")


@dataclass
class _Pushed:
    columns: list[tuple[Block, int]]
    polar: list[dict[Block, dict[int, Fraction]]]
    regular: list[dict[Block, dict[int, Fraction]]]
    depth: int


def _push_columns(family: SurfaceFamily, sheaf: Sheaf, trunc: Truncation) -> _Pushed:
    bl = blocks(family, sheaf)
    funcs = _function_basis(trunc.K)
    order = trunc.N + _margin(family)
    cols, polar, regular = [], [], []
    depth = 0
    for b in bl:
        for i, f in enumerate(funcs):
            sec = GlobalSection.of(sheaf, {b: f})
            pushed = push_to_chart1(family, sec.chart0_field(family, order))
            pp: dict[Block, dict[int, Fraction]] = {}
            rg: dict[Block, dict[int, Fraction]] = {}
            for b1 in _all_blocks(sheaf):
                c = block_coefficient(pushed, b1)
                if b1 not in bl:
                    continue
                s = c.degree0()
                if s.hi is not None and s.hi < trunc.N:
                    raise UntrustedWindowError(f"push of {b}*{_function_label(i)} trusted only to u1^{s.hi}")
                for e, v in s.items():
                    if e < 0:
                        pp.setdefault(b1, {})[e] = v
                        depth = max(depth, -e)
                    elif e <= trunc.N:
                        rg.setdefault(b1, {})[e] = v
            cols.append((b, i))
            polar.append(pp)
            regular.append(rg)
    return _Pushed(cols, polar, regular, depth)


def _polar_rows(bl: Sequence[Block], depth: int) -> list[tuple[Block, int]]:
    return [(b, -d) for b in bl for d in range(1, depth + 1)]


def coboundary_matrix(family: SurfaceFamily, sheaf: Sheaf, trunc: Truncation | None = None) -> RatMatrix:
    """Matrix of ``delta(s0, s1) = s0|overlap - s1|overlap`` in chart-1 frame.

    Columns: chart-0 basis (block x {1, wp, ..., wp^(K)}) followed by chart-1
    basis (block x u1^m, 0 <= m <= N).  Rows: block x u1^m for
    ``-R <= m <= N`` where ``R`` is the deepest pole produced by a column (at
    least ``M``).
    """
    sheaf = Sheaf(sheaf)
    trunc = trunc or Truncation.default(family)
    trunc.check(family)
    data = _push_columns(family, sheaf, trunc)
    bl = blocks(family, sheaf)
    R = max(trunc.M, data.depth)
    rows = [(b, m) for b in bl for m in range(-R, trunc.N + 1)]
    index = {r: i for i, r in enumerate(rows)}
    entries = {}
    for j in range(len(data.columns)):
        for part in (data.polar[j], data.regular[j]):
            for b, terms in part.items():
                for e, v in terms.items():
                    entries[index[b, e], j] = v
    off = len(data.columns)
    for k, (b, m) in enumerate((b, m) for b in bl for m in range(trunc.N + 1)):
        entries[index[b, m], off + k] = -1
    return RatMatrix(len(rows), off + len(bl) * (trunc.N + 1), entries)


# ---------------------------------------------------------------------------
# presentations


@dataclass
class CohomologyPresentation:
    family: SurfaceFamily
    sheaf: Sheaf
    truncation: Truncation
    blocks: list[Block]
    h0_basis: list[GlobalSection]
    h1_reps: list[Field]
    computed_h0: list[GlobalSection]
    computed_reps: list[Field]
    coboundary: RatMatrix                 # chart-0 columns -> polar rows
    rows: list[tuple[Block, int]]
    literature_h0_matched: bool
    literature_h1_matched: bool
    _phi: RatMatrix = field(repr=False, default=None)
    _psi: RatMatrix = field(repr=False, default=None)

    @property
    def depth(self) -> int:
        return max((-m for _, m in self.rows), default=0)

    @property
    def dim_h0(self) -> int:
        return len(self.h0_basis)

    @property
    def dim_h1(self) -> int:
        return len(self.h1_reps)


def cocycle_vector(pres: CohomologyPresentation, cocycle: Field) -> list[Fraction]:
    """Polar coefficients of an overlap field on the presentation's rows."""
    index = {r: i for i, r in enumerate(pres.rows)}
    vec = [Fraction(0)] * len(pres.rows)
    for b in _all_blocks(pres.sheaf):
        c = block_coefficient(cocycle, b)
        if c.is_zero():
            continue
        if b not in pres.blocks:
            # blocks where exp(t0/u1) factors survive are acyclic
            continue
        if any(c.e_degrees()):
            raise ValueError(f"cocycle has an E-twisted component in block {b}")
        s = c.degree0()
        for e, v in s.principal_part().items():
            if (b, e) not in index:
                raise UntrustedWindowError(f"pole u1^{e} deeper than the presentation's window")
            vec[index[b, e]] = v
    return vec


def reduce_class(pres: CohomologyPresentation, cocycle: Field) -> tuple[Fraction, ...]:
    """Coordinates of the class of ``cocycle`` in ``pres.h1_reps``."""
    p = cocycle_vector(pres, cocycle)
    if any(pres._psi.matvec(p)):
        raise UntrustedWindowError("cocycle is not reducible within the truncation window")
    return tuple(pres._phi.matvec(p))


def is_coboundary(pres: CohomologyPresentation, cocycle: Field) -> bool:
    return not any(reduce_class(pres, cocycle))


def _section_from_kernel(vec, columns, sheaf) -> GlobalSection:
    parts: dict[Block, EllipticFunction] = {}
    for v, (b, i) in zip(vec, columns):
        if not v:
            continue
        f = EllipticFunction.const(v) if i == 0 else EllipticFunction.wp(i - 1, v)
        parts[b] = parts.get(b, EllipticFunction()) + f
    return GlobalSection.of(sheaf, parts)


def section_vector(sec: GlobalSection, columns: Sequence[tuple[Block, int]]) -> list[Fraction] | None:
    """Coordinates of a section in the chart-0 column basis (None if outside it)."""
    index = {c: k for k, c in enumerate(columns)}
    vec = [Fraction(0)] * len(columns)
    for b, f in sec.chart0:
        terms = [(0, f.constant)] + [(k + 1, c) for k, c in enumerate(f.wp_coeffs)]
        for i, c in terms:
            if not c:
                continue
            if (b, i) not in index:
                return None
            vec[index[b, i]] = c
    return vec


def _rep_field(parts: dict[Block, LaurentSeries | int], sheaf, twist) -> Field:
    return field_from_blocks(parts, sheaf, twist)


def literature_h0_basis(family: SurfaceFamily, sheaf: Sheaf) -> list[GlobalSection]:
    """Global sections as displayed in the literature for each surface."""
    sheaf = Sheaf(sheaf)
    wp = EllipticFunction.wp
    v = family.variant
    G = lambda d: GlobalSection.of(sheaf, d)  # noqa: E731
    if sheaf is Sheaf.THETA:
        if v is Variant.S0:
            return [G({("u", 0): 1}), G({("xi", 0): 1}), G({("xi", 1): 1}), G({("xi", 2): 1})]
        if v is Variant.TWISTED:
            return [G({("xi", 1): 1}), G({("xi", 1): wp(0, -family.t0), ("u", 0): 1})]
        if v is Variant.SN:
            return [G({("xi", 1): 1}), G({("xi", 2): 1})] + [G({("xi", 2): wp(k)}) for k in range(family.n - 1)]
        if v is Variant.A0:
            return [G({("xi", 0): 1}), G({("xi", 0): wp(0, -1), ("u", 0): 1})]
        return [G({("xi", 0): wp(0, -3), ("xi", 2): 1, ("u", 0): 2})]
    if v is Variant.S0:
        return [G({("biv", j): 1}) for j in range(3)]
    if v is Variant.TWISTED:
        return [G({("biv", 1): 1})]
    if v is Variant.SN:
        return [G({("biv", 1): 1}), G({("biv", 2): 1})] + [G({("biv", 2): wp(k)}) for k in range(family.n - 1)]
    if v is Variant.A0:
        return [G({("biv", 0): 1})]
    return []


def literature_h1_reps(family: SurfaceFamily, sheaf: Sheaf) -> list[Field]:
    """Overlap representatives as displayed in the literature (chart-1 frame)."""
    sheaf = Sheaf(sheaf)
    u = LaurentSeries.monomial
    t = family.twist
    v = family.variant
    R = lambda d: _rep_field(d, sheaf, t)  # noqa: E731
    if sheaf is Sheaf.THETA:
        du = R({("u", 0): u(-1)})
        if v is Variant.S0:
            return [du] + [R({("xi", j): u(-1)}) for j in range(3)]
        if v is Variant.TWISTED:
            return [du, R({("xi", 1): u(-1)})]
        if v is Variant.SN:
            n = family.n
            return [du, R({("xi", 0): u(-n - 1)})] + [R({("xi", 0): u(-k)}) for k in range(1, n)]
        if v is Variant.A0:
            return [du, R({("xi", 2): u(-1, -1), ("xi", 1): u(-2, -1)})]
        return [du]
    if v is Variant.S0:
        return [R({("biv", j): u(-1)}) for j in range(3)]
    if v is Variant.TWISTED:
        return [R({("biv", 1): u(-1)})]
    if v is Variant.SN:
        n = family.n
        return [R({("biv", 1): u(-1)}), R({("biv", 0): u(-n - 1)})] + [R({("biv", 0): u(-k)}) for k in range(1, n)]
    if v is Variant.A0:
        return [R({("biv", 2): u(-1)})]
    return []


def _present(family: SurfaceFamily, sheaf: Sheaf, trunc: Truncation) -> CohomologyPresentation:
    trunc.check(family)
    bl = blocks(family, sheaf)
    data = _push_columns(family, sheaf, trunc)
    rows = _polar_rows(bl, max(data.depth, trunc.M))
    index = {r: i for i, r in enumerate(rows)}
    entries = {}
    for j, pp in enumerate(data.polar):
        for b, terms in pp.items():
            for e, v in terms.items():
                entries[index[b, e], j] = v
    Mp = RatMatrix(len(rows), len(data.columns), entries)

    computed_h0 = [_section_from_kernel(k, data.columns, sheaf) for k in kernel_basis(Mp)]
    cand = sorted((i for i, (b, m) in enumerate(rows) if -m <= trunc.M),
                  key=lambda i: (-rows[i][1], bl.index(rows[i][0])))
    rank, picked = cokernel_complement(Mp, cand)
    computed_reps = [_rep_field({rows[i][0]: LaurentSeries.monomial(rows[i][1])}, sheaf, family.twist)
                     for i in picked]

    pres = CohomologyPresentation(family, Sheaf(sheaf), trunc, bl, computed_h0, computed_reps,
                                  computed_h0, computed_reps, Mp, rows, False, False)

    # literature bases: keep them as canonical when they check out
    lit_h0 = literature_h0_basis(family, sheaf)
    vecs = [section_vector(s, data.columns) for s in lit_h0]
    if (len(lit_h0) == len(computed_h0) and all(v is not None for v in vecs)
            and not any(x for v in vecs for x in Mp.matvec(v))
            and (not vecs or RatMatrix.from_columns(vecs, len(data.columns)).rank() == len(vecs))):
        pres.h0_basis = lit_h0
        pres.literature_h0_matched = True

    lit_reps = literature_h1_reps(family, sheaf)
    reps = computed_reps
    if len(lit_reps) == len(computed_reps):
        try:
            rv = [cocycle_vector(pres, r) for r in lit_reps]
        except (UntrustedWindowError, ValueError):
            rv = None
        if rv is not None:
            full = Mp.hstack(RatMatrix.from_columns(rv, len(rows))) if rv else Mp
            if full.rank() == rank + len(rv):
                reps = lit_reps
                pres.literature_h1_matched = True
    pres.h1_reps = reps
    _build_reduction(pres)
    return pres


def _build_reduction(pres: CohomologyPresentation):
    Mp = pres.coboundary
    nrows = len(pres.rows)
    h = len(pres.h1_reps)
    rep_cols = [cocycle_vector(pres, r) for r in pres.h1_reps]
    Z = kernel_basis(Mp.transpose())  # left null space of the polar map
    Zm = RatMatrix.from_rows(Z, nrows) if Z else RatMatrix(0, nrows)
    S = Zm @ RatMatrix.from_columns(rep_cols, nrows) if h else RatMatrix(len(Z), 0)
    # G with G S = I: columns of G^T solve S^T x = e_i
    St = S.transpose()
    g_rows = []
    for i in range(h):
        x = solve(St, [1 if k == i else 0 for k in range(h)])
        if x is None:
            raise UntrustedWindowError("representatives are not independent modulo coboundaries")
        g_rows.append(x)
    G = RatMatrix.from_rows(g_rows, len(Z)) if h else RatMatrix(0, len(Z))
    pres._phi = G @ Zm if Z else RatMatrix(h, nrows)
    # consistency: left null space of [Mp | reps]
    full = Mp.hstack(RatMatrix.from_columns(rep_cols, nrows)) if h else Mp
    W = kernel_basis(full.transpose())
    pres._psi = RatMatrix.from_rows(W, nrows) if W else RatMatrix(0, nrows)


@lru_cache(maxsize=256)
def present(family: SurfaceFamily, sheaf: Sheaf, trunc: Truncation | None = None) -> CohomologyPresentation:
    """``H^0`` and ``H^1`` of ``sheaf`` on ``family`` with a reduction map."""
    return _present(family, Sheaf(sheaf), trunc or Truncation.default(family))


def h0(family: SurfaceFamily, sheaf: Sheaf, trunc: Truncation | None = None) -> list[GlobalSection]:
    return present(family, Sheaf(sheaf), trunc).h0_basis


def h1(family: SurfaceFamily, sheaf: Sheaf, trunc: Truncation | None = None) -> CohomologyPresentation:
    return present(family, Sheaf(sheaf), trunc)


@lru_cache(maxsize=256)
def stabilize(family: SurfaceFamily, sheaf: Sheaf, trunc: Truncation | None = None) -> tuple[tuple[int, int], bool]:
    """Dimensions at ``trunc`` and whether they survive doubling every bound."""
    trunc = trunc or Truncation.default(family)
    a = present(family, Sheaf(sheaf), trunc)
    b = present(family, Sheaf(sheaf), trunc.doubled())
    dims = (a.dim_h0, a.dim_h1)
    return dims, dims == (b.dim_h0, b.dim_h1)


# ---------------------------------------------------------------------------
# coordinates of global sections


def h0_coordinates(pres: CohomologyPresentation, f: Field) -> tuple[Fraction, ...]:
    """Coordinates in ``pres.h0_basis`` of a chart-0 field given by Laurent expansions.

    ``f`` is compared with the basis expansions coefficient by coefficient over
    its trusted window; an inconsistent system raises ``ValueError``.
    """
    hi = None
    for b in _all_blocks(pres.sheaf):
        c = block_coefficient(f, b)
        if b not in pres.blocks:
            if not c.is_zero():
                raise ValueError(f"component in block {b} outside the global-section ansatz")
            continue
        s = c.degree0()
        hi = s.hi if hi is None else (hi if s.hi is None else min(hi, s.hi))
    if hi is None:
        # exact input: compare through a fixed order
        hi = pres.truncation.N
    order = hi
    basis = [sec.chart0_field(pres.family, order) for sec in pres.h0_basis]
    vals = [block_coefficient(g, b).degree0().valuation() for g in basis + [f] for b in pres.blocks]
    lo = min((v for v in vals if v is not None), default=0)
    rows, rhs = [], []
    for b in pres.blocks:
        for e in range(lo, order + 1):
            rows.append([block_coefficient(g, b).degree0().as_dict().get(e, 0) for g in basis])
            rhs.append(block_coefficient(f, b).degree0().as_dict().get(e, 0))
    if not basis:
        if any(rhs):
            raise ValueError("nonzero field but the space of global sections is zero")
        return ()
    x = solve(RatMatrix.from_rows(rows, len(basis)), rhs)
    if x is None:
        raise ValueError("field is not a combination of the global-section basis")
    return x
