"""Exact scalars, windowed Laurent series and rational linear algebra.

Everything here is exact: scalars are :class:`fractions.Fraction`, series carry
an explicit trust window, and linear algebra is sparse Gaussian elimination
over the rationals.

Window convention for :class:`LaurentSeries`: ``lo`` is a valuation floor
(nothing is stored below it) and ``hi`` is the truncation order (coefficients
above it are unknown).  ``hi is None`` marks an exact object, e.g. a Laurent
polynomial.  Reading a coefficient outside ``[lo, hi]`` raises
:class:`UntrustedWindowError`.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rat = Fraction


class UntrustedWindowError(ArithmeticError):
    """A coefficient outside the trust window was requested."""


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not admitted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def _min_hi(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _add_hi(a: int | None, k: int) -> int | None:
    return None if a is None else a + k


class LaurentSeries:
    """Truncated Laurent series in ``u1`` with rational coefficients."""

    __slots__ = ("_c", "lo", "hi")

    def __init__(self, coeffs: Mapping[int, object] | None = None, lo: int | None = None,
                 hi: int | None = None):
        c = {}
        for e, v in (coeffs or {}).items():
            v = as_rat(v)
            if v and (hi is None or e <= hi):
                c[int(e)] = v
        if lo is None:
            lo = min(c) if c else 0
        if c and min(c) < lo:
            raise ValueError(f"coefficient below window floor {lo}")
        self._c = c
        self.lo = lo
        self.hi = hi

    # construction -------------------------------------------------------
    @classmethod
    def monomial(cls, e: int, c=1, hi: int | None = None) -> "LaurentSeries":
        return cls({e: c}, lo=e, hi=hi)

    @classmethod
    def constant(cls, c=1, hi: int | None = None) -> "LaurentSeries":
        return cls({0: c}, lo=0, hi=hi)

    @classmethod
    def zero(cls, lo: int = 0, hi: int | None = None) -> "LaurentSeries":
        return cls({}, lo=lo, hi=hi)

    # access -------------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.hi is None

    def items(self):
        return sorted(self._c.items())

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self._c)

    def coeff(self, e: int) -> Fraction:
        if e < self.lo or (self.hi is not None and e > self.hi):
            raise UntrustedWindowError(f"u1^{e} outside window [{self.lo}, {self.hi}]")
        return self._c.get(e, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def valuation(self) -> int | None:
        return min(self._c) if self._c else None

    def degree(self) -> int | None:
        return max(self._c) if self._c else None

    def principal_part(self) -> "LaurentSeries":
        if self.hi is not None and self.hi < -1:
            raise UntrustedWindowError("principal part needs the window to reach u1^-1")
        return LaurentSeries({e: v for e, v in self._c.items() if e < 0}, lo=min(self.lo, -1))

    def truncate(self, hi: int) -> "LaurentSeries":
        return LaurentSeries(self._c, lo=min(self.lo, hi), hi=_min_hi(self.hi, hi))

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by ``u1**k``."""
        return LaurentSeries({e + k: v for e, v in self._c.items()}, lo=self.lo + k,
                             hi=_add_hi(self.hi, k))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.constant(other)
        hi = _min_hi(self.hi, other.hi)
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return LaurentSeries(c, lo=min(self.lo, other.lo), hi=hi)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries({e: -v for e, v in self._c.items()}, lo=self.lo, hi=self.hi)

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, a) -> "LaurentSeries":
        a = as_rat(a)
        return LaurentSeries({e: a * v for e, v in self._c.items()}, lo=self.lo, hi=self.hi)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        hi = _min_hi(_add_hi(d, a), _add_hi(b, c))
        out: dict[int, Fraction] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                if hi is None or e <= hi:
                    out[e] = out.get(e, 0) + v1 * v2
        return LaurentSeries(out, lo=a + c, hi=hi)

    def __rmul__(self, other):
        return self.scale(other)

    def derivative(self) -> "LaurentSeries":
        return LaurentSeries({e - 1: e * v for e, v in self._c.items() if e},
                             lo=self.lo - 1, hi=_add_hi(self.hi, -1))

    def inverse(self, order: int | None = None) -> "LaurentSeries":
        """Multiplicative inverse.

        Exact monomials invert exactly.  Anything else is inverted as
        ``u1^-v * (power series)^-1`` up to ``order`` (defaulting to what the
        input window supports).
        """
        v = self.valuation()
        if v is None:
            raise ZeroDivisionError("inverse of zero series")
        if self.hi is None and len(self._c) == 1:
            return LaurentSeries.monomial(-v, 1 / self._c[v])
        rel_hi = None if self.hi is None else self.hi - v
        if order is not None:
            rel_hi = order + v if rel_hi is None else min(rel_hi, order + v)
        if rel_hi is None:
            raise ValueError("inverting a non-monomial exact series needs an order")
        unit = {e - v: c for e, c in self._c.items()}
        c0 = unit[0]
        inv = {0: 1 / c0}
        for k in range(1, rel_hi + 1):
            s = sum(unit.get(j, 0) * inv[k - j] for j in range(1, k + 1))
            inv[k] = -s / c0
        return LaurentSeries(inv, lo=0, hi=rel_hi).shift(-v)

    def __eq__(self, other):
        if isinstance(other, LaurentSeries):
            return self.agrees(other)
        return NotImplemented

    __hash__ = None

    def agrees(self, other: "LaurentSeries") -> bool:
        """Coefficientwise equality inside the common trust window."""
        return (self - other).is_zero()

    def __repr__(self):
        return f"LaurentSeries({format_series(self)}, window=[{self.lo}, {self.hi}])"


def format_series(s: LaurentSeries, var: str = "u1") -> str:
    if s.is_zero():
        txt = "0"
    else:
        parts = []
        for e, v in s.items():
            mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
            coef = str(v)
            if mono and v == 1:
                coef = ""
            elif mono and v == -1:
                coef = "-"
            parts.append(f"{coef}{'*' if coef not in ('', '-') and mono else ''}{mono}")
        txt = " + ".join(parts).replace("+ -", "- ")
    if s.hi is not None:
        txt += f" + O({var}^{s.hi + 1})"
    return txt


class TwistedLaurent:
    """Finite sum of ``E**m * L_m`` with ``E`` standing for ``exp(t0/u1)``.

    ``E`` is a formal unit with derivation ``E' = -(t0/u1^2) E``; the twist
    ``t0`` is supplied when differentiating.
    """

    __slots__ = ("parts",)

    def __init__(self, parts: Mapping[int, LaurentSeries] | None = None):
        self.parts = {int(m): s for m, s in (parts or {}).items()}

    @classmethod
    def lift(cls, x) -> "TwistedLaurent":
        if isinstance(x, TwistedLaurent):
            return x
        if isinstance(x, LaurentSeries):
            return cls({0: x})
        return cls({0: LaurentSeries.constant(x)}) if as_rat(x) else cls({})

    @classmethod
    def e_power(cls, m: int, s: LaurentSeries | None = None) -> "TwistedLaurent":
        return cls({m: s if s is not None else LaurentSeries.constant(1)})

    def part(self, m: int) -> LaurentSeries:
        return self.parts.get(m, LaurentSeries.zero())

    def e_degrees(self) -> list[int]:
        return sorted(m for m, s in self.parts.items() if not s.is_zero())

    def is_zero(self) -> bool:
        return all(s.is_zero() for s in self.parts.values())

    def degree0(self) -> LaurentSeries:
        """The E-degree-0 part; other degrees must vanish."""
        for m, s in self.parts.items():
            if m and not s.is_zero():
                raise ValueError(f"element has a nonzero E^{m} part")
        return self.part(0)

    def __add__(self, other):
        other = TwistedLaurent.lift(other)
        out = dict(self.parts)
        for m, s in other.parts.items():
            out[m] = out[m] + s if m in out else s
        return TwistedLaurent(out)

    __radd__ = __add__

    def __neg__(self):
        return TwistedLaurent({m: -s for m, s in self.parts.items()})

    def __sub__(self, other):
        return self + (-TwistedLaurent.lift(other))

    def __rsub__(self, other):
        return TwistedLaurent.lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, (TwistedLaurent, LaurentSeries)):
            a = as_rat(other)
            return TwistedLaurent({m: s.scale(a) for m, s in self.parts.items()})
        other = TwistedLaurent.lift(other)
        out: dict[int, LaurentSeries] = {}
        for m1, s1 in self.parts.items():
            for m2, s2 in other.parts.items():
                p = s1 * s2
                out[m1 + m2] = out[m1 + m2] + p if m1 + m2 in out else p
        return TwistedLaurent(out)

    __rmul__ = __mul__

    def derivative(self, t0=0) -> "TwistedLaurent":
        return twisted_derivative(self, t0)

    def inverse(self, order: int | None = None) -> "TwistedLaurent":
        live = [m for m, s in self.parts.items() if not s.is_zero()]
        if len(live) != 1:
            raise ZeroDivisionError("only single-E-degree elements are invertible")
        m = live[0]
        return TwistedLaurent({-m: self.parts[m].inverse(order)})

    def shift(self, k: int) -> "TwistedLaurent":
        return TwistedLaurent({m: s.shift(k) for m, s in self.parts.items()})

    def agrees(self, other) -> bool:
        return (self - TwistedLaurent.lift(other)).is_zero()

    def __repr__(self):
        body = ", ".join(f"E^{m}: {format_series(s)}" for m, s in sorted(self.parts.items()))
        return f"TwistedLaurent({{{body}}})"


# ---------------------------------------------------------------------------
# named operations


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    return a * b


def series_derivative(a: LaurentSeries) -> LaurentSeries:
    return a.derivative()


def twisted_derivative(a: TwistedLaurent, t0=0) -> TwistedLaurent:
    t0 = as_rat(t0)
    out = {}
    for m, s in a.parts.items():
        d = s.derivative()
        if m and t0:
            d = d - s.shift(-2).scale(m * t0)
        out[m] = d
    return TwistedLaurent(out)


# ---------------------------------------------------------------------------
# linear algebra


class RatMatrix:
    """Sparse exact rational matrix."""

    __slots__ = ("rows", "cols", "_d")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] | None = None):
        self.rows, self.cols = rows, cols
        d = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError((i, j))
            v = as_rat(v)
            if v:
                d[i, j] = v
        self._d = d

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], cols: int | None = None) -> "RatMatrix":
        nc = cols if cols is not None else (len(rows[0]) if rows else 0)
        return cls(len(rows), nc, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r)})

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[object]], rows: int) -> "RatMatrix":
        return cls(rows, len(columns), {(i, j): v for j, c in enumerate(columns) for i, v in enumerate(c)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return self._d.get(ij, Fraction(0))

    def entries(self):
        return self._d.items()

    def nnz(self) -> int:
        return len(self._d)

    def to_rows(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self._d.items():
            out[i][j] = v
        return out

    def column(self, j: int) -> list[Fraction]:
        return [self[i, j] for i in range(self.rows)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self._d.items()})

    def select_columns(self, idx: Sequence[int]) -> "RatMatrix":
        pos = {j: k for k, j in enumerate(idx)}
        return RatMatrix(self.rows, len(idx), {(i, pos[j]): v for (i, j), v in self._d.items() if j in pos})

    def select_rows(self, idx: Sequence[int]) -> "RatMatrix":
        pos = {i: k for k, i in enumerate(idx)}
        return RatMatrix(len(idx), self.cols, {(pos[i], j): v for (i, j), v in self._d.items() if i in pos})

    def hstack(self, other: "RatMatrix") -> "RatMatrix":
        assert self.rows == other.rows
        d = dict(self._d)
        d.update({(i, j + self.cols): v for (i, j), v in other._d.items()})
        return RatMatrix(self.rows, self.cols + other.cols, d)

    def matvec(self, v: Sequence[object]) -> list[Fraction]:
        out = [Fraction(0)] * self.rows
        for (i, j), a in self._d.items():
            if v[j]:
                out[i] += a * v[j]
        return out

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        assert self.cols == other.rows
        by_row: dict[int, dict[int, Fraction]] = {}
        for (k, j), b in other._d.items():
            by_row.setdefault(k, {})[j] = b
        out: dict[tuple[int, int], Fraction] = {}
        for (i, k), a in self._d.items():
            for j, b in by_row.get(k, {}).items():
                out[i, j] = out.get((i, j), 0) + a * b
        return RatMatrix(self.rows, other.cols, out)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        assert (self.rows, self.cols) == (other.rows, other.cols)
        d = dict(self._d)
        for k, v in other._d.items():
            d[k] = d.get(k, 0) + v
        return RatMatrix(self.rows, self.cols, d)

    def scale(self, a) -> "RatMatrix":
        a = as_rat(a)
        return RatMatrix(self.rows, self.cols, {k: a * v for k, v in self._d.items()})

    def is_zero(self) -> bool:
        return not self._d

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return (self.rows, self.cols, self._d) == (other.rows, other.cols, other._d)

    __hash__ = None

    def rank(self) -> int:
        return len(echelon(self)[1])

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols}, {self.to_rows()})"


def _sparse_rows(m: RatMatrix) -> list[dict[int, Fraction]]:
    rows: list[dict[int, Fraction]] = [dict() for _ in range(m.rows)]
    for (i, j), v in m.entries():
        rows[i][j] = v
    return rows


def _eliminate(rows: list[dict[int, Fraction]], ncols: int) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Row echelon form by sparse Gaussian elimination over the rationals.

    Pivot columns are taken left to right, so they are the lexicographically
    first independent columns.  Among rows eligible for a pivot the sparsest
    one is used, and rows without an entry in the pivot column are untouched,
    which keeps the nearly triangular coboundary matrices cheap.
    """
    live = [r for r in rows if r]
    by_col: dict[int, set[int]] = {}
    for i, r in enumerate(live):
        for j in r:
            by_col.setdefault(j, set()).add(i)
    done: set[int] = set()
    ech: list[dict[int, Fraction]] = []
    pivots: list[int] = []
    for c in range(ncols):
        cand = [i for i in by_col.get(c, ()) if i not in done]
        if not cand:
            continue
        piv = min(cand, key=lambda i: (len(live[i]), i))
        done.add(piv)
        pr = live[piv]
        inv = 1 / pr[c]
        for i in cand:
            if i == piv:
                continue
            r = live[i]
            f = r[c] * inv
            for j, v in pr.items():
                nv = r.get(j, 0) - f * v
                if nv:
                    if j not in r:
                        by_col.setdefault(j, set()).add(i)
                    r[j] = nv
                else:
                    r.pop(j, None)
                    by_col[j].discard(i)
        ech.append(pr)
        pivots.append(c)
    return ech, pivots


def echelon(m: RatMatrix) -> tuple[list[dict[int, Fraction]], list[int]]:
    return _eliminate(_sparse_rows(m), m.cols)


def _back_substitute(ech: list[dict[int, Fraction]], pivots: list[int], rhs_col: int | None,
                     free_values: Mapping[int, Fraction]) -> dict[int, Fraction]:
    x: dict[int, Fraction] = dict(free_values)
    for k in range(len(pivots) - 1, -1, -1):
        row = ech[k]
        c = pivots[k]
        s = Fraction(row.get(rhs_col, 0)) if rhs_col is not None else Fraction(0)
        for j, v in row.items():
            if j == c or j == rhs_col:
                continue
            xj = x.get(j)
            if xj:
                s -= v * xj
        x[c] = s / row[c]
    return x


def kernel_basis(m: RatMatrix) -> list[tuple[Fraction, ...]]:
    """Exact basis of the right null space (one vector per free column)."""
    ech, pivots = echelon(m)
    pset = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pset:
            continue
        x = _back_substitute(ech, pivots, None, {f: Fraction(1)})
        basis.append(tuple(x.get(j, Fraction(0)) for j in range(m.cols)))
    return basis


def cokernel_complement(m: RatMatrix, order: Sequence[int] | None = None) -> tuple[int, list[int]]:
    """Rank of ``m`` and standard basis indices spanning a complement of its column space.

    ``order`` lists candidate row indices by preference (default: all rows in
    order); only candidates are considered, so the returned list completes the
    column space inside their span.
    """
    cand = list(range(m.rows)) if order is None else list(order)
    ident = RatMatrix(m.rows, len(cand), {(i, k): 1 for k, i in enumerate(cand)})
    _, pivots = echelon(m.hstack(ident))
    rank = sum(1 for p in pivots if p < m.cols)
    return rank, [cand[p - m.cols] for p in pivots if p >= m.cols]


def solve(m: RatMatrix, b: Sequence[object]) -> tuple[Fraction, ...] | None:
    """One exact solution of ``m x = b`` (free variables zero) or ``None``."""
    aug = m.hstack(RatMatrix.from_columns([b], m.rows))
    ech, pivots = echelon(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = _back_substitute(ech, pivots, m.cols, {})
    return tuple(x.get(j, Fraction(0)) for j in range(m.cols))


def in_column_space(m: RatMatrix, b: Sequence[object]) -> bool:
    if not any(b):
        return True
    return solve(m, b) is not None


def independent(vectors: Iterable[Sequence[object]], dim: int) -> bool:
    vs = list(vectors)
    if not vs:
        return True
    return RatMatrix.from_columns(vs, dim).rank() == len(vs)
