"""Reproduction of the classification table of Poisson ruled surfaces."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .atlas import SurfaceFamily, Variant
from .cech import Sheaf, Truncation, stabilize
from .elliptic import EllipticParams
from .poissonco import (PoissonStructure, coefficient_class, obstruction_witness, poisson_cohomology,
                        verdict)


@dataclass(frozen=True)
class TruncationOverride:
    M: int | None = None
    N: int | None = None
    K: int | None = None

    def apply(self, family: SurfaceFamily) -> Truncation:
        d = Truncation.default(family)
        return Truncation(self.M or d.M, self.N or d.N, self.K or d.K)

    def as_dict(self):
        return {"M": self.M, "N": self.N, "K": self.K}


@dataclass(frozen=True)
class RunConfig:
    n_max: int = 6
    samples: int = 3
    seed: int = 42
    elliptic: EllipticParams = field(default_factory=EllipticParams)
    truncation: TruncationOverride = field(default_factory=TruncationOverride)

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")

    def as_dict(self):
        return {"n_max": self.n_max, "samples": self.samples, "seed": self.seed,
                "g2": str(self.elliptic.g2), "g3": str(self.elliptic.g3),
                "truncation": self.truncation.as_dict()}


@dataclass(frozen=True)
class RowSpec:
    family: str                  # s0 | twisted | sn | a0 | am1
    cls: str
    n: int | None
    expected_hp: tuple[int, int, int]
    expected_verdict: str


@dataclass
class TableRow:
    family: str
    cls: str
    n: int | None
    hp: tuple[int, int, int] | None
    verdict: str
    certified: bool
    expected_hp: tuple[int, int, int]
    expected_verdict: str
    witness: str | None = None
    family_verified: bool | None = None
    samples: list[dict] = field(default_factory=list)
    problems: list[str] = field(default_factory=list)

    @property
    def matches(self) -> bool:
        return (not self.problems and self.hp == self.expected_hp
                and self.verdict == self.expected_verdict and self.certified)

    def as_json(self):
        return {"family": self.family, "class": self.cls, "n": self.n,
                "hp": list(self.hp) if self.hp else None, "verdict": self.verdict,
                "certified": self.certified}


FAMILY_LABELS = {"s0": "S0", "twisted": "S in S_0, S != S0", "sn": "S_n", "a0": "A0", "am1": "A-1"}


def row_specs(n_max: int) -> list[RowSpec]:
    """Expected rows, with the ``S_n`` rows expanded for ``n = 1..n_max``."""
    rows = [RowSpec("s0", "0", None, (4, 7, 3), "obstructed"),
            RowSpec("s0", "(A,B,C)!=0", None, (2, 3, 1), "unobstructed"),
            RowSpec("twisted", "any", None, (2, 3, 1), "unobstructed")]
    rows += [RowSpec("sn", "0", n, (n + 1, 2 * n + 2, n + 1), "obstructed") for n in range(1, n_max + 1)]
    rows.append(RowSpec("sn", "a0=0,c0!=0", 1, (1, 2, 1), "unobstructed"))
    rows += [RowSpec("sn", "a0=0,A!=0", n, (n, 2 * n, n), "obstructed") for n in range(2, n_max + 1)]
    rows += [RowSpec("sn", "a0!=0", n, (1, 2, 1), "unobstructed") for n in range(1, n_max + 1)]
    rows += [RowSpec("a0", "any", None, (2, 3, 1), "unobstructed"),
             RowSpec("am1", "0", None, (1, 1, 0), "unobstructed")]
    return rows


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 97), rng.randint(1, 97))


def make_family(kind: str, n: int | None, elliptic: EllipticParams, t0=None) -> SurfaceFamily:
    if kind == "s0":
        return SurfaceFamily.s0(elliptic)
    if kind == "twisted":
        return SurfaceFamily.twisted(t0, elliptic)
    if kind == "sn":
        return SurfaceFamily.sn(n, elliptic)
    if kind == "a0":
        return SurfaceFamily.a0(elliptic)
    if kind == "am1":
        return SurfaceFamily.am1(elliptic)
    raise ValueError(f"unknown family {kind!r}")


def sample_structure(spec: RowSpec, rng: random.Random, elliptic: EllipticParams) -> PoissonStructure:
    """Generic structure in the row's coefficient class."""
    r: Callable[[], Fraction] = lambda: random_rational(rng)  # noqa: E731
    if spec.family == "twisted":
        fam = make_family("twisted", None, elliptic, t0=r())
        return PoissonStructure(fam, (r(),))
    fam = make_family(spec.family, spec.n, elliptic)
    if spec.family == "s0":
        return PoissonStructure(fam, (0, 0, 0) if spec.cls == "0" else (r(), r(), r()))
    if spec.family == "sn":
        n = spec.n
        if spec.cls == "0":
            return PoissonStructure(fam, (0,) * (n + 1))
        if spec.cls == "a0!=0":
            return PoissonStructure(fam, (r(),) + tuple(r() for _ in range(n)))
        return PoissonStructure(fam, (0,) + tuple(r() for _ in range(n)))
    if spec.family == "a0":
        return PoissonStructure(fam, (r(),))
    return PoissonStructure(fam, ())


def evaluate_row(spec: RowSpec, cfg: RunConfig, rng: random.Random) -> TableRow:
    row = TableRow(spec.family, spec.cls, spec.n, None, "", True, spec.expected_hp, spec.expected_verdict)
    for _ in range(cfg.samples):
        P = sample_structure(spec, rng, cfg.elliptic)
        tr = cfg.truncation.apply(P.family)
        got_cls = coefficient_class(P)
        if got_cls != spec.cls:
            row.problems.append(f"sample {P.coeffs} classified as {got_cls}")
        dims = poisson_cohomology(P, tr).dims
        v = verdict(P, tr).value
        for sheaf in Sheaf:
            _, ok = stabilize(P.family, sheaf, tr)
            row.certified = row.certified and ok
        if row.hp is None:
            row.hp, row.verdict = dims, v
        elif (dims, v) != (row.hp, row.verdict):
            row.problems.append(f"sample {P.coeffs} gave {dims} {v}, earlier {row.hp} {row.verdict}")
        sample = {"coeffs": [str(c) for c in P.coeffs], "hp": list(dims), "verdict": v}
        if P.family.variant is Variant.TWISTED:
            sample["t0"] = str(P.family.t0)
        row.samples.append(sample)
        if v == "obstructed" and row.witness is None:
            w = obstruction_witness(P, tr)
            row.witness = f"a = h0 basis #{w.a_index}, b = {[str(x) for x in w.b_coords]}"
        if v == "unobstructed":
            row.family_verified = True
    return row


def cmd_table(cfg: RunConfig) -> list[TableRow]:
    rng = random.Random(cfg.seed)
    return [evaluate_row(spec, cfg, rng) for spec in row_specs(cfg.n_max)]


def table_json(rows: list[TableRow], cfg: RunConfig) -> dict:
    return {"rows": [r.as_json() for r in rows], "config": cfg.as_dict()}


def table_markdown(rows: list[TableRow]) -> str:
    lines = ["| surface | n | Poisson structure | HP^0 | HP^1 | HP^2 | deformations | certified |",
             "|---|---|---|---|---|---|---|---|"]
    for r in rows:
        hp = r.hp or ("?", "?", "?")
        n = "" if r.n is None else str(r.n)
        lines.append(f"| {FAMILY_LABELS[r.family]} | {n} | {r.cls} | {hp[0]} | {hp[1]} | {hp[2]} | "
                     f"{r.verdict} | {'yes' if r.certified else 'no'} |")
    return "\n".join(lines)


def diff_rows(rows: list[TableRow]) -> list[str]:
    out = []
    for r in rows:
        if r.matches:
            continue
        msg = (f"{r.family} n={r.n} [{r.cls}]: got {r.hp} {r.verdict}, "
               f"expected {r.expected_hp} {r.expected_verdict}")
        if not r.certified:
            msg += " (truncation not certified)"
        out.extend([msg] + [f"  {p}" for p in r.problems])
    return out


def diff_golden(rows: list[TableRow], golden: dict) -> list[str]:
    keys = ("family", "class", "n", "hp", "verdict", "certified")
    want = [{k: g.get(k) for k in keys} for g in golden.get("rows", [])]
    have = [{k: r.as_json()[k] for k in keys} for r in rows]
    out = []
    for i in range(max(len(want), len(have))):
        w = want[i] if i < len(want) else None
        h = have[i] if i < len(have) else None
        if w != h:
            out.append(f"row {i}: golden {w} != computed {h}")
    return out
