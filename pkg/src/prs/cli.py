"""Command line interface: ``prs table | cohomology | obstruction | verify-family | bracket``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .atlas import SurfaceFamily
from .cech import Sheaf, format_field, present, push_to_chart1, reduce_class, stabilize
from .elliptic import EllipticParams
from .expr import ExpressionError, format_terms, parse_field
from .families import ks_matrix, registered_family, verify_family
from .poissonco import (ArityError, PoissonStructure, coefficient_class, coefficient_names,
                        obstruction_witness, poisson_cohomology, verdict)
from .polyvector import Bivector, VectorField, lie_bracket, schouten_bv
from .table import RunConfig, TruncationOverride, cmd_table, diff_golden, diff_rows, table_json, table_markdown


class UsageError(ValueError):
    pass


def _rat(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational p/q: {text!r}")


def parse_coeffs(text: str | None, family: SurfaceFamily) -> PoissonStructure:
    """``"a0=0,c0=1"`` (or bare values in order) -> structure on ``family``."""
    names = coefficient_names(family)
    if not text:
        return PoissonStructure(family, (0,) * len(names))
    items = [s.strip() for s in text.split(",") if s.strip()]
    if all("=" in s for s in items):
        values = {}
        for s in items:
            k, v = s.split("=", 1)
            values[k.strip()] = _rat(v)
        return PoissonStructure.from_mapping(family, values)
    if any("=" in s for s in items):
        raise UsageError("mix of named and positional coefficients")
    return PoissonStructure(family, tuple(_rat(s) for s in items))


def _elliptic(args) -> EllipticParams:
    return EllipticParams(args.g2, args.g3)


def _override(args) -> TruncationOverride:
    return TruncationOverride(args.M, args.N, args.K)


def _family(args) -> SurfaceFamily:
    e = _elliptic(args)
    kind = args.family
    if kind == "sn":
        if args.n is None:
            raise UsageError("--family sn needs --n")
        return SurfaceFamily.sn(args.n, e)
    if kind == "twisted":
        if args.t0 is None:
            raise UsageError("--family twisted needs --t0")
        return SurfaceFamily.twisted(args.t0, e)
    return {"s0": SurfaceFamily.s0, "a0": SurfaceFamily.a0, "am1": SurfaceFamily.am1}[kind](e)


def _structure(args):
    fam = _family(args)
    P = parse_coeffs(args.coeffs, fam)
    return P, _override(args).apply(fam)


def _fmt_matrix(m) -> str:
    if m.rows == 0 or m.cols == 0:
        return f"  ({m.rows}x{m.cols})"
    return "\n".join("  [" + ", ".join(str(x) for x in row) + "]" for row in m.to_rows())


# ---------------------------------------------------------------------------
# commands


def run_table(args, out) -> int:
    cfg = RunConfig(args.n_max, args.samples, args.seed, _elliptic(args), _override(args))
    rows = cmd_table(cfg)
    if args.format == "json":
        out.write(json.dumps(table_json(rows, cfg), indent=2) + "\n")
    else:
        out.write(table_markdown(rows) + "\n")
    problems = diff_rows(rows)
    if args.golden:
        with open(args.golden) as fh:
            problems += diff_golden(rows, json.load(fh))
    for p in problems:
        print(p, file=sys.stderr)
    return 1 if problems else 0


def run_cohomology(args, out) -> int:
    P, tr = _structure(args)
    fam = P.family
    w = out.write
    w(f"surface {fam.label}, structure {dict(zip(coefficient_names(fam), map(str, P.coeffs)))}, "
      f"class {coefficient_class(P)}\n")
    w(f"truncation M={tr.M} N={tr.N} K={tr.K}\n")
    for sheaf in Sheaf:
        pres = present(fam, sheaf, tr)
        (d0, d1), ok = stabilize(fam, sheaf, tr)
        w(f"\n[{sheaf.value}] h0={d0} h1={d1} certified={ok}\n")
        w("  H^0 basis:\n")
        for s in pres.h0_basis:
            w(f"    {s}\n")
        w("  H^1 representatives (chart 1):\n")
        for r in pres.h1_reps:
            w(f"    {format_field(r)}\n")
    pc = poisson_cohomology(P, tr)
    w("\n[L0, -] on H^0:\n" + _fmt_matrix(pc.map_h0) + "\n")
    w("[L0, -] on H^1:\n" + _fmt_matrix(pc.map_h1) + "\n")
    w(f"\nHP = ({pc.hp0}, {pc.hp1}, {pc.hp2})\n")
    return 0


def run_obstruction(args, out) -> int:
    P, tr = _structure(args)
    wit = obstruction_witness(P, tr)
    if wit is None:
        out.write("witness: none found (inconclusive: no witness does not prove unobstructedness)\n")
    else:
        out.write(f"witness found\n  a = {wit.a}\n  b = {format_field(wit.b)}\n"
                  f"  [a, b] class = {[str(x) for x in wit.bracket_class]} (outside the image)\n")
    out.write(f"verdict: {verdict(P, tr).value}\n")
    return 0


def run_verify_family(args, out) -> int:
    P, tr = _structure(args)
    F = registered_family(P, tr)
    if F is None:
        out.write(f"no registered family for {P.family.label} [{coefficient_class(P)}]\n")
        return 1
    rep = verify_family(F, tr)
    out.write(f"family: {F.title}; parameters {', '.join(F.params)}\n")
    out.write(f"well-defined: {str(rep.well_defined).lower()} ({rep.samples} parameter samples)\n")
    out.write(f"origin matches base: {str(rep.origin_ok).lower()}\n")
    if rep.error:
        out.write(f"error: {rep.error}\n")
    else:
        out.write("KS matrix:\n" + _fmt_matrix(ks_matrix(F, tr).matrix) + "\n")
    out.write(f"KS rank {rep.ks_rank}/{rep.hp1}\n")
    return 0 if rep.ok else 1


def bracket(lhs, rhs):
    """Schouten bracket of two parsed fields (vector/bivector in either order)."""
    if isinstance(lhs, Bivector) and isinstance(rhs, VectorField):
        return schouten_bv(lhs, rhs)
    if isinstance(lhs, VectorField) and isinstance(rhs, Bivector):
        return -schouten_bv(rhs, lhs)
    if isinstance(lhs, VectorField):
        return lie_bracket(lhs, rhs)
    return None


def run_bracket(args, out) -> int:
    fam = _family(args)
    tr = _override(args).apply(fam)
    lhs = parse_field(args.lhs, fam.elliptic, args.order, fam.twist)
    rhs = parse_field(args.rhs, fam.elliptic, args.order, fam.twist)
    res = bracket(lhs, rhs)
    if res is None:
        out.write("0 (trivector)\n")
        return 0
    out.write(format_terms(res) + "\n")
    if args.reduce:
        on_overlap = push_to_chart1(fam, res) if args.chart == 0 else res
        sheaf = Sheaf.WEDGE2 if isinstance(res, Bivector) else Sheaf.THETA
        coords = reduce_class(present(fam, sheaf, tr), on_overlap)
        out.write(f"class in H^1({sheaf.value}): {[str(c) for c in coords]}\n")
    return 0


# ---------------------------------------------------------------------------


def _common(p, family=True):
    p.add_argument("--g2", type=_rat, default=Fraction(2))
    p.add_argument("--g3", type=_rat, default=Fraction(1))
    p.add_argument("--M", type=int, default=None, help="pole depth of overlap classes")
    p.add_argument("--N", type=int, default=None, help="holomorphic order on chart 1")
    p.add_argument("--K", type=int, default=None, help="highest wp derivative on chart 0")
    if family:
        p.add_argument("--family", required=True, choices=["s0", "twisted", "sn", "a0", "am1"])
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--t0", type=_rat, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="prs", description="Poisson cohomology of ruled surfaces over an elliptic curve")
    sub = ap.add_subparsers(dest="cmd", required=True)

    t = sub.add_parser("table", help="reproduce the classification table")
    t.add_argument("--n-max", type=int, default=6)
    t.add_argument("--samples", type=int, default=3)
    t.add_argument("--seed", type=int, default=42)
    t.add_argument("--format", choices=["json", "md"], default="md")
    t.add_argument("--golden", default=None, help="stored table JSON to diff against")
    _common(t, family=False)
    t.set_defaults(func=run_table)

    for name, func, hlp in [("cohomology", run_cohomology, "sheaf and Poisson cohomology of one structure"),
                            ("obstruction", run_obstruction, "search for an obstruction witness"),
                            ("verify-family", run_verify_family, "check the explicit deformation family")]:
        p = sub.add_parser(name, help=hlp)
        _common(p)
        p.add_argument("--coeffs", default=None, help="e.g. a0=0,c0=1 (rationals p/q)")
        p.set_defaults(func=func)

    b = sub.add_parser("bracket", help="Schouten bracket of two field expressions")
    _common(b)
    b.add_argument("--lhs", required=True)
    b.add_argument("--rhs", required=True)
    b.add_argument("--chart", type=int, choices=[0, 1], default=0,
                   help="chart the expressions are written in (for --reduce)")
    b.add_argument("--order", type=int, default=12, help="expansion order for wp terms")
    b.add_argument("--reduce", action="store_true", help="also print the H^1 class")
    b.set_defaults(func=run_bracket)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, ArityError, ExpressionError, argparse.ArgumentTypeError) as exc:
        parser.error(str(exc))
    except ValueError as exc:
        print(f"prs: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
