#!/usr/bin/env python3
"""Sheaf cohomology dimensions as the truncation grows.

For each surface and sheaf, recompute (h0, h1) at the default truncation scaled
by 1, 2, 3, ... and report whether the dimensions stay put.

    python scripts/stabilization_sweep.py [--n-max 4] [--scales 1,2,3]
"""
from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from prs.atlas import SurfaceFamily
from prs.cech import Sheaf, Truncation, present


def surfaces(n_max: int):
    yield SurfaceFamily.s0()
    yield SurfaceFamily.twisted(Fraction(3, 2))
    for n in range(1, n_max + 1):
        yield SurfaceFamily.sn(n)
    yield SurfaceFamily.a0()
    yield SurfaceFamily.am1()


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=4)
    ap.add_argument("--scales", default="1,2,3")
    args = ap.parse_args(argv)
    scales = [int(s) for s in args.scales.split(",")]

    unstable = 0
    print(f"{'surface':12} {'sheaf':7} " + " ".join(f"x{s:<7}" for s in scales) + " stable  seconds")
    for fam in surfaces(args.n_max):
        d = Truncation.default(fam)
        for sheaf in Sheaf:
            start = time.perf_counter()
            dims = []
            for s in scales:
                p = present(fam, sheaf, Truncation(s * d.M, s * d.N, s * d.K))
                dims.append((p.dim_h0, p.dim_h1))
            stable = len(set(dims)) == 1
            unstable += not stable
            cells = " ".join(f"{str(x):8}" for x in dims)
            print(f"{fam.label:12} {sheaf.value:7} {cells} {str(stable):7} {time.perf_counter() - start:.2f}")
    return 1 if unstable else 0


if __name__ == "__main__":
    sys.exit(main())
