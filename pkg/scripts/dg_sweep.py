"""Check the dg property of Sullivan cells over F2 and list the defects.

For every catalog cell the in-out correlator of its boundary is compared with the
bar-differential side on all basis inputs up to the given total degree.  The
``--normalized`` switch restricts inputs to words without units in the middle.
"""

import argparse
import time
from dataclasses import dataclass

from arcop.catalog import sullivan_catalog
from arcop.field import F2
from arcop.fixtures import system_cp2cp1, system_pt
from arcop.sullivan import dg_defects


@dataclass
class SweepConfig:
    system: str = "pt"
    max_arcs: int = 3
    max_total_degree: int = 3
    max_degree: int = 2
    normalized: bool | None = None
    show: int = 3


def sweep(cfg: SweepConfig) -> int:
    s = {"pt": system_pt, "cp2cp1": system_cp2cp1}[cfg.system](F2)
    failing = 0
    for name, g in sorted(sullivan_catalog().items()):
        if len(g.arcs) > cfg.max_arcs:
            continue
        t0 = time.perf_counter()
        defects, tried = dg_defects(g, s, cfg.max_total_degree, cfg.max_degree, cfg.normalized)
        failing += bool(defects)
        print(f"{name:16s} {tried:6d} inputs  {len(defects):5d} defects  ({time.perf_counter() - t0:.1f}s)")
        for d in defects[:cfg.show]:
            print("    " + d.describe().replace("\n", "\n    "))
    return failing


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--system", choices=["pt", "cp2cp1"], default="pt")
    ap.add_argument("--max-arcs", type=int, default=3)
    ap.add_argument("--max-total-degree", type=int, default=3)
    ap.add_argument("--max-degree", type=int, default=2)
    grp = ap.add_mutually_exclusive_group()
    grp.add_argument("--normalized", action="store_true", help="only inputs without middle units")
    grp.add_argument("--unnormalized", action="store_true", help="only inputs with a middle unit")
    ap.add_argument("--show", type=int, default=3, help="defects printed per cell")
    args = ap.parse_args()
    norm = True if args.normalized else False if args.unnormalized else None
    cfg = SweepConfig(args.system, args.max_arcs, args.max_total_degree, args.max_degree, norm, args.show)
    n = sweep(cfg)
    print(f"{n} cell(s) with defects")


if __name__ == "__main__":
    main()
