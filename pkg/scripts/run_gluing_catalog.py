"""Glue every catalog pair and compare with the Casimir composite of the factor correlators."""

import argparse
import time

from arcop.catalog import gluing_catalog, loop_cases, run_case
from arcop.field import F2, Q
from arcop.fixtures import SYSTEMS


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--systems", nargs="+", default=["pt", "cp2cp1", "split"], choices=sorted(SYSTEMS))
    ap.add_argument("--field", choices=["Q", "F2"], default="Q")
    ap.add_argument("--with-loops", action="store_true", help="also run the loop-deletion case")
    args = ap.parse_args()
    field = {"Q": Q, "F2": F2}[args.field]
    cases = gluing_catalog() + (loop_cases() if args.with_loops else [])
    bad = 0
    print(f"{'case':28s} {'system':10s} {'nonzero':>8s} {'punct':>5s} {'genus':>5s}  result")
    for name in args.systems:
        system = SYSTEMS[name](field)
        for case in cases:
            t0 = time.perf_counter()
            out = run_case(case, system)
            bad += not out.ok
            s = out.glued.surface
            print(f"{case.name:28s} {name:10s} {len(out.direct.table):8d} {len(s.punctures):5d} {s.genus:5d}  "
                  f"{'ok' if out.ok else 'MISMATCH'} ({time.perf_counter() - t0:.2f}s)")
    print(f"{bad} mismatch(es)")


if __name__ == "__main__":
    main()
