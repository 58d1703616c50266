"""Search small brane systems for one where the Euler condition (E) fails.

Closed and brane algebras range over truncated polynomial rings k[x]/x^n and split
algebras k^n (n <= 3) with small integer traces; restrictions range over unital
matrices with entries in a small window.  For every (E)-failing system the gluing
catalog is rerun to see whether glued and composed correlators still agree.
"""

from __future__ import annotations

import argparse
import itertools
import json
from dataclasses import asdict, dataclass

from arcop.algebra import BraneSystem, FrobeniusAlgebra, check_conditions, make_algebra_map
from arcop.catalog import gluing_catalog, run_case
from arcop.errors import ArcopError


@dataclass
class SearchConfig:
    max_dim: int = 3
    traces: tuple = (1, 2, -1)
    entries: tuple = (-1, 0, 1)
    limit: int = 5
    run_catalog: bool = True


def truncated(n: int, c, name: str) -> FrobeniusAlgebra:
    mul = {(i, j): {i + j: 1} for i in range(n) for j in range(n) if i + j < n}
    trace = [0] * (n - 1) + [c]
    return FrobeniusAlgebra(name, [f"x{i}" if i else "1" for i in range(n)], [2 * i for i in range(n)],
                            [1] + [0] * (n - 1), trace, mul)


def split(traces, name: str) -> FrobeniusAlgebra:
    n = len(traces)
    return FrobeniusAlgebra(name, [f"u{i}" for i in range(n)], [0] * n, [1] * n, list(traces),
                            {(i, i): {i: 1} for i in range(n)})


def algebras(cfg: SearchConfig):
    for n in range(1, cfg.max_dim + 1):
        for c in cfg.traces:
            yield f"trunc{n}({c})", truncated(n, c, f"T{n}")
    for n in range(2, cfg.max_dim + 1):
        for ts in itertools.combinations_with_replacement(cfg.traces, n):
            yield f"split{ts}", split(ts, f"P{n}")


def maps(A: FrobeniusAlgebra, B: FrobeniusAlgebra, cfg: SearchConfig):
    """Unital candidate matrices (rows index B, columns index A); invalid ones are skipped."""
    unit_col = [B.unit[i] for i in range(B.dim)]
    rest = itertools.product(cfg.entries, repeat=B.dim * (A.dim - 1))
    for flat in rest:
        cols = [unit_col] + [list(flat[k * B.dim:(k + 1) * B.dim]) for k in range(A.dim - 1)]
        # the unit of A is its first basis vector for every family above
        matrix = [[cols[j][i] for j in range(A.dim)] for i in range(B.dim)]
        try:
            yield matrix, make_algebra_map(A, B, matrix)
        except ArcopError:
            continue


def search(cfg: SearchConfig) -> dict:
    algs = list(algebras(cfg))
    tried = valid = 0
    found = []
    for (na, A), (nb, B) in itertools.product(algs, repeat=2):
        for matrix, r in maps(A, B, cfg):
            tried += 1
            system = BraneSystem(A, {"b": B}, {"b": r})
            rep = check_conditions(system)
            if not rep.commutative_C:
                continue
            valid += 1
            if rep.euler_E:
                continue
            entry = {"closed": na, "brane": nb, "matrix": [[str(x) for x in row] for row in matrix],
                     "I1": rep.self_intersection_I1, "I2": rep.self_intersection_I2,
                     "violations": [list(v) for v in rep.euler_violations]}
            if cfg.run_catalog:
                entry["catalog_failures"] = [c.name for c in gluing_catalog() if not run_case(c, system).ok]
            found.append(entry)
            if len(found) >= cfg.limit:
                return {"tried": tried, "valid": valid, "found": found}
    return {"tried": tried, "valid": valid, "found": found}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-dim", type=int, default=SearchConfig.max_dim)
    ap.add_argument("--limit", type=int, default=SearchConfig.limit)
    ap.add_argument("--entries", type=int, default=1, help="matrix entries range over -N..N")
    ap.add_argument("--no-catalog", action="store_true", help="skip rerunning the gluing catalog")
    ap.add_argument("--json", action="store_true", help="print the full report as JSON")
    args = ap.parse_args()
    cfg = SearchConfig(max_dim=args.max_dim, limit=args.limit, run_catalog=not args.no_catalog,
                       entries=tuple(range(-args.entries, args.entries + 1)))
    out = search(cfg)
    if args.json:
        print(json.dumps({"config": asdict(cfg), **out}, indent=2))
        return
    print(f"{out['tried']} unital algebra maps, {out['valid']} commutative systems, "
          f"{len(out['found'])} with (E) failing")
    for e in out["found"]:
        print(f"  {e['closed']} -> {e['brane']} r={e['matrix']} I1={e['I1']} I2={e['I2']} "
              f"catalog failures: {e.get('catalog_failures', '-')}")


if __name__ == "__main__":
    main()
