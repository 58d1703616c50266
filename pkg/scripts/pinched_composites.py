"""Glue pairs of quasi-filling catalog graphs and report composites that leave the
quasi-filling locus, together with the general-position verdict for the pair."""

import argparse
import itertools

from arcop.axioms import graph_pool
from arcop.catalog import gluing_catalog
from arcop.errors import ArcopError
from arcop.gluing import glue
from arcop.moduli import classify, general_position, matched_weightings, quasi_filling


def candidates():
    out = list(graph_pool())
    for c in gluing_catalog():
        out.append((c.name + "-left", c.left))
        if c.right is not None:
            out.append((c.name + "-right", c.right))
    return [(n, g) for n, g in out if quasi_filling(g)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--limit", type=int, default=20, help="stop after this many pinched composites")
    ap.add_argument("--open-only", action="store_true")
    args = ap.parse_args()
    graphs = candidates()
    tried = found = 0
    for (n1, g1), (n2, g2) in itertools.product(graphs, repeat=2):
        for w1, w2 in itertools.product(g1.surface.windows, g2.surface.windows):
            if w1.closed != w2.closed or (args.open_only and w1.closed):
                continue
            try:
                a, b = matched_weightings(g1, w1.id, g2, w2.id)
                g = glue(g1, w1.id, g2, w2.id, a, b, allow_inactive=True).graph
            except ArcopError:
                continue
            tried += 1
            c = classify(g)
            if c.quasi_filling:
                continue
            found += 1
            gp = general_position(g1, w1.id, g2, w2.id)
            print(f"{n1}:{w1.id} + {n2}:{w2.id}: {len(g.arcs)} arcs, general position {gp}; {'; '.join(c.notes)}")
            if found >= args.limit:
                break
        if found >= args.limit:
            break
    print(f"{tried} gluings tried, {found} leave the quasi-filling locus")


if __name__ == "__main__":
    main()
