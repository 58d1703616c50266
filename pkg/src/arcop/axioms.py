"""Seeded fuzzing of the gluing axioms: associativity, relabelling equivariance and
the modular grading rules."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd

from .catalog import fan, open_annulus, pants, pants_two_arcs, polygon
from .fixtures import annulus, graph_tri
from .gluing import GradingTag, glue, grading, self_glue
from .surface import Arc, ArcGraph, End, PieceRef, Region, WindowedSurface, isomorphic


def graph_pool() -> list[tuple[str, ArcGraph]]:
    """Small glueable graphs with open and closed windows."""
    pool = [
        ("tri", graph_tri(("b", "b", "b"))),
        ("annulus", annulus()),
        ("annulus-2", annulus(weight=2)),
        ("open-annulus", open_annulus()),
        ("open-annulus-2pt", open_annulus(inner_points=2)),
        ("pants", pants()),
        ("pants-two", pants_two_arcs()),
        ("pants-two-21", pants_two_arcs((2, 1))),
        ("square", polygon(4, arcs=[("w1", 1, "w3", 1, 1), ("w2", 0, "w3", 0, 1), ("w4", 0, "w1", 0, 1)])),
        ("pentagon", polygon(5, arcs=[("w1", 1, "w3", 0, 1), ("w1", 0, "w4", 0, 2)])),
        ("fan2", fan(2).with_io(None)),
        ("fan3", fan(3).with_io(None)),
    ]
    return pool


# --- relabelling ----------------------------------------------------------------------------

def relabel(graph: ArcGraph, boundary_order, rotations, arc_ids) -> tuple[ArcGraph, dict]:
    """Reorder boundaries, rotate the starting point of each, and rename arcs.

    Returns the new graph and the map old window id -> new window id.
    """
    S = graph.surface
    new_b = {old: new for new, old in enumerate(boundary_order)}
    bounds = []
    for old in boundary_order:
        pts = S.boundaries[old]
        r = rotations[old] % len(pts)
        bounds.append(list(pts[r:] + pts[:r]))
    surf = WindowedSurface(S.genus, bounds, S.punctures)
    wmap = {}
    for w in S.windows:
        k = len(S.boundaries[w.boundary])
        wmap[w.id] = surf.window_at(new_b[w.boundary], (w.index - rotations[w.boundary]) % k).id
    arcs = [Arc(arc_ids[a.id], wmap[a.w1], a.slot1, wmap[a.w2], a.slot2, a.weight) for a in graph.arcs]
    G = ArcGraph(surf, arcs, None, None if graph.io is None else
                 ({wmap[w] for w in graph.io[0]}, {wmap[w] for w in graph.io[1]}))
    cycle_of_piece = {}
    for c in G.trace_cycles():
        for x in c:
            if isinstance(x, PieceRef):
                cycle_of_piece[x.piece] = c

    def map_piece(pid):
        p = graph.pieces[pid]
        if p.start is None:
            return f"{new_b[p.boundary]}.0"
        return G.piece_after[End(arc_ids[p.start.arc], p.start.end)]

    regions = []
    for r in graph.regions:
        cyc = tuple(cycle_of_piece[map_piece(next(x.piece for x in c if isinstance(x, PieceRef)))]
                    for c in r.cycles)
        regions.append(Region(r.genus, r.punctures, cyc))
    return ArcGraph(surf, G.arcs, regions, G.io), wmap


def random_relabel(graph: ArcGraph, rng: random.Random) -> tuple[ArcGraph, dict]:
    nb = len(graph.surface.boundaries)
    order = list(range(nb))
    rng.shuffle(order)
    rot = [rng.randrange(len(b)) for b in graph.surface.boundaries]
    ids = [a.id for a in graph.arcs]
    perm = list(range(len(ids)))
    rng.shuffle(perm)
    arc_ids = {a: f"r{perm[i]}" for i, a in enumerate(ids)}
    return relabel(graph, order, rot, arc_ids)


# --- grading rules --------------------------------------------------------------------------

def expected_grading(t1: GradingTag, t2: GradingTag | None, closed: bool) -> GradingTag:
    """Modular grading of a gluing.  Closed: genus adds (one more for self-gluing) and
    the Euler characteristic adds.  Open: chi - 1 adds (one more for self-gluing)."""
    if t2 is None:
        if closed:
            return GradingTag(t1.g + 1, t1.chi_minus_1)
        return GradingTag(None, t1.chi_minus_1 + 1)
    if closed:
        return GradingTag(t1.g + t2.g, t1.chi_minus_1 + t2.chi_minus_1 - 1)
    return GradingTag(None, t1.chi_minus_1 + t2.chi_minus_1)


def grading_holds(result: ArcGraph, t1: GradingTag, t2: GradingTag | None, closed: bool) -> bool:
    got, exp = grading(result), expected_grading(t1, t2, closed)
    if closed:
        return got == exp
    return got.chi_minus_1 == exp.chi_minus_1


# --- the fuzz harness ----------------------------------------------------------------------

@dataclass
class FuzzReport:
    seed: int
    triples: int = 0
    self_cases: int = 0
    associativity_failures: list = field(default_factory=list)
    equivariance_failures: list = field(default_factory=list)
    grading_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.associativity_failures or self.equivariance_failures or self.grading_failures)

    def summary(self) -> str:
        return (f"seed {self.seed}: {self.triples} triples, {self.self_cases} self-gluings; "
                f"associativity failures {len(self.associativity_failures)}, "
                f"equivariance failures {len(self.equivariance_failures)}, "
                f"grading failures {len(self.grading_failures)}")


def _active(g: ArcGraph):
    return [w for w in g.surface.windows if g.ends_by_window[w.id]]


def _scale(g: ArcGraph, k: int) -> ArcGraph:
    return g.with_weights({a.id: a.weight * k for a in g.arcs}) if k != 1 else g


def _pick_triple(pool, rng):
    while True:
        (n1, g1), (n2, g2), (n3, g3) = (rng.choice(pool) for _ in range(3))
        A, B2, D = _active(g1), _active(g2), _active(g3)
        a = rng.choice(A)
        bs = [w for w in B2 if w.closed == a.closed]
        if len(B2) < 2 or not bs:
            continue
        b = rng.choice(bs)
        cs = [w for w in B2 if w.id != b.id]
        c = rng.choice(cs)
        ds = [w for w in D if w.closed == c.closed]
        if not ds:
            continue
        d = rng.choice(ds)
        x1, x2b, x2c, x3 = (g1.window_weight(a.id), g2.window_weight(b.id), g2.window_weight(c.id),
                            g3.window_weight(d.id))
        l1, l2, l3 = x2b * x3, x1 * x3, x1 * x2c
        # l2 must also match x2c * l2 == x3 * l3
        k = gcd(gcd(l1, l2), l3)
        l1, l2, l3 = l1 // k, l2 // k, l3 // k
        return (n1, _scale(g1, l1), a.id), (n2, _scale(g2, l2), b.id, c.id), (n3, _scale(g3, l3), d.id)


def check_triple(t1, t2, t3, rng: random.Random, report: FuzzReport) -> None:
    (n1, g1, a), (n2, g2, b, c), (n3, g3, d) = t1, t2, t3
    tag = f"{n1}:{a} * {n2}:{b},{c} * {n3}:{d}"
    closed_ab = g1.surface.window(a).closed
    closed_cd = g2.surface.window(c).closed
    # (g1 o g2) o g3
    r12 = glue(g1, a, g2, b)
    if not grading_holds(r12.graph, grading(g1), grading(g2), closed_ab):
        report.grading_failures.append(tag + " first gluing")
    left = glue(r12.graph, r12.window_map[(1, c)], g3, d).graph
    # g1 o (g2 o g3)
    r23 = glue(g2, c, g3, d)
    if not grading_holds(r23.graph, grading(g2), grading(g3), closed_cd):
        report.grading_failures.append(tag + " second gluing")
    right = glue(g1, a, r23.graph, r23.window_map[(0, b)]).graph
    if not isomorphic(left, right):
        report.associativity_failures.append(tag)
    # relabelling the middle factor
    h2, wmap = random_relabel(g2, rng)
    r12b = glue(g1, a, h2, wmap[b])
    if not isomorphic(r12b.graph, r12.graph):
        report.equivariance_failures.append(tag)


def check_self(name: str, g: ArcGraph, rng: random.Random, report: FuzzReport) -> bool:
    act = _active(g)
    pairs = [(u, v) for u in act for v in act if u.id < v.id and u.closed == v.closed
             and g.window_weight(u.id) == g.window_weight(v.id)]
    if not pairs:
        return False
    u, v = rng.choice(pairs)
    res = self_glue(g, u.id, v.id)
    if not grading_holds(res.graph, grading(g), None, u.closed):
        report.grading_failures.append(f"{name}: self {u.id},{v.id}")
    h, wmap = random_relabel(g, rng)
    if not isomorphic(self_glue(h, wmap[u.id], wmap[v.id]).graph, res.graph):
        report.equivariance_failures.append(f"{name}: self {u.id},{v.id}")
    return True


def run_fuzz(n: int = 200, seed: int = 0) -> FuzzReport:
    rng = random.Random(seed)
    pool = graph_pool()
    report = FuzzReport(seed)
    for _ in range(n):
        t1, t2, t3 = _pick_triple(pool, rng)
        check_triple(t1, t2, t3, rng, report)
        report.triples += 1
    for name, g in pool:
        if check_self(name, g, rng, report):
            report.self_cases += 1
    return report
