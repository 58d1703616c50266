"""Moduli-layer predicates: quasi-filling, degenerate windows, open/closed duality."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Mapping

from .gluing import collapse, glue
from .surface import Arc, ArcGraph, End, PieceRef, WindowedSurface, build_graph, discrete_representative


@dataclass
class ModuliClassification:
    quasi_filling: bool
    polygonal_any_punctures: bool
    degenerate_windows: list
    mco_member: bool
    dimension: int
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "quasi_filling": self.quasi_filling,
            "polygonal_any_punctures": self.polygonal_any_punctures,
            "degenerate_windows": list(self.degenerate_windows),
            "mco_member": self.mco_member,
            "dimension": self.dimension,
            "notes": list(self.notes),
        }


def is_polygonal(graph: ArcGraph, max_punctures: int | None = None) -> bool:
    """Every region is a disk with one boundary cycle (and few enough punctures)."""
    for r in graph.regions:
        if r.genus or len(r.cycles) != 1:
            return False
        if max_punctures is not None and len(r.punctures) > max_punctures:
            return False
    return True


def quasi_filling(graph: ArcGraph) -> bool:
    return is_polygonal(graph, 1)


def degenerate_windows(graph: ArcGraph) -> list:
    """Open windows whose two flags lie on the same region without forming one edge.

    The flags of a window are the stretches next to its two endpoints.  They form a
    single edge only when the boundary carries just one marked point.
    """
    S = graph.surface
    where = graph.region_index()
    out = []
    for w in S.windows:
        if w.closed or len(S.boundaries[w.boundary]) == 1:
            continue
        left = graph.piece_of_point[(w.boundary, w.index)]
        right = graph.piece_of_point[(w.boundary, (w.index + 1) % len(S.boundaries[w.boundary]))]
        if where[PieceRef(left)] == where[PieceRef(right)]:
            out.append(w.id)
    return out


def dimension(graph: ArcGraph) -> int:
    return len(graph.arcs) - 1


def classify(graph: ArcGraph) -> ModuliClassification:
    poly = is_polygonal(graph)
    notes = []
    member = mco_member(graph, notes)
    return ModuliClassification(quasi_filling(graph), poly, degenerate_windows(graph), member,
                                dimension(graph), notes)


# --- open/closed duality ---------------------------------------------------------------

@dataclass
class Annulus:
    graph: ArcGraph
    boundary: int  # index of the cut boundary in the input surface
    outer: str  # id of the closed window on the cut
    inner: dict  # input window id -> annulus window id


@dataclass
class DualityDecomposition:
    core: ArcGraph
    annuli: list
    cut_windows: dict  # boundary index -> closed window id of the core


def _has_open(surface: WindowedSurface, b: int) -> bool:
    return any(p for p in surface.boundaries[b])


def duality_decompose(graph: ArcGraph) -> DualityDecomposition:
    """Cut along a curve parallel to every boundary carrying open windows.

    The core keeps the arcs and regions of the input; each cut boundary becomes a
    single closed window whose marked point sits where the first marked point of
    the boundary was.  Each annulus carries the germs of the leaves crossing the cut.
    """
    S = graph.surface
    cut = [b for b in range(len(S.boundaries)) if _has_open(S, b)]
    if not cut:
        return DualityDecomposition(graph, [], {})
    bounds = [[set()] if b in cut else list(pts) for b, pts in enumerate(S.boundaries)]
    core_surf = WindowedSurface(S.genus, bounds, S.punctures)
    # windows of the core keep their boundary; map old ids to new ids
    new_id = {}
    for w in S.windows:
        new_id[w.id] = core_surf.window_at(w.boundary, 0 if w.boundary in cut else w.index).id
    pos = {}
    for b in cut:
        for j, e in enumerate(graph.boundary_ends[b]):
            pos[e] = j
    arcs = []
    for a in graph.arcs:
        ends = []
        for e in (1, 2):
            key = End(a.id, e)
            w = a.window(e)
            slot = pos[key] if key in pos else a.slot(e)
            ends.append((new_id[w], slot))
        arcs.append(Arc(a.id, ends[0][0], ends[0][1], ends[1][0], ends[1][1], a.weight))
    core = ArcGraph(core_surf, arcs, graph.regions, None,
                    allow_parallel=True, allow_bigons=True)
    cut_windows = {b: core_surf.window_at(b, 0).id for b in cut}
    annuli = [_annulus(graph, b) for b in cut]
    return DualityDecomposition(core, annuli, cut_windows)


def _annulus(graph: ArcGraph, b: int) -> Annulus:
    S = graph.surface
    pts = list(S.boundaries[b])
    surf = WindowedSurface(0, [pts, [set()]])
    inner = {S.window_at(b, i).id: surf.window_at(0, i).id for i in range(len(pts))}
    outer = surf.window_at(1, 0).id
    ends = graph.boundary_ends[b]
    m = len(ends)
    arcs = []
    for j, e in enumerate(ends):
        a = graph.arc_by_id[e.arc]
        arcs.append(Arc(("cut", j), inner[a.window(e.end)], a.slot(e.end), outer, m - 1 - j, a.weight))
    if not arcs:
        g = build_graph(surf, [], [["0.0", "1.0"]])
        return Annulus(g, b, outer, inner)
    g = build_graph(surf, arcs, allow_parallel=True)
    leaf = discrete_representative(g).graph
    g, _ = collapse(leaf)
    return Annulus(g, b, outer, inner)


def duality_reglue(dec: DualityDecomposition) -> ArcGraph:
    """Glue every annulus back onto the core along its cut."""
    g = dec.core
    for ann in dec.annuli:
        res = glue(ann.graph, ann.outer, g, dec.cut_windows[ann.boundary], allow_inactive=True)
        g = res.graph
        dec = _rename(dec, res)
    # with every cut closed up again the graph must pass the strict checks
    return ArcGraph(g.surface, g.arcs, g.regions, g.io)


def _rename(dec: DualityDecomposition, res) -> DualityDecomposition:
    cw = {b: res.window_map[(1, w)] for b, w in dec.cut_windows.items() if (1, w) in res.window_map}
    return DualityDecomposition(dec.core, dec.annuli, cw)


# --- general position ----------------------------------------------------------------------

def matched_weightings(g1: ArcGraph, w1: str, g2: ArcGraph, w2: str,
                       weighting1: Mapping | None = None, weighting2: Mapping | None = None):
    """Scale two weightings so that the glued windows carry the same weight."""
    wt1 = {a.id: (weighting1 or {}).get(a.id, a.weight) for a in g1.arcs}
    wt2 = {a.id: (weighting2 or {}).get(a.id, a.weight) for a in g2.arcs}
    n1, n2 = g1.window_weight(w1, wt1), g2.window_weight(w2, wt2)
    if n1 == n2 or not n1 or not n2:
        return wt1, wt2
    d = gcd(n1, n2)
    return ({k: v * (n2 // d) for k, v in wt1.items()}, {k: v * (n1 // d) for k, v in wt2.items()})


def general_position(g1: ArcGraph, w1: str, g2: ArcGraph, w2: str,
                     weighting1: Mapping | None = None, weighting2: Mapping | None = None) -> bool:
    """True iff the glued graph has at most as many arcs as the two factors together."""
    wt1, wt2 = matched_weightings(g1, w1, g2, w2, weighting1, weighting2)
    res = glue(g1, w1, g2, w2, wt1, wt2, allow_inactive=True)
    return len(res.graph.arcs) <= len(g1.arcs) + len(g2.arcs)


def mco_member(graph: ArcGraph, notes: list | None = None) -> bool:
    """Polygonal regions (any punctures), a duality decomposition whose re-gluings are in
    general position, and non-degenerate annuli."""
    notes = notes if notes is not None else []
    if not is_polygonal(graph):
        notes.append("a region is not a polygon")
        return False
    dec = duality_decompose(graph)
    core = dec.core
    for ann in dec.annuli:
        bad = degenerate_windows(ann.graph)
        if bad:
            notes.append(f"annulus at boundary {ann.boundary} has degenerate windows {bad}")
            return False
    for ann in dec.annuli:
        wid = dec.cut_windows[ann.boundary]
        if not general_position(ann.graph, ann.outer, core, wid):
            notes.append(f"re-gluing the annulus at boundary {ann.boundary} is not in general position")
            return False
        res = glue(ann.graph, ann.outer, core, wid, allow_inactive=True)
        core = res.graph
        dec = _rename(dec, res)
    return True
