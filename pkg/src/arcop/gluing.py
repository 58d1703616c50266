"""Closed/open gluing and self-gluing of discretely weighted arc graphs.

Gluing runs on discrete representatives: leaf ends of the two windows are paired
in orientation-reversing order, composite leaves are traced, leaves that close
up into loops are deleted, and parallel leaves are collected back into weighted
bands.  Regions of the result are computed as a quotient of the old regions
("tiles") glued along the seam and along deleted leaves:

    chi(new region) = sum chi(tiles) - chi(K~) + chi(K)

where K~ is the disjoint union of identified boundary edges inside the tiles and
K its image.  Genus then follows from chi = 2 - 2h - #cycles.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping

from .errors import InactiveWindow, KindMismatch, SlotError, WeightMismatch
from .surface import (Arc, ArcGraph, ArcSide, End, PieceRef, Puncture, Region, WindowedSurface,
                      discrete_representative)


class UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        self.add(x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def classes(self):
        out = defaultdict(list)
        for x in self.parent:
            out[self.find(x)].append(x)
        return out


@dataclass(frozen=True)
class GradingTag:
    g: int
    chi_minus_1: int  # 1 - chi(F) + #punctures


def grading(graph: ArcGraph) -> GradingTag:
    S = graph.surface
    return GradingTag(S.genus, 1 - S.chi + len(S.punctures))


@dataclass
class GlueResult:
    graph: ArcGraph
    window_map: dict  # (operand index, old window id) -> new window id
    puncture_map: dict  # (operand index, old puncture id) -> new puncture id
    new_punctures: list  # ids of punctures created by the gluing
    closed: bool
    self_gluing: bool
    deleted_leaves: int
    leaf_graph: ArcGraph = field(repr=False, default=None)


# --- public operations ----------------------------------------------------------

def glue(g1: ArcGraph, w1: str, g2: ArcGraph, w2: str, weighting1: Mapping | None = None,
         weighting2: Mapping | None = None, *, allow_inactive: bool = False) -> GlueResult:
    """Glue window w1 of g1 to window w2 of g2 (orientation reversing)."""
    D1 = discrete_representative(g1, weighting1).graph
    D2 = discrete_representative(g2, weighting2).graph
    return _finish(_glue_leaves([D1, D2], (0, w1), (1, w2), extended=False, allow_inactive=allow_inactive))


def self_glue(g: ArcGraph, w1: str, w2: str, weighting: Mapping | None = None) -> GlueResult:
    if w1 == w2:
        raise SlotError("self-gluing needs two distinct windows", w1)
    D = discrete_representative(g, weighting).graph
    return _finish(_glue_leaves([D], (0, w1), (0, w2), extended=False, allow_inactive=False))


def extended_glue(left: ArcGraph, w_out: str, right: ArcGraph, w_in: str,
                  weighting_left: Mapping | None = None, weighting_right: Mapping | None = None) -> GlueResult:
    """Glue an out window of ``left`` to an in window of ``right``; if the out window is
    inactive, all leaves meeting the in window are deleted."""
    D1 = discrete_representative(left, weighting_left).graph
    D2 = discrete_representative(right, weighting_right).graph
    return _finish(_glue_leaves([D1, D2], (0, w_out), (1, w_in), extended=True, allow_inactive=False))


def extended_self_glue(g: ArcGraph, w_out: str, w_in: str, weighting: Mapping | None = None) -> GlueResult:
    D = discrete_representative(g, weighting).graph
    return _finish(_glue_leaves([D], (0, w_out), (0, w_in), extended=True, allow_inactive=False))


def _finish(res: GlueResult) -> GlueResult:
    arc_graph, _ = collapse(res.leaf_graph)
    res.graph = arc_graph
    return res


# --- leaf-level engine --------------------------------------------------------------

def _glue_leaves(ops: list, wa: tuple, wb: tuple, extended: bool, allow_inactive: bool) -> GlueResult:
    oa, ida = wa
    ob, idb = wb
    for o, wid in (wa, wb):
        if wid not in ops[o].surface.window_by_id:
            raise SlotError(f"unknown window {wid!r}", wid)
    Wa, Wb = ops[oa].surface.window(ida), ops[ob].surface.window(idb)
    if Wa.closed != Wb.closed:
        raise KindMismatch(f"cannot glue {'closed' if Wa.closed else 'open'} window {ida} to "
                           f"{'closed' if Wb.closed else 'open'} window {idb}", (ida, idb))
    ends_a = [(oa, e) for e in ops[oa].ends_by_window[ida]]
    ends_b = [(ob, e) for e in ops[ob].ends_by_window[idb]]
    na, nb = len(ends_a), len(ends_b)
    deleted_ext = set()
    if extended:
        if nb == 0:
            raise InactiveWindow(f"in window {idb} is inactive", idb)
        if na == 0:
            deleted_ext = {(ob, e.arc) for _, e in ends_b}
        elif na != nb:
            raise WeightMismatch(f"window weights differ: {ida} has {na}, {idb} has {nb}", (ida, idb))
    else:
        if (na == 0 or nb == 0) and not (allow_inactive and na == nb == 0):
            raise InactiveWindow(f"window {ida if na == 0 else idb} is inactive", ida if na == 0 else idb)
        if na != nb:
            raise WeightMismatch(f"window weights differ: {ida} has {na}, {idb} has {nb}", (ida, idb))

    partner = {}
    if not deleted_ext:
        for i in range(na):
            partner[ends_a[i]] = ends_b[na - 1 - i]
            partner[ends_b[na - 1 - i]] = ends_a[i]

    # composite leaves
    def other(oe):
        o, e = oe
        return (o, End(e.arc, 3 - e.end))

    all_ends = []
    for o, D in enumerate(ops):
        for w in D.surface.windows:
            for e in D.ends_by_window[w.id]:
                if (o, e.arc) not in deleted_ext:
                    all_ends.append((o, e))
    visited_leaves, used_ends = set(), set()
    composites = []
    for start in all_ends:
        if start in partner or start in used_ends:
            continue
        cur = start
        while True:
            visited_leaves.add((cur[0], cur[1].arc))
            nxt = other(cur)
            if nxt in partner:
                cur = partner[nxt]
                continue
            final = nxt
            break
        used_ends.add(start)
        used_ends.add(final)
        composites.append((start, final))
    loops = {(o, e.arc) for o, e in all_ends if (o, e.arc) not in visited_leaves}
    deleted = loops | deleted_ext

    # marked points
    def pt(o, b, i):
        return (o, b, i % len(ops[o].surface.boundaries[b]))

    pa_s, pa_e = pt(oa, Wa.boundary, Wa.index), pt(oa, Wa.boundary, Wa.index + 1)
    pb_s, pb_e = pt(ob, Wb.boundary, Wb.index), pt(ob, Wb.boundary, Wb.index + 1)
    uf_p = UnionFind()
    for o, D in enumerate(ops):
        for b, pts in enumerate(D.surface.boundaries):
            for i in range(len(pts)):
                uf_p.add((o, b, i))
    uf_p.union(pa_s, pb_e)
    uf_p.union(pa_e, pb_s)
    glued_windows = {(oa, ida), (ob, idb)}
    remaining = []  # (o, window)
    for o, D in enumerate(ops):
        for w in D.surface.windows:
            if (o, w.id) not in glued_windows:
                remaining.append((o, w))
    out_of_class, in_of_class = defaultdict(list), defaultdict(list)
    for o, w in remaining:
        out_of_class[uf_p.find(pt(o, w.boundary, w.index))].append((o, w))
        in_of_class[uf_p.find(pt(o, w.boundary, w.index + 1))].append((o, w))
    classes = uf_p.classes()
    for c, members in classes.items():
        if len(out_of_class[c]) > 1 or len(in_of_class[c]) > 1 or \
                len(out_of_class[c]) != len(in_of_class[c]):
            raise AssertionError(f"non-manifold point class {members}")
    label_of_class = {c: frozenset().union(*[ops[o].surface.point_label(b, i) for o, b, i in m])
                      for c, m in classes.items()}

    # new boundaries
    seen = set()
    new_boundaries, window_map = [], {}
    for o, w in remaining:
        if (o, w.id) in seen:
            continue
        seq = []
        cur = (o, w)
        while (cur[0], cur[1].id) not in seen:
            seen.add((cur[0], cur[1].id))
            seq.append(cur)
            c_end = uf_p.find(pt(cur[0], cur[1].boundary, cur[1].index + 1))
            cur = out_of_class[c_end][0]
        new_boundaries.append(seq)
    boundary_labels = []
    n = 0
    for seq in new_boundaries:
        labs = []
        for o, w in seq:
            n += 1
            window_map[(o, w.id)] = f"w{n}"
            labs.append(label_of_class[uf_p.find(pt(o, w.boundary, w.index))])
        boundary_labels.append(labs)

    # punctures
    punct_list, puncture_map, new_punct_ids = [], {}, []
    for o, D in enumerate(ops):
        for p in D.surface.punctures:
            pid = f"p{len(punct_list) + 1}"
            puncture_map[(o, p.id)] = pid
            punct_list.append(Puncture(pid, p.label))
    interior_classes = []
    for c in sorted(classes, key=_key):
        if out_of_class[c]:
            continue
        if Wa.closed:
            continue  # the closed gluing point is forgotten
        pid = f"p{len(punct_list) + 1}"
        punct_list.append(Puncture(pid, label_of_class[c]))
        new_punct_ids.append(pid)
        interior_classes.append((c, pid))

    # new surface
    chi_old = sum(D.surface.chi for D in ops)
    seam_pts = {pa_s, pa_e, pb_s, pb_e}
    chi_kt = len(seam_pts) - 2
    chi_k = len({uf_p.find(p) for p in seam_pts}) - 1
    chi_new = chi_old - chi_kt + chi_k
    twice_g = 2 - chi_new - len(new_boundaries)
    if twice_g < 0 or twice_g % 2:
        raise AssertionError(f"glued surface has chi={chi_new} and {len(new_boundaries)} boundaries")
    surface = WindowedSurface(twice_g // 2, boundary_labels, punct_list)

    # new leaves
    new_arcs, composite_of = [], {}
    for k, (s, f) in enumerate(composites):
        w_s = window_map[(s[0], ops[s[0]].end_window(s[1]))]
        w_f = window_map[(f[0], ops[f[0]].end_window(f[1]))]
        arc_s = ops[s[0]].arc_by_id[s[1].arc]
        arc_f = ops[f[0]].arc_by_id[f[1].arc]
        new_arcs.append(Arc(k, w_s, arc_s.slot(s[1].end), w_f, arc_f.slot(f[1].end), 1))
        composite_of[End(k, 1)] = s
        composite_of[End(k, 2)] = f
    io = _transport_io(ops, window_map, glued_windows)
    newg = ArcGraph(surface, new_arcs, None, io, allow_parallel=True)

    # regions: quotient of tiles
    ridx = [D.region_index() for D in ops]

    def tile_of_piece(o, pid):
        return (o, ridx[o][PieceRef(pid)])

    def vertex_tile(v):
        kind = v[0]
        if kind == "c":
            _, o, e, side = v
            D = ops[o]
            return tile_of_piece(o, D.piece_before[e] if side == "before" else D.piece_after[e])
        if kind == "p":
            _, o, b, i = v
            return tile_of_piece(o, ops[o].piece_of_point[(b, i)])
        _, o, b, i, j = v  # virtual point j on the inactive window starting at point i
        return tile_of_piece(o, ops[o].piece_of_point[(b, i)])

    def seam(o, W, ends, m):
        s = ("p",) + pt(o, W.boundary, W.index)
        t = ("p",) + pt(o, W.boundary, W.index + 1)
        if ends:
            vin = [("c", o, e, "before") for _, e in ends]
            vout = [("c", o, e, "after") for _, e in ends]
        else:
            vin = vout = [("v", o, W.boundary, W.index, j) for j in range(m)]
        seq_start = [s] + vout
        seq_end = vin + [t]
        return list(zip(seq_start, seq_end))

    m = max(na, nb)
    edges_a = seam(oa, Wa, ends_a, m)
    edges_b = seam(ob, Wb, ends_b, m)
    uf_v, uf_t = UnionFind(), UnionFind()
    kt_vertices, kt_edges = set(), []  # K~ edges: (u, v, tile)
    k_edges = []  # K edges: tile of one preimage
    for o, D in enumerate(ops):
        for i in range(len(D.regions)):
            uf_t.add((o, i))
    for i in range(m + 1):
        ua, va = edges_a[i]
        ub, vb = edges_b[m - i]
        uf_v.union(ua, vb)
        uf_v.union(va, ub)
        ta, tb = _edge_tile(ua, va, vertex_tile), _edge_tile(ub, vb, vertex_tile)
        uf_t.union(ta, tb)
        kt_edges += [(ua, va, ta), (ub, vb, tb)]
        k_edges.append(ta)
    for o, l in sorted(deleted, key=_key):
        x1, x2 = End(l, 1), End(l, 2)
        L = (("c", o, x1, "before"), ("c", o, x2, "after"))
        R = (("c", o, x2, "before"), ("c", o, x1, "after"))
        tL = tile_of_piece(o, ops[o].piece_before[x1])
        tR = tile_of_piece(o, ops[o].piece_after[x1])
        uf_v.union(L[0], R[1])
        uf_v.union(L[1], R[0])
        uf_t.union(tL, tR)
        kt_edges += [(L[0], L[1], tL), (R[0], R[1], tR)]
        k_edges.append(tL)
    for u, v, _ in kt_edges:
        kt_vertices.update((u, v))
    comp_chi = defaultdict(int)
    for o, D in enumerate(ops):
        for i, r in enumerate(D.regions):
            comp_chi[uf_t.find((o, i))] += r.chi
    for v in kt_vertices:
        comp_chi[uf_t.find(vertex_tile(v))] -= 1
    for _, _, t in kt_edges:
        comp_chi[uf_t.find(t)] += 1
    for cls in uf_v.classes().values():
        comp_chi[uf_t.find(vertex_tile(cls[0]))] += 1
    for t in k_edges:
        comp_chi[uf_t.find(t)] -= 1

    comp_cycles = defaultdict(list)
    comp_punct = defaultdict(list)
    for cyc in newg.trace_cycles():
        pid = next(x.piece for x in cyc if isinstance(x, PieceRef))
        piece = newg.pieces[pid]
        if piece.start is None:
            o, b, i = classes[_class_of_new_point(newg, piece, boundary_labels, new_boundaries, uf_p)][0]
            tile = tile_of_piece(o, ops[o].piece_of_point[(b, i)])
        else:
            o, e = composite_of[piece.start]
            tile = tile_of_piece(o, ops[o].piece_after[e])
        comp_cycles[uf_t.find(tile)].append(cyc)
    for o, D in enumerate(ops):
        for i, r in enumerate(D.regions):
            for p in r.punctures:
                comp_punct[uf_t.find((o, i))].append(puncture_map[(o, p)])
    for c, pid in interior_classes:
        o, b, i = classes[c][0]
        comp_punct[uf_t.find(tile_of_piece(o, ops[o].piece_of_point[(b, i)]))].append(pid)
    regions = []
    comps = sorted({uf_t.find(t) for t in uf_t.parent}, key=_key)
    for c in comps:
        chi = comp_chi[c]
        b = len(comp_cycles[c])
        twice_h = 2 - chi - b
        if twice_h < 0 or twice_h % 2:
            raise AssertionError(f"region component has chi={chi} and {b} boundary cycles")
        regions.append(Region(twice_h // 2, frozenset(comp_punct[c]), tuple(comp_cycles[c])))
    # a duality core may still carry unmarked bigons at cuts that are not yet reglued
    leaf_graph = ArcGraph(surface, new_arcs, regions, io, allow_parallel=True,
                          allow_bigons=any(D.allow_bigons for D in ops))
    return GlueResult(None, window_map, puncture_map, new_punct_ids, Wa.closed, len(ops) == 1,
                      len(deleted), leaf_graph)


def _class_of_new_point(newg, piece, boundary_labels, new_boundaries, uf_p):
    # first marked point of the new boundary = start point of its first window
    o, w = new_boundaries[piece.boundary][0]
    return uf_p.find((o, w.boundary, w.index))


def _edge_tile(u, v, vertex_tile):
    tu = vertex_tile(u)
    tv = vertex_tile(v)
    if tu != tv:
        raise AssertionError(f"seam edge endpoints lie in different regions: {u} {v}")
    return tu


def _key(x):
    return repr(x)


def _transport_io(ops, window_map, glued):
    ios = [D.io for D in ops]
    if any(io is None for io in ios):
        return None
    ins, outs = set(), set()
    for o, io in enumerate(ios):
        for w in io[0]:
            if (o, w) not in glued:
                ins.add(window_map[(o, w)])
        for w in io[1]:
            if (o, w) not in glued:
                outs.add(window_map[(o, w)])
    return (frozenset(ins), frozenset(outs))


# --- collapsing parallel leaves ----------------------------------------------------

def collapse(leaf_graph: ArcGraph) -> tuple[ArcGraph, dict]:
    """Group parallel leaves into weighted arcs.  Returns the arc-level graph and a
    map leaf id -> (arc id, flipped)."""
    D = leaf_graph
    parent = {a.id: (a.id, False) for a in D.arcs}

    def find(x):
        flip = False
        while parent[x][0] != x:
            p, f = parent[x]
            flip ^= f
            x = p
        return x, flip

    rect_regions = set()
    for ri, r in enumerate(D.regions):
        if r.genus or r.punctures or len(r.cycles) != 1 or len(r.cycles[0]) != 4:
            continue
        sides = [x for x in r.cycles[0] if isinstance(x, ArcSide)]
        pieces = [x.piece for x in r.cycles[0] if isinstance(x, PieceRef)]
        if sides[0].arc == sides[1].arc or any(D.pieces[p].points for p in pieces):
            continue
        rect_regions.add(ri)
        (a, sa), (b, sb) = sides
        ra, fa = find(a)
        rb, fb = find(b)
        rel = sa == sb  # equal side names means opposite orientations
        if ra != rb:
            parent[rb] = (ra, fa ^ fb ^ rel)
    window_order = {w.id: i for i, w in enumerate(D.surface.windows)}
    bands = defaultdict(list)
    for a in D.arcs:
        root, flip = find(a.id)
        bands[root].append((a.id, flip))
    band_info = []
    for root, members in bands.items():
        ends = {1: [], 2: []}
        for lid, flip in members:
            arc = D.arc_by_id[lid]
            for e in (1, 2):
                be = e if not flip else 3 - e
                ends[be].append((arc.window(e), arc.slot(e)))
        w1 = {w for w, _ in ends[1]}
        w2 = {w for w, _ in ends[2]}
        assert len(w1) == 1 and len(w2) == 1, "band ends spread over several windows"
        s1 = min(s for _, s in ends[1])
        s2 = min(s for _, s in ends[2])
        k1 = (window_order[next(iter(w1))], s1)
        k2 = (window_order[next(iter(w2))], s2)
        if k2 < k1:  # orient each band from its smaller end
            members = [(lid, not f) for lid, f in members]
            k1, k2 = k2, k1
            w1, w2, s1, s2 = w2, w1, s2, s1
        band_info.append((k1, k2, next(iter(w1)), s1, next(iter(w2)), s2, members))
    band_info.sort(key=lambda t: (t[0], t[1]))
    arcs, band_of = [], {}
    for i, (_, _, w1, s1, w2, s2, members) in enumerate(band_info):
        arcs.append(Arc(i, w1, s1, w2, s2, len(members)))
        for lid, flip in members:
            band_of[lid] = (i, flip)
    G = ArcGraph(D.surface, arcs, None, D.io, allow_bigons=D.allow_bigons)
    cycles = G.trace_cycles()
    cycle_of_piece = {}
    for c in cycles:
        for x in c:
            if isinstance(x, PieceRef):
                cycle_of_piece[x.piece] = c

    def map_piece(pid):
        p = D.pieces[pid]
        if p.start is None:
            return pid
        arc_id, flip = band_of[p.start.arc]
        e = p.start.end if not flip else 3 - p.start.end
        return G.piece_after[End(arc_id, e)]

    regions = []
    for ri, r in enumerate(D.regions):
        if ri in rect_regions:
            continue
        cyc = []
        for c in r.cycles:
            first = next(x.piece for x in c if isinstance(x, PieceRef))
            cyc.append(cycle_of_piece[map_piece(first)])
        regions.append(Region(r.genus, r.punctures, tuple(cyc)))
    return ArcGraph(D.surface, arcs, regions, D.io, allow_bigons=D.allow_bigons), band_of
