"""Brane-labelled windowed surfaces and weighted arc graphs.

Orientation conventions.  Each boundary is a cyclic sequence of marked points
p_0, ..., p_{k-1}; window ``i`` of that boundary runs from p_i to p_{i+1} and
the surface lies to the left of the boundary direction.  Arc ends inside a
window are ordered by their slot numbers along that direction.  The side ``L``
of an arc is the side on the left when walking from its first end to its
second end.  Region boundary cycles are traversed with the region on the left,
so along a boundary piece they follow the boundary direction.

A boundary piece is identified as ``"<boundary>.<k>"``: it starts right after
the k-th arc end met when walking the boundary from p_0 (a boundary without
arc ends is the single piece ``"<boundary>.0"``).
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

from .barcomplex import WindowLabel
from .errors import (EulerMismatch, InessentialArc, MarkedPointError, OrphanPuncture,
                     ParallelArcs, SideUsage, SlotError, WeightMismatch)

EULER_LOG: list = []
"""Every Euler-identity check performed by ``ArcGraph.validate`` appends
``(sum of region chi, chi(F) + #arcs)`` here; the acceptance suite inspects it."""


def labelset(x) -> frozenset:
    if isinstance(x, str):
        return frozenset([x]) if x else frozenset()
    return frozenset(x)


@dataclass(frozen=True)
class Puncture:
    id: str
    label: frozenset


@dataclass(frozen=True)
class Window:
    id: str
    boundary: int
    index: int  # starts at point ``index`` of its boundary
    left: frozenset
    right: frozenset
    closed: bool
    lone: bool  # the only window of its boundary

    @property
    def label(self) -> WindowLabel:
        return WindowLabel.closed() if self.closed else WindowLabel("open", self.left, self.right)


class WindowedSurface:
    """Genus, boundaries as cyclic lists of marked-point labels, and labelled punctures."""

    def __init__(self, genus: int, boundaries: Sequence[Sequence], punctures: Iterable = ()):
        if genus < 0:
            raise ValueError("genus must be non-negative")
        self.genus = int(genus)
        self.boundaries = tuple(tuple(labelset(p) for p in b) for b in boundaries)
        self.punctures = tuple(p if isinstance(p, Puncture) else Puncture(str(p[0]), labelset(p[1]))
                               for p in punctures)
        if len({p.id for p in self.punctures}) != len(self.punctures):
            raise OrphanPuncture("duplicate puncture ids")
        for bi, pts in enumerate(self.boundaries):
            if not pts:
                raise MarkedPointError(f"boundary {bi} has no marked point", bi)
            if any(not p for p in pts) and len(pts) > 1:
                raise MarkedPointError(f"boundary {bi}: an empty-labelled point must be the only point "
                                       f"of its boundary", bi)
        self.windows: list[Window] = []
        for bi, pts in enumerate(self.boundaries):
            k = len(pts)
            for i in range(k):
                closed = k == 1 and not pts[0]
                self.windows.append(Window(f"w{len(self.windows) + 1}", bi, i, pts[i], pts[(i + 1) % k],
                                           closed, k == 1))
        self.window_by_id = {w.id: w for w in self.windows}
        self._window_at = {(w.boundary, w.index): w for w in self.windows}

    @property
    def chi(self) -> int:
        return 2 - 2 * self.genus - len(self.boundaries)

    def window(self, wid: str) -> Window:
        return self.window_by_id[wid]

    def window_at(self, b: int, i: int) -> Window:
        return self._window_at[(b, i % len(self.boundaries[b]))]

    def point_label(self, b: int, i: int) -> frozenset:
        return self.boundaries[b][i % len(self.boundaries[b])]

    def puncture(self, pid) -> Puncture:
        for p in self.punctures:
            if p.id == pid:
                return p
        raise KeyError(pid)

    def __repr__(self):
        bs = ["[" + ",".join("+".join(sorted(p)) or "0" for p in b) + "]" for b in self.boundaries]
        return f"WindowedSurface(g={self.genus}, boundaries={' '.join(bs)}, punctures={len(self.punctures)})"


@dataclass(frozen=True)
class Arc:
    id: Hashable
    w1: str
    slot1: int
    w2: str
    slot2: int
    weight: int = 1

    def window(self, end: int) -> str:
        return self.w1 if end == 1 else self.w2

    def slot(self, end: int) -> int:
        return self.slot1 if end == 1 else self.slot2


class End(NamedTuple):
    arc: Hashable
    end: int  # 1 or 2


class ArcSide(NamedTuple):
    arc: Hashable
    side: str  # "L" | "R"


class PieceRef(NamedTuple):
    piece: str


@dataclass(frozen=True)
class Region:
    genus: int
    punctures: frozenset
    cycles: tuple

    @property
    def chi(self) -> int:
        return 2 - 2 * self.genus - len(self.cycles)


@dataclass(frozen=True)
class Piece:
    """A component of the boundary minus the arc ends.

    ``points`` are the marked-point indices it contains, in order; ``windows`` are
    the windows it meets, in order (one more than the number of points, except
    for a full circle).  ``start``/``stop`` are the arc ends bounding it, or None
    for a boundary without arc ends.
    """
    id: str
    boundary: int
    start: End | None
    stop: End | None
    points: tuple
    windows: tuple

    @property
    def type(self) -> int:
        return 1 if not self.points else 2  # refined by ArcGraph.piece_type


def _sort_key(x):
    return (type(x).__name__, x) if not isinstance(x, tuple) else ("tuple", tuple(map(_sort_key, x)))


class ArcGraph:
    """An arc family on a windowed surface with its complementary regions.

    ``regions`` may be None while building; such a graph is unvalidated and only
    offers the combinatorial queries (pieces, traced cycles).
    """

    def __init__(self, surface: WindowedSurface, arcs: Iterable[Arc], regions: Iterable[Region] | None,
                 io: tuple | None = None, *, allow_parallel: bool = False, allow_bigons: bool = False,
                 check: bool = True):
        self.surface = surface
        self.arcs = tuple(arcs)
        self.arc_by_id = {a.id: a for a in self.arcs}
        if len(self.arc_by_id) != len(self.arcs):
            raise SlotError("duplicate arc ids")
        self.io = None if io is None else (frozenset(io[0]), frozenset(io[1]))
        self.allow_parallel = allow_parallel
        self.allow_bigons = allow_bigons
        ends = defaultdict(list)
        for a in self.arcs:
            if not isinstance(a.weight, int) or a.weight < 1:
                raise WeightMismatch(f"arc {a.id!r} has non-positive weight {a.weight!r}", a.id)
            for e in (1, 2):
                w = a.window(e)
                if w not in surface.window_by_id:
                    raise SlotError(f"arc {a.id!r} ends on unknown window {w!r}", a.id)
                ends[w].append((a.slot(e), End(a.id, e)))
        self.ends_by_window: dict[str, list[End]] = {}
        for w in surface.windows:
            lst = sorted(ends.get(w.id, []), key=lambda t: t[0])
            slots = [s for s, _ in lst]
            if len(set(slots)) != len(slots):
                raise SlotError(f"window {w.id} has two arc ends in the same slot", w.id)
            self.ends_by_window[w.id] = [e for _, e in lst]
        if self.io is not None:
            ids = set(surface.window_by_id)
            if self.io[0] & self.io[1] or (self.io[0] | self.io[1]) != ids:
                raise SlotError("in/out windows must partition the windows")
        self._build_pieces()
        self.regions = None if regions is None else tuple(regions)
        self.validated = False
        if self.regions is not None and check:
            self.validate()

    # --- boundary combinatorics ------------------------------------------------
    def end_window(self, e: End) -> str:
        return self.arc_by_id[e.arc].window(e.end)

    def _build_pieces(self):
        S = self.surface
        self.pieces: dict[str, Piece] = {}
        self.piece_after: dict[End, str] = {}
        self.piece_before: dict[End, str] = {}
        self.piece_of_point: dict[tuple, str] = {}
        self.boundary_ends: list[list[End]] = []
        for b, pts in enumerate(S.boundaries):
            events = []  # ("pt", i) | ("end", End, window id)
            for i in range(len(pts)):
                events.append(("pt", i, None))
                w = S.window_at(b, i)
                for e in self.ends_by_window[w.id]:
                    events.append(("end", e, w.id))
            end_pos = [j for j, ev in enumerate(events) if ev[0] == "end"]
            self.boundary_ends.append([events[j][1] for j in end_pos])
            if not end_pos:
                pid = f"{b}.0"
                wins = tuple(S.window_at(b, i).id for i in range(len(pts)))
                self.pieces[pid] = Piece(pid, b, None, None, tuple(range(len(pts))), wins)
                for i in range(len(pts)):
                    self.piece_of_point[(b, i)] = pid
                continue
            m = len(end_pos)
            for k in range(m):
                j0, j1 = end_pos[k], end_pos[(k + 1) % m]
                pid = f"{b}.{k}"
                start, stop = events[j0][1], events[j1][1]
                pts_in, wins = [], [events[j0][2]]
                j = (j0 + 1) % len(events)
                while j != j1:
                    ev = events[j]
                    if ev[0] == "pt":
                        pts_in.append(ev[1])
                        wins.append(S.window_at(b, ev[1]).id)
                        self.piece_of_point[(b, ev[1])] = pid
                    j = (j + 1) % len(events)
                self.pieces[pid] = Piece(pid, b, start, stop, tuple(pts_in), tuple(wins))
                self.piece_after[start] = pid
                self.piece_before[stop] = pid

    def piece_type(self, pid: str) -> int:
        p = self.pieces[pid]
        if not p.points:
            return 1
        labels = [self.surface.point_label(p.boundary, i) for i in p.points]
        return 2 if all(not l for l in labels) else 3

    def trace_cycles(self) -> list[tuple]:
        """Region boundary cycles derived from the slot data alone."""
        seen = set()
        cycles = []
        for pid in sorted(self.pieces, key=_piece_key):
            if pid in seen:
                continue
            cyc = []
            cur = pid
            while cur not in seen:
                seen.add(cur)
                cyc.append(PieceRef(cur))
                stop = self.pieces[cur].stop
                if stop is None:
                    break
                cyc.append(ArcSide(stop.arc, "L" if stop.end == 1 else "R"))
                cur = self.piece_after[End(stop.arc, 3 - stop.end)]
            cycles.append(tuple(cyc))
        return cycles

    def window_weight(self, wid: str, weighting: Mapping | None = None) -> int:
        wt = weighting or {}
        return sum(wt.get(e.arc, self.arc_by_id[e.arc].weight) for e in self.ends_by_window[wid])

    def window_weights(self, weighting: Mapping | None = None) -> dict:
        return {w.id: self.window_weight(w.id, weighting) for w in self.surface.windows}

    @property
    def weights(self) -> dict:
        return {a.id: a.weight for a in self.arcs}

    def with_weights(self, weighting: Mapping) -> "ArcGraph":
        arcs = [Arc(a.id, a.w1, a.slot1, a.w2, a.slot2, int(weighting.get(a.id, a.weight))) for a in self.arcs]
        g = ArcGraph(self.surface, arcs, self.regions, self.io, allow_parallel=self.allow_parallel,
                     allow_bigons=self.allow_bigons, check=False)
        g.validated = self.validated
        return g

    def with_io(self, io) -> "ArcGraph":
        g = ArcGraph(self.surface, self.arcs, self.regions, io, allow_parallel=self.allow_parallel,
                     allow_bigons=self.allow_bigons, check=False)
        g.validated = self.validated
        return g

    # --- validation --------------------------------------------------------------
    def validate(self) -> None:
        if self.regions is None:
            raise SideUsage("graph has no region decomposition")
        counts = Counter()
        for r in self.regions:
            if r.genus < 0:
                raise EulerMismatch(f"region with negative genus {r.genus}", r)
            for cyc in r.cycles:
                counts.update(cyc)
        expected = Counter([PieceRef(p) for p in self.pieces]
                           + [ArcSide(a.id, s) for a in self.arcs for s in "LR"])
        for item, n in counts.items():
            if item not in expected:
                raise SideUsage(f"region cycle mentions unknown item {tuple(item)}", item)
            if n > 1:
                raise SideUsage(f"{tuple(item)} occurs {n} times in region cycles", item)
        missing = [i for i in expected if i not in counts]
        if missing:
            raise SideUsage(f"{tuple(missing[0])} does not occur in any region cycle", missing[0])
        traced = {canonical_cycle(c) for c in self.trace_cycles()}
        for r in self.regions:
            for cyc in r.cycles:
                if canonical_cycle(cyc) not in traced:
                    raise SideUsage(f"stored cycle {_fmt_cycle(cyc)} disagrees with the slot adjacency", cyc)
        pids = Counter(p for r in self.regions for p in r.punctures)
        for p in self.surface.punctures:
            if pids[p.id] != 1:
                raise OrphanPuncture(f"puncture {p.id!r} is assigned to {pids[p.id]} regions", p.id)
        extra = set(pids) - {p.id for p in self.surface.punctures}
        if extra:
            raise OrphanPuncture(f"regions mention unknown punctures {sorted(extra)}", sorted(extra)[0])
        lhs = sum(r.chi for r in self.regions)
        rhs = self.surface.chi + len(self.arcs)
        EULER_LOG.append((lhs, rhs))
        if lhs != rhs:
            raise EulerMismatch(f"sum of region chi is {lhs}, chi(F) + #arcs is {rhs}")
        for r in self.regions:
            if r.genus or r.punctures or len(r.cycles) != 1:
                continue
            cyc = r.cycles[0]
            sides = [x for x in cyc if isinstance(x, ArcSide)]
            pieces = [x.piece for x in cyc if isinstance(x, PieceRef)]
            if len(sides) == 1 and not self.pieces[pieces[0]].points and not self.allow_bigons:
                raise InessentialArc(f"arc {sides[0].arc!r} cuts off an unmarked bigon", sides[0].arc)
            if (not self.allow_parallel and len(sides) == 2 and sides[0].arc != sides[1].arc
                    and all(not self.pieces[p].points for p in pieces)):
                raise ParallelArcs(f"arcs {sides[0].arc!r} and {sides[1].arc!r} bound an unmarked "
                                   f"rectangle", (sides[0].arc, sides[1].arc))
        self.validated = True

    # --- region lookups ---------------------------------------------------------
    def region_index(self) -> dict:
        """Map every cycle item to the index of its region."""
        idx = {}
        for i, r in enumerate(self.regions):
            for cyc in r.cycles:
                for x in cyc:
                    idx[x] = i
        return idx

    def __repr__(self):
        return (f"ArcGraph({self.surface!r}, arcs={len(self.arcs)}, "
                f"regions={'?' if self.regions is None else len(self.regions)})")


def _piece_key(pid: str):
    b, k = pid.split(".")
    return int(b), int(k)


def canonical_cycle(cyc: Sequence) -> tuple:
    """Rotate a cycle to start at its smallest piece."""
    cyc = tuple(cyc)
    starts = [i for i, x in enumerate(cyc) if isinstance(x, PieceRef)]
    if not starts:
        return cyc
    best = min(starts, key=lambda i: _piece_key(cyc[i].piece))
    return cyc[best:] + cyc[:best]


def _fmt_cycle(cyc) -> str:
    out = []
    for x in cyc:
        out.append(f"{x.arc}{x.side}" if isinstance(x, ArcSide) else f"[{x.piece}]")
    return " ".join(out)


def build_graph(surface: WindowedSurface, arcs: Iterable[Arc], groups: Sequence | None = None,
                genus: Sequence[int] | None = None, punctures: Sequence | None = None,
                io=None, allow_parallel: bool = False, check: bool = True,
                allow_bigons: bool = False) -> ArcGraph:
    """Convenience constructor: trace the cycles and group them into regions.

    ``groups`` lists, per region, the pieces whose cycles it contains (default: one
    region per cycle); ``genus`` and ``punctures`` are per-region lists.
    """
    g = ArcGraph(surface, arcs, None, io, allow_parallel=allow_parallel, allow_bigons=allow_bigons)
    cycles = g.trace_cycles()
    by_piece = {}
    for c in cycles:
        for x in c:
            if isinstance(x, PieceRef):
                by_piece[x.piece] = c
    if groups is None:
        groups = [[next(x.piece for x in c if isinstance(x, PieceRef))] for c in cycles]
    regions = []
    for i, grp in enumerate(groups):
        cyc = tuple(dict.fromkeys(by_piece[p] for p in grp))
        regions.append(Region(genus[i] if genus else 0,
                              frozenset(punctures[i]) if punctures else frozenset(), cyc))
    return ArcGraph(surface, g.arcs, regions, io, allow_parallel=allow_parallel,
                    allow_bigons=allow_bigons, check=check)


def window_weight(graph: ArcGraph, weighting: Mapping | None, w: str) -> int:
    return graph.window_weight(w, weighting)


def is_active(graph: ArcGraph, w: str) -> bool:
    return bool(graph.ends_by_window[w])


# --- discrete representative --------------------------------------------------

@dataclass
class DiscreteRepresentative:
    graph: ArcGraph  # leaf-level graph, parallel leaves allowed
    source: ArcGraph
    weighting: dict
    leaf_of: dict  # leaf id -> (arc id, index)


def discrete_representative(graph: ArcGraph, weighting: Mapping | None = None) -> DiscreteRepresentative:
    """Replace each arc of weight k by k parallel leaves (an untwisted band)."""
    wt = {a.id: int((weighting or {}).get(a.id, a.weight)) for a in graph.arcs}
    for a, k in wt.items():
        if k < 1:
            raise WeightMismatch(f"weight of arc {a!r} must be positive, got {k}", a)
    pos = {}  # (arc, end, leaf index) -> slot
    for w, ends in graph.ends_by_window.items():
        s = 0
        for e in ends:
            k = wt[e.arc]
            for i in range(k):
                pos[(e.arc, e.end, i if e.end == 1 else k - 1 - i)] = s + i
            s += k
    leaves, leaf_of = [], {}
    for a in graph.arcs:
        for i in range(wt[a.id]):
            lid = (a.id, i)
            leaves.append(Arc(lid, a.w1, pos[(a.id, 1, i)], a.w2, pos[(a.id, 2, i)], 1))
            leaf_of[lid] = (a.id, i)
    D = ArcGraph(graph.surface, leaves, None, graph.io, allow_parallel=True,
                 allow_bigons=graph.allow_bigons)
    if graph.regions is None:
        return DiscreteRepresentative(D, graph, wt, leaf_of)

    def leaf_end_of(e: End) -> End:
        # the leaf end occupying the last slot of the block of arc end e
        k = wt[e.arc]
        return End((e.arc, k - 1 if e.end == 1 else 0), e.end)

    def map_piece(pid: str) -> str:
        p = graph.pieces[pid]
        if p.start is None:
            return pid
        return D.piece_after[leaf_end_of(p.start)]

    cycles = {canonical_cycle(c): c for c in D.trace_cycles()}
    cycle_of_piece = {}
    for c in cycles.values():
        for x in c:
            if isinstance(x, PieceRef):
                cycle_of_piece[x.piece] = c
    used = set()
    regions = []
    for r in graph.regions:
        cyc = []
        for c in r.cycles:
            first_piece = next(x.piece for x in c if isinstance(x, PieceRef))
            lc = cycle_of_piece[map_piece(first_piece)]
            used.add(canonical_cycle(lc))
            cyc.append(lc)
        regions.append(Region(r.genus, r.punctures, tuple(cyc)))
    for key, c in cycles.items():
        if key not in used:
            regions.append(Region(0, frozenset(), (c,)))
    D = ArcGraph(graph.surface, leaves, regions, graph.io, allow_parallel=True,
                 allow_bigons=graph.allow_bigons)
    return DiscreteRepresentative(D, graph, wt, leaf_of)


# --- canonical form and isomorphism --------------------------------------------

def _label_key(s: frozenset) -> tuple:
    return tuple(sorted(s))


def canonical_form(graph: ArcGraph, use_weights: bool = True, use_io: bool = True) -> tuple:
    """A hashable encoding invariant under relabelling of arcs, windows, boundaries,
    punctures, and cyclic rotation of each boundary."""
    S = graph.surface
    nb = len(S.boundaries)

    def rotation_sig(b, r):
        k = len(S.boundaries[b])
        out = []
        for j in range(k):
            i = (r + j) % k
            w = S.window_at(b, i)
            out.append((_label_key(S.boundaries[b][i]), len(graph.ends_by_window[w.id])))
        return tuple(out)

    best_rots, sigs = [], []
    for b in range(nb):
        cand = [(rotation_sig(b, r), r) for r in range(len(S.boundaries[b]))]
        m = min(c[0] for c in cand)
        sigs.append(m)
        best_rots.append([r for s, r in cand if s == m])
    groups = defaultdict(list)
    for b in range(nb):
        groups[sigs[b]].append(b)
    group_keys = sorted(groups)
    group_perms = [list(itertools.permutations(groups[k])) for k in group_keys]
    best = None
    for perm_combo in itertools.product(*group_perms):
        order = [b for perm in perm_combo for b in perm]
        for rots in itertools.product(*[best_rots[b] for b in order]):
            enc = _encode(graph, order, rots, use_weights, use_io)
            if best is None or enc < best:
                best = enc
    return best


def _encode(graph: ArcGraph, order, rots, use_weights, use_io):
    S = graph.surface
    bpos = {b: i for i, b in enumerate(order)}
    rot = {b: r for b, r in zip(order, rots)}
    wkey = {}
    for w in S.windows:
        k = len(S.boundaries[w.boundary])
        wkey[w.id] = (bpos[w.boundary], (w.index - rot[w.boundary]) % k)
    endkey = {}
    for wid, ends in graph.ends_by_window.items():
        for j, e in enumerate(ends):
            endkey[e] = wkey[wid] + (j,)
    arcs = []
    flipped = {}
    for a in graph.arcs:
        k1, k2 = endkey[End(a.id, 1)], endkey[End(a.id, 2)]
        flipped[a.id] = k2 < k1
        arcs.append((min(k1, k2), max(k1, k2), a.weight if use_weights else 1, a.id))
    arcs.sort(key=lambda t: t[:3])
    arc_index = {t[3]: i for i, t in enumerate(arcs)}
    # pieces: index along the rotated boundary
    piece_key = {}
    for pid, p in graph.pieces.items():
        if p.start is None:
            piece_key[pid] = (bpos[p.boundary], -1)
        else:
            piece_key[pid] = endkey[p.start]

    def item_key(x):
        if isinstance(x, ArcSide):
            s = x.side
            if flipped[x.arc]:
                s = "R" if s == "L" else "L"
            return (0, arc_index[x.arc], s)
        return (1, piece_key[x.piece])

    regions = []
    for r in graph.regions or ():
        cycs = []
        for c in r.cycles:
            ks = [item_key(x) for x in c]
            cycs.append(min(tuple(ks[i:] + ks[:i]) for i in range(len(ks))))
        punct = tuple(sorted(_label_key(S.puncture(p).label) for p in r.punctures))
        regions.append((r.genus, punct, tuple(sorted(cycs))))
    regions.sort()
    bounds = tuple(tuple(_label_key(S.boundaries[b][(rot[b] + j) % len(S.boundaries[b])])
                         for j in range(len(S.boundaries[b]))) for b in order)
    io = None
    if use_io and graph.io is not None:
        io = tuple(sorted(wkey[w] for w in graph.io[0]))
    free_punct = tuple(sorted(_label_key(p.label) for p in S.punctures))
    return (S.genus, bounds, free_punct, tuple(t[:3] for t in arcs), tuple(regions), io)


def isomorphic(g1: ArcGraph, g2: ArcGraph, use_weights: bool = True) -> bool:
    return canonical_form(g1, use_weights) == canonical_form(g2, use_weights)
