"""Correlators of discretely weighted arc graphs.

Each window w carries an element of B_{alpha(w)-1}(beta(w)).  Tuple positions of
an open window are ``0`` (left end, in A_S), ``1..alpha-1`` (type-1 pieces) and
``alpha`` (right end, in A_T); a closed window uses ``0`` for its type-2 piece and
``1..alpha-1`` for the type-1 pieces.  Every region of the discrete representative
contributes

    Y_S(a) = trace( e^(1 - chi(S)) * prod wt(s) * prod r^dag(e_beta(p)) )

and the correlator is the product over regions, stored as a sparse table.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping, Sequence

from .algebra import BraneSystem
from .barcomplex import BarElement, Correlator, Slot, WindowLabel, degeneracy, dualize
from .errors import NonCommutativeAmbiguity, NotSullivanType, SlotError, UnvalidatedGraph
from .surface import ArcGraph, PieceRef, discrete_representative


@dataclass(frozen=True)
class Factor:
    """One decorated side of a region, in cyclic order."""
    kind: str  # "piece" (type 1 or 2) | "corner" (type 3)
    coords: tuple  # ((window, position),) or ((w1, pos1), (w2, pos2))
    label: frozenset = frozenset()


@dataclass
class RegionData:
    chi: int
    punctures: tuple  # puncture labels
    cycles: tuple  # tuple of tuples of Factor


@dataclass
class Decoration:
    """Leaf-level decoration data of a weighted graph."""
    slots: tuple  # Slot per window, in window order
    regions: list  # RegionData
    active: bool
    leaf_graph: ArcGraph
    band_break: dict  # window -> positions of type-1 pieces between different bands


def window_label(graph: ArcGraph, wid: str) -> WindowLabel:
    w = graph.surface.window(wid)
    return WindowLabel.closed() if w.closed else w.label


def decorate(graph: ArcGraph, weighting: Mapping | None = None, inactive_ok=frozenset()) -> Decoration:
    """Decorate the discrete representative.

    Windows in ``inactive_ok`` may be inactive; such a window carries a degree-0
    element whose ends feed the neighbouring corners, while the window itself weighs 1.
    """
    if graph.regions is None or not graph.validated:
        raise UnvalidatedGraph("correlators need a validated graph with regions")
    rep = discrete_representative(graph, weighting)
    D = rep.graph
    S = D.surface
    alpha = {w.id: len(D.ends_by_window[w.id]) for w in S.windows}
    degree = {w: (a - 1 if a else 0) for w, a in alpha.items()}
    slots = tuple(Slot(w.id, window_label(graph, w.id), degree[w.id] if alpha[w.id] or w.id in inactive_ok else -1)
                  for w in S.windows)
    active = all(alpha[w] or w in inactive_ok for w in alpha)
    band_break = {}
    for w in S.windows:
        ends = D.ends_by_window[w.id]
        band_break[w.id] = tuple(k + 1 for k in range(len(ends) - 1)
                                 if rep.leaf_of[ends[k].arc][0] != rep.leaf_of[ends[k + 1].arc][0])
    if not active:
        return Decoration(slots, [], False, D, band_break)
    pos_of_end = {}
    for w in S.windows:
        for k, e in enumerate(D.ends_by_window[w.id]):
            pos_of_end[e] = (w.id, k)

    def point_factor(b, i) -> Factor:
        label = S.point_label(b, i)
        w2 = S.window_at(b, i)
        if not label:
            return Factor("piece", ((w2.id, 0),))
        w1 = S.window_at(b, (i - 1) % len(S.boundaries[b]))
        return Factor("corner", ((w1.id, degree[w1.id] + 1), (w2.id, 0)), label)

    def factors(pid) -> list:
        p = D.pieces[pid]
        if not p.points:
            w, k = pos_of_end[p.start]
            return [Factor("piece", ((w, k + 1),))]
        return [point_factor(p.boundary, i) for i in p.points]

    punct_label = {p.id: p.label for p in S.punctures}
    regions = []
    for r in D.regions:
        cycles = tuple(tuple(fac for x in cyc if isinstance(x, PieceRef) for fac in factors(x.piece))
                       for cyc in r.cycles)
        regions.append(RegionData(r.chi, tuple(punct_label[p] for p in sorted(r.punctures)), cycles))
    return Decoration(slots, regions, True, D, band_break)


def _coord_algebra(system: BraneSystem, dec_slots, coord):
    w, pos = coord
    slot = dec_slots[w]
    if slot.label.is_closed:
        return system.closed
    if pos == 0:
        return system.algebra(slot.label.left)
    if pos == slot.degree + 1:
        return system.algebra(slot.label.right)
    return system.closed


def _region_table(system: BraneSystem, region: RegionData, slot_by_id, fixed: Mapping):
    """{assignment tuple over the region's coordinates: scalar} and the coordinate list."""
    A = system.closed
    if len(region.cycles) > 1 and not A.is_commutative():
        raise NonCommutativeAmbiguity("region with several boundary cycles needs a commutative closed algebra")
    chi = region.chi
    if chi > 1:
        raise ValueError(f"region with chi={chi} would need a negative power of the Euler element")
    pre = A.power(A.euler, 1 - chi)
    for lab in region.punctures:
        pre = A.mul(pre, system.puncture_weight(lab))
    coords = []
    for cyc in region.cycles:
        for fac in cyc:
            coords += [c for c in fac.coords if c not in fixed]
    partial = {(): pre}  # assignment of coords processed so far -> accumulated vector
    done = []
    for cyc in region.cycles:
        for fac in cyc:
            free = [c for c in fac.coords if c not in fixed]
            algs = [_coord_algebra(system, slot_by_id, c) for c in fac.coords]
            if any(a is None for a in algs):
                return coords, {}
            choices = itertools.product(*[range(a.dim) for c, a in zip(fac.coords, algs) if c not in fixed])
            choices = list(choices)
            values = {}
            for ch in choices:
                it = iter(ch)
                idx = [fixed[c] if c in fixed else next(it) for c in fac.coords]
                if fac.kind == "piece":
                    v = A.basis(idx[0])
                else:
                    AS = algs[0]
                    b = next(iter(fac.label))
                    v = system.adjoints[b](AS.mul(AS.basis(idx[0]), AS.basis(idx[1])))
                if any(v):
                    values[ch] = v
            nxt = {}
            for key, acc in partial.items():
                for ch, v in values.items():
                    prod = A.mul(acc, v)
                    if any(prod):
                        nxt[key + ch] = prod
            partial = nxt
            done += free
    table = {}
    for key, vec in partial.items():
        t = A.trace(vec)
        if t:
            table[key] = t
    return done, table


def correlator(graph: ArcGraph, system: BraneSystem, weighting: Mapping | None = None,
               fixed_units: Mapping | None = None, inactive_ok=frozenset()) -> Correlator:
    """The correlator Y_(graph, weighting) as a table over basis tuples.

    ``fixed_units`` maps window ids to tuple positions whose decoration is pinned to
    the closed unit; those positions are removed from the slot (the out-window decoration).
    """
    dec = decorate(graph, weighting, inactive_ok)
    fixed_units = fixed_units or {}
    slots = []
    for s in dec.slots:
        k = len(fixed_units.get(s.name, ()))
        slots.append(Slot(s.name, s.label, s.degree - k))
    if not dec.active:
        return Correlator(system, slots, {})
    slot_by_id = {s.name: s for s in dec.slots}
    u = system.closed.unit_index
    fixed = {(w, p): u for w, ps in fixed_units.items() for p in ps}
    f = system.field
    combined = {(): f.one}
    all_coords = []
    for region in dec.regions:
        coords, table = _region_table(system, region, slot_by_id, fixed)
        if not table:
            return Correlator(system, slots, {})
        nxt = {}
        for k1, v1 in combined.items():
            for k2, v2 in table.items():
                nxt[k1 + k2] = v1 * v2
        combined = nxt
        all_coords += coords
    where = {c: i for i, c in enumerate(all_coords)}
    layout = []
    for s in dec.slots:
        n_pos = s.degree + 1 if s.label.is_closed else s.degree + 2
        layout.append([where[(s.name, p)] for p in range(n_pos) if (s.name, p) not in fixed])
    expected = sum(len(l) for l in layout)
    if expected != len(all_coords):
        raise AssertionError("decoration does not cover every tuple position exactly once")
    out = {}
    for key, v in combined.items():
        out[tuple(tuple(key[i] for i in l) for l in layout)] = v
    return Correlator(system, slots, out)


def evaluate(graph: ArcGraph, system: BraneSystem, weighting: Mapping | None, inputs: Mapping):
    """Y_(graph, weighting)(inputs); inputs map window ids to BarElements."""
    return correlator(graph, system, weighting)(inputs)


# --- weightings ----------------------------------------------------------------------

def enumerate_weightings(graph: ArcGraph, target: Mapping) -> list[dict]:
    """All positive integer weightings whose window weights match ``target``.

    Windows missing from ``target`` are unconstrained, but every arc must meet at
    least one constrained window.
    """
    arcs = sorted(graph.arcs, key=lambda a: str(a.id))
    for a in arcs:
        if a.w1 not in target and a.w2 not in target:
            raise SlotError(f"arc {a.id!r} meets no constrained window; its weight is unbounded", a.id)
    remaining = {w: int(t) for w, t in target.items()}
    if any(t < 0 for t in remaining.values()):
        return []
    # arcs in an order that finishes windows early
    results = []
    last_use = {}
    for i, a in enumerate(arcs):
        for w in (a.w1, a.w2):
            last_use[w] = i
    chosen = {}

    def mult(a, w):
        return (a.w1 == w) + (a.w2 == w)

    def rec(i):
        if i == len(arcs):
            if all(v == 0 for v in remaining.values()):
                results.append(dict(chosen))
            return
        a = arcs[i]
        cap = None
        for w in {a.w1, a.w2}:
            if w in remaining:
                c = remaining[w] // mult(a, w)
                cap = c if cap is None else min(cap, c)
        for k in range(1, cap + 1):
            for w in {a.w1, a.w2}:
                if w in remaining:
                    remaining[w] -= k * mult(a, w)
            ok = all(remaining[w] == 0 for w in {a.w1, a.w2} if w in remaining and last_use[w] == i)
            if ok:
                chosen[a.id] = k
                rec(i + 1)
                del chosen[a.id]
            for w in {a.w1, a.w2}:
                if w in remaining:
                    remaining[w] += k * mult(a, w)

    rec(0)
    # constrained windows without arcs
    for w, t in target.items():
        if not graph.ends_by_window[w] and t != 0:
            return []
    return results


def evaluate_graph_action(graph: ArcGraph, system: BraneSystem, inputs: Mapping):
    """Y(graph) on homogeneous inputs: the sum over all weightings matching the input degrees."""
    f = system.field
    target = {w: x.n + 1 for w, x in inputs.items()}
    acc = f.zero
    for wt in enumerate_weightings(graph, target):
        acc = acc + correlator(graph, system, wt)(inputs)
    return acc


def act(graph: ArcGraph, system: BraneSystem, inputs: Mapping, out: Sequence[str]) -> dict:
    """Dualize the graph action on the ``out`` windows.

    Returns ``{out degrees: {tuple of basis tuples of the barred out spaces: coeff}}``.
    """
    out = list(out)
    ins = [w.id for w in graph.surface.windows if w.id not in out]
    if set(inputs) != set(ins):
        raise SlotError(f"inputs must cover exactly the windows {ins}", sorted(set(inputs) ^ set(ins)))
    target = {w: inputs[w].n + 1 for w in ins}
    result = {}
    for wt in enumerate_weightings(graph, target):
        Y = correlator(graph, system, wt)
        m = dualize(Y, out)
        res = m([inputs[w] for w in (s.name for s in m.in_slots)])
        if res:
            degs = tuple(s.degree for s in m.out_slots)
            bucket = result.setdefault(degs, defaultdict(lambda: system.field.zero))
            for k, v in res.items():
                bucket[k] = bucket[k] + v
    return {d: {k: v for k, v in b.items() if v} for d, b in result.items()
            if any(b.values())}


def act_single(graph: ArcGraph, system: BraneSystem, inputs: Mapping, out: str) -> list[BarElement]:
    """``act`` for one output window, as BarElements of the barred label (one per degree)."""
    lab = window_label(graph, out).bar()
    res = act(graph, system, inputs, [out])
    return [BarElement(system, lab, d[0], {k[0]: v for k, v in tbl.items()}, reduced=False)
            for d, tbl in sorted(res.items())]


# --- in/out (Sullivan) variant ---------------------------------------------------------

def io_correlator(graph: ArcGraph, system: BraneSystem, weighting: Mapping | None = None) -> Correlator:
    """Out-window decoration: type-1 pieces of out windows between different bands weigh 1."""
    from .sullivan import is_sullivan

    if graph.io is None or not is_sullivan(graph):
        raise NotSullivanType("graph has no Sullivan-type in/out partition")
    dec = decorate(graph, weighting, graph.io[1])
    fixed = {w: dec.band_break[w] for w in graph.io[1]}
    return correlator(graph, system, weighting, fixed_units=fixed, inactive_ok=graph.io[1])


def evaluate_io(graph: ArcGraph, system: BraneSystem, weighting: Mapping | None, inputs: Mapping):
    return io_correlator(graph, system, weighting)(inputs)


def evaluate_io_by_degeneracies(graph: ArcGraph, system: BraneSystem, weighting: Mapping | None,
                                inputs: Mapping):
    """Same value as ``evaluate_io`` computed by inserting units with degeneracies
    into the out inputs and evaluating the ordinary correlator."""
    from .sullivan import is_sullivan

    if graph.io is None or not is_sullivan(graph):
        raise NotSullivanType("graph has no Sullivan-type in/out partition")
    dec = decorate(graph, weighting)
    full = {}
    for w, x in inputs.items():
        if w in graph.io[1]:
            for i in sorted(dec.band_break[w]):
                if i > x.n + 1:
                    return system.field.zero
                x = degeneracy(i, x)
        full[w] = x
    return correlator(graph, system, weighting)(full)
