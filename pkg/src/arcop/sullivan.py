"""Sullivan-type arc graphs: in/out partitions, extended gluing and the cell model.

Cells are combinatorial types of Sullivan graphs (weights ignored).  Chains are
formal sums over F2, stored as ``{canonical form: cell}`` dictionaries in which a
key present means coefficient 1.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .algebra import BraneSystem
from .barcomplex import (BarElement, WindowLabel, basis_tuples, codifferential, differential,
                         restriction_for)
from .errors import KindMismatch, NotSullivanType, PairingMismatch
from .gluing import GlueResult, UnionFind, _glue_leaves, collapse, extended_glue as _extended_glue
from .surface import ArcGraph, PieceRef, Region, canonical_form, discrete_representative


def is_sullivan(graph: ArcGraph, io=None) -> bool:
    """Arcs run only from in windows to out windows and every in window is active."""
    ins, outs = io if io is not None else graph.io
    for a in graph.arcs:
        if (a.w1 in ins) == (a.w2 in ins):
            return False
    return all(graph.ends_by_window[w] for w in ins)


def extended_glue(left: ArcGraph, w_out: str, right: ArcGraph, w_in: str,
                  weighting_left: Mapping | None = None, weighting_right: Mapping | None = None) -> GlueResult:
    """Glue an out window to an in window; an inactive out window deletes the incoming leaves."""
    return _extended_glue(left, w_out, right, w_in, weighting_left, weighting_right)


# --- cells -------------------------------------------------------------------------------

@dataclass
class SullivanCell:
    graph: ArcGraph

    def __post_init__(self):
        if self.graph.io is None or not is_sullivan(self.graph):
            raise NotSullivanType("cell graph is not of Sullivan type")

    @property
    def io(self):
        return self.graph.io

    @property
    def dimension(self) -> int:
        return len(self.graph.arcs) - len(self.graph.io[0])

    @property
    def key(self):
        return canonical_form(self.graph, use_weights=False)


def chain_add(*chains: Mapping) -> dict:
    """Sum of F2 chains."""
    out = {}
    for ch in chains:
        for k, c in ch.items():
            if k in out:
                del out[k]
            else:
                out[k] = c
    return out


def delete_arc(graph: ArcGraph, arc_id) -> ArcGraph:
    """The arc graph with one arc removed; the regions on its two sides merge."""
    arcs = [a for a in graph.arcs if a.id != arc_id]
    G = ArcGraph(graph.surface, arcs, None, graph.io)
    ridx = graph.region_index()
    uf = UnionFind()
    for i in range(len(graph.regions)):
        uf.add(i)
    rl, rr = ridx[_side(arc_id, "L")], ridx[_side(arc_id, "R")]
    uf.union(rl, rr)
    merged = uf.find(rl)

    def old_region(pid):
        p = G.pieces[pid]
        if p.points:
            return ridx[PieceRef(graph.piece_of_point[(p.boundary, p.points[0])])]
        return ridx[PieceRef(graph.piece_after[p.start])]

    comp_cycles = defaultdict(list)
    for cyc in G.trace_cycles():
        pid = next(x.piece for x in cyc if isinstance(x, PieceRef))
        comp_cycles[uf.find(old_region(pid))].append(cyc)
    regions = []
    merged_chi = sum(graph.regions[i].chi for i in {rl, rr}) - 1
    merged_punct = frozenset().union(*[graph.regions[i].punctures for i in {rl, rr}])
    for i, r in enumerate(graph.regions):
        root = uf.find(i)
        if root != i:
            continue
        cycles = tuple(comp_cycles[root])
        if root == merged:
            twice_h = 2 - merged_chi - len(cycles)
            regions.append(Region(twice_h // 2, merged_punct, cycles))
        else:
            regions.append(Region(r.genus, r.punctures, cycles))
    return ArcGraph(graph.surface, arcs, regions, graph.io)


def _side(arc, side):
    from .surface import ArcSide
    return ArcSide(arc, side)


def cell_boundary(cell: SullivanCell | ArcGraph) -> dict:
    """F2 boundary: the sum of arc deletions that stay of Sullivan type."""
    g = cell.graph if isinstance(cell, SullivanCell) else cell
    out = {}
    for a in g.arcs:
        h = delete_arc(g, a.id)
        if not is_sullivan(h):
            continue
        c = SullivanCell(h)
        out = chain_add(out, {c.key: c})
    return out


def chain_boundary(chain: Mapping) -> dict:
    out = {}
    for c in chain.values():
        out = chain_add(out, cell_boundary(c))
    return out


# --- composition ------------------------------------------------------------------------

def _compositions(k: int, l: int):
    """Generic interleavings of k left bands and l right bands on one window: all
    shuffles of the k-1 left cuts with the l-1 right cuts, realized by integers."""
    if k == 0 or l == 0:
        yield None
        return
    n = k + l - 2
    for left_pos in itertools.combinations(range(n), k - 1):
        left_cuts = [i + 1 for i in left_pos]
        right_cuts = [i + 1 for i in range(n) if i not in left_pos]
        total = n + 1
        lw = [b - a for a, b in zip([0] + left_cuts, left_cuts + [total])]
        rw = [b - a for a, b in zip([0] + right_cuts, right_cuts + [total])]
        yield lw, rw


def _glue_many(g1: ArcGraph, g2: ArcGraph, pairs, wt1, wt2) -> ArcGraph:
    D1 = discrete_representative(g1, wt1).graph
    D2 = discrete_representative(g2, wt2).graph
    (w_out, w_in), rest = pairs[0], pairs[1:]
    res = _glue_leaves([D1, D2], (0, w_out), (1, w_in), extended=True, allow_inactive=False)
    D = res.leaf_graph
    wmap = res.window_map
    for w_out, w_in in rest:
        r = _glue_leaves([D], (0, wmap[(0, w_out)]), (0, wmap[(1, w_in)]), extended=True,
                         allow_inactive=False)
        wmap = {k: r.window_map[(0, v)] for k, v in wmap.items() if (0, v) in r.window_map}
        D = r.leaf_graph
    return collapse(D)[0]


def cell_compose(c1: SullivanCell, c2: SullivanCell, pairs: Sequence[tuple]) -> dict:
    """Compose two cells along ``pairs`` of (out window of c1, in window of c2).

    Every generic relative position of the band cuts on each glued window is realized
    by integer weights; the distinct resulting types of maximal arc count are kept.
    """
    g1, g2 = c1.graph, c2.graph
    pairs = list(pairs)
    for wo, wi in pairs:
        if wo not in g1.io[1] or wi not in g2.io[0]:
            raise PairingMismatch(f"pairing {wo}:{wi} must join an out window of the first cell "
                                  f"to an in window of the second", (wo, wi))
        W1, W2 = g1.surface.window(wo), g2.surface.window(wi)
        if W1.closed != W2.closed:
            raise KindMismatch(f"cannot pair {'closed' if W1.closed else 'open'} window {wo} with "
                               f"{'closed' if W2.closed else 'open'} window {wi}", (wo, wi))
        if not W1.closed and (W1.label.left, W1.label.right) != (W2.label.right, W2.label.left):
            raise PairingMismatch(f"brane labels of {wo} and {wi} do not match", (wo, wi))
    if len({wi for _, wi in pairs}) != len(pairs) or len({wo for wo, _ in pairs}) != len(pairs):
        raise PairingMismatch("a window is paired twice")
    per_pair = []
    for wo, wi in pairs:
        ends1 = [e.arc for e in g1.ends_by_window[wo]]
        ends2 = [e.arc for e in g2.ends_by_window[wi]]
        per_pair.append((ends1, ends2, list(_compositions(len(ends1), len(ends2)))))
    outcomes = {}
    for choice in itertools.product(*[p[2] for p in per_pair]):
        wt1 = {a.id: 1 for a in g1.arcs}
        wt2 = {a.id: 1 for a in g2.arcs}
        for (ends1, ends2, _), ch in zip(per_pair, choice):
            if ch is None:
                continue
            lw, rw = ch
            for a, k in zip(ends1, lw):
                wt1[a] = k
            # the in window is read against the out window's orientation
            for a, k in zip(reversed(ends2), rw):
                wt2[a] = k
        g = _glue_many(g1, g2, pairs, wt1, wt2)
        if not is_sullivan(g):
            continue
        g = g.with_weights({a.id: 1 for a in g.arcs})
        c = SullivanCell(g)
        outcomes.setdefault(c.key, c)
    if not outcomes:
        return {}
    best = max(len(c.graph.arcs) for c in outcomes.values())
    return {k: c for k, c in sorted(outcomes.items(), key=lambda kv: repr(kv[0]))
            if len(c.graph.arcs) == best}


def cell_compose_by_enumeration(c1: SullivanCell, c2: SullivanCell, pairs: Sequence[tuple],
                                max_weight: int = 3) -> dict:
    """Independent oracle for ``cell_compose``: all integer weightings up to ``max_weight``
    with matching window weights, keeping the types of maximal arc count."""
    g1, g2 = c1.graph, c2.graph
    outcomes = {}
    ids1, ids2 = [a.id for a in g1.arcs], [a.id for a in g2.arcs]
    for w1 in itertools.product(range(1, max_weight + 1), repeat=len(ids1)):
        wt1 = dict(zip(ids1, w1))
        for w2 in itertools.product(range(1, max_weight + 1), repeat=len(ids2)):
            wt2 = dict(zip(ids2, w2))
            ok = all(g1.window_weight(wo, wt1) == g2.window_weight(wi, wt2) or
                     g1.window_weight(wo, wt1) == 0 for wo, wi in pairs)
            if not ok:
                continue
            g = _glue_many(g1, g2, pairs, wt1, wt2)
            if not is_sullivan(g):
                continue
            g = g.with_weights({a.id: 1 for a in g.arcs})
            c = SullivanCell(g)
            outcomes.setdefault(c.key, c)
    if not outcomes:
        return {}
    best = max(len(c.graph.arcs) for c in outcomes.values())
    return {k: c for k, c in outcomes.items() if len(c.graph.arcs) == best}


# --- the string topology operations in closed form -----------------------------------------

def st_mul(system: BraneSystem, a: BarElement, b: BarElement, sullivan: bool = True) -> BarElement:
    """Open-sector product of a in B_n(T,S) and b in B_m(S,U), landing in B(T,U).

    Sullivan form: (int_S a_S b_S) * a_T (x) a_1..a_n (x) b_1..b_m (x) b_U.
    Otherwise r^dag_S(a_S b_S) is inserted between the two words (degree n+m+1).
    """
    T, S1 = a.label.left, a.label.right
    S2, U = b.label.left, b.label.right
    f = system.field
    out_label = WindowLabel.open(T, U)
    n_out = a.n + b.n + (0 if sullivan else 1)
    if S1 != S2 or len(S1) != 1:
        return BarElement(system, out_label, n_out, {})
    AS = system.algebra(S1)
    s = next(iter(S1))
    terms = defaultdict(lambda: f.zero)
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            prod = AS.mul(AS.basis(ka[-1]), AS.basis(kb[0]))
            if sullivan:
                c = AS.trace(prod)
                if c:
                    key = ka[:-1] + kb[1:]
                    terms[key] = terms[key] + ca * cb * c
            else:
                v = system.adjoints[s](prod)
                for k, c in enumerate(v):
                    if c:
                        key = ka[:-1] + (k,) + kb[1:]
                        terms[key] = terms[key] + ca * cb * c
    return BarElement(system, out_label, n_out, terms, reduced=False)


def st_comul(system: BraneSystem, c: BarElement, S) -> dict:
    """Open-sector coproduct of c in B_N(U,T) through the brane S.

    Returns ``{(i, j): {(left tuple, right tuple): coeff}}`` with the left factor in
    B_i(U,S) and the right factor in B_j(S,T), i + j = N - 1: the word is split at a
    middle letter c_k, which is restricted to A_S and replaced by its coproduct.
    """
    S = frozenset([S]) if isinstance(S, str) else frozenset(S)
    AS = system.algebra(S)
    r = restriction_for(system, S)
    A = system.closed
    f = system.field
    out = defaultdict(lambda: defaultdict(lambda: f.zero))
    N = c.n
    for key, coeff in c.terms.items():
        for k in range(1, N + 1):
            rk = r(A.basis(key[k]))
            # Delta_S(x) = sum g^{pq} (x Delta_p) (x) Delta_q
            for p, q, g in AS.casimir:
                v = AS.mul(rk, AS.basis(p))
                for i, vi in enumerate(v):
                    if vi:
                        left = key[:k] + (i,)
                        right = (q,) + key[k + 1:]
                        d = out[(k - 1, N - k)]
                        d[(left, right)] = d[(left, right)] + coeff * g * vi
    return {deg: {k: v for k, v in tbl.items() if v} for deg, tbl in out.items()
            if any(tbl.values())}


# --- dg compatibility ---------------------------------------------------------------------

def total_differential_side(Y, system: BraneSystem, inputs: Mapping, outs: Iterable[str]):
    """sum_in Y(.. d a_w ..) + sum_out Y(.. delta a_w ..) over F2, for Y an i/o correlator
    of one degree lower on the differentiated slot.  ``Y`` is a callable on input maps."""
    f = system.field
    acc = f.zero
    outs = set(outs)
    for w, x in inputs.items():
        y = codifferential(x) if w in outs else differential(x)
        if y.is_zero():
            continue
        args = dict(inputs)
        args[w] = y
        acc = acc + Y(args)
    return acc


def cell_value(graph: ArcGraph, system: BraneSystem, inputs: Mapping):
    """The in-out correlator of a cell: the sum over all discrete weightings whose in windows carry
    one more leaf than the degree of their input."""
    from .correlator import enumerate_weightings, evaluate_io

    target = {w: inputs[w].n + 1 for w in graph.io[0]}
    acc = system.field.zero
    for wt in enumerate_weightings(graph, target):
        acc = acc + evaluate_io(graph, system, wt, inputs)
    return acc


def is_normalized(label: WindowLabel, key: tuple, unit) -> bool:
    """No unit among the middle letters (open) or after the first letter (closed)."""
    body = key[1:] if label.is_closed else key[1:-1]
    return unit not in body


@dataclass
class DgDefect:
    inputs: dict
    boundary_side: object
    differential_side: object

    def describe(self) -> str:
        ins = ", ".join(f"{w}={x.format()}" for w, x in sorted(self.inputs.items()))
        return f"{ins}: boundary {self.boundary_side}, differential {self.differential_side}"


def dg_sides(graph: ArcGraph, system: BraneSystem, inputs: Mapping, boundary: Mapping | None = None):
    """(Y of the cell boundary, differential side) on one input map."""
    bd = cell_boundary(SullivanCell(graph)) if boundary is None else boundary
    lhs = system.field.zero
    for cell in bd.values():
        lhs = lhs + cell_value(cell.graph, system, inputs)
    rhs = total_differential_side(lambda a: cell_value(graph, system, a), system, inputs, graph.io[1])
    return lhs, rhs


def dg_defects(graph: ArcGraph, system: BraneSystem, max_total_degree: int = 3, max_degree: int = 2,
               normalized: bool | None = True, limit: int | None = None) -> tuple[list, int]:
    """Compare the in-out correlator of the cell boundary with the differential side on basis inputs.

    ``normalized`` keeps only normalized inputs (True), only the others (False) or
    all of them (None).  Returns the defects and the number of inputs tried.
    """
    from .correlator import window_label

    bd = cell_boundary(SullivanCell(graph))
    wins = [w.id for w in graph.surface.windows]
    labels = {w: window_label(graph, w) for w in wins}
    u = system.closed.unit_index
    defects, tried = [], 0
    for degs in itertools.product(range(max_degree + 1), repeat=len(wins)):
        if sum(degs) > max_total_degree:
            continue
        spaces = [basis_tuples(system, labels[w], d) for w, d in zip(wins, degs)]
        for keys in itertools.product(*spaces):
            if normalized is not None:
                norm = all(is_normalized(labels[w], k, u) for w, k in zip(wins, keys))
                if norm != normalized:
                    continue
            inp = {w: BarElement(system, labels[w], d, {k: system.field.one}, reduced=False)
                   for w, d, k in zip(wins, degs, keys)}
            tried += 1
            lhs, rhs = dg_sides(graph, system, inp, bd)
            if lhs != rhs:
                defects.append(DgDefect(inp, lhs, rhs))
                if limit is not None and len(defects) >= limit:
                    return defects, tried
    return defects, tried
