"""Local-gluing catalog: graph pairs covering the local cases of the discrete action,
and the comparison of glued correlators with Casimir-composed ones."""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import BraneSystem
from .barcomplex import Correlator, compose_correlators, self_compose
from .correlator import correlator
from .fixtures import annulus, graph_tri
from .gluing import glue, self_glue
from .surface import Arc, ArcGraph, WindowedSurface, build_graph


def pants(weights=(1, 1, 1)) -> ArcGraph:
    """Sphere with three closed boundaries and the three arcs between them."""
    surf = WindowedSurface(0, [[set()], [set()], [set()]])
    arcs = [Arc("a12", "w1", 1, "w2", 0, weights[0]), Arc("a23", "w2", 1, "w3", 0, weights[1]),
            Arc("a31", "w3", 1, "w1", 0, weights[2])]
    return build_graph(surf, arcs)


def pants_two_arcs(weights=(1, 1)) -> ArcGraph:
    """Pair of pants with arcs from the first two boundaries to the third only."""
    surf = WindowedSurface(0, [[set()], [set()], [set()]])
    arcs = [Arc("a13", "w1", 0, "w3", 1, weights[0]), Arc("a23", "w2", 0, "w3", 0, weights[1])]
    return build_graph(surf, arcs)


def polygon(n: int, label: str = "b", arcs=None) -> ArcGraph:
    """Disk with n marked points labelled ``label``; ``arcs`` as (w1, s1, w2, s2, weight)."""
    surf = WindowedSurface(0, [[{label}] * n])
    arcs = [Arc(f"e{i + 1}", *a) for i, a in enumerate(arcs or [])]
    return build_graph(surf, arcs)


def open_annulus(label: str = "b", weight: int = 1, inner_points: int = 1) -> ArcGraph:
    """Annulus whose boundaries carry open windows; the first boundary has one point
    (a lone window), the second ``inner_points`` points."""
    surf = WindowedSurface(0, [[{label}], [{label}] * inner_points])
    return build_graph(surf, [Arc("a", "w1", 0, "w2", 0, weight)])


@dataclass
class GlueStep:
    window: str
    other: str  # window of the right operand, or second window for self-gluing
    self_gluing: bool = False


@dataclass
class CatalogCase:
    name: str
    description: str
    left: ArcGraph
    right: ArcGraph | None
    steps: list
    closed: bool = False
    expect_punctures: int = 0
    tags: tuple = field(default_factory=tuple)


def _tri_b(w1=1, w2=1) -> ArcGraph:
    return graph_tri(("b", "b", "b")).with_weights({"e1": w1, "e2": w2})


def gluing_catalog() -> list[CatalogCase]:
    """One or more graph pairs per local case; window weights stay at most 3."""
    cases = []
    cases.append(CatalogCase(
        "a-closed-pieces", "closed gluing across type-1 sides (weight 2 windows)",
        pants(), annulus(weight=2), [GlueStep("w1", "w2")], closed=True, tags=("a", "b")))
    cases.append(CatalogCase(
        "b-closed-points", "closed gluing of two annuli, type-2 sides only",
        annulus(weight=1), annulus(weight=1), [GlueStep("w2", "w1")], closed=True, tags=("b",)))
    cases.append(CatalogCase(
        "c-half-sides", "open gluing of two triangles on non-lone windows",
        _tri_b(1, 2), _tri_b(2, 1), [GlueStep("w3", "w3")], tags=("c",)))
    cases.append(CatalogCase(
        "c-half-sides-2", "open gluing of triangle window w3 to triangle window w1",
        _tri_b(1, 1), _tri_b(2, 1), [GlueStep("w3", "w1")], tags=("c",)))
    cases.append(CatalogCase(
        "d-full-sides", "open gluing of two lone windows; a puncture appears",
        open_annulus(weight=2), open_annulus(weight=2), [GlueStep("w1", "w1")],
        expect_punctures=1, tags=("d",)))
    cases.append(CatalogCase(
        "e-lone-to-pair", "lone window glued to a window with two distinct endpoints",
        open_annulus(weight=2), _tri_b(2, 1), [GlueStep("w1", "w1")], tags=("e",)))
    cases.append(CatalogCase(
        "e-lone-to-pair-2", "lone window glued to a two-point boundary window",
        open_annulus(weight=1), open_annulus(weight=1, inner_points=2), [GlueStep("w1", "w2")],
        tags=("e",)))
    cases.append(CatalogCase(
        "self-closed", "closed self-gluing of two boundaries of a pair of pants",
        pants_two_arcs(), None, [GlueStep("w1", "w2", True)], closed=True, tags=("self", "a", "b")))
    cases.append(CatalogCase(
        "self-open", "open self-gluing of opposite windows of a square",
        polygon(4, arcs=[("w1", 1, "w3", 1, 1), ("w2", 0, "w3", 0, 1), ("w4", 0, "w1", 0, 1)]), None,
        [GlueStep("w1", "w3", True)], tags=("self", "c")))
    cases.append(CatalogCase(
        "g-consecutive", "self-gluing of consecutive windows at one labelled point",
        polygon(3, arcs=[("w1", 0, "w3", 1, 1), ("w2", 0, "w3", 0, 1)]), None,
        [GlueStep("w1", "w2", True)], expect_punctures=1, tags=("g",)))
    cases.append(CatalogCase(
        "g-double-consecutive", "two consecutive-window self-gluings on one region",
        polygon(5, arcs=[("w1", 0, "w5", 1, 1), ("w2", 0, "w5", 0, 1), ("w3", 0, "w4", 0, 1)]), None,
        [GlueStep("w1", "w2", True), GlueStep("w1", "w2", True)], expect_punctures=2, tags=("g",)))
    return cases


def loop_cases() -> list[CatalogCase]:
    """Gluings in which a leaf closes up into a loop and is deleted.

    Here the glued correlator and the Casimir composite differ: the two sides of the
    deleted loop merge into one region on the geometric side while the algebraic
    composite keeps two separate integrals.
    """
    return [CatalogCase(
        "loop-self-closed", "closed self-gluing of pants where arc a12 closes into a loop",
        pants(), None, [GlueStep("w1", "w2", True)], closed=True, tags=("loop",))]


@dataclass
class CaseOutcome:
    case: CatalogCase
    glued: ArcGraph
    results: list  # GlueResult per step
    direct: Correlator
    composed: Correlator

    @property
    def ok(self) -> bool:
        return self.direct == self.composed


def run_case(case: CatalogCase, system: BraneSystem) -> CaseOutcome:
    """Glue step by step and compose the correlators alongside."""
    Y = correlator(case.left, system)
    g = case.left
    results = []
    right = case.right
    for k, step in enumerate(case.steps):
        if step.self_gluing:
            res = self_glue(g, step.window, step.other)
            Y = self_compose(Y, step.window, step.other)
            Y = Y.renamed({w: res.window_map[(0, w)] for (_, w) in res.window_map})
        else:
            Y2 = correlator(right, system).renamed({w.id: w.id + "'" for w in right.surface.windows})
            res = glue(g, step.window, right, step.other)
            Y = compose_correlators(Y, Y2, step.window, step.other + "'")
            mapping = {}
            for (o, w), new in res.window_map.items():
                mapping[w if o == 0 else w + "'"] = new
            Y = Y.renamed(mapping)
        results.append(res)
        g = res.graph
    direct = correlator(g, system)
    return CaseOutcome(case, g, results, direct, Y)


# --- Sullivan cells ---------------------------------------------------------------------------

def fan(k: int, label: str = "b") -> ArcGraph:
    """Disk with k+1 marked points; the in window w1 sends one arc to every other window."""
    surf = WindowedSurface(0, [[{label}] * (k + 1)])
    arcs = [Arc(f"e{i}", "w1", k - i, f"w{i + 1}", 0, 1) for i in range(1, k + 1)]
    return build_graph(surf, arcs, io=({"w1"}, {f"w{i + 1}" for i in range(1, k + 1)}))


def sullivan_catalog() -> dict:
    """Small Sullivan-type graphs (at most three arcs) used by the dg and composition suites."""
    from .fixtures import annulus, graph_tri

    cells = {}
    cells["triangle"] = graph_tri(("b", "b", "b"), io=True)
    cells["fan2"] = fan(2)
    cells["fan3"] = fan(3)
    cells["annulus"] = annulus(io=True)
    surf = WindowedSurface(0, [[set()], [set()], [set()]])
    cells["pants-split"] = build_graph(surf, [Arc("a", "w1", 1, "w2", 0, 1), Arc("c", "w1", 0, "w3", 0, 1)],
                                       io=({"w1"}, {"w2", "w3"}))
    cells["pants-merge"] = build_graph(surf, [Arc("a", "w1", 0, "w3", 1, 1), Arc("c", "w2", 0, "w3", 0, 1)],
                                       io=({"w1", "w2"}, {"w3"}))
    surf4 = WindowedSurface(0, [[{"b"}] * 4])
    cells["square-zigzag"] = build_graph(
        surf4, [Arc("p", "w1", 1, "w2", 0, 1), Arc("q", "w1", 0, "w4", 1, 1), Arc("r", "w3", 0, "w4", 0, 1)],
        io=({"w1", "w3"}, {"w2", "w4"}))
    oa = WindowedSurface(0, [[{"b"}], [{"b"}]])
    cells["open-annulus"] = build_graph(oa, [Arc("a", "w1", 0, "w2", 0, 1)], io=({"w1"}, {"w2"}))
    return cells


def cell_compositions(max_arcs: int = 4) -> list:
    """Single-pair compositions of catalog cells with few arcs, as (name, c1, c2, result)."""
    import itertools

    from .errors import KindMismatch, PairingMismatch
    from .sullivan import SullivanCell, cell_compose

    cells = sullivan_catalog()
    out = []
    for (n1, g1), (n2, g2) in itertools.product(cells.items(), repeat=2):
        for wo in sorted(g1.io[1]):
            for wi in sorted(g2.io[0]):
                try:
                    res = cell_compose(SullivanCell(g1), SullivanCell(g2), [(wo, wi)])
                except (KindMismatch, PairingMismatch):
                    continue
                out += [(f"{n1}:{wo}>{n2}:{wi}", SullivanCell(g1), SullivanCell(g2), c)
                        for c in res.values() if len(c.graph.arcs) <= max_arcs]
    return out


def open_catalog_graphs(system: BraneSystem) -> list[tuple[str, ArcGraph]]:
    """Every graph of the fuzz pool and the catalogs having at least one open window."""
    from .axioms import graph_pool

    out = list(graph_pool())
    for c in gluing_catalog():
        out.append((c.name + "-left", c.left))
        if c.right is not None:
            out.append((c.name + "-right", c.right))
        out.append((c.name + "-glued", run_case(c, system).glued))
    out += [(n, g.with_io(None)) for n, g in sullivan_catalog().items()]
    return [(n, g) for n, g in out if any(not w.closed for w in g.surface.windows)]


def pinched_composite() -> tuple[ArcGraph, ArcGraph, ArcGraph]:
    """Two quasi-filling factors whose composite has a non-polygonal region."""
    from .moduli import matched_weightings

    cases = {c.name: c for c in gluing_catalog()}
    left, right = cases["d-full-sides"].left, cases["e-lone-to-pair-2"].right
    w1, w2 = matched_weightings(left, "w1", right, "w2")
    return left, right, glue(left, "w1", right, "w2", w1, w2, allow_inactive=True).graph
