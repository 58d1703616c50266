import pytest

from arcop.axioms import expected_grading, run_fuzz
from arcop.catalog import pants, pants_two_arcs, polygon, gluing_catalog
from arcop.errors import InactiveWindow, KindMismatch, SlotError, WeightMismatch
from arcop.fixtures import annulus, graph_tri
from arcop.gluing import (GradingTag, collapse, extended_glue, extended_self_glue, glue, grading,
                          self_glue)
from arcop.surface import Arc, WindowedSurface, build_graph, discrete_representative, isomorphic


def tri_b(w1=1, w2=1):
    return graph_tri(("b", "b", "b")).with_weights({"e1": w1, "e2": w2})


def test_annulus_composite_is_annulus():
    for k in (1, 2, 3):
        g = glue(annulus(weight=k), "w2", annulus(weight=k), "w1").graph
        assert isomorphic(g, annulus(weight=k))
        assert grading(g) == GradingTag(0, 1)
        assert g.surface.chi == 0


def test_two_triangles_make_a_square():
    r = glue(tri_b(), "w3", tri_b(2, 1), "w1")
    g = r.graph
    assert len(g.surface.boundaries[0]) == 4
    assert sorted((a.w1, a.w2, a.weight) for a in g.arcs) == [
        ("w1", "w4", 1), ("w2", "w4", 1), ("w3", "w4", 1)]
    assert r.window_map[(1, "w3")] == "w4"
    assert grading(g).chi_minus_1 == 0


def test_open_gluing_unions_point_labels():
    a = graph_tri(("T", "S", "U"))
    b = graph_tri(("U", "V", "T")).with_weights({"e1": 2, "e2": 1})
    g = glue(a, "w3", b, "w1").graph
    # w3 runs U -> T and w1 runs U -> V; reversing one pairs T with U and U with V
    labels = sorted("".join(sorted(p)) for p in g.surface.boundaries[0])
    assert labels == ["S", "T", "TU", "UV"]


def test_all_leaves_close_up():
    surf = WindowedSurface(0, [[set()], [set()], [set()]])
    A = build_graph(surf, [Arc("l", "w1", 0, "w1", 1, 1)], [["0.0", "1.0"], ["0.1", "2.0"]])
    g = glue(A, "w1", A, "w1").graph
    assert g.arcs == ()
    assert len(g.regions) == 1 and g.regions[0].chi == -2 == g.surface.chi


def test_consecutive_self_gluing_makes_puncture():
    case = next(c for c in gluing_catalog() if c.name == "g-consecutive")
    g = self_glue(case.left, "w1", "w2").graph
    assert [p.label for p in g.surface.punctures] == [frozenset({"b"})]
    assert grading(g).chi_minus_1 == grading(case.left).chi_minus_1 + 1


def test_closed_self_gluing_adds_genus():
    p = pants_two_arcs()
    g = self_glue(p, "w1", "w2").graph
    assert g.surface.genus == 1
    assert grading(g) == expected_grading(grading(p), None, True)


def test_errors():
    with pytest.raises(WeightMismatch):
        glue(annulus(weight=1), "w1", annulus(weight=2), "w1")
    with pytest.raises(WeightMismatch):
        self_glue(pants_two_arcs((2, 1)), "w1", "w2")
    with pytest.raises(KindMismatch):
        glue(annulus(), "w1", tri_b(), "w1")
    with pytest.raises(SlotError):
        glue(annulus(), "w9", annulus(), "w1")
    surf = WindowedSurface(0, [[set()], [set()], [set()]])
    lonely = build_graph(surf, [Arc("a", "w1", 0, "w2", 0)], [["0.0", "1.0", "2.0"]])
    with pytest.raises(InactiveWindow):
        glue(lonely, "w3", annulus(), "w1")


def test_inactive_gluing_when_allowed():
    surf = WindowedSurface(0, [[set()], [set()], [set()]])
    lonely = build_graph(surf, [Arc("a", "w1", 0, "w2", 0)], [["0.0", "1.0", "2.0"]])
    empty = build_graph(WindowedSurface(0, [[set()], [set()]]), [], [["0.0", "1.0"]])
    g = glue(lonely, "w3", empty, "w1", allow_inactive=True).graph
    assert len(g.arcs) == 1 and len(g.surface.boundaries) == 3


def test_extended_gluing_drops_leaves_at_inactive_out():
    surf = WindowedSurface(0, [[{"b"}] * 4])
    left = build_graph(surf, [Arc("a", "w1", 0, "w2", 0)], io=({"w1"}, {"w2", "w3", "w4"}))
    right = graph_tri(("b", "b", "b"), io=True)
    r = extended_glue(left, "w3", right, "w1")
    g = r.graph
    # the leaf of e1 entering through the inactive window is deleted
    assert len(g.arcs) == 2
    assert sum(r.chi for r in g.regions) == g.surface.chi + len(g.arcs)


def test_extended_self_gluing_runs():
    g = polygon(4, arcs=[("w1", 1, "w3", 1, 1), ("w2", 0, "w3", 0, 1), ("w4", 0, "w1", 0, 1)])
    res = extended_self_glue(g, "w1", "w3")
    assert sum(r.chi for r in res.graph.regions) == res.graph.surface.chi + len(res.graph.arcs)


def test_collapse_inverts_discrete_representative():
    for g in (tri_b(2, 3), annulus(weight=3), pants((1, 2, 1))):
        leaf = discrete_representative(g).graph
        back, _ = collapse(leaf)
        assert isomorphic(back, g)


def test_small_fuzz_run():
    rep = run_fuzz(30, seed=11)
    assert rep.ok, rep.summary()
