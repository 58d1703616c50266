import itertools

import pytest

from arcop.barcomplex import BarElement, WindowLabel, basis_tuples, element
from arcop.catalog import sullivan_catalog
from arcop.correlator import (act, act_single, correlator, decorate, enumerate_weightings, evaluate,
                              evaluate_graph_action, evaluate_io, evaluate_io_by_degeneracies,
                              window_label)
from arcop.errors import NotSullivanType, SlotError
from arcop.field import Q
from arcop.fixtures import SYSTEMS, annulus, graph_tri
from arcop.surface import Arc, WindowedSurface, build_graph


@pytest.fixture
def tsu():
    return SYSTEMS["pt-tsu"](Q)


def tri_inputs(s, y):
    return {"w1": element(s, WindowLabel.open("T", "S"), "1", "1"),
            "w2": element(s, WindowLabel.open("S", "U"), "1", "1"),
            "w3": element(s, WindowLabel.open("U", "T"), "1", y, "1")}


def test_graph_tri_by_hand(tsu):
    g = graph_tri()
    assert evaluate(g, tsu, None, tri_inputs(tsu, "1")) == 1
    assert evaluate(g, tsu, None, tri_inputs(tsu, "x")) == 0


def test_degree_mismatch_is_zero(tsu):
    inp = tri_inputs(tsu, "1")
    inp["w1"] = element(tsu, WindowLabel.open("T", "S"), "1", "1", "1")
    assert evaluate(graph_tri(), tsu, None, inp) == 0


def test_annulus_single_rectangle(pt):
    lab = WindowLabel.closed()
    x = BarElement.from_words(pt, lab, {("x",): 1})
    one = BarElement.from_words(pt, lab, {("1",): 1})
    assert evaluate(annulus(), pt, None, {"w1": x, "w2": one}) == 1
    assert evaluate(annulus(), pt, None, {"w1": one, "w2": one}) == 0


def punctured_annulus():
    surf = WindowedSurface(0, [[set()], [set()]], [("p", {"b"})])
    return build_graph(surf, [Arc("a", "w1", 0, "w2", 0)], punctures=[["p"]])


def test_puncture_factor(pt):
    g = punctured_annulus()
    dec = decorate(g)
    assert [r.punctures for r in dec.regions] == [(frozenset({"b"}),)]
    one = BarElement.from_words(pt, WindowLabel.closed(), {("1",): 1})
    # the rectangle now carries r^dag(e_b) = r^dag(1) = x
    assert evaluate(g, pt, None, {"w1": one, "w2": one}) == 1


def test_enumerate_weightings_examples():
    g = graph_tri()
    assert enumerate_weightings(g, {"w1": 2, "w2": 3, "w3": 5}) == [{"e1": 2, "e2": 3}]
    assert enumerate_weightings(g, {"w1": 2, "w2": 3, "w3": 4}) == []
    surf = WindowedSurface(0, [[set()], [set()], [set()]])
    loop = build_graph(surf, [Arc("l", "w1", 0, "w1", 1)], [["0.0", "1.0"], ["0.1", "2.0"]])
    assert enumerate_weightings(loop, {"w1": 2}) == [{"l": 1}]
    assert enumerate_weightings(loop, {"w1": 3}) == []
    with pytest.raises(SlotError):
        enumerate_weightings(g, {"w1": 1})


def brute_force_action(g, s, inputs, cap=6):
    ids = [a.id for a in g.arcs]
    acc = s.field.zero
    for ws in itertools.product(range(1, cap + 1), repeat=len(ids)):
        wt = dict(zip(ids, ws))
        if all(g.window_weight(w, wt) == x.n + 1 for w, x in inputs.items()):
            acc = acc + evaluate(g, s, wt, inputs)
    return acc


def test_graph_action_matches_brute_force(tsu):
    g = graph_tri()
    for n3 in range(1, 4):
        lab = WindowLabel.open("U", "T")
        for key in basis_tuples(tsu, lab, n3):
            inp = tri_inputs(tsu, "1")
            inp["w1"] = BarElement(tsu, WindowLabel.open("T", "S"), 1, {(0, 0, 0): 1})
            inp["w3"] = BarElement(tsu, lab, n3, {key: 1})
            assert evaluate_graph_action(g, tsu, inp) == brute_force_action(g, tsu, inp)


def two_loop_graph():
    """Loops l on w1 and c on w2 joined by a, with d and e running into the loops:
    w1 = 2l + a + d, w2 = a + 2c + e, w3 = d, w4 = e."""
    surf = WindowedSurface(0, [[set()]] * 4)
    arcs = [Arc("l", "w1", 0, "w1", 2), Arc("a", "w1", 1, "w2", 0), Arc("d", "w1", 3, "w3", 0),
            Arc("c", "w2", 1, "w2", 3), Arc("e", "w2", 2, "w4", 0)]
    return build_graph(surf, arcs)


def test_graph_action_with_two_weightings(pt):
    g = two_loop_graph()
    lab = WindowLabel.closed()
    weightings = enumerate_weightings(g, {"w1": 6, "w2": 6, "w3": 1, "w4": 1})
    assert len(weightings) == 2
    names = [s.name for s in correlator(g, pt, weightings[0]).slots]
    # inputs drawn from the support of each weighting's table, plus a few others
    keys = set()
    for wt in weightings:
        keys.update(list(correlator(g, pt, wt).table)[:6])
    keys.update(itertools.islice(itertools.product(basis_tuples(pt, lab, 5)[::9], basis_tuples(pt, lab, 5)[::11],
                                                   [(0,)], [(1,)]), 6))
    nonzero = 0
    for key in sorted(keys):
        inp = {w: BarElement(pt, lab, len(k) - 1, {k: 1}, reduced=False) for w, k in zip(names, key)}
        val = evaluate_graph_action(g, pt, inp)
        assert val == brute_force_action(g, pt, inp)
        nonzero += bool(val)
    assert nonzero
    one = BarElement(pt, lab, 0, {(0,): 1})
    assert evaluate_graph_action(g, pt, {"w1": one, "w2": one, "w3": one, "w4": one}) == 0


def test_act_inserts_pushforward(tsu):
    g = graph_tri()
    inp = tri_inputs(tsu, "1")
    del inp["w3"]
    (res,) = act_single(g, tsu, inp, "w3")
    assert res.format() == "1⊗x⊗1"
    assert res.label == WindowLabel.open("T", "U")


def test_annulus_acts_as_identity(pt):
    lab = WindowLabel.closed()
    for word in ("1", "x"):
        x = BarElement.from_words(pt, lab, {(word,): 1})
        (res,) = act_single(annulus(), pt, {"w1": x}, "w2")
        assert res == x


def test_act_degrees(tsu):
    TS, SU, UT = WindowLabel.open("T", "S"), WindowLabel.open("S", "U"), WindowLabel.open("U", "T")
    res = act(graph_tri(), tsu, {"w1": element(tsu, TS, "1", "1", "1"), "w2": element(tsu, SU, "1", "1")},
              ["w3"])
    # e1 = 2, e2 = 1: the pushforward x lands between the two words
    assert res == {(2,): {((0, 0, 1, 0),): 1}}
    # w2 in degree 2 needs e2 = 3, but w3 in degree 1 allows e1 + e2 = 2 only
    infeasible = {"w2": element(tsu, SU, "1", "1", "1", "1"), "w3": element(tsu, UT, "1", "1", "1")}
    assert act(graph_tri(), tsu, infeasible, ["w1"]) == {}
    with pytest.raises(SlotError):
        act(graph_tri(), tsu, {"w1": element(tsu, TS, "1", "1")}, ["w3"])


def test_sullivan_triangle_value(tsu):
    g = graph_tri(io=True)
    inp = {"w1": element(tsu, WindowLabel.open("T", "S"), "1", "1"),
           "w2": element(tsu, WindowLabel.open("S", "U"), "1", "1"),
           "w3": element(tsu, WindowLabel.open("U", "T"), "1", "1")}
    assert evaluate_io(g, tsu, None, inp) == 1


def test_io_requires_sullivan_type(pt):
    g = annulus()
    with pytest.raises(NotSullivanType):
        evaluate_io(g, pt, None, {})
    bad = annulus().with_io(({"w1", "w2"}, set()))
    with pytest.raises(NotSullivanType):
        evaluate_io(bad, pt, None, {})


@pytest.mark.parametrize("name", sorted(sullivan_catalog()))
def test_decoration_equals_degeneracy_insertion(name, pt):
    g = sullivan_catalog()[name]
    wins = [w.id for w in g.surface.windows]
    labels = {w: window_label(g, w) for w in wins}
    ins = g.io[0]
    for degs in itertools.product(range(3), repeat=len(wins)):
        if sum(degs) > 3:
            continue
        wt_target = {w: d + 1 for w, d in zip(wins, degs) if w in ins}
        weightings = enumerate_weightings(g, wt_target)
        spaces = [basis_tuples(pt, labels[w], d) for w, d in zip(wins, degs)]
        for keys in itertools.product(*spaces):
            inp = {w: BarElement(pt, labels[w], d, {k: 1}, reduced=False)
                   for w, d, k in zip(wins, degs, keys)}
            for wt in weightings:
                assert evaluate_io(g, pt, wt, inp) == evaluate_io_by_degeneracies(g, pt, wt, inp)


def test_correlator_table_is_sparse_and_exact(cp2cp1):
    Y = correlator(graph_tri(("b", "b", "b")), cp2cp1)
    assert all(v != 0 for v in Y.table.values())
    assert {s.degree for s in Y.slots} == {0, 1}
