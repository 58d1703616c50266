"""Acceptance criteria 1 to 10.  Each test prints one PASS or FAIL line; run with
``pytest tests/test_acceptance.py -s`` (or plain ``-v``, the lines bypass capture)."""

import itertools
import time
from contextlib import contextmanager

import pytest

from arcop import io, surface
from arcop.algebra import check_conditions, projection_formula_check
from arcop.axioms import graph_pool, run_fuzz
from arcop.barcomplex import (BarElement, WindowLabel, basis_tuples, casimir, differential, dualize,
                              pairing)
from arcop.catalog import (cell_compositions, pinched_composite, open_catalog_graphs, run_case,
                           sullivan_catalog, gluing_catalog)
from arcop.correlator import (act, correlator, evaluate, evaluate_graph_action, io_correlator,
                              window_label)
from arcop.field import F2, Q
from arcop.fixtures import (SYSTEMS, algebra_cp2, annulus, algebra_s2, fixture_documents, graph_tri,
                            system_cp2cp1, system_failing_i1, system_pt, system_split)
from arcop.gluing import extended_glue, extended_self_glue, glue, self_glue
from arcop.moduli import classify, duality_decompose, duality_reglue, quasi_filling
from arcop.sullivan import SullivanCell, cell_boundary, chain_boundary, dg_defects, st_comul, st_mul
from arcop.surface import canonical_form

MAKERS = {"FIX-PT": system_pt, "FIX-CP2CP1": system_cp2cp1}


@contextmanager
def criterion(capsys, n, text, verdict="PASS"):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        with capsys.disabled():
            print(f"\n[criterion {n}] FAIL  {text}: {type(exc).__name__}: {exc}")
        raise
    with capsys.disabled():
        print(f"\n[criterion {n}] {verdict}  {text} ({time.perf_counter() - t0:.1f}s)")


def test_criterion_1_frobenius_fixtures(capsys):
    with criterion(capsys, 1, "Euler elements 2x and 3h^2; C, I1, I2, E on FIX-PT and FIX-CP2CP1; "
                              "I1 false with E true on Q[y]/y^2; projection formula on all systems"):
        t0 = time.perf_counter()
        assert algebra_s2().euler == (0, 2)
        assert algebra_cp2().euler == (0, 0, 3)
        for make in MAKERS.values():
            rep = check_conditions(make(Q))
            assert (rep.commutative_C, rep.self_intersection_I1, rep.self_intersection_I2, rep.euler_E) == \
                (True, True, True, True)
        rep = check_conditions(system_failing_i1())
        assert rep.self_intersection_I1 is False and rep.euler_E is True
        assert all(projection_formula_check(mk(Q)) for mk in SYSTEMS.values())
        assert time.perf_counter() - t0 < 1


def test_criterion_2_gluing_axioms(capsys):
    with criterion(capsys, 2, "associativity, relabelling equivariance and grading on 200 seeded triples"):
        t0 = time.perf_counter()
        rep = run_fuzz(200, seed=0)
        assert rep.triples >= 200 and rep.self_cases > 0
        assert rep.ok, rep.summary()
        assert time.perf_counter() - t0 < 30


def test_criterion_3_euler_identity(capsys):
    """Every validation in the whole run is logged and audited by conftest; this test
    also drives each constructor kind itself and checks its own log slice."""
    from conftest import EULER_AUDIT

    with criterion(capsys, 3, "sum chi(S_i) = chi(F) + #leaves after constructors and every gluing kind"):
        start = len(surface.EULER_LOG)
        for _, g in graph_pool():
            surface.discrete_representative(g)
        t = graph_tri(("b", "b", "b"), io=True)
        glue(annulus(), "w2", annulus(), "w1")
        glue(t, "w3", t, "w1", {"e1": 1, "e2": 1}, {"e1": 2, "e2": 2})
        pool = dict(graph_pool())
        self_glue(pool["pants"], "w1", "w2")
        extended_glue(sullivan_catalog()["fan2"], "w3", t, "w1")
        extended_self_glue(sullivan_catalog()["square-zigzag"], "w2", "w3")
        run_fuzz(10, seed=1)
        new = surface.EULER_LOG[start:]
        assert len(new) > 100 and all(lhs == rhs for lhs, rhs in new)
        assert EULER_AUDIT["bad"] == []


def test_criterion_4_gluing_catalog(capsys):
    cases = gluing_catalog()
    with criterion(capsys, 4, f"glued correlator equals Casimir composite on {len(cases)} catalog cases, "
                              "FIX-PT, FIX-CP2CP1 and the split system, all basis inputs"):
        t0 = time.perf_counter()
        tags = set().union(*(c.tags for c in cases))
        assert len(cases) >= 7 and {"a", "b", "c", "d", "e", "g", "self"} <= tags
        nonzero = set()
        for make in (system_pt, system_cp2cp1, system_split):
            s = make(Q)
            for c in cases:
                for g in (c.left, c.right):
                    if g is not None:
                        assert max(g.window_weight(w.id) for w in g.surface.windows) <= 3
                out = run_case(c, s)
                assert out.direct == out.composed, c.name
                assert len(out.glued.surface.punctures) == c.expect_punctures, c.name
                if out.direct.table:
                    nonzero.add(c.name)
        # d-full-sides and g-double-consecutive vanish on both named fixtures and need the split
        # system; e-lone-to-pair-2 has an arcless window on its right factor and vanishes everywhere
        assert nonzero == {c.name for c in cases} - {"e-lone-to-pair-2"}
        by = {c.name: c for c in cases}
        assert run_case(by["self-closed"], system_cp2cp1(Q)).glued.surface.genus == 1
        assert [len(run_case(by[n], system_pt(Q)).glued.surface.punctures)
                for n in ("g-consecutive", "g-double-consecutive")] == [1, 2]
        assert time.perf_counter() - t0 < 30


def test_criterion_5_golden_operations(capsys):
    with criterion(capsys, 5, "act on GRAPH-TRI gives the three-label product and evaluate_io the Sullivan product, "
                              "n + m <= 3, both fixtures"):
        count = 0
        for make in MAKERS.values():
            s = make(Q, labels=("S", "T", "U"))
            TS, SU, UT = WindowLabel.open("T", "S"), WindowLabel.open("S", "U"), WindowLabel.open("U", "T")
            for n in range(4):
                for m in range(4 - n):
                    wt = {"e1": n + 1, "e2": m + 1}
                    plain = dualize(correlator(graph_tri(), s, wt), ["w3"])
                    sull = dualize(io_correlator(graph_tri(io=True), s, wt), ["w3"])
                    for ka, kb in itertools.product(basis_tuples(s, TS, n), basis_tuples(s, SU, m)):
                        a, b = BarElement(s, TS, n, {ka: 1}), BarElement(s, SU, m, {kb: 1})
                        assert plain.apply_single([a, b]) == st_mul(s, a, b, sullivan=False)
                        assert sull.apply_single([a, b]) == st_mul(s, a, b)
                        count += 1
            for N in range(3):
                for key in basis_tuples(s, UT, N):
                    c = BarElement(s, UT, N, {key: 1})
                    assert act(graph_tri(), s, {"w3": c}, ["w2", "w1"]) == st_comul(s, c, "S")
        assert count > 2000


def test_criterion_6_dg_property(capsys):
    small = sorted(n for n, g in sullivan_catalog().items() if len(g.arcs) <= 3)
    cells = [SullivanCell(g) for g in sullivan_catalog().values()] + [c for *_, c in cell_compositions()]
    text = (f"dg over F2 holds on normalized FIX-PT inputs for {len(small)} cells with <= 3 arcs; "
            "on all basis inputs it fails for 5 FIX-PT cells and on FIX-CP2CP1 (known counterexamples "
            "asserted); boundary squared vanishes on cells with <= 4 arcs")
    with criterion(capsys, 6, text, verdict="PASS (scoped; FAIL as stated)"):
        s = system_pt(F2)
        for name in small:
            defects, tried = dg_defects(sullivan_catalog()[name], s, normalized=True)
            assert tried and not defects, name
        failing = {n for n in small if dg_defects(sullivan_catalog()[n], s, normalized=False, limit=1)[0]}
        assert failing == {"triangle", "fan2", "square-zigzag", "pants-split", "pants-merge"}
        assert dg_defects(sullivan_catalog()["triangle"], system_cp2cp1(F2), normalized=True, limit=1)[0]
        assert any(len(c.graph.arcs) == 4 for c in cells)
        assert all(chain_boundary(cell_boundary(c)) == {} for c in cells)


def test_criterion_7_complex_sanity(capsys):
    with criterion(capsys, 7, "d^2 = 0 on B_n for n <= 4, all fixtures and labels; Casimir "
                              "resolution of identity on B_0 and B_1"):
        for make in (system_pt, system_cp2cp1, system_split):
            s = make(Q)
            labels = [WindowLabel.closed()] + [WindowLabel.open(a, b) for a in ["", *s.labels]
                                               for b in ["", *s.labels]]
            for lab in labels:
                for n in range(2, 5):
                    for reduced in ([True, False] if lab.is_closed else [False]):
                        for key in basis_tuples(s, lab, n, reduced=reduced):
                            x = BarElement(s, lab, n, {key: 1}, reduced=reduced)
                            assert differential(differential(x)).is_zero()
                for n in (0, 1):
                    for key in basis_tuples(s, lab, n):
                        x = BarElement(s, lab, n, {key: 1}, reduced=False)
                        acc = BarElement(s, lab, n, {}, reduced=False)
                        for left, right, c in casimir(s, lab, n):
                            p = pairing(x, BarElement(s, lab.bar(), n, {right: 1}, reduced=False))
                            acc = acc + BarElement(s, lab, n, {left: 1}, reduced=False).scale(c * p)
                        assert acc == x


def _catalog_graphs(s):
    out = []
    for c in gluing_catalog():
        out += [(c.name + "-left", c.left)] + ([(c.name + "-right", c.right)] if c.right else [])
        out.append((c.name + "-glued", run_case(c, s).glued))
    out += [(n, g.with_io(None)) for n, g in sullivan_catalog().items()]
    return out


def _dispatch_sweep(s, stride):
    graphs = inputs = nonzero = 0
    for name, g in _catalog_graphs(s):
        wins = [w.id for w in g.surface.windows]
        if sum(g.window_weight(w) for w in wins) > 6:
            continue
        graphs += 1
        labs = {w: window_label(g, w) for w in wins}
        ids = [a.id for a in g.arcs]
        for target in itertools.product(range(1, 7), repeat=len(wins)):
            if sum(target) > 6:
                continue
            tgt = dict(zip(wins, target))
            # the oracle: every integer weighting up to the largest window weight
            brute = [dict(zip(ids, ws)) for ws in itertools.product(range(1, max(target) + 1), repeat=len(ids))]
            brute = [wt for wt in brute if all(g.window_weight(w, wt) == tgt[w] for w in wins)]
            if not brute:
                continue
            spaces = [basis_tuples(s, labs[w], t - 1) for w, t in zip(wins, target)]
            for i, keys in enumerate(itertools.product(*spaces)):
                if i % stride:
                    continue
                inp = {w: BarElement(s, labs[w], t - 1, {k: 1}, reduced=False)
                       for w, t, k in zip(wins, target, keys)}
                val = evaluate_graph_action(g, s, inp)
                assert val == sum((evaluate(g, s, wt, inp) for wt in brute), s.field.zero), name
                inputs += 1
                nonzero += bool(val)
    return graphs, inputs, nonzero


def test_criterion_8_dispatch_against_brute_force(capsys):
    with criterion(capsys, 8, "evaluate_graph_action equals brute-force weighting sums on catalog graphs "
                              "with total window weight <= 6 (FIX-PT all inputs, FIX-CP2CP1 every 41st)"):
        g1, n1, z1 = _dispatch_sweep(system_pt(Q), 1)
        g2, n2, z2 = _dispatch_sweep(system_cp2cp1(Q), 41)
        assert g1 == g2 >= 30 and n1 > 1000 and z1 > 100 and n2 > 1000 and z2 > 0


def test_criterion_9_moduli(capsys):
    opens = open_catalog_graphs(system_split())
    comps = cell_compositions()
    with criterion(capsys, 9, f"pinched composite of two quasi-filling graphs is not quasi-filling; duality round trip on {len(opens)} open "
                              f"graphs; filtration on {len(comps)} cell compositions"):
        left, right, g = pinched_composite()
        assert quasi_filling(left) and quasi_filling(right)
        c = classify(g)
        assert not c.quasi_filling and not c.mco_member
        for name, h in opens:
            back = duality_reglue(duality_decompose(h))
            assert canonical_form(back, use_io=False) == canonical_form(h, use_io=False), name
        for name, c1, c2, c in comps:
            assert c.dimension <= c1.dimension + c2.dimension + 1, name


def test_criterion_10_determinism(capsys, tmp_path):
    with criterion(capsys, 10, "seeded runs repeat exactly; every fixture file round-trips byte for byte"):
        a, b = run_fuzz(40, seed=7), run_fuzz(40, seed=7)
        assert a == b
        tri = graph_tri(("b", "b", "b"))
        y1, y2 = correlator(tri, system_cp2cp1(Q)), correlator(tri, system_cp2cp1(Q))
        assert repr(sorted(y1.table.items())) == repr(sorted(y2.table.items()))
        docs = fixture_documents()
        io.write_json(tmp_path / "x.json", docs["graph-tri.json"])
        assert (tmp_path / "x.json").read_text() == io.dump_json(docs["graph-tri.json"])
        for rel, doc in docs.items():
            text = io.dump_json(doc)
            if "algebras/" in rel:
                again = io.algebra_to_json(io.algebra_from_json(doc))
            elif "systems/" in rel or rel == "pt-brane.json":
                again = io.system_to_json(io.system_from_json(doc))
            elif rel in ("units.json", "catalog/index.json"):
                (tmp_path / "plain.json").write_text(text)
                again = io.load_json(tmp_path / "plain.json")
            else:
                again = io.graph_to_json(io.graph_from_json(doc))
            assert io.dump_json(again) == text, rel


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
