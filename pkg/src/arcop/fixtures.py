"""Built-in algebras, brane systems and arc graphs used by tests, scripts and the CLI."""

from __future__ import annotations

from .algebra import BraneSystem, FrobeniusAlgebra, make_algebra_map
from .field import F2, Q, Field
from .surface import Arc, ArcGraph, WindowedSurface, build_graph


def algebra_k(field: Field = Q, name: str = "K") -> FrobeniusAlgebra:
    return FrobeniusAlgebra(name, ["1"], [0], [1], [1], {(0, 0): {0: 1}}, field)


def algebra_s2(field: Field = Q, name: str = "S2", gen: str = "x") -> FrobeniusAlgebra:
    """H*(S^2): basis 1, x with x^2 = 0 and trace x -> 1."""
    mul = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}
    return FrobeniusAlgebra(name, ["1", gen], [0, 2], [1, 0], [0, 1], mul, field)


def algebra_cp2(field: Field = Q) -> FrobeniusAlgebra:
    """H*(CP^2): basis 1, h, h^2 with h^3 = 0 and trace h^2 -> 1."""
    mul = {}
    for i in range(3):
        for j in range(3):
            if i + j < 3:
                mul[(i, j)] = {i + j: 1}
    return FrobeniusAlgebra("CP2", ["1", "h", "h2"], [0, 2, 4], [1, 0, 0], [0, 0, 1], mul, field)


def algebra_dual_numbers(field: Field = Q) -> FrobeniusAlgebra:
    """Q[y]/y^2 with trace y -> 1."""
    return algebra_s2(field, "Qy", "y")


def system_pt(field: Field = Q, labels=("b",)) -> BraneSystem:
    """Points on S^2: A = H*(S^2), each brane A_b = K with r(1) = 1, r(x) = 0."""
    A = algebra_s2(field)
    branes, rs = {}, {}
    for b in labels:
        K = algebra_k(field, f"K_{b}")
        branes[b] = K
        rs[b] = make_algebra_map(A, K, [[1, 0]])
    return BraneSystem(A, branes, rs)


def system_cp2cp1(field: Field = Q, labels=("b",)) -> BraneSystem:
    """CP^1 inside CP^2: h -> t, h^2 -> 0."""
    A = algebra_cp2(field)
    branes, rs = {}, {}
    for b in labels:
        B = algebra_s2(field, f"CP1_{b}", "t")
        branes[b] = B
        rs[b] = make_algebra_map(A, B, [[1, 0, 0], [0, 1, 0]])
    return BraneSystem(A, branes, rs)


def system_failing_i1(field: Field = Q) -> BraneSystem:
    """A = K, A_b = Q[y]/y^2, r(1) = 1: (E) holds but (I1) fails."""
    A = algebra_k(field)
    B = algebra_dual_numbers(field)
    return BraneSystem(A, {"b": B}, {"b": make_algebra_map(A, B, [[1], [0]])})


def algebra_split(field: Field = Q) -> FrobeniusAlgebra:
    """Q x Q with idempotent basis u, v and trace (1, 1)."""
    return FrobeniusAlgebra("QxQ", ["u", "v"], [0, 0], [1, 1], [1, 1],
                            {(0, 0): {0: 1}, (1, 1): {1: 1}}, field)


def system_split(field: Field = Q) -> BraneSystem:
    """Q x Q with one brane K restricting to the first factor; every degree is 0."""
    A = algebra_split(field)
    K = algebra_k(field, "K_b")
    return BraneSystem(A, {"b": K}, {"b": make_algebra_map(A, K, [[1, 0]])})


SYSTEMS = {
    "pt": lambda field=Q: system_pt(field),
    "pt-tsu": lambda field=Q: system_pt(field, ("S", "T", "U")),
    "cp2cp1": lambda field=Q: system_cp2cp1(field),
    "failing-i1": system_failing_i1,
    "split": system_split,
}

ALGEBRAS = {"K": algebra_k, "S2": algebra_s2, "CP2": algebra_cp2, "Qy": algebra_dual_numbers}


# --- graphs -----------------------------------------------------------------------------

def graph_tri(labels=("T", "S", "U"), io: bool = False) -> ArcGraph:
    """Disk with three marked points; e1 joins w1 and w3, e2 joins w2 and w3."""
    surf = WindowedSurface(0, [[{labels[0]}, {labels[1]}, {labels[2]}]])
    return build_graph(surf, [Arc("e1", "w1", 0, "w3", 1, 1), Arc("e2", "w2", 0, "w3", 0, 1)],
                       io=({"w1", "w2"}, {"w3"}) if io else None)


def annulus(closed: bool = True, label: str = "b", weight: int = 1, io: bool = False) -> ArcGraph:
    """Annulus with one marked point per boundary and one arc across."""
    pt = set() if closed else {label}
    surf = WindowedSurface(0, [[pt], [pt]])
    return build_graph(surf, [Arc("a", "w1", 0, "w2", 0, weight)],
                       io=({"w1"}, {"w2"}) if io else None)


def disk(labels, arcs, io=None, punctures=None) -> ArcGraph:
    """Disk with marked points ``labels`` (strings; "" for an empty label)."""
    pts = [{l} if l else set() for l in labels]
    surf = WindowedSurface(0, [pts], [(p, {l} if l else set()) for p, l in (punctures or [])])
    g = ArcGraph(surf, arcs, None, io)
    if not punctures:
        return build_graph(surf, arcs, io=io)
    cycles = g.trace_cycles()
    groups = [[next(x.piece for x in c if hasattr(x, "piece"))] for c in cycles]
    pl = [[] for _ in cycles]
    for pid, _ in punctures:
        pl[0].append(pid)
    return build_graph(surf, arcs, groups, punctures=pl, io=io)


FIELDS = {"Q": Q, "F2": F2}


# --- shipped fixture files ----------------------------------------------------------------

def fixture_documents() -> dict:
    """Relative path -> JSON document for every fixture shipped under ``fixtures/``."""
    from . import io as aio
    from .barcomplex import WindowLabel, element
    from .catalog import gluing_catalog

    docs = {
        "algebras/fix-k.json": aio.algebra_to_json(algebra_k()),
        "algebras/fix-s2.json": aio.algebra_to_json(algebra_s2()),
        "algebras/fix-cp2.json": aio.algebra_to_json(algebra_cp2()),
        "pt-brane.json": aio.system_to_json(system_pt(Q, ("S", "T", "U"))),
        "systems/fix-pt.json": aio.system_to_json(system_pt()),
        "systems/fix-cp2cp1.json": aio.system_to_json(system_cp2cp1()),
        "systems/failing-i1.json": aio.system_to_json(system_failing_i1()),
        "systems/split.json": aio.system_to_json(system_split()),
        "graph-tri.json": aio.graph_to_json(graph_tri()),
        "graph-tri-io.json": aio.graph_to_json(graph_tri(io=True)),
        "annulus-closed.json": aio.graph_to_json(annulus()),
        "annulus-closed-2.json": aio.graph_to_json(annulus(weight=2)),
        "annulus-open.json": aio.graph_to_json(annulus(closed=False)),
        "annulus-io.json": aio.graph_to_json(annulus(io=True)),
    }
    s = system_pt(Q, ("S", "T", "U"))
    docs["units.json"] = {
        "w1": aio.bar_to_json(element(s, WindowLabel.open("T", "S"), "1", "1")),
        "w2": aio.bar_to_json(element(s, WindowLabel.open("S", "U"), "1", "1")),
    }
    index = []
    for case in gluing_catalog():
        entry = {"name": case.name, "description": case.description, "closed": case.closed,
                 "left": f"{case.name}-left.json",
                 "steps": [{"window": st.window, "other": st.other, "self": st.self_gluing}
                           for st in case.steps]}
        docs[f"catalog/{case.name}-left.json"] = aio.graph_to_json(case.left)
        if case.right is not None:
            entry["right"] = f"{case.name}-right.json"
            docs[f"catalog/{case.name}-right.json"] = aio.graph_to_json(case.right)
        index.append(entry)
    docs["catalog/index.json"] = index
    return docs


def write_fixture_files(directory) -> list:
    """Write ``fixture_documents()`` below ``directory``; returns the paths written."""
    from pathlib import Path

    from .io import dump_json

    root = Path(directory)
    written = []
    for rel, doc in sorted(fixture_documents().items()):
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dump_json(doc), encoding="utf-8")
        written.append(path)
    return written
