"""JSON reading and writing for algebras, brane systems, arc graphs and bar elements.

Rationals are written as ``"p/q"`` strings and F2 values as 0/1 integers.  Parse
errors carry the file and a JSON path to the offending item.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .algebra import BraneSystem, FrobeniusAlgebra, make_algebra_map
from .barcomplex import BarElement, WindowLabel, factor_algebras
from .errors import ParseError, ValidationError
from .field import Field, field_of
from .surface import Arc, ArcGraph, ArcSide, PieceRef, Puncture, Region, WindowedSurface


class _Reader:
    """Typed access to a JSON document with precise locations."""

    def __init__(self, path: str):
        self.path = path

    def fail(self, msg, loc):
        raise ParseError(msg, self.path, loc)

    def get(self, obj, key, loc, kind=None, default=...):
        if not isinstance(obj, dict):
            self.fail("expected an object", loc)
        if key not in obj:
            if default is not ...:
                return default
            self.fail(f"missing key {key!r}", loc)
        val = obj[key]
        if kind is not None and not isinstance(val, kind):
            names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
            self.fail(f"expected {names} for {key!r}, got {type(val).__name__}", f"{loc}.{key}")
        return val

    def scalar(self, field: Field, val, loc):
        try:
            if isinstance(val, bool) or not isinstance(val, (int, str)):
                raise ValueError
            return field(val)
        except (ValueError, ZeroDivisionError, TypeError):
            self.fail(f"invalid scalar {val!r}", loc)


def load_json(path: str | Path) -> Any:
    path = str(path)
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ParseError("file not found", path, "") from None
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path, f"line {exc.lineno} column {exc.colno}") from None


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _labels(val, r: _Reader, loc) -> frozenset:
    if isinstance(val, str):
        return frozenset([val]) if val else frozenset()
    if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
        r.fail("label must be a list of brane names", loc)
    return frozenset(val)


# --- algebras and systems --------------------------------------------------------------

def algebra_from_json(obj: Mapping, path: str = "<memory>", loc: str = "$",
                      field: Field | None = None) -> FrobeniusAlgebra:
    r = _Reader(path)
    name = r.get(obj, "name", loc, str)
    fname = r.get(obj, "field", loc, str, default=field.name if field else "Q")
    if fname not in ("Q", "F2"):
        r.fail(f"unknown field {fname!r}", f"{loc}.field")
    f = field or field_of(fname)
    basis = r.get(obj, "basis", loc, list)
    labels, degrees = [], []
    for i, b in enumerate(basis):
        labels.append(r.get(b, "label", f"{loc}.basis[{i}]", str))
        d = r.get(b, "degree", f"{loc}.basis[{i}]", int)
        degrees.append(d)
    dim = len(labels)
    unit = r.get(obj, "unit", loc, list)
    trace = r.get(obj, "trace", loc, list)
    for key, vec in (("unit", unit), ("trace", trace)):
        if len(vec) != dim:
            r.fail(f"{key} has length {len(vec)}, basis has {dim}", f"{loc}.{key}")
    unit = [r.scalar(f, x, f"{loc}.unit[{i}]") for i, x in enumerate(unit)]
    trace = [r.scalar(f, x, f"{loc}.trace[{i}]") for i, x in enumerate(trace)]
    mul = {}
    for n, entry in enumerate(r.get(obj, "mul", loc, list)):
        eloc = f"{loc}.mul[{n}]"
        if not isinstance(entry, list) or len(entry) != 4:
            r.fail("structure constant must be [i, j, k, coeff]", eloc)
        i, j, k, c = entry
        for idx in (i, j, k):
            if not isinstance(idx, int) or not 0 <= idx < dim:
                r.fail(f"basis index {idx!r} out of range", eloc)
        mul.setdefault((i, j), {})
        mul[(i, j)][k] = mul[(i, j)].get(k, f.zero) + r.scalar(f, c, eloc)
    try:
        return FrobeniusAlgebra(name, labels, degrees, unit, trace, mul, f)
    except ValueError as exc:
        r.fail(str(exc), loc)


def algebra_to_json(A: FrobeniusAlgebra) -> dict:
    f = A.field
    mul = []
    for i in range(A.dim):
        for j in range(A.dim):
            for k in range(A.dim):
                c = A.structure_constant(i, j, k)
                if c:
                    mul.append([i, j, k, f.format(c)])
    return {
        "name": A.name,
        "field": f.name,
        "basis": [{"label": l, "degree": d} for l, d in zip(A.labels, A.degrees)],
        "unit": [f.format(x) for x in A.unit],
        "trace": [f.format(x) for x in A.trace_form],
        "mul": mul,
    }


def system_from_json(obj: Mapping, path: str = "<memory>", field: Field | None = None) -> BraneSystem:
    r = _Reader(path)
    base = Path(path).parent if path != "<memory>" else Path(".")

    def alg(val, loc):
        if isinstance(val, str):
            sub = str(base / val)
            return algebra_from_json(load_json(sub), sub, "$", field)
        return algebra_from_json(val, path, loc, field)

    closed = alg(r.get(obj, "closed", "$", (dict, str)), "$.closed")
    branes_obj = r.get(obj, "branes", "$", dict)
    rest_obj = r.get(obj, "restrictions", "$", dict)
    branes, rs = {}, {}
    for b in sorted(branes_obj):
        branes[b] = alg(branes_obj[b], f"$.branes.{b}")
        if b not in rest_obj:
            r.fail(f"brane {b!r} has no restriction", "$.restrictions")
        rows = rest_obj[b]
        loc = f"$.restrictions.{b}"
        if not isinstance(rows, list) or not all(isinstance(x, list) for x in rows):
            r.fail("restriction must be a matrix (list of rows)", loc)
        m = [[r.scalar(closed.field, x, f"{loc}[{i}][{j}]") for j, x in enumerate(row)]
             for i, row in enumerate(rows)]
        try:
            rs[b] = make_algebra_map(closed, branes[b], m)
        except ValidationError as exc:
            exc.location = loc
            raise
    extra = set(rest_obj) - set(branes_obj)
    if extra:
        r.fail(f"restriction for unknown brane {sorted(extra)[0]!r}", "$.restrictions")
    return BraneSystem(closed, branes, rs)


def system_to_json(sys: BraneSystem) -> dict:
    f = sys.field
    return {
        "closed": algebra_to_json(sys.closed),
        "branes": {b: algebra_to_json(a) for b, a in sys.branes.items()},
        "restrictions": {b: [[f.format(x) for x in row] for row in r.matrix]
                         for b, r in sys.restrictions.items()},
    }


# --- graphs ------------------------------------------------------------------------------

def graph_from_json(obj: Mapping, path: str = "<memory>", check: bool = True) -> ArcGraph:
    r = _Reader(path)
    s = r.get(obj, "surface", "$", dict)
    genus = r.get(s, "genus", "$.surface", int)
    bounds = []
    for bi, b in enumerate(r.get(s, "boundaries", "$.surface", list)):
        loc = f"$.surface.boundaries[{bi}]"
        if not isinstance(b, list):
            r.fail("boundary must be a list of marked points", loc)
        bounds.append([_labels(r.get(p, "label", f"{loc}[{pi}]"), r, f"{loc}[{pi}].label")
                       for pi, p in enumerate(b)])
    puncts = []
    for pi, p in enumerate(r.get(s, "punctures", "$.surface", list, default=[])):
        loc = f"$.surface.punctures[{pi}]"
        pid = r.get(p, "id", loc, (str, int))
        puncts.append(Puncture(str(pid), _labels(r.get(p, "label", loc), r, f"{loc}.label")))
    surface = WindowedSurface(genus, bounds, puncts)
    arcs = []
    for ai, a in enumerate(r.get(obj, "arcs", "$", list)):
        loc = f"$.arcs[{ai}]"
        aid = r.get(a, "id", loc, (str, int), default=ai)
        w1 = r.get(a, "w1", loc, str)
        w2 = r.get(a, "w2", loc, str)
        for w, key in ((w1, "w1"), (w2, "w2")):
            if w not in surface.window_by_id:
                r.fail(f"unknown window {w!r}", f"{loc}.{key}")
        arcs.append(Arc(aid, w1, r.get(a, "slot1", loc, int), w2, r.get(a, "slot2", loc, int),
                        r.get(a, "weight", loc, int, default=1)))
    ids = {a.id for a in arcs}
    regions = None
    if "regions" in obj and obj["regions"] is not None:
        regions = []
        for ri, reg in enumerate(r.get(obj, "regions", "$", list)):
            loc = f"$.regions[{ri}]"
            cycles = []
            for ci, cyc in enumerate(r.get(reg, "cycles", loc, list)):
                items = []
                for ii, it in enumerate(cyc):
                    iloc = f"{loc}.cycles[{ci}][{ii}]"
                    if isinstance(it, dict) and "piece" in it:
                        items.append(PieceRef(str(it["piece"])))
                    elif isinstance(it, dict) and "arc" in it:
                        side = r.get(it, "side", iloc, str)
                        if side not in ("L", "R") or it["arc"] not in ids:
                            r.fail(f"bad arc side {it!r}", iloc)
                        items.append(ArcSide(it["arc"], side))
                    else:
                        r.fail("cycle item must be {arc, side} or {piece}", iloc)
                cycles.append(tuple(items))
            regions.append(Region(r.get(reg, "genus", loc, int, default=0),
                                  frozenset(str(p) for p in r.get(reg, "punctures", loc, list, default=[])),
                                  tuple(cycles)))
    io = None
    if obj.get("io") is not None:
        io_obj = r.get(obj, "io", "$", dict)
        io = (frozenset(r.get(io_obj, "in", "$.io", list)), frozenset(r.get(io_obj, "out", "$.io", list)))
    if regions is None:
        from .surface import build_graph
        return build_graph(surface, arcs, io=io, check=check)
    return ArcGraph(surface, arcs, regions, io, check=check)


def graph_to_json(g: ArcGraph) -> dict:
    S = g.surface
    out = {
        "surface": {
            "genus": S.genus,
            "boundaries": [[{"label": sorted(p)} for p in b] for b in S.boundaries],
            "punctures": [{"id": p.id, "label": sorted(p.label)} for p in S.punctures],
        },
        "arcs": [{"id": a.id, "w1": a.w1, "slot1": a.slot1, "w2": a.w2, "slot2": a.slot2,
                  "weight": a.weight} for a in g.arcs],
    }
    if g.regions is not None:
        out["regions"] = [{
            "genus": r.genus,
            "punctures": sorted(r.punctures),
            "cycles": [[{"piece": x.piece} if isinstance(x, PieceRef) else {"arc": x.arc, "side": x.side}
                        for x in cyc] for cyc in r.cycles],
        } for r in g.regions]
    if g.io is not None:
        out["io"] = {"in": sorted(g.io[0]), "out": sorted(g.io[1])}
    return out


# --- bar elements -------------------------------------------------------------------------

def label_from_json(val, r: _Reader, loc) -> WindowLabel:
    if val == "closed":
        return WindowLabel.closed()
    if isinstance(val, dict) and "open" in val:
        pair = val["open"]
        if not isinstance(pair, list) or len(pair) != 2:
            r.fail("open label must be [S, T]", f"{loc}.open")
        return WindowLabel.open(_labels(pair[0], r, f"{loc}.open[0]"), _labels(pair[1], r, f"{loc}.open[1]"))
    r.fail("label must be \"closed\" or {\"open\": [S, T]}", loc)


def label_to_json(lab: WindowLabel):
    if lab.is_closed:
        return "closed"
    return {"open": [sorted(lab.left), sorted(lab.right)]}


def bar_from_json(obj: Mapping, system: BraneSystem, path: str = "<memory>", loc: str = "$") -> BarElement:
    r = _Reader(path)
    lab = label_from_json(r.get(obj, "label", loc), r, f"{loc}.label")
    n = r.get(obj, "n", loc, int)
    facs = factor_algebras(system, lab, n)
    terms = {}
    for ti, t in enumerate(r.get(obj, "terms", loc, list)):
        tloc = f"{loc}.terms[{ti}]"
        if not isinstance(t, list) or len(t) != 2 or not isinstance(t[0], list):
            r.fail("term must be [[basis labels], coeff]", tloc)
        word, c = t
        expected = n + 1 if lab.is_closed else n + 2
        if len(word) != expected:
            r.fail(f"word has {len(word)} letters, B_{n} needs {expected}", tloc)
        if facs is None:
            continue
        key = []
        for a, x in zip(facs, word):
            if x not in a.labels:
                r.fail(f"{x!r} is not a basis label of {a.name}", tloc)
            key.append(a.labels.index(x))
        key = tuple(key)
        terms[key] = terms.get(key, system.field.zero) + r.scalar(system.field, c, f"{tloc}[1]")
    return BarElement(system, lab, n, terms, reduced=False)


def bar_to_json(x: BarElement) -> dict:
    facs = factor_algebras(x.system, x.label, x.n)
    f = x.system.field
    terms = []
    for key in sorted(x.terms):
        terms.append([[a.labels[i] for a, i in zip(facs, key)], f.format(x.terms[key])])
    return {"label": label_to_json(x.label), "n": x.n, "terms": terms}


def inputs_from_json(obj: Mapping, system: BraneSystem, path: str = "<memory>") -> dict:
    r = _Reader(path)
    if not isinstance(obj, dict):
        r.fail("inputs must map window ids to bar elements", "$")
    return {w: bar_from_json(v, system, path, f"$.{w}") for w, v in obj.items()}


# --- convenience ---------------------------------------------------------------------------

def _sourced(fn, path, *args):
    try:
        return fn(load_json(path), str(path), *args)
    except ValidationError as exc:
        exc.source = str(path)
        raise


def read_graph(path, check: bool = True) -> ArcGraph:
    return _sourced(graph_from_json, path, check)


def read_system(path, field: Field | None = None) -> BraneSystem:
    return _sourced(system_from_json, path, field)


def read_algebra(path, field: Field | None = None) -> FrobeniusAlgebra:
    return _sourced(algebra_from_json, path, "$", field)


def write_json(path, obj) -> None:
    Path(path).write_text(dump_json(obj), encoding="utf-8")
