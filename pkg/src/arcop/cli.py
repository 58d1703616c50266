"""Command-line front end: ``arcop <command> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from . import io as aio
from .algebra import check_conditions
from .errors import ArcopError, ParseError, UsageError, ValidationError
from .field import field_of
from .surface import ArcGraph


# --- DOT export ------------------------------------------------------------------------------

def _q(s) -> str:
    return '"' + str(s).replace('"', '\\"') + '"'


def export_dot(graph: ArcGraph) -> str:
    """Windows as ordered nodes per boundary, arcs as weighted edges, regions as clusters."""
    S = graph.surface
    lines = ["graph arcgraph {", "  graph [rankdir=LR];", "  node [shape=box];"]
    for b, pts in enumerate(S.boundaries):
        wins = [S.window_at(b, i) for i in range(len(pts))]
        lines.append(f"  subgraph {_q(f'boundary{b}')} {{")
        lines.append("    rank=same;")
        for w in wins:
            lab = "closed" if w.closed else str(w.label)
            lines.append(f"    {_q(w.id)} [label={_q(f'{w.id} {lab}')}];")
        for u, v in zip(wins, wins[1:]):
            lines.append(f"    {_q(u.id)} -- {_q(v.id)} [style=invis];")
        lines.append("  }")
    if graph.regions is not None:
        for i, r in enumerate(graph.regions):
            lines.append(f"  subgraph {_q(f'cluster_region{i}')} {{")
            desc = f"S{i}: chi={r.chi} g={r.genus} punctures={len(r.punctures)}"
            lines.append(f"    label={_q(desc)};")
            lines.append(f"    {_q(f'region{i}')} [shape=point];")
            lines.append("  }")
    for a in graph.arcs:
        lines.append(f"  {_q(a.w1)} -- {_q(a.w2)} [label={_q(f'{a.id}:{a.weight}')}, "
                     f"taillabel={_q(a.slot1)}, headlabel={_q(a.slot2)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- helpers -------------------------------------------------------------------------------------

def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _field(args):
    return field_of(args.field) if getattr(args, "field", None) else None


def _system(args):
    if not args.system:
        raise UsageError("--system is required")
    return aio.read_system(args.system, _field(args))


def _operand(spec: str) -> tuple[str, str]:
    if ":" not in spec:
        raise UsageError(f"operand {spec!r} must look like FILE:WINDOW")
    path, w = spec.rsplit(":", 1)
    return path, w


def _kind(obj) -> str:
    if isinstance(obj, dict):
        if "surface" in obj:
            return "graph"
        if "basis" in obj:
            return "algebra"
        if "closed" in obj and "branes" in obj:
            return "system"
        if "terms" in obj:
            return "bar"
        if obj and all(isinstance(v, dict) and "terms" in v for v in obj.values()):
            return "inputs"
    raise ParseError("cannot tell what kind of file this is", "", "$")


# --- commands ------------------------------------------------------------------------------------

def cmd_validate(args) -> int:
    for path in args.files:
        try:
            _validate_one(args, path)
        except ValidationError as exc:
            exc.source = path
            raise
    return 0


def _validate_one(args, path) -> None:
    obj = aio.load_json(path)
    try:
        kind = _kind(obj)
    except ParseError as exc:
        raise ParseError(str(exc).split(": ", 1)[-1], path, "$") from None
    if kind == "graph":
        g = aio.graph_from_json(obj, path)
        print(f"{path}: ok graph, {len(g.surface.windows)} windows, {len(g.arcs)} arcs, "
              f"{len(g.regions)} regions")
    elif kind == "algebra":
        A = aio.algebra_from_json(obj, path, "$", _field(args))
        print(f"{path}: ok algebra {A.name}, dim {A.dim}, euler {A.format(A.euler)}")
    elif kind == "system":
        s = aio.system_from_json(obj, path, _field(args))
        rep = check_conditions(s).as_dict()
        flags = " ".join(f"{k}={'yes' if rep[k] else 'no'}" for k in ("C", "E", "I1", "I2",
                                                                        "projection_formula"))
        print(f"{path}: ok system, branes {','.join(s.labels)}; {flags}")
    else:
        s = _system(args)
        if kind == "bar":
            x = aio.bar_from_json(obj, s, path)
            print(f"{path}: ok B_{x.n}{x.label}: {x.format()}")
        else:
            xs = aio.inputs_from_json(obj, s, path)
            print(f"{path}: ok inputs for {','.join(sorted(xs))}")


def cmd_glue(args) -> int:
    from .gluing import extended_glue, glue, self_glue

    if args.self:
        if len(args.operands) != 1:
            raise UsageError("--self takes exactly one graph file")
        g = aio.read_graph(args.operands[0])
        res = self_glue(g, *args.self)
    else:
        if len(args.operands) != 2:
            raise UsageError("glue needs two operands FILE:WINDOW")
        (p1, w1), (p2, w2) = map(_operand, args.operands)
        g1, g2 = aio.read_graph(p1), aio.read_graph(p2)
        if args.extended:
            res = extended_glue(g1, w1, g2, w2)
        else:
            res = glue(g1, w1, g2, w2, allow_inactive=args.allow_inactive)
    _emit(aio.dump_json(aio.graph_to_json(res.graph)), args.output)
    if args.output:
        print(f"wrote {args.output}: {len(res.graph.arcs)} arcs, {len(res.graph.regions)} regions, "
              f"{res.deleted_leaves} leaves deleted")
    return 0


def cmd_self_glue(args) -> int:
    from .gluing import self_glue

    g = aio.read_graph(args.graph)
    res = self_glue(g, args.w1, args.w2)
    _emit(aio.dump_json(aio.graph_to_json(res.graph)), args.output)
    return 0


def _weights(args):
    if not getattr(args, "weights", None):
        return None
    obj = aio.load_json(args.weights)
    if not isinstance(obj, dict) or not all(isinstance(v, int) for v in obj.values()):
        raise ParseError("weights must map arc ids to positive integers", args.weights, "$")
    return obj


def cmd_correlate(args) -> int:
    from .correlator import evaluate, evaluate_graph_action, evaluate_io

    g = aio.read_graph(args.graph)
    s = _system(args)
    inputs = aio.inputs_from_json(aio.load_json(args.inputs), s, args.inputs)
    wt = _weights(args)
    if args.io:
        val = evaluate_io(g, s, wt, inputs)
    elif wt is not None:
        val = evaluate(g, s, wt, inputs)
    else:
        val = evaluate_graph_action(g, s, inputs)
    print(s.field.format(val))
    return 0


def cmd_act(args) -> int:
    from .correlator import act_single

    g = aio.read_graph(args.graph)
    s = _system(args)
    inputs = aio.inputs_from_json(aio.load_json(args.inputs), s, args.inputs)
    if len(args.out) != 1:
        raise UsageError("act supports one --out window")
    res = act_single(g, s, inputs, args.out[0])
    if args.output:
        Path(args.output).write_text(aio.dump_json([aio.bar_to_json(x) for x in res]), encoding="utf-8")
    if not res:
        print("0")
    for x in res:
        print(x.format())
    return 0


def cmd_sullivan(args) -> int:
    from .sullivan import SullivanCell, cell_boundary, cell_compose, is_sullivan

    if args.action == "check":
        g = aio.read_graph(args.graphs[0])
        if g.io is None:
            print("no in/out partition")
            return 1
        ok = is_sullivan(g)
        print(f"sullivan: {'yes' if ok else 'no'}")
        if ok:
            print(f"dimension: {SullivanCell(g).dimension}")
        return 0 if ok else 1
    if args.action == "boundary":
        c = SullivanCell(aio.read_graph(args.graphs[0]))
        cells = list(cell_boundary(c).values())
        _write_cells(cells, args.output, "boundary")
        return 0
    if len(args.graphs) != 2 or not args.pair:
        raise UsageError("compose needs two graph files and at least one --pair OUT:IN")
    c1, c2 = (SullivanCell(aio.read_graph(p)) for p in args.graphs)
    pairs = []
    for p in args.pair:
        if ":" not in p:
            raise UsageError(f"--pair {p!r} must look like OUT:IN")
        pairs.append(tuple(p.split(":", 1)))
    cells = list(cell_compose(c1, c2, pairs).values())
    _write_cells(cells, args.output, "composite")
    return 0


def _write_cells(cells, output, stem) -> None:
    print(f"{len(cells)} cell(s)")
    for i, c in enumerate(cells):
        g = c.graph
        print(f"  {stem}{i}: {len(g.arcs)} arcs, dimension {c.dimension}")
    if output:
        out = Path(output)
        out.mkdir(parents=True, exist_ok=True)
        for i, c in enumerate(cells):
            aio.write_json(out / f"{stem}{i}.json", aio.graph_to_json(c.graph))


def cmd_classify(args) -> int:
    from .moduli import classify

    g = aio.read_graph(args.graph)
    _emit(aio.dump_json(classify(g).as_dict()), args.output)
    return 0


def cmd_duality(args) -> int:
    from .moduli import duality_decompose, duality_reglue
    from .surface import canonical_form

    g = aio.read_graph(args.graph)
    dec = duality_decompose(g)
    core = aio.dump_json(aio.graph_to_json(dec.core))
    _emit(core, args.output)
    if args.annuli:
        d = Path(args.annuli)
        d.mkdir(parents=True, exist_ok=True)
        for ann in dec.annuli:
            aio.write_json(d / f"annulus-b{ann.boundary}.json", aio.graph_to_json(ann.graph))
    ok = canonical_form(duality_reglue(dec), use_io=False) == canonical_form(g, use_io=False)
    msg = f"{len(dec.annuli)} annuli; round trip {'ok' if ok else 'FAILED'}"
    print(msg, file=sys.stderr if not args.output else sys.stdout)
    return 0 if ok else 1


def cmd_axioms(args) -> int:
    from .axioms import run_fuzz

    rep = run_fuzz(args.fuzz, args.seed)
    print(rep.summary())
    for name in ("associativity_failures", "equivariance_failures", "grading_failures"):
        for item in getattr(rep, name):
            print(f"  {name[:-9]}: {item}")
    return 0 if rep.ok else 1


def cmd_export_dot(args) -> int:
    _emit(export_dot(aio.read_graph(args.graph)), args.output)
    return 0


# --- parser --------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", choices=["Q", "F2"], help="override the field of algebra files")
    common.add_argument("-o", "--output", help="write the result to FILE")

    p = argparse.ArgumentParser(prog="arcop", description="Arc-graph operations on brane-labelled "
                                "Frobenius systems.")
    p.add_argument("--version", action="version", version=f"arcop {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="parse and validate files")
    s.add_argument("files", nargs="+")
    s.add_argument("--system", help="system file, needed for bar elements")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("glue", parents=[common], help="glue two graphs along windows")
    s.add_argument("operands", nargs="+", help="FILE:WINDOW FILE:WINDOW, or FILE with --self")
    s.add_argument("--self", nargs=2, metavar=("W1", "W2"), help="self-glue two windows of one graph")
    s.add_argument("--extended", action="store_true", help="out-to-in gluing; an inactive out window "
                   "deletes the incoming leaves")
    s.add_argument("--allow-inactive", action="store_true")
    s.set_defaults(func=cmd_glue)

    s = sub.add_parser("self-glue", parents=[common], help="glue two windows of one graph")
    s.add_argument("graph")
    s.add_argument("w1")
    s.add_argument("w2")
    s.set_defaults(func=cmd_self_glue)

    for name, func, hlp in (("correlate", cmd_correlate, "evaluate the correlator"),
                            ("act", cmd_act, "dualize on an out window")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("graph")
        s.add_argument("--system", required=True)
        s.add_argument("--inputs", required=True)
        if name == "correlate":
            s.add_argument("--weights", help="JSON map arc id -> weight; default sums over all "
                           "weightings matching the input degrees")
            s.add_argument("--io", action="store_true", help="use the in/out (Sullivan) decoration")
        else:
            s.add_argument("--out", action="append", required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("sullivan", parents=[common], help="Sullivan cells: check, compose, boundary")
    s.add_argument("action", choices=["check", "compose", "boundary"])
    s.add_argument("graphs", nargs="+")
    s.add_argument("--pair", action="append", help="OUT:IN window pair for compose")
    s.set_defaults(func=cmd_sullivan)

    s = sub.add_parser("classify", parents=[common], help="moduli-layer predicates")
    s.add_argument("graph")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("duality", parents=[common], help="open/closed duality decomposition")
    s.add_argument("graph")
    s.add_argument("--annuli", help="directory for the annulus graphs")
    s.set_defaults(func=cmd_duality)

    s = sub.add_parser("axioms", parents=[common], help="fuzz the gluing axioms")
    s.add_argument("--fuzz", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_axioms)

    s = sub.add_parser("export-dot", parents=[common], help="Graphviz text for a graph")
    s.add_argument("graph")
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: ParseError: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"error: UsageError: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        where = ":".join(x for x in (getattr(exc, "source", ""), getattr(exc, "location", "")) if x)
        print(f"error: {where + ': ' if where else ''}{exc}", file=sys.stderr)
        return 1
    except ArcopError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
