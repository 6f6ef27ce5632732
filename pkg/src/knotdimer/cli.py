"""Command-line front end.

Exit status is 0 on success, 1 on bad input and 2 when an internal
cross-check disagrees.  Errors go to stderr; ``--json`` output is sorted
and deterministic.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bot import build_bot, dehn_weighting, is_kasteleyn, kasteleyn_weighting, remove_pair
from .coloring import (
    DehnColoring,
    FoxColoring,
    count_from_snf,
    dehn_matrix_full,
    dehn_torsion_matrix,
    default_omitted_face,
    enumerate_colorings,
    fox_matrix_full,
    fox_torsion_matrix,
    integrate,
    phi,
)
from .diagram import build_diagram, parse_pd
from .dimer import determinant_report, enumerate_matchings, forcing_analysis
from .errors import CrossCheckError, KnotDimerError
from .fixtures import FixtureError, get_fixture
from .snf import GRAPH_MAX_CROSSINGS, cyclicity_by_forcing, same_up_to_ones, snf_graph, snf_matrix

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2


class InputError(KnotDimerError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _fmt_tuple(t) -> str:
    return "(" + ",".join(str(v) for v in t) + ")"


# -- input resolution ----------------------------------------------------------


def _load_input(args, allow_matrix=False):
    """Return ``(diagram, None)`` or, for a matrix fixture, ``(None, matrix)``."""
    if args.fixture is not None:
        entry = get_fixture(args.fixture)
        if entry.is_matrix:
            if not allow_matrix:
                raise InputError(f"fixture {entry.name!r} is a raw matrix; only 'snf' accepts it")
            return None, entry.matrix
        pd = entry.pd
    elif args.file is not None:
        try:
            pd = parse_pd(Path(args.file).read_text())
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
    else:
        pd = parse_pd(args.pd)
    return build_diagram(pd, unbounded=args.outer), None


def _parse_labels(text: str) -> dict[int, int]:
    """Coloring labels as a JSON list, a JSON object ``{id: value}``, or an
    object with a ``labels`` member in either form."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad coloring JSON: {exc}") from None
    if isinstance(data, dict) and "labels" in data:
        data = data["labels"]
    if isinstance(data, list):
        data = dict(enumerate(data))
    if not isinstance(data, dict):
        raise InputError("coloring JSON must be a list or an object")
    try:
        return {int(k): int(v) for k, v in data.items()}
    except (TypeError, ValueError):
        raise InputError("coloring labels must be integers") from None


# -- subcommands ---------------------------------------------------------------


def cmd_info(args, out):
    d, _ = _load_input(args)
    info = {
        "crossings": d.n_crossings,
        "arcs": len(d.arcs),
        "faces": len(d.faces),
        "unbounded_face": d.unbounded_face,
        "face_sizes": [d.face_size(f) for f in range(len(d.faces))],
        "shaded_faces": [f for f in range(len(d.faces)) if d.is_shaded(f)],
        "alternating": d.alternating,
    }
    if args.json:
        full = d.to_dict()
        full.update(info)
        out.write(_dump(full) + "\n")
        return EXIT_OK
    for key, val in info.items():
        out.write(f"{key}: {val}\n")
    return EXIT_OK


def cmd_det(args, out):
    d, _ = _load_input(args)
    rep = determinant_report(d, args.mode, args.omit)
    if args.json:
        out.write(_dump(rep.to_dict()) + "\n")
    else:
        out.write(f"{rep.determinant}\n")
    return EXIT_OK


def cmd_snf(args, out):
    d, matrix = _load_input(args, allow_matrix=True)
    if matrix is not None:
        if args.graph:
            raise InputError("--graph needs a diagram, not a raw matrix")
        s = snf_matrix(matrix)
    elif args.graph:
        s = snf_graph(d, args.omit)
    else:
        face = default_omitted_face(d) if args.omit is None else args.omit
        s = snf_matrix(dehn_torsion_matrix(dehn_matrix_full(d), face))
    if args.json:
        out.write(_dump(s.to_dict()) + "\n")
    else:
        out.write(_fmt_tuple(s.invariant_factors) + "\n")
    return EXIT_OK


def cmd_colorings(args, out):
    d, _ = _load_input(args)
    if args.count_only:
        s = snf_matrix(fox_torsion_matrix(fox_matrix_full(d), 0, 0))
        count = count_from_snf(s, args.n)
        out.write((_dump({"n": args.n, "kind": args.kind, "count": count}) if args.json else str(count)) + "\n")
        return EXIT_OK
    cs = enumerate_colorings(d, args.n, args.kind)
    if args.json:
        out.write(_dump({"n": args.n, "kind": args.kind, "count": len(cs),
                         "colorings": [list(c.labels) for c in cs]}) + "\n")
        return EXIT_OK
    for c in cs:
        out.write(" ".join(str(v) for v in c.labels) + "\n")
    out.write(f"# {len(cs)} {args.kind} {args.n}-colorings\n")
    return EXIT_OK


def cmd_convert(args, out):
    d, _ = _load_input(args)
    n = args.n
    if args.dehn is not None:
        raw = _parse_labels(args.dehn)
        raw.setdefault(d.unbounded_face, 0)
        missing = [f for f in range(len(d.faces)) if f not in raw]
        if missing:
            raise InputError(f"missing labels for faces {missing}")
        res = phi(DehnColoring(n, tuple(raw[f] % n for f in range(len(d.faces)))), d)
    else:
        raw = _parse_labels(args.fox)
        missing = [a for a in range(len(d.arcs)) if a not in raw]
        if missing:
            raise InputError(f"missing labels for arcs {missing}")
        res = integrate(FoxColoring(n, tuple(raw[a] % n for a in range(len(d.arcs)))), d)
    if args.json:
        out.write(_dump(res.to_dict()) + "\n")
    else:
        out.write(" ".join(str(v) for v in res.labels) + "\n")
    return EXIT_OK


def cmd_bot(args, out):
    d, _ = _load_input(args)
    g = build_bot(d, args.omit)
    if args.export == "dot":
        out.write(g.to_dot())
    else:
        out.write(_dump(g.to_dict()) + "\n")
    return EXIT_OK


def cmd_matchings(args, out):
    d, _ = _load_input(args)
    g = build_bot(d, args.omit)
    ms = enumerate_matchings(g)
    rep = forcing_analysis(g, matchings=ms)
    if args.json:
        data = rep.to_dict()
        if not args.count_only:
            data["coverings"] = [[list(k) for k in m] for m in ms]
        out.write(_dump(data) + "\n")
        return EXIT_OK
    if not args.count_only:
        for m in ms:
            out.write(" ".join(f"c{x}-f{f}" for x, f in m) + "\n")
    out.write(f"matchings: {len(ms)}\n")
    out.write("forcing edges: " + (" ".join(f"c{x}-f{f}" for x, f in rep.forcing_edges) or "none") + "\n")
    return EXIT_OK


def _verify_checks(entry, d):
    """Yield ``(name, ok, detail)`` for one fixture diagram."""
    goldens = {q: g["value"] for q, g in entry.goldens.items()}
    try:
        rep = determinant_report(d, "crosscheck")
        yield "determinant routes agree", True, str(rep.determinant)
    except CrossCheckError as exc:
        yield "determinant routes agree", False, str(exc)
        return
    if "determinant" in goldens:
        yield "determinant golden", rep.determinant == goldens["determinant"], str(rep.determinant)
    sm = snf_matrix(dehn_torsion_matrix(dehn_matrix_full(d), default_omitted_face(d)))
    sf = snf_matrix(fox_torsion_matrix(fox_matrix_full(d), 0, 0))
    yield "Fox and Dehn SNF agree", same_up_to_ones(sm, sf), _fmt_tuple(sm.invariant_factors)
    if "invariant_factors" in goldens:
        yield "SNF golden", same_up_to_ones(sm, goldens["invariant_factors"]), _fmt_tuple(sm.invariant_factors)
    if d.n_crossings <= GRAPH_MAX_CROSSINGS:
        sg = snf_graph(d)
        yield "graph SNF agrees", sg.invariant_factors == sm.invariant_factors, _fmt_tuple(sg.invariant_factors)
    g = build_bot(d)
    if "matchings" in goldens:
        count = len(enumerate_matchings(g))
        yield "matching count golden", count == goldens["matchings"], str(count)
    if d.alternating:
        yield "Dehn weighting is Kasteleyn", is_kasteleyn(g, dehn_weighting(g)), ""
    eps = kasteleyn_weighting(g)
    bad = 0 if is_kasteleyn(g, eps) else 1
    for v in g.crossings:
        for w in g.faces:
            if g.has_edge(v, w) or g.on_common_face(("c", v), ("f", w)):
                sub, sub_eps = remove_pair(g, eps, v, w)
                if sub_eps is None or not is_kasteleyn(sub, sub_eps):
                    bad += 1
    yield "constructed weightings are Kasteleyn", bad == 0, f"{bad} failures"
    for n in (3, 5, 7):
        if d.n_crossings <= 8:
            brute = len(enumerate_colorings(d, n, "fox"))
            yield f"{n}-coloring count", brute == count_from_snf(sm, n), str(brute)


def cmd_verify(args, out):
    if args.fixture is None:
        raise InputError("verify runs on a fixture; pass --fixture NAME")
    entry = get_fixture(args.fixture)
    results = []
    if entry.is_matrix:
        s = snf_matrix(entry.matrix)
        results.append(("SNF golden", s.invariant_factors == tuple(entry.golden("invariant_factors")),
                        _fmt_tuple(s.invariant_factors)))
    else:
        d = build_diagram(entry.pd, unbounded=args.outer)
        results.extend(_verify_checks(entry, d))
    ok = all(r[1] for r in results)
    if args.json:
        out.write(_dump({"fixture": entry.name, "ok": ok,
                         "checks": [{"name": n, "ok": o, "detail": t} for n, o, t in results]}) + "\n")
    else:
        for n, o, t in results:
            out.write(f"{'PASS' if o else 'FAIL'} {n}" + (f": {t}" if t else "") + "\n")
    if not ok:
        sys.stderr.write(f"verification of {entry.name} failed\n")
        return EXIT_CHECK
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--pd", help="PD code text, e.g. 'X(1,5,2,4) X(3,1,4,6) ...'")
    src.add_argument("--file", help="file containing a PD code")
    src.add_argument("--fixture", help="name of a catalog fixture")
    common.add_argument("--outer", type=int, default=None, metavar="FACE",
                        help="face id to treat as unbounded")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = _Parser(prog="knotdimer", description="Knot colorings, BOT graphs and dimer coverings.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("info", parents=[common], help="diagram summary")

    s = sub.add_parser("det", parents=[common], help="knot determinant from dimer coverings")
    s.add_argument("--mode", choices=["crosscheck", "fast"], default="crosscheck")
    s.add_argument("--omit", type=int, default=None, metavar="FACE")

    s = sub.add_parser("snf", parents=[common], help="Smith normal form of the coloring matrix")
    s.add_argument("--graph", action="store_true", help="use the graph-theoretic algorithm")
    s.add_argument("--omit", type=int, default=None, metavar="FACE")

    s = sub.add_parser("colorings", parents=[common], help="enumerate or count n-colorings")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--kind", choices=["fox", "dehn"], default="fox")
    s.add_argument("--count-only", action="store_true")

    s = sub.add_parser("convert", parents=[common], help="map between Dehn and Fox colorings")
    s.add_argument("--n", type=int, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--dehn", metavar="JSON", help="Dehn labels per face; output is the Fox coloring")
    g.add_argument("--fox", metavar="JSON", help="Fox labels per arc; output is the Dehn coloring")

    s = sub.add_parser("bot", parents=[common], help="export the BOT graph")
    s.add_argument("--export", choices=["dot", "json"], default="json")
    s.add_argument("--omit", type=int, default=None, metavar="FACE")

    s = sub.add_parser("matchings", parents=[common], help="dimer coverings and forcing edges")
    s.add_argument("--omit", type=int, default=None, metavar="FACE")
    s.add_argument("--count-only", action="store_true")

    sub.add_parser("verify", parents=[common], help="run every cross-check on a fixture")
    return p


COMMANDS = {
    "info": cmd_info, "det": cmd_det, "snf": cmd_snf, "colorings": cmd_colorings,
    "convert": cmd_convert, "bot": cmd_bot, "matchings": cmd_matchings, "verify": cmd_verify,
}


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command != "verify" and args.pd is None and args.file is None and args.fixture is None:
        sys.stderr.write("knotdimer: error: one of --pd, --file, --fixture is required\n")
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args, out)
    except CrossCheckError as exc:
        sys.stderr.write(f"knotdimer: cross-check failed: {exc}\n")
        return EXIT_CHECK
    except (KnotDimerError, FixtureError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"knotdimer: error: {msg}\n")
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
