"""Command line front end.

Exit codes: 0 success, 1 unreadable or invalid input, 2 cover not semi-stable.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .branch_data import parse_cover_spec
from .clusters import build_cluster_picture, render_ascii
from .discs import build_disc_collection, render_disc_tree
from .dual_graph import build_dual_graph, chain_table, export_dot
from .errors import NotSemistableError, TwoCoverError
from .lattice import DEFAULT_MAX_ENUM, spanning_tree_count
from .pipeline import NormalizationInputs, VolumeReport, normalized_volume, run_pipeline
from .semistability import check_semistable, reduction_type

EXIT_OK, EXIT_INPUT, EXIT_NOT_SEMISTABLE = 0, 1, 2


def _load(path: str):
    if path == "-":
        return parse_cover_spec(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_cover_spec(fh.read())


def _matrix_text(m) -> str:
    return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in m) + "]"


def cmd_check(spec, args, out):
    pic = build_cluster_picture(spec.branch)
    verdict = check_semistable(pic, spec.galois)
    red = reduction_type(pic, spec.galois, verdict=verdict)
    if args.json:
        out.append({"verdict": {"semistable": verdict.semistable,
                                "violations": [str(v) for v in verdict.violations]},
                    "reduction": str(red)})
    else:
        out.append(f"{verdict}\n{red}\n")
    return EXIT_OK if verdict.semistable else EXIT_NOT_SEMISTABLE


def cmd_picture(spec, args, out):
    pic = build_cluster_picture(spec.branch)
    text = render_ascii(pic)
    try:
        tree = render_disc_tree(build_disc_collection(pic))
    except NotSemistableError as exc:
        tree = f"(no disc collection: {exc})"
    if args.json:
        out.append({"picture": text, "discs": tree.splitlines()})
    else:
        out.append(f"{text}\n{tree}\n")
    return EXIT_OK


def cmd_graph(spec, args, out):
    pic = build_cluster_picture(spec.branch)
    verdict = check_semistable(pic, spec.galois)
    if not verdict.semistable:
        raise NotSemistableError(str(verdict), verdict.violations)
    gr = build_dual_graph(pic)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(export_dot(gr))
    if args.json:
        out.append({"vertices": list(gr.vertices),
                    "chains": [{"id": c.id, "a": c.a, "b": c.b, "length": c.length}
                               for c in gr.chains]})
    else:
        out.append(chain_table(gr) + "\n")
    return EXIT_OK


def cmd_tamagawa(spec, args, out):
    res = run_pipeline(spec, max_enum=args.max_enum)
    G, act = res.group, res.action
    trees = spanning_tree_count(res.unit_graph)
    if trees != G.order:
        raise AssertionError(f"|Phi| = {G.order} but the graph has {trees} spanning trees")
    if spec.galois.is_identity() and spec.galois.eps is None and res.tamagawa != G.order:
        raise AssertionError("trivial Frobenius must fix the whole component group")
    if args.json:
        out.append({"invariant_factors": list(G.invariant_factors), "order": G.order,
                    "action": act.on_group, "tamagawa": res.tamagawa})
    else:
        out.append(f"Phi = {G.describe()}, fixed = {res.tamagawa}\n"
                   f"|Phi| = {G.order} = spanning trees {trees}\n"
                   f"action on Phi: {_matrix_text(act.on_group)}\n")
    return EXIT_OK


def cmd_volume(spec, args, out):
    res = run_pipeline(spec, max_enum=args.max_enum)
    norm = NormalizationInputs(args.q, args.dim, args.a0, Fraction(args.conductor))
    report = VolumeReport(res.tamagawa, normalized_volume(res.tamagawa, norm), res.verdict,
                          res.reduction, chain_table(res.graph), res.group.invariant_factors)
    out.append(report.to_json() if args.json else report.to_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="twocover",
        description="Semi-stable reduction, dual graph and Tamagawa number of a double cover.")
    ap.add_argument("--json", action="store_true", help="emit JSON instead of text")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, helptext):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("inputs", nargs="+", metavar="INPUT", help="cover document(s), '-' for stdin")
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        p.set_defaults(func=fn)
        return p

    add("check", cmd_check, "semi-stability verdict and reduction type")
    add("picture", cmd_picture, "cluster picture and disc tree")
    p = add("graph", cmd_graph, "chains of the dual graph")
    p.add_argument("--dot", metavar="PATH", help="also write a Graphviz file")
    p = add("tamagawa", cmd_tamagawa, "component group, Frobenius action and fixed points")
    p.add_argument("--max-enum", type=int, default=DEFAULT_MAX_ENUM)
    p = add("volume", cmd_volume, "normalized volume report")
    p.add_argument("--q", type=int, required=True, help="size of the residue field")
    p.add_argument("--dim", type=int, required=True, help="dimension of the abelian variety")
    p.add_argument("--a0", type=int, required=True, help="points of the identity component")
    p.add_argument("--conductor", default="1", help="conductor constant (rational)")
    p.add_argument("--max-enum", type=int, default=DEFAULT_MAX_ENUM)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    status = EXIT_OK
    results = []
    for path in args.inputs:
        out: list = []
        try:
            spec = _load(path)
            code = args.func(spec, args, out)
        except NotSemistableError as exc:
            code = EXIT_NOT_SEMISTABLE
            out.append({"error": str(exc)} if args.json else f"error: {exc}\n")
        except (TwoCoverError, OSError, ValueError) as exc:
            code = EXIT_INPUT
            out.append({"error": str(exc)} if args.json else f"error: {exc}\n")
        status = max(status, code)
        results.extend(out)
    if args.json:
        payload = results[0] if len(results) == 1 else results
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("".join(results))
    return status


if __name__ == "__main__":
    sys.exit(main())
