"""Command-line front end.

Exit codes: 0 all pass, 1 any check failed, 2 everything skipped,
3 input error, 4 numeric error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import graph as gr
from .checks import CHECKS, enumeration_chunks, graph_chunks, parse_checks, run_check, sweep
from .errors import GapError, GraphInputError, HypothesisError, NumericError
from .graph6 import parse_edge_list_text, parse_graph6, parse_inline_edges, read_graph6_file
from .homotopy import DEFAULT_GRID, key_lemma_check, key_lemma_hypothesis
from .majorization import DEFAULT_TOL, check_grone_merris, laplacian_spectrum
from .report import EXIT_ALL_SKIP, EXIT_INPUT, EXIT_NUMERIC, CheckResult, RunReport

FAMILIES = {
    "complete-split": (gr.complete_split, 2),
    "complete": (gr.complete_graph, 1),
    "empty": (gr.empty_graph, 1),
    "path": (gr.path_graph, 1),
    "cycle": (gr.cycle_graph, 1),
    "star": (gr.star_graph, 1),
}


def check_tolerance() -> float:
    raw = os.environ.get("GM_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise GraphInputError(f"GM_TOL={raw!r} is not a number") from None
    if not tol > 0:
        raise GraphInputError("GM_TOL must be positive")
    return tol


def _fmt(x: float) -> str:
    if abs(x) < 5e-12:
        x = 0.0
    return f"{x:.12g}"


def _add_input_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--edges", metavar="'n;i-j,...'", help="inline edge list, e.g. '3;0-1,1-2'")
    src.add_argument("--edge-file", metavar="PATH", help="edge-list text file: 'n' then one 'i j' per line")
    src.add_argument("--graph6", metavar="PATH", help="graph6 file, one record per line")
    src.add_argument("--g6", metavar="RECORD", help="a single inline graph6 record")
    src.add_argument("--family", nargs="+", metavar="ARG",
                     help=f"named family: {', '.join(FAMILIES)} followed by its sizes")


def _family(args: list[str]) -> tuple[str, gr.Graph]:
    name, *rest = args
    if name not in FAMILIES:
        raise GraphInputError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    fn, arity = FAMILIES[name]
    if len(rest) != arity:
        raise GraphInputError(f"family {name} takes {arity} integer argument(s)")
    try:
        sizes = [int(a) for a in rest]
    except ValueError:
        raise GraphInputError(f"family {name}: sizes must be integers") from None
    return f"{name}({','.join(rest)})", fn(*sizes)


def load_graphs(args) -> list[tuple[str, gr.Graph]]:
    if args.edges is not None:
        return [("edges", parse_inline_edges(args.edges))]
    if args.edge_file is not None:
        return [(args.edge_file, parse_edge_list_text(Path(args.edge_file).read_text()))]
    if args.g6 is not None:
        return [(args.g6, parse_graph6(args.g6))]
    if args.graph6 is not None:
        return [(f"{args.graph6}:{ln}", g) for ln, g in read_graph6_file(args.graph6)]
    return [_family(args.family)]


# ---------------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    for gid, g in load_graphs(args):
        r = check_grone_merris(g, check_tolerance())
        print(f"graph: {gid}")
        print(f"n = {g.n}")
        print(f"m = {g.m}")
        print("degrees =", " ".join(map(str, gr.degree_sequence(g))))
        print("conjugate degrees =", " ".join(map(str, r.dprime)))
        print("spectrum =", " ".join(_fmt(x) for x in r.spectrum))
        print("margins =", " ".join(_fmt(x) for x in r.margins))
    return 0


def cmd_check(args) -> int:
    tol = check_tolerance()
    checks = parse_checks(args.checks)
    graphs = load_graphs(args)
    t0 = time.perf_counter()
    report = RunReport(sys.argv[:] if args.argv is None else args.argv,
                       tolerances={"check_tol": tol})
    for gid, g in graphs:
        report.graphs += 1
        for c in checks:
            report.record(run_check(c, g, gid, tol))
    report.wall_time = time.perf_counter() - t0
    for r in report.results:
        m = "" if r.margin is None else f" margin={r.margin:.3e}"
        d = f" ({r.detail})" if r.detail else ""
        print(f"{r.status.upper():5s} {r.check:16s} {r.graph_id}{m}{d}")
    print(report.format_text())
    if args.json:
        report.write_json(args.json)
    return report.exit_code()


def cmd_sweep(args) -> int:
    tol = check_tolerance()
    checks = parse_checks(args.checks)
    if args.n is not None:
        if args.n > gr.MAX_ENUMERATION_N:
            raise GraphInputError(
                f"enumeration is capped at n={gr.MAX_ENUMERATION_N}; use --graph6 with a corpus file")
        if args.n < 1:
            raise GraphInputError("n must be at least 1")
        chunks = enumeration_chunks(args.n, args.sample, args.seed)
    else:
        chunks = graph_chunks((f"{args.graph6}:{ln}", g) for ln, g in read_graph6_file(args.graph6))
    argv = sys.argv[:] if args.argv is None else args.argv
    report = sweep(chunks, checks, tol, args.jobs, argv)
    if args.n is not None and args.sample is None:
        report.extra["expected_graphs"] = 1 << (args.n * (args.n - 1) // 2)
    print(report.format_text())
    if args.json:
        report.write_json(args.json)
    return report.exit_code()


def _pick_partition(g: gr.Graph, args, family_natural: bool):
    if args.clique:
        return gr.partition_from_clique(g, [int(v) for v in args.clique.split(",")])
    if family_natural:
        return gr.partition_from_clique(g, range(int(args.family[1])))
    parts = [p for p in gr.all_split_partitions(g) if p.M >= 1]
    if not parts:
        return None
    lam = laplacian_spectrum(g)
    for p in parts:
        if key_lemma_hypothesis(lam, p.N, p.delta):
            return p
    return parts[0]


def cmd_homotopy(args) -> int:
    graphs = load_graphs(args)
    if len(graphs) != 1:
        raise GraphInputError("homotopy takes exactly one graph")
    gid, g = graphs[0]
    natural = args.family is not None and args.family[0] == "complete-split"
    argv = sys.argv[:] if args.argv is None else args.argv
    report = RunReport(argv, graphs=1, tolerances={"hypothesis_tol": 1e-8, "agreement_tol": 1e-6})
    t0 = time.perf_counter()
    p = _pick_partition(g, args, natural)
    if p is None:
        report.record(CheckResult(gid, "homotopy", "skip", None, "not a split graph (with non-empty co-clique)"))
        print(f"SKIP {gid}: not a split graph")
        _finish(report, args, t0)
        return EXIT_ALL_SKIP
    try:
        kl = key_lemma_check(g, p, args.grid)
    except HypothesisError as exc:
        report.record(CheckResult(gid, "homotopy", "skip", None, str(exc)))
        print(f"SKIP {gid}: clique {list(p.clique)}: {exc}")
        _finish(report, args, t0)
        return EXIT_ALL_SKIP
    except GapError as exc:
        report.record(CheckResult(gid, "homotopy", "error", None, f"gap error at alpha={exc.alpha}: {exc}"))
        print(f"ERROR {gid}: gap error at alpha={exc.alpha}: {exc}")
        _finish(report, args, t0)
        return EXIT_NUMERIC
    tr = kl.trace
    if args.csv:
        tr.write_csv(args.csv)
    checks = {**kl.checks(), **tr.invariants()}
    ok = all(checks.values())
    report.record(CheckResult(gid, "homotopy", "pass" if ok else "fail", kl.bound - kl.sum_top_eigs,
                              "" if ok else f"failed: {[k for k, v in checks.items() if not v]}"))
    report.extra.update({
        "clique": list(p.clique), "N": p.N, "M": p.M, "points": len(tr.points),
        "refinements": tr.refinements, "min_gap": tr.min_gap,
        "max_eq1_residual": tr.max_eq1_residual, "max_omega_entry": tr.max_omega_entry,
        "max_omega_colsum": tr.max_omega_colsum, "sum_top_eigs": kl.sum_top_eigs,
        "trace_X1": kl.trace_X1, "trace_AV": kl.trace_AV, "bound": kl.bound,
        "dprime_sum": kl.dprime_sum,
    })
    print(f"graph: {gid}  clique={list(p.clique)}  N={p.N} M={p.M}")
    print(f"points: {len(tr.points)} (refinements {tr.refinements})")
    print(f"min gap: {_fmt(tr.min_gap)}")
    print(f"max eq1 residual: {tr.max_eq1_residual:.3e}")
    print(f"max omega margins: entry {tr.max_omega_entry:.3e}, column sum {tr.max_omega_colsum:.3e}")
    print(f"key lemma: sum of top-N eigenvalues {_fmt(kl.sum_top_eigs)}, "
          f"Tr(X1) {_fmt(kl.trace_X1)}, N^2+Tr(D1) {kl.bound}, sum d' {kl.dprime_sum}, "
          f"Tr(AV) {_fmt(kl.trace_AV)}")
    for k, v in checks.items():
        if not v:
            print(f"FAIL {k}")
    print("PASS" if ok else "FAIL")
    _finish(report, args, t0)
    return report.exit_code()


def _finish(report: RunReport, args, t0: float) -> None:
    report.wall_time = time.perf_counter() - t0
    if getattr(args, "json", None):
        report.write_json(args.json)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gmcheck", description="Laplacian spectrum majorization checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="print degrees, conjugate degrees, spectrum and margins")
    _add_input_args(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("check", help="run selected checks on the input graph(s)")
    _add_input_args(p)
    p.add_argument("--checks", default="gm", help=f"comma list of {', '.join(CHECKS)}, or 'all'")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="run checks over an enumeration or a graph6 corpus")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--n", type=int, help=f"all labeled graphs on n <= {gr.MAX_ENUMERATION_N} vertices")
    src.add_argument("--graph6", metavar="PATH")
    p.add_argument("--sample", type=int, help="with --n: check a seeded random sample of this size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--checks", default="gm")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("homotopy", help="track the split-graph homotopy and write the trace CSV")
    _add_input_args(p)
    p.add_argument("--grid", type=int, default=DEFAULT_GRID, help="uniform alpha grid points")
    p.add_argument("--clique", help="comma list of clique vertices (default: automatic)")
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_homotopy)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args.argv = None if argv is None else ["gmcheck", *argv]
    try:
        return args.func(args)
    except (GraphInputError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
