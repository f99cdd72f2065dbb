"""Named per-graph checks and the sweep driver behind the CLI.

Each check maps a graph to ``(status, margin, detail)``.  A margin is a
signed slack: non-negative (up to tolerance) means the inequality held.
"""

from __future__ import annotations

import multiprocessing as mp
import os
import time
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import GraphInputError, HypothesisError, NumericError, SkipCheck
from .graph import Graph, all_split_partitions, delete_edge
from .homotopy import key_lemma_check, key_lemma_hypothesis
from .majorization import (
    DEFAULT_TOL,
    check_double_majorization,
    check_fan,
    check_grone_bound,
    check_grone_merris,
    complement_duality,
    edge_deletion_bounds,
    edge_laplacian,
    laplacian,
    laplacian_spectrum,
    prefix_duality_gap,
    split_bounds,
    split_closure_report,
)
from .report import CheckResult, CheckSummary, RunReport

CheckFn = Callable[[Graph, float], tuple[str, "float | None", str]]


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _gm(g: Graph, tol: float):
    r = check_grone_merris(g, tol)
    detail = "" if r.holds else f"violation at k={r.report.first_violation}"
    return _status(r.holds), r.report.min_slack, detail


def _double(g: Graph, tol: float):
    lo, hi = check_double_majorization(g, tol)
    detail = "" if lo.holds and hi.holds else f"d<=lambda: {lo.holds}, lambda<=d': {hi.holds}"
    return _status(lo.holds and hi.holds), min(lo.min_slack, hi.min_slack), detail


def _grone(g: Graph, tol: float):
    r = check_grone_bound(g, tol)
    return _status(r.holds), r.min_slack, "" if r.holds else f"violation at k={r.first_violation}"


def _complement(g: Graph, tol: float):
    if g.n < 2:
        raise SkipCheck("n < 2")
    c = complement_duality(g)
    detail = f"matrix={c.matrix_identity} d'={c.dprime_identity} spectrum_dev={c.spectrum_deviation:.3e}"
    return _status(c.holds(tol)), -c.spectrum_deviation, "" if c.holds(tol) else detail


def _prefix_duality(g: Graph, tol: float):
    if g.n < 2:
        raise SkipCheck("n < 2")
    worst = max(prefix_duality_gap(g, k) for k in range(1, g.n))
    return _status(worst <= tol), -worst, "" if worst <= tol else f"max margin mismatch {worst:.3e}"


def _split_bounds(g: Graph, tol: float):
    parts = all_split_partitions(g)
    if not parts:
        raise SkipCheck("not a split graph")
    margins, bad = [], []
    for p in parts:
        b = split_bounds(g, p, tol)
        margins += [m for m in (b.lower, b.upper) if m is not None]
        if not b.holds(tol):
            bad.append(p.clique)
    return _status(not bad), min(margins, default=0.0), "" if not bad else f"failing cliques {bad}"


def _key_lemma(g: Graph, tol: float):
    lam = laplacian_spectrum(g)
    cands = [p for p in all_split_partitions(g)
             if p.M >= 1 and key_lemma_hypothesis(lam, p.N, p.delta)]
    if not cands:
        raise SkipCheck("no split partition meets the key-lemma hypothesis")
    r = key_lemma_check(g, cands[0])
    ok = r.holds()
    failed = [k for k, v in {**r.checks(), **r.trace.invariants()}.items() if not v]
    return _status(ok), r.bound - r.sum_top_eigs, "" if ok else f"failed: {failed}"


def _degree_threshold(g: Graph, tol: float):
    slacks, drops = [], []
    for k in range(1, g.n + 1):
        try:
            bounds = edge_deletion_bounds(g, k)
        except SkipCheck:
            continue
        slacks += [b.fan_slack for b in bounds]
        drops += [b.dprime_drop for b in bounds]
    if not slacks:
        raise SkipCheck("no edge joins two low-degree vertices")
    ok = min(slacks) >= -tol and all(d == 2 for d in drops)
    return _status(ok), min(slacks), "" if ok else f"d' drops {sorted(set(drops))}"


def _closure(g: Graph, tol: float):
    if g.n < 2:
        raise SkipCheck("n < 2")
    worst, bad = None, []
    for k in range(1, g.n):
        r = split_closure_report(g, k)
        # the split claim presumes no edge between two vertices of degree < k
        ok = r.dprime_preserved and r.min_eigen_increase >= -tol and (r.split_ok or not r.premise)
        worst = r.min_eigen_increase if worst is None else min(worst, r.min_eigen_increase)
        if not ok:
            bad.append(k)
    return _status(not bad), worst, "" if not bad else f"failing k {bad}"


def _fan_edges(g: Graph, tol: float):
    if g.m == 0:
        raise SkipCheck("no edges")
    reps = [check_fan(laplacian(delete_edge(g, i, j)), edge_laplacian(g.n, i, j), tol)
            for i, j in g.edges()]
    ok = all(r.holds for r in reps)
    return _status(ok), min(r.min_slack for r in reps), "" if ok else "Fan majorization violated"


CHECKS: dict[str, CheckFn] = {
    "gm": _gm,
    "double": _double,
    "grone": _grone,
    "complement": _complement,
    "prefix-duality": _prefix_duality,
    "split-bounds": _split_bounds,
    "key-lemma": _key_lemma,
    "degree-threshold": _degree_threshold,
    "closure": _closure,
    "fan": _fan_edges,
}


def parse_checks(spec: str) -> list[str]:
    names = [s.strip() for s in spec.split(",") if s.strip()]
    if names == ["all"]:
        return list(CHECKS)
    unknown = [s for s in names if s not in CHECKS]
    if unknown or not names:
        raise GraphInputError(f"unknown checks {unknown}; choose from {', '.join(CHECKS)} or 'all'")
    return names


def run_check(name: str, g: Graph, graph_id: str, tol: float = DEFAULT_TOL) -> CheckResult:
    try:
        status, margin, detail = CHECKS[name](g, tol)
    except (SkipCheck, HypothesisError) as exc:
        return CheckResult(graph_id, name, "skip", None, str(exc))
    except NumericError as exc:
        return CheckResult(graph_id, name, "error", None, f"{type(exc).__name__}: {exc}")
    except Exception as exc:  # a crashing checker is a failed entry
        return CheckResult(graph_id, name, "fail", None, f"{type(exc).__name__}: {exc}")
    return CheckResult(graph_id, name, status, None if margin is None else float(margin), detail)


# ---------------------------------------------------------------------------
# sweeps

def _run_chunk(args):
    items, checks, tol = args
    summaries = {c: CheckSummary() for c in checks}
    flagged = []
    count = 0
    for gid, g in _materialize(items):
        count += 1
        for c in checks:
            r = run_check(c, g, gid, tol)
            summaries[c].add(r.status, r.margin)
            if r.status != "pass" and r.status != "skip":
                flagged.append(r)
    laplacian_spectrum.cache_clear()
    return count, summaries, flagged


def _materialize(items) -> Iterator[tuple[str, Graph]]:
    kind, payload = items
    if kind == "masks":
        n, masks = payload
        for mask in masks:
            yield f"n{n}:{int(mask)}", Graph.from_edge_mask(n, int(mask))
    else:
        yield from payload


def enumeration_chunks(n: int, sample: int | None = None, seed: int = 0,
                       chunk: int = 4096) -> Iterator[tuple]:
    total = 1 << (n * (n - 1) // 2)
    if sample is None or sample >= total:
        for lo in range(0, total, chunk):
            yield ("masks", (n, range(lo, min(lo + chunk, total))))
    else:
        masks = np.sort(np.random.default_rng(seed).choice(total, size=sample, replace=False))
        for lo in range(0, sample, chunk):
            yield ("masks", (n, masks[lo:lo + chunk].tolist()))


def graph_chunks(graphs: Iterable[tuple[str, Graph]], chunk: int = 1024) -> Iterator[tuple]:
    buf = []
    for item in graphs:
        buf.append(item)
        if len(buf) >= chunk:
            yield ("graphs", buf)
            buf = []
    if buf:
        yield ("graphs", buf)


def sweep(chunks: Iterable[tuple], checks: list[str], tol: float = DEFAULT_TOL,
          jobs: int | None = None, command: list[str] | None = None) -> RunReport:
    """Run ``checks`` over every graph; the summary does not depend on ``jobs``."""
    jobs = jobs or os.cpu_count() or 1
    t0 = time.perf_counter()
    report = RunReport(command or [], per_check={c: CheckSummary() for c in checks},
                       tolerances={"check_tol": tol})
    work = ((items, checks, tol) for items in chunks)
    if jobs == 1:
        outcomes = map(_run_chunk, work)
        pool = None
    else:
        pool = mp.get_context("fork").Pool(jobs)
        outcomes = pool.imap_unordered(_run_chunk, work)
    try:
        for count, summaries, flagged in outcomes:
            report.graphs += count
            for c, s in summaries.items():
                report.per_check[c].merge(s)
            report.results.extend(flagged)
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    report.results.sort(key=lambda r: (r.graph_id, r.check))
    report.wall_time = time.perf_counter() - t0
    report.extra["jobs"] = jobs
    return report
