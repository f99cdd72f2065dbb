"""Majorization checks on Laplacian spectra and (conjugate) degree sequences.

Degree-side quantities stay in exact integers; only the eigenvalue side is
floating point.  Prefix slacks are compared against ``-tol`` and the total
sums against ``tol * max(1, total)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import accumulate
from typing import Sequence

import numpy as np

from .errors import GraphInputError, HypothesisError, SkipCheck
from .graph import (
    Graph,
    SplitPartition,
    complement,
    conjugate_sequence,
    degree_sequence,
    delete_edge,
    from_edge_list,
    partition_from_clique,
)
from .linalg import eigh

DEFAULT_TOL = 1e-8


def laplacian(g: Graph, dtype=np.float64) -> np.ndarray:
    L = -g.adjacency().astype(dtype)
    L[np.diag_indices(g.n)] = g.degrees()
    return L


@lru_cache(maxsize=1 << 16)
def laplacian_spectrum(g: Graph) -> tuple[float, ...]:
    """Non-increasing Laplacian eigenvalues (memoized per graph)."""
    return tuple(float(x) for x in eigh(laplacian(g), laplacian=True).values)


def conjugate_degrees(g: Graph) -> tuple[int, ...]:
    return conjugate_sequence(degree_sequence(g), g.n)


@dataclass(frozen=True)
class MajorizationReport:
    k_prefix_slack: tuple[float, ...]
    sum_gap: float
    holds: bool
    first_violation: int | None = None

    @property
    def min_slack(self) -> float:
        return min(self.k_prefix_slack, default=0.0)


def majorizes(x: Sequence[float], y: Sequence[float], tol: float = DEFAULT_TOL,
              sum_tol: float | None = None) -> MajorizationReport:
    """Report on ``x`` being majorized by ``y`` (both sorted non-increasing first).

    ``k_prefix_slack[k-1]`` is the k-th prefix sum of ``y`` minus that of ``x``.
    """
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    sum_tol = tol if sum_tol is None else sum_tol
    px = list(accumulate(sorted(x, reverse=True)))
    py = list(accumulate(sorted(y, reverse=True)))
    slack = tuple(b - a for a, b in zip(px, py))
    sum_gap = abs(py[-1] - px[-1]) if px else 0.0
    first = next((k + 1 for k, s in enumerate(slack) if s < -tol), None)
    if first is None and sum_gap > sum_tol:
        first = len(slack)
    return MajorizationReport(slack, float(sum_gap), first is None, first)


@dataclass(frozen=True)
class ConjectureReport:
    graph_id: int
    spectrum: tuple[float, ...]
    dprime: tuple[int, ...]
    report: MajorizationReport

    @property
    def margins(self) -> tuple[float, ...]:
        """sum_{i<=k} d'_i - sum_{i<=k} lambda_i for k = 1..n."""
        return self.report.k_prefix_slack

    @property
    def holds(self) -> bool:
        return self.report.holds


def _sum_tol(tol: float, total: float) -> float:
    return tol * max(1.0, abs(total))


def check_grone_merris(g: Graph, tol: float = DEFAULT_TOL) -> ConjectureReport:
    lam = laplacian_spectrum(g)
    dp = conjugate_degrees(g)
    rep = majorizes(lam, dp, tol, _sum_tol(tol, 2 * g.m))
    return ConjectureReport(g.edge_mask, lam, dp, rep)


def gm_margins(g: Graph) -> tuple[float, ...]:
    return check_grone_merris(g).margins


def margin(g: Graph, k: int) -> float:
    """k-th Grone-Merris margin; the empty prefix (k = 0) has margin 0."""
    if k == 0:
        return 0.0
    return gm_margins(g)[k - 1]


def check_double_majorization(g: Graph, tol: float = DEFAULT_TOL):
    """(d majorized by lambda, lambda majorized by d')."""
    lam = laplacian_spectrum(g)
    st = _sum_tol(tol, 2 * g.m)
    return (majorizes(degree_sequence(g), lam, tol, st),
            majorizes(lam, conjugate_degrees(g), tol, st))


def grone_sequence(g: Graph, literal: bool = False) -> tuple[int, ...]:
    """Sorted degrees with the largest raised by one and the smallest
    positive one lowered by one.

    ``literal=True`` lowers d_n instead, which differs only when ``g`` has an
    isolated vertex; that form is false there (an edge plus an isolated
    vertex gives (2, 0, -1) against lambda = (2, 0, 0)).
    """
    d = list(degree_sequence(g))
    s = len(d) if literal else sum(1 for x in d if x > 0)
    d[0] += 1
    d[s - 1] -= 1
    return tuple(d)


def check_grone_bound(g: Graph, tol: float = DEFAULT_TOL, literal: bool = False) -> MajorizationReport:
    """Grone's bound: the modified degree sequence is majorized by lambda."""
    if g.m == 0:
        raise HypothesisError("Grone's bound needs at least one edge")
    return majorizes(grone_sequence(g, literal), laplacian_spectrum(g), tol, _sum_tol(tol, 2 * g.m))


def check_fan(h1, h2, tol: float = DEFAULT_TOL) -> MajorizationReport:
    """lambda(H1 + H2) majorized by lambda(H1) + lambda(H2)."""
    h1 = np.asarray(h1, dtype=np.float64)
    h2 = np.asarray(h2, dtype=np.float64)
    if h1.shape != h2.shape:
        raise ValueError(f"dimension mismatch: {h1.shape} vs {h2.shape}")
    lhs = eigh(h1 + h2).values
    rhs = eigh(h1).values + eigh(h2).values
    scale = np.linalg.norm(h1) + np.linalg.norm(h2)
    return majorizes(lhs, rhs, tol, _sum_tol(tol, scale))


def edge_laplacian(n: int, i: int, j: int) -> np.ndarray:
    return laplacian(from_edge_list(n, [(i, j)]))


# ---------------------------------------------------------------------------
# complementation

@dataclass(frozen=True)
class ComplementDuality:
    matrix_identity: bool
    spectrum_deviation: float
    dprime_identity: bool

    def holds(self, tol: float = DEFAULT_TOL) -> bool:
        return self.matrix_identity and self.dprime_identity and self.spectrum_deviation <= tol


def complement_duality(g: Graph) -> ComplementDuality:
    n = g.n
    if n < 2:
        raise GraphInputError("complement duality needs n >= 2")
    gc = complement(g)
    ones = np.ones((n, n), dtype=np.int64)
    matrix_ok = np.array_equal(
        laplacian(g, np.int64) + laplacian(gc, np.int64) + ones, n * np.eye(n, dtype=np.int64))
    lam, lam_c = laplacian_spectrum(g), laplacian_spectrum(gc)
    predicted = [n - lam[i] for i in range(n - 2, -1, -1)] + [0.0]
    dev = max(abs(a - b) for a, b in zip(lam_c, predicted))
    dp, dp_c = conjugate_degrees(g), conjugate_degrees(gc)
    dp_ok = list(dp_c) == [n - dp[i] for i in range(n - 2, -1, -1)] + [0]
    return ComplementDuality(bool(matrix_ok), float(dev), dp_ok)


def check_complement_duality(g: Graph, tol: float = DEFAULT_TOL) -> bool:
    return complement_duality(g).holds(tol)


def prefix_duality_gap(g: Graph, k: int) -> float:
    """|margin_k(G) - margin_{n-1-k}(complement of G)|."""
    if not 1 <= k < g.n:
        raise ValueError(f"k={k} outside 1..{g.n - 1}")
    return abs(margin(g, k) - margin(complement(g), g.n - 1 - k))


def check_prefix_duality(g: Graph, k: int, tol: float = DEFAULT_TOL) -> bool:
    return prefix_duality_gap(g, k) <= tol


# ---------------------------------------------------------------------------
# split graphs

@dataclass(frozen=True)
class SplitBounds:
    N: int
    M: int
    delta: int
    lower: float | None        # lambda_{N-1} - N, None when N == 1
    upper: float | None        # delta - lambda_{N+1}, None when M == 0
    identity_applies: bool     # lambda_N >= N - tol
    dprime_identity: bool | None
    minsum_identity: bool | None

    def holds(self, tol: float = DEFAULT_TOL) -> bool:
        ok = self.delta <= self.N
        ok &= self.lower is None or self.lower >= -tol
        ok &= self.upper is None or self.upper >= -tol
        if self.identity_applies:
            ok &= bool(self.dprime_identity) and bool(self.minsum_identity)
        return bool(ok)


def split_bounds(g: Graph, p: SplitPartition, tol: float = DEFAULT_TOL) -> SplitBounds:
    fresh = partition_from_clique(g, p.clique)
    if fresh.coclique != p.coclique or fresh.D1 != p.D1 or fresh.D2 != p.D2:
        raise GraphInputError("partition does not describe this graph")
    lam = laplacian_spectrum(g)
    N, M = p.N, p.M
    lower = lam[N - 2] - N if N >= 2 else None
    upper = p.delta - lam[N] if M >= 1 else None
    applies = lam[N - 1] >= N - tol
    dp_id = ms_id = None
    if applies:
        dp = conjugate_degrees(g)
        dp_id = sum(dp[:N]) == N * N + sum(p.D1)
        ms_id = sum(min(d, N) for d in g.degrees()) == N * N + sum(p.D2)
    return SplitBounds(N, M, p.delta, lower, upper, applies, dp_id, ms_id)


def check_split_bounds(g: Graph, p: SplitPartition, tol: float = DEFAULT_TOL) -> bool:
    return split_bounds(g, p, tol).holds(tol)


# ---------------------------------------------------------------------------
# edge deletion and the split closure

def qualifying_edges(g: Graph, k: int) -> list[tuple[int, int]]:
    d = g.degrees()
    return [(i, j) for i, j in g.edges() if d[i] <= k and d[j] <= k]


@dataclass(frozen=True)
class EdgeDeletionBound:
    edge: tuple[int, int]
    k: int
    fan_slack: float   # sum_{i<=k} lambda(G - e) + 2 - sum_{i<=k} lambda(G)
    dprime_drop: int   # sum_{i<=k} d'(G) - sum_{i<=k} d'(G - e)


def edge_deletion_bounds(g: Graph, k: int, edge: tuple[int, int] | None = None) -> list[EdgeDeletionBound]:
    """Fan bound for deleting an edge whose endpoints both have degree <= k."""
    if not 1 <= k <= g.n:
        raise ValueError(f"k={k} outside 1..{g.n}")
    cands = qualifying_edges(g, k)
    if edge is not None:
        e = tuple(sorted(edge))
        if e not in cands:
            raise SkipCheck(f"edge {edge} does not join two vertices of degree <= {k}")
        cands = [e]
    if not cands:
        raise SkipCheck(f"no edge joins two vertices of degree <= {k}")
    lam = laplacian_spectrum(g)
    dp = conjugate_degrees(g)
    out = []
    for i, j in cands:
        h = delete_edge(g, i, j)
        lam_h = laplacian_spectrum(h)
        dp_h = conjugate_degrees(h)
        out.append(EdgeDeletionBound(
            (i, j), k,
            sum(lam_h[:k]) + 2 - sum(lam[:k]),
            sum(dp[:k]) - sum(dp_h[:k]),
        ))
    return out


def check_degree_threshold_lemma(g: Graph, k: int, edge: tuple[int, int] | None = None,
                                 tol: float = DEFAULT_TOL) -> bool:
    return all(b.fan_slack >= -tol and b.dprime_drop == 2 for b in edge_deletion_bounds(g, k, edge))


def split_closure(g: Graph, k: int) -> Graph:
    """Join every non-adjacent pair of vertices that both have degree >= k."""
    if not 1 <= k < g.n:
        raise ValueError(f"k={k} outside 1..{g.n - 1}")
    d = g.degrees()
    high = 0
    for v in range(g.n):
        if d[v] >= k:
            high |= 1 << v
    rows = tuple(row | (high & ~(1 << v)) if (high >> v) & 1 else row for v, row in enumerate(g.rows))
    return Graph(g.n, rows)


@dataclass(frozen=True)
class SplitClosure:
    k: int
    closure: Graph
    premise: bool            # no edge of G joins two vertices of degree < k
    split_ok: bool           # threshold partition of the closure is split, |V1| = d'_k, delta <= k-1
    dprime_preserved: bool   # d'_i unchanged for i <= k
    min_eigen_increase: float

    def holds(self, tol: float = DEFAULT_TOL) -> bool:
        return self.split_ok and self.dprime_preserved and self.min_eigen_increase >= -tol


def split_closure_report(g: Graph, k: int) -> SplitClosure:
    gh = split_closure(g, k)
    d = g.degrees()
    low = [v for v in range(g.n) if d[v] < k]
    premise = not any(g.has_edge(a, b) for a in low for b in low if a < b)
    dp, dp_h = conjugate_degrees(g), conjugate_degrees(gh)
    clique = [v for v in range(g.n) if d[v] >= k]
    if not clique:
        split_ok = gh.m == 0 and dp[k - 1] == 0
    else:
        try:
            p = partition_from_clique(gh, clique)
            split_ok = p.N == dp[k - 1] and p.delta <= k - 1
        except GraphInputError:
            split_ok = False
    lam, lam_h = laplacian_spectrum(g), laplacian_spectrum(gh)
    return SplitClosure(
        k, gh, premise, split_ok,
        dp[:k] == dp_h[:k],
        float(min(b - a for a, b in zip(lam, lam_h))),
    )
