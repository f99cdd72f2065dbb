"""Tracking the top-N invariant subspace along the split-graph homotopy.

For a split graph with clique size N and co-clique size M, ordered clique
first, the family

    L_alpha = (1 - alpha) * L(complete split graph) + alpha * L(G)

joins the complete-split Laplacian (alpha = 0) to L(G) (alpha = 1).  While
the N-th and (N+1)-th eigenvalues stay apart, the span of the top N
eigenvectors has the normal form [I_N; V(alpha)], V an M x N matrix.  Each
sampled point records the spectral gap, the residual of the entrywise fixed
point equation for V, and the distance of V from the set

    Omega = {V : every column sums to -1, every entry <= 0}.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import GapError, HypothesisError, NumericError
from .graph import Graph, SplitPartition, conjugate_sequence, degree_sequence
from .linalg import EigDecomp, eigh, require_normal_form, top_subspace

HYP_TOL = 1e-8
DEFAULT_GRID = 101
MAX_REFINE_DEPTH = 20
DRIFT_FACTOR = 0.1

CSV_COLUMNS = ("alpha", "gap", "eq1_residual", "omega_entry_margin",
               "omega_colsum_margin", "trace_X", "sum_topN_eigs")


@dataclass(frozen=True)
class HomotopyProblem:
    partition: SplitPartition
    alpha_grid: tuple[float, ...] = tuple(np.linspace(0.0, 1.0, DEFAULT_GRID))

    def __post_init__(self):
        grid = self.alpha_grid
        if len(grid) < 2 or grid[0] != 0.0 or grid[-1] != 1.0:
            raise ValueError("alpha grid must start at 0 and end at 1")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("alpha grid must be strictly increasing")
        if self.partition.M < 1:
            raise ValueError("homotopy needs a non-empty co-clique")

    @property
    def N(self) -> int:
        return self.partition.N

    @property
    def M(self) -> int:
        return self.partition.M

    @property
    def A(self) -> np.ndarray:
        return self.partition.A.astype(np.float64)

    @property
    def D1(self) -> np.ndarray:
        return np.asarray(self.partition.D1, dtype=np.float64)

    @property
    def D2(self) -> np.ndarray:
        return np.asarray(self.partition.D2, dtype=np.float64)

    def target(self) -> np.ndarray:
        """L(G) with vertices in clique-first order."""
        return self.partition.block_laplacian().astype(np.float64)

    def start(self) -> np.ndarray:
        N, M = self.N, self.M
        L0 = np.zeros((N + M, N + M))
        L0[:N, :N] = (N + M) * np.eye(N) - 1.0
        L0[:N, N:] = -1.0
        L0[N:, :N] = -1.0
        L0[N:, N:] = N * np.eye(M)
        return L0


def problem_for(partition: SplitPartition, grid: int | Sequence[float] = DEFAULT_GRID) -> HomotopyProblem:
    if isinstance(grid, int):
        grid = np.linspace(0.0, 1.0, grid)
    return HomotopyProblem(partition, tuple(float(a) for a in grid))


def l_alpha(p: HomotopyProblem, alpha: float) -> np.ndarray:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha={alpha} outside [0, 1]")
    return (1.0 - alpha) * p.start() + alpha * p.target()


def complete_split_spectrum(N: int, M: int) -> list[tuple[int, int]]:
    """(eigenvalue, multiplicity) pairs of the complete split Laplacian."""
    if N < 1 or M < 1:
        raise ValueError("complete_split_spectrum needs N >= 1 and M >= 1")
    out = [(M + N, N), (N, M - 1), (0, 1)]
    return [(v, k) for v, k in out if k > 0]


def eq1_residual(p: HomotopyProblem, alpha: float, V: np.ndarray) -> float:
    """Largest entrywise gap between V and the right-hand side of its
    fixed-point equation

        v_ji = [-(1-a) - a[i~j] + a(f_j v_ji - sum_{i'} sum_{j' !~ i'} v_ji' v_j'i)]
               / [(1-a)M + a(N + d_i)]

    with d_i, f_j the D1, D2 entries.
    """
    N, M = p.N, p.M
    if V.shape != (M, N):
        raise ValueError(f"V must be {M}x{N}, got {V.shape}")
    A = p.A
    nonadj = np.ones((N, M)) - A
    numer = -(1.0 - alpha) - alpha * A.T + alpha * (p.D2[:, None] * V - V @ nonadj @ V)
    denom = (1.0 - alpha) * M + alpha * (N + p.D1)
    return float(np.max(np.abs(V - numer / denom[None, :])))


def omega_membership(V: np.ndarray, tol: float = HYP_TOL) -> tuple[bool, tuple[float, float]]:
    """(V in Omega within tol, (max entry, max |column sum + 1|))."""
    entry = float(V.max())
    colsum = float(np.max(np.abs(V.sum(axis=0) + 1.0)))
    return entry <= tol and colsum <= tol, (entry, colsum)


def x_alpha(p: HomotopyProblem, alpha: float, V: np.ndarray) -> np.ndarray:
    """N x N matrix of L_alpha restricted to span [I; V]:
    K_N + (1-a)M + a D1 - [(1-a)J + a A] V."""
    N, M = p.N, p.M
    K = N * np.eye(N) - 1.0
    return (K + (1.0 - alpha) * M * np.eye(N) + alpha * np.diag(p.D1)
            - ((1.0 - alpha) * np.ones((N, M)) + alpha * p.A) @ V)


@dataclass(frozen=True)
class TracePoint:
    alpha: float
    V: np.ndarray = field(repr=False)
    lam_N: float
    lam_N1: float
    eq1_residual: float
    omega_entry_margin: float
    omega_colsum_margin: float
    trace_X: float
    sum_topN_eigs: float
    invariance_residual: float
    x_eig_deviation: float

    @property
    def gap(self) -> float:
        return self.lam_N - self.lam_N1


def sample(p: HomotopyProblem, alpha: float) -> TracePoint:
    L = l_alpha(p, alpha)
    e = eigh(L)
    N = p.N
    gap = float(e.values[N - 1] - e.values[N])
    try:
        nf = require_normal_form(top_subspace(e, N), f"alpha={alpha}")
    except GapError as exc:
        raise GapError(f"spectral gap collapsed at alpha={alpha}: {gap:.3e}", gap, alpha) from exc
    V = nf.V
    X = x_alpha(p, alpha, V)
    B = nf.basis()
    top = e.values[:N]
    x_eigs = np.sort(np.linalg.eigvals(X).real)[::-1]
    _, (entry, colsum) = omega_membership(V)
    return TracePoint(
        alpha=float(alpha),
        V=V,
        lam_N=float(e.values[N - 1]),
        lam_N1=float(e.values[N]),
        eq1_residual=eq1_residual(p, alpha, V),
        omega_entry_margin=entry,
        omega_colsum_margin=colsum,
        trace_X=float(np.trace(X)),
        sum_topN_eigs=float(top.sum()),
        invariance_residual=float(np.max(np.abs(L @ B - B @ X))),
        x_eig_deviation=float(np.max(np.abs(x_eigs - top))),
    )


@dataclass
class HomotopyTrace:
    problem: HomotopyProblem
    points: list[TracePoint]
    refinements: int = 0
    unresolved_drift: int = 0

    @property
    def min_gap(self) -> float:
        return min(pt.gap for pt in self.points)

    @property
    def max_eq1_residual(self) -> float:
        return max(pt.eq1_residual for pt in self.points)

    @property
    def max_omega_entry(self) -> float:
        return max(pt.omega_entry_margin for pt in self.points)

    @property
    def max_omega_colsum(self) -> float:
        return max(pt.omega_colsum_margin for pt in self.points)

    @property
    def max_trace_deviation(self) -> float:
        return max(abs(pt.trace_X - pt.sum_topN_eigs) for pt in self.points)

    @property
    def final(self) -> TracePoint:
        return self.points[-1]

    def invariants(self, tol: float = HYP_TOL) -> dict[str, bool]:
        N, M = self.problem.N, self.problem.M
        inner = [pt for pt in self.points if pt.alpha < 1.0]
        return {
            "gap_positive": self.min_gap > 0.0,
            "upper_block_at_most_N": all(pt.lam_N1 <= N + tol for pt in inner),
            "lambda_N_above_N": all(pt.lam_N > N - tol for pt in inner),
            "lambda_N_strict_interior": all(pt.lam_N > N for pt in inner if pt.alpha > 0.0),
            "omega": self.max_omega_entry <= tol and self.max_omega_colsum <= tol,
            "eq1": self.max_eq1_residual <= 1e-7,
            "trace_identity": self.max_trace_deviation <= 1e-7,
            "invariance": max(pt.invariance_residual for pt in self.points) <= tol,
            "x_eigenvalues": max(pt.x_eig_deviation for pt in self.points) <= 1e-7,
            "start_is_uniform": bool(np.max(np.abs(self.points[0].V + 1.0 / M)) <= 1e-9),
            "continuous": self.unresolved_drift == 0,
        }

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for pt in self.points:
                w.writerow([repr(pt.alpha), repr(pt.gap), repr(pt.eq1_residual),
                            repr(pt.omega_entry_margin), repr(pt.omega_colsum_margin),
                            repr(pt.trace_X), repr(pt.sum_topN_eigs)])


def key_lemma_hypothesis(lam: Sequence[float], N: int, delta: int, tol: float = HYP_TOL) -> bool:
    """lambda_N > N, or lambda_N = N > delta (delta is an integer)."""
    lam_N = lam[N - 1]
    return lam_N >= N + tol or (abs(lam_N - N) <= tol and delta <= N - 1)


def _check_hypothesis(p: HomotopyProblem) -> EigDecomp:
    e = eigh(p.target(), laplacian=True)
    if not key_lemma_hypothesis(e.values, p.N, p.partition.delta):
        raise HypothesisError(
            f"lambda_N = {e.values[p.N - 1]:.12g} with N = {p.N}, delta = {p.partition.delta}: "
            "needs lambda_N > N or lambda_N = N > delta")
    return e


def track(p: HomotopyProblem, *, drift_factor: float = DRIFT_FACTOR,
          max_depth: int = MAX_REFINE_DEPTH) -> HomotopyTrace:
    _check_hypothesis(p)
    trace = HomotopyTrace(p, [sample(p, p.alpha_grid[0])])

    def fill(prev: TracePoint, nxt: TracePoint, depth: int) -> None:
        drift = float(np.max(np.abs(nxt.V - prev.V)))
        cap = drift_factor * (1.0 + float(np.max(np.abs(prev.V))))
        if drift <= cap or depth >= max_depth:
            if drift > cap:
                trace.unresolved_drift += 1
            trace.points.append(nxt)
            return
        trace.refinements += 1
        mid = sample(p, 0.5 * (prev.alpha + nxt.alpha))
        fill(prev, mid, depth + 1)
        fill(mid, nxt, depth + 1)

    for alpha in p.alpha_grid[1:]:
        fill(trace.points[-1], sample(p, alpha), 0)
    return trace


@dataclass(frozen=True)
class KeyLemmaReport:
    N: int
    M: int
    sum_top_eigs: float        # directly from the spectrum of L(G)
    trace_X1: float            # N(N-1) + Tr(D1) - Tr(A V(1))
    trace_AV: float
    bound: int                 # N^2 + Tr(D1)
    dprime_sum: int            # sum_{i<=N} d'_i
    trace: HomotopyTrace = field(repr=False)

    def checks(self, tol: float = 1e-6) -> dict[str, bool]:
        return {
            "direct_vs_trace": abs(self.sum_top_eigs - self.trace_X1) <= tol,
            "direct_below_bound": self.sum_top_eigs <= self.bound + tol,
            "trace_below_bound": self.trace_X1 <= self.bound + tol,
            "trace_AV_at_least_minus_N": self.trace_AV >= -self.N - HYP_TOL,
            "bound_is_dprime_sum": self.bound == self.dprime_sum,
        }

    def holds(self, tol: float = 1e-6) -> bool:
        return all(self.checks(tol).values()) and all(self.trace.invariants().values())


def key_lemma_check(g: Graph, p: SplitPartition,
                    grid: int | Sequence[float] = DEFAULT_GRID) -> KeyLemmaReport:
    prob = problem_for(p, grid)
    if not np.array_equal(p.block_laplacian(), _permuted_laplacian(g, p.order)):
        raise ValueError("partition does not describe this graph")
    e = _check_hypothesis(prob)
    trace = track(prob)
    N = p.N
    V1 = trace.final.V
    if trace.final.alpha != 1.0:
        raise NumericError("trace did not reach alpha = 1")
    tr_av = float(np.trace(prob.A @ V1))
    dp = conjugate_sequence(degree_sequence(g), g.n)
    return KeyLemmaReport(
        N=N,
        M=p.M,
        sum_top_eigs=float(e.values[:N].sum()),
        trace_X1=N * (N - 1) + sum(p.D1) - tr_av,
        trace_AV=tr_av,
        bound=N * N + sum(p.D1),
        dprime_sum=sum(dp[:N]),
        trace=trace,
    )


def _permuted_laplacian(g: Graph, order: Sequence[int]) -> np.ndarray:
    a = g.adjacency()[np.ix_(order, order)]
    return np.diag(a.sum(axis=1)) - a
