"""Shared oracles and strategies.

The oracles here deliberately avoid the package's own algorithms: split
partitions by exhausting every vertex bipartition, spectra via
numpy.linalg.eigvalsh, graph6 via networkx.
"""

from __future__ import annotations

import sys
from itertools import combinations

import numpy as np
import pytest
from hypothesis import strategies as st

from gmcheck.graph import Graph


def brute_split_cliques(g: Graph) -> list[tuple[int, ...]]:
    """Every non-empty V1 such that V1 is a clique and its complement is independent."""
    out = []
    for mask in range(1, 1 << g.n):
        V1 = [v for v in range(g.n) if mask >> v & 1]
        V2 = [v for v in range(g.n) if not mask >> v & 1]
        if all(g.has_edge(a, b) for a, b in combinations(V1, 2)) and \
                not any(g.has_edge(a, b) for a, b in combinations(V2, 2)):
            out.append(tuple(V1))
    return out


def adjacency_oracle(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for i in range(g.n):
        for j in range(g.n):
            if i != j and g.has_edge(i, j):
                a[i, j] = 1.0
    return a


def numpy_laplacian_spectrum(g: Graph) -> np.ndarray:
    a = adjacency_oracle(g)
    return np.linalg.eigvalsh(np.diag(a.sum(axis=1)) - a)[::-1]


def random_split_graph(rng: np.random.Generator, N: int, M: int, p: float = 0.5) -> Graph:
    """Clique on 0..N-1, independent set N..N+M-1, random cross edges."""
    edges = [(i, j) for i in range(N) for j in range(i + 1, N)]
    edges += [(i, N + j) for i in range(N) for j in range(M) if rng.random() < p]
    from gmcheck.graph import from_edge_list
    return from_edge_list(N + M, edges)


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 8):
    n = draw(st.integers(min_n, max_n))
    mask = draw(st.integers(0, (1 << (n * (n - 1) // 2)) - 1))
    return Graph.from_edge_mask(n, mask)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.format_results():
        terminalreporter.write_line(line)
