"""Simple undirected graphs on at most 64 labeled vertices.

Adjacency is stored as one integer bitmask per vertex.  Edges are indexed in
graph6 order (upper triangle, column-major), so the edge-bitmask integer of a
graph doubles as a stable replay id in enumeration sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import GraphInputError

MAX_VERTICES = 64
MAX_ENUMERATION_N = 7


@lru_cache(maxsize=None)
def edge_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """All vertex pairs (i, j), i < j, in graph6 bit order."""
    return tuple((i, j) for j in range(1, n) for i in range(j))


def pair_index(i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.n <= MAX_VERTICES:
            raise GraphInputError(f"vertex count {self.n} outside 1..{MAX_VERTICES}")
        if len(self.rows) != self.n:
            raise GraphInputError("adjacency rows do not match vertex count")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.rows):
            if row & ~full or (row >> i) & 1:
                raise GraphInputError(f"row {i} has out-of-range bits or a self-loop")
            for j in _bits(row):
                if not (self.rows[j] >> i) & 1:
                    raise GraphInputError(f"adjacency not symmetric at ({i}, {j})")

    @classmethod
    def from_edge_mask(cls, n: int, mask: int) -> Graph:
        rows = [0] * n
        for b, (i, j) in enumerate(edge_pairs(n)):
            if (mask >> b) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
        return cls(n, tuple(rows))

    @property
    def edge_mask(self) -> int:
        mask = 0
        for i, j in self.edges():
            mask |= 1 << pair_index(i, j)
        return mask

    @property
    def m(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.rows[i] >> j) & 1)

    def neighbors(self, i: int) -> list[int]:
        return list(_bits(self.rows[i]))

    def degrees(self) -> list[int]:
        """Degrees in vertex order (not sorted)."""
        return [row.bit_count() for row in self.rows]

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in _bits(self.rows[i] >> (i + 1) << (i + 1))]

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in self.edges():
            a[i, j] = a[j, i] = 1
        return a

    def relabel(self, order: Sequence[int]) -> Graph:
        """Graph whose vertex ``k`` is vertex ``order[k]`` of this graph."""
        pos = {v: k for k, v in enumerate(order)}
        if sorted(pos) != list(range(self.n)):
            raise GraphInputError("order must be a permutation of the vertices")
        return from_edge_list(self.n, [(pos[i], pos[j]) for i, j in self.edges()])


def from_edge_list(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    if not 1 <= n <= MAX_VERTICES:
        raise GraphInputError(f"vertex count {n} outside 1..{MAX_VERTICES}")
    rows = [0] * n
    for e in edges:
        i, j = (int(v) for v in e)
        if not (0 <= i < n and 0 <= j < n):
            raise GraphInputError(f"edge ({i}, {j}) out of range for n={n}")
        if i == j:
            raise GraphInputError(f"self-loop at vertex {i}")
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    return Graph(n, tuple(rows))


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full & ~row & ~(1 << i) for i, row in enumerate(g.rows)))


def _check_pair(g: Graph, i: int, j: int) -> None:
    if not (0 <= i < g.n and 0 <= j < g.n) or i == j:
        raise GraphInputError(f"invalid vertex pair ({i}, {j}) for n={g.n}")


def delete_edge(g: Graph, i: int, j: int) -> Graph:
    _check_pair(g, i, j)
    rows = list(g.rows)
    rows[i] &= ~(1 << j)
    rows[j] &= ~(1 << i)
    return Graph(g.n, tuple(rows))


def add_edge(g: Graph, i: int, j: int) -> Graph:
    _check_pair(g, i, j)
    rows = list(g.rows)
    rows[i] |= 1 << j
    rows[j] |= 1 << i
    return Graph(g.n, tuple(rows))


def degree_sequence(g: Graph) -> tuple[int, ...]:
    """Degrees sorted non-increasing."""
    return tuple(sorted(g.degrees(), reverse=True))


def conjugate_sequence(s: Sequence[int], length: int) -> tuple[int, ...]:
    """Entry k (1-indexed) counts the entries of ``s`` that are at least k."""
    if any(v < 0 for v in s):
        raise ValueError("conjugate_sequence needs non-negative entries")
    counts = [0] * (length + 2)
    for v in s:
        counts[min(v, length + 1)] += 1
    out = []
    running = 0
    for k in range(length + 1, 0, -1):
        running += counts[k]
        if k <= length:
            out.append(running)
    return tuple(reversed(out))


# ---------------------------------------------------------------------------
# named families

def complete_split(N: int, M: int) -> Graph:
    """Clique on vertices 0..N-1, co-clique on N..N+M-1, every cross pair joined."""
    if N < 1 or M < 0 or N + M > MAX_VERTICES:
        raise GraphInputError(f"complete_split({N}, {M}) needs N >= 1, M >= 0, N+M <= {MAX_VERTICES}")
    edges = list(combinations(range(N), 2))
    edges += [(i, N + j) for i in range(N) for j in range(M)]
    return from_edge_list(N + M, edges)


def complete_graph(n: int) -> Graph:
    return from_edge_list(n, combinations(range(n), 2))


def empty_graph(n: int) -> Graph:
    return from_edge_list(n, [])


def path_graph(n: int) -> Graph:
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphInputError("cycle needs at least 3 vertices")
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return complete_split(1, leaves)


def enumerate_labeled(n: int) -> Iterator[Graph]:
    """Every labeled graph on ``n`` vertices, by increasing edge bitmask."""
    if n < 1:
        raise GraphInputError("n must be at least 1")
    if n > MAX_ENUMERATION_N:
        raise GraphInputError(
            f"labeled enumeration is capped at n={MAX_ENUMERATION_N} "
            f"(2^{n * (n - 1) // 2} graphs requested); sweep a graph6 corpus instead"
        )
    for mask in range(1 << (n * (n - 1) // 2)):
        yield Graph.from_edge_mask(n, mask)


# ---------------------------------------------------------------------------
# split partitions

@dataclass(frozen=True)
class SplitPartition:
    """Clique/co-clique witness in the block convention of the split Laplacian.

    With vertices ordered clique first, ``L(G) = [[K_N + D1, -A], [-A^T, D2]]``.
    Since ``K_N`` already carries ``N - 1`` on its diagonal, ``D1`` holds the
    number of co-clique neighbours of each clique vertex, and ``D2`` the
    degrees of the co-clique vertices (all of their neighbours are in the
    clique).  Hence ``Tr(D1) == Tr(D2)`` equals the number of cross edges.
    """

    clique: tuple[int, ...]
    coclique: tuple[int, ...]
    D1: tuple[int, ...]
    D2: tuple[int, ...]
    A: np.ndarray = field(repr=False, compare=False)

    @property
    def N(self) -> int:
        return len(self.clique)

    @property
    def M(self) -> int:
        return len(self.coclique)

    @property
    def delta(self) -> int:
        return max(self.D2, default=0)

    @property
    def order(self) -> tuple[int, ...]:
        return self.clique + self.coclique

    def block_laplacian(self) -> np.ndarray:
        """Assemble the split block form of L(G) in clique-first order."""
        N, M = self.N, self.M
        L = np.zeros((N + M, N + M), dtype=np.int64)
        L[:N, :N] = N * np.eye(N, dtype=np.int64) - 1 + np.diag(self.D1)
        L[:N, N:] = -self.A
        L[N:, :N] = -self.A.T
        L[N:, N:] = np.diag(np.asarray(self.D2, dtype=np.int64).reshape(M))
        return L


def _is_split_pair(g: Graph, clique_mask: int) -> bool:
    full = (1 << g.n) - 1
    co = full & ~clique_mask
    for v in _bits(clique_mask):
        if (g.rows[v] | (1 << v)) & clique_mask != clique_mask:
            return False
    for v in _bits(co):
        if g.rows[v] & co:
            return False
    return True


def partition_from_clique(g: Graph, clique: Iterable[int]) -> SplitPartition:
    """Build the partition with the given clique, validating every pair."""
    V1 = tuple(sorted(set(int(v) for v in clique)))
    if not V1:
        raise GraphInputError("clique must be non-empty")
    if any(not 0 <= v < g.n for v in V1):
        raise GraphInputError("clique vertex out of range")
    V2 = tuple(v for v in range(g.n) if v not in set(V1))
    for a, b in combinations(V1, 2):
        if not g.has_edge(a, b):
            raise GraphInputError(f"clique vertices {a}, {b} are not adjacent")
    for a, b in combinations(V2, 2):
        if g.has_edge(a, b):
            raise GraphInputError(f"co-clique vertices {a}, {b} are adjacent")
    A = np.array([[int(g.has_edge(i, j)) for j in V2] for i in V1], dtype=np.int64).reshape(len(V1), len(V2))
    return SplitPartition(
        clique=V1,
        coclique=V2,
        D1=tuple(int(x) for x in A.sum(axis=1)),
        D2=tuple(int(x) for x in A.sum(axis=0)),
        A=A,
    )


def _degree_split_seed(g: Graph) -> int | None:
    """Clique mask of one split partition, or None if ``g`` is not split.

    Uses the degree-sequence characterization: with degrees sorted
    non-increasing and m = max{i : d_i >= i - 1}, the graph is split iff
    sum_{i<=m} d_i == m(m-1) + sum_{i>m} d_i, and then the m top-degree
    vertices form a clique whose complement is independent.
    """
    deg = g.degrees()
    order = sorted(range(g.n), key=lambda v: (-deg[v], v))
    d = [deg[v] for v in order]
    m = max(i for i in range(1, g.n + 1) if d[i - 1] >= i - 1)
    if sum(d[:m]) != m * (m - 1) + sum(d[m:]):
        return None
    mask = 0
    for v in order[:m]:
        mask |= 1 << v
    return mask


def _sort_key(mask: int) -> tuple[int, list[int]]:
    return (-mask.bit_count(), list(_bits(mask)))


def all_split_partitions(g: Graph) -> list[SplitPartition]:
    """Every split partition with a non-empty clique, largest clique first,
    ties in lexicographic order of the clique.

    Any partition differs from a fixed one (K, I) by moving at most one
    vertex out of K and at most one vertex of I in, so the candidates are
    O(n^2) and each is validated directly.
    """
    seed = _degree_split_seed(g)
    if seed is None:
        return []
    full = (1 << g.n) - 1
    outs = [0] + [1 << v for v in _bits(seed)]
    ins = [0] + [1 << v for v in _bits(full & ~seed)]
    found = set()
    for o in outs:
        for i in ins:
            cand = (seed & ~o) | i
            if cand and cand not in found and _is_split_pair(g, cand):
                found.add(cand)
    return [partition_from_clique(g, _bits(c)) for c in sorted(found, key=_sort_key)]


def split_partition(g: Graph) -> SplitPartition | None:
    """A split partition maximizing the clique size (ties: lexicographically
    smallest clique), or None when ``g`` is not split."""
    parts = all_split_partitions(g)
    return parts[0] if parts else None


def threshold_partition(g: Graph, k: int) -> SplitPartition:
    """Partition with clique {v : deg(v) >= k}; raises if it is not split."""
    return partition_from_clique(g, [v for v, d in enumerate(g.degrees()) if d >= k])
