import numpy as np
import pytest
from hypothesis import given, settings

from conftest import graphs, numpy_laplacian_spectrum, random_split_graph
from gmcheck.errors import GraphInputError, HypothesisError, SkipCheck
from gmcheck.graph import (
    complement,
    complete_graph,
    complete_split,
    cycle_graph,
    degree_sequence,
    delete_edge,
    empty_graph,
    enumerate_labeled,
    from_edge_list,
    partition_from_clique,
    path_graph,
    star_graph,
)
from gmcheck.majorization import (
    check_complement_duality,
    check_degree_threshold_lemma,
    check_double_majorization,
    check_fan,
    check_grone_bound,
    check_grone_merris,
    check_prefix_duality,
    check_split_bounds,
    complement_duality,
    conjugate_degrees,
    edge_deletion_bounds,
    edge_laplacian,
    grone_sequence,
    laplacian,
    laplacian_spectrum,
    majorizes,
    margin,
    split_bounds,
    split_closure,
    split_closure_report,
)

P3 = path_graph(3)


def approx(seq, expected, tol=1e-9):
    return len(seq) == len(expected) and all(abs(a - b) <= tol for a, b in zip(seq, expected))


def test_laplacian_examples():
    assert laplacian(complete_graph(2)).tolist() == [[1, -1], [-1, 1]]
    assert not laplacian(empty_graph(3)).any()
    assert laplacian(P3).tolist() == [[1, -1, 0], [-1, 2, -1], [0, -1, 1]]


def test_spectrum_matches_numpy_oracle():
    for g in enumerate_labeled(5):
        assert approx(laplacian_spectrum(g), numpy_laplacian_spectrum(g), 1e-10)


# --- majorization ---------------------------------------------------------

def test_majorizes_examples():
    r = majorizes((2, 2, 0), (3, 1, 0))
    assert r.holds and r.k_prefix_slack == (1, 0, 0)
    r = majorizes((3, 1, 0), (2, 2, 0))
    assert not r.holds and r.first_violation == 1
    r = majorizes((4, 1, 1, 0), (4, 1, 1, 0))
    assert r.holds and all(s == 0 for s in r.k_prefix_slack)


def test_majorizes_unsorted_and_total_mismatch():
    assert majorizes((0, 2, 2), (1, 0, 3)).holds
    r = majorizes((1, 1), (2, 1))
    assert not r.holds and r.sum_gap == 1


def test_majorizes_length_mismatch():
    with pytest.raises(ValueError):
        majorizes((1,), (1, 0))


# --- Grone-Merris ---------------------------------------------------------

@pytest.mark.parametrize("g, lam, dp", [
    (star_graph(3), (4, 1, 1, 0), (4, 1, 1, 0)),
    (complete_graph(3), (3, 3, 0), (3, 3, 0)),
    (P3, (3, 1, 0), (3, 1, 0)),
])
def test_grone_merris_examples(g, lam, dp):
    r = check_grone_merris(g)
    assert r.holds
    assert approx(r.spectrum, lam) and r.dprime == dp
    assert all(abs(m) <= 1e-9 for m in r.margins)


def test_margin_definition():
    g = cycle_graph(4)   # lambda = (4, 2, 2, 0), d' = (4, 4, 0, 0)
    assert approx([margin(g, k) for k in range(5)], [0, 0, 2, 0, 0])


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_grone_merris_small_enumeration(n):
    assert all(check_grone_merris(g).holds for g in enumerate_labeled(n))


@pytest.mark.parametrize("g, d, lam, dp", [
    (complete_graph(4), (3, 3, 3, 3), (4, 4, 4, 0), (4, 4, 4, 0)),
    (empty_graph(3), (0, 0, 0), (0, 0, 0), (0, 0, 0)),
    (cycle_graph(4), (2, 2, 2, 2), (4, 2, 2, 0), (4, 4, 0, 0)),
])
def test_double_majorization_examples(g, d, lam, dp):
    lo, hi = check_double_majorization(g)
    assert lo.holds and hi.holds
    assert degree_sequence(g) == d and conjugate_degrees(g) == dp
    assert approx(laplacian_spectrum(g), lam)


def test_c4_spectrum_circulant_formula():
    ref = sorted((2 - 2 * np.cos(2 * np.pi * j / 4) for j in range(4)), reverse=True)
    assert approx(laplacian_spectrum(cycle_graph(4)), ref)


# --- Grone's bound --------------------------------------------------------

@pytest.mark.parametrize("g, seq", [
    (complete_graph(2), (2, 0)),
    (P3, (3, 1, 0)),
    (complete_graph(4), (4, 3, 3, 2)),
])
def test_grone_examples(g, seq):
    assert grone_sequence(g) == seq == grone_sequence(g, literal=True)
    assert check_grone_bound(g).holds


def test_grone_edgeless_rejected():
    with pytest.raises(HypothesisError):
        check_grone_bound(empty_graph(3))


def test_grone_isolated_vertex():
    # K2 plus an isolated vertex: lambda = (2, 0, 0)
    g = from_edge_list(3, [(0, 1)])
    assert grone_sequence(g, literal=True) == (2, 1, -1)
    assert not check_grone_bound(g, literal=True).holds
    assert grone_sequence(g) == (2, 0, 0)
    assert check_grone_bound(g).holds


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_grone_literal_form_fails_exactly_with_isolated_vertices(n):
    for g in enumerate_labeled(n):
        if g.m == 0:
            continue
        assert check_grone_bound(g).holds
        isolated = min(g.degrees()) == 0
        assert check_grone_bound(g, literal=True).holds != isolated


# --- Fan ------------------------------------------------------------------

def test_fan_zero_is_equality(rng):
    h = rng.standard_normal((5, 5))
    h = h + h.T
    r = check_fan(h, np.zeros((5, 5)))
    assert r.holds and max(abs(s) for s in r.k_prefix_slack) < 1e-10


def test_fan_edge_deletion_instance():
    g = complete_split(2, 3)
    e = (0, 2)
    h1 = laplacian(delete_edge(g, *e))
    r = check_fan(h1, edge_laplacian(g.n, *e))
    assert r.holds
    # lambda(G) majorized by lambda(G - e) + (2, 0, ..., 0)
    lam_h = list(laplacian_spectrum(delete_edge(g, *e)))
    lam_h[0] += 2
    assert majorizes(laplacian_spectrum(g), lam_h).holds


def test_fan_random_pairs(rng):
    for _ in range(100):
        a, b = rng.standard_normal((2, 5, 5))
        assert check_fan(a + a.T, b + b.T).holds


def test_fan_dimension_mismatch():
    with pytest.raises(ValueError):
        check_fan(np.eye(2), np.eye(3))


# --- complement -----------------------------------------------------------

def test_complement_duality_p3():
    assert approx(laplacian_spectrum(complement(P3)), (2, 0, 0))
    assert check_complement_duality(P3)


def test_complement_duality_complete():
    for n in range(2, 7):
        assert approx(laplacian_spectrum(complement(complete_graph(n))), [0] * n)
        assert check_complement_duality(complete_graph(n))


def test_complement_duality_c5():
    c = complement_duality(cycle_graph(5))
    assert c.matrix_identity and c.dprime_identity and c.spectrum_deviation < 1e-12


def test_complement_duality_requires_two_vertices():
    with pytest.raises(GraphInputError):
        complement_duality(empty_graph(1))


def test_prefix_duality_examples():
    assert check_prefix_duality(P3, 1)
    assert abs(margin(P3, 1)) < 1e-12
    g = cycle_graph(5)
    # k = n-1 pairs with the empty prefix of the complement; both margins vanish
    assert abs(margin(g, 4)) < 1e-12 and check_prefix_duality(g, 4)
    with pytest.raises(ValueError):
        check_prefix_duality(P3, 3)


@settings(max_examples=50)
@given(graphs(min_n=6, max_n=6))
def test_prefix_duality_random_n6(g):
    assert all(check_prefix_duality(g, k) for k in range(1, 6))


# --- split bounds ---------------------------------------------------------

def test_split_bounds_complete_split_2_2():
    g = complete_split(2, 2)
    p = partition_from_clique(g, [0, 1])
    # brute force both sides of the identity: d' = (4, 4, 2, 0)
    dp = [sum(1 for d in g.degrees() if d >= k) for k in range(1, 5)]
    assert dp == [4, 4, 2, 0]
    assert p.D1 == (2, 2)
    assert dp[0] + dp[1] == 8 == p.N ** 2 + sum(p.D1)
    b = split_bounds(g, p)
    assert b.lower == 4 - 2 and b.upper == 2 - 2
    assert b.identity_applies and b.dprime_identity and b.minsum_identity
    assert check_split_bounds(g, p)


def test_split_bounds_star():
    g = star_graph(3)
    p = partition_from_clique(g, [0])
    b = split_bounds(g, p)
    assert b.lower is None and abs(b.upper) < 1e-12
    assert b.dprime_identity and conjugate_degrees(g)[0] == 4 == 1 + sum(p.D1)


def test_split_bounds_complete_graph():
    g = complete_graph(5)
    b = split_bounds(g, partition_from_clique(g, range(5)))
    assert b.upper is None and b.lower >= 0 and b.holds()


def test_split_bounds_invalid_partition():
    p = partition_from_clique(complete_split(2, 2), [0, 1])
    with pytest.raises(GraphInputError):
        check_split_bounds(complete_split(2, 3), p)


def test_split_bounds_random(rng):
    for _ in range(200):
        N, M = (int(x) for x in rng.integers(1, 6, size=2))
        g = random_split_graph(rng, N, M, float(rng.random()))
        assert check_split_bounds(g, partition_from_clique(g, range(N)))


# --- edge deletion --------------------------------------------------------

def test_degree_threshold_p3():
    b, = edge_deletion_bounds(P3, 2, (0, 1))
    # lambda(P3) = (3, 1, 0); lambda(K2 + K1) = (2, 0, 0): 4 <= 2 + 2
    assert abs(b.fan_slack) < 1e-12 and b.dprime_drop == 2
    assert check_degree_threshold_lemma(P3, 2)


def test_degree_threshold_k2():
    b, = edge_deletion_bounds(complete_graph(2), 1)
    assert b.dprime_drop == 2
    assert conjugate_degrees(complete_graph(2))[0] == 2


def test_degree_threshold_skip():
    with pytest.raises(SkipCheck):
        edge_deletion_bounds(complete_graph(4), 2)
    with pytest.raises(SkipCheck):
        edge_deletion_bounds(P3, 2, (0, 2))


@settings(max_examples=50)
@given(graphs(min_n=6, max_n=6))
def test_degree_threshold_random_n6(g):
    for k in range(1, 7):
        try:
            assert check_degree_threshold_lemma(g, k)
        except SkipCheck:
            pass


# --- split closure --------------------------------------------------------

def test_closure_fixed_point():
    g = complete_split(3, 2)   # clique degrees 4, co-clique degrees 3
    assert split_closure(g, 4) == g
    assert split_closure_report(g, 4).holds()


def test_closure_p4():
    g = path_graph(4)
    gh = split_closure(g, 2)
    # vertices 1 and 2 already adjacent, so nothing changes; the report
    # still certifies the split structure and d' preservation
    assert gh == g
    r = split_closure_report(g, 2)
    assert r.premise and r.split_ok and r.dprime_preserved and r.holds()


def test_closure_adds_edges():
    g = from_edge_list(5, [(0, 2), (0, 3), (1, 3), (1, 4)])   # P5 relabeled: 2-0-3-1-4
    gh = split_closure(g, 2)
    assert gh.has_edge(0, 1) and gh.m == g.m + 1
    r = split_closure_report(g, 2)
    assert r.holds() and r.min_eigen_increase >= -1e-12


def test_closure_empty_graph():
    g = empty_graph(4)
    for k in range(1, 4):
        assert split_closure(g, k) == g
        assert split_closure_report(g, k).holds()


def test_closure_needs_premise():
    # C4 with k=3: no vertex reaches degree 3, nothing is added, C4 is not split
    r = split_closure_report(cycle_graph(4), 3)
    assert not r.premise and not r.split_ok
    assert r.dprime_preserved and r.min_eigen_increase >= 0


def test_closure_premise_implies_claim():
    for n in range(2, 6):
        for g in enumerate_labeled(n):
            for k in range(1, n):
                r = split_closure_report(g, k)
                assert r.dprime_preserved and r.min_eigen_increase >= -1e-8
                if r.premise:
                    assert r.split_ok


def test_closure_k_range():
    with pytest.raises(ValueError):
        split_closure(P3, 3)
