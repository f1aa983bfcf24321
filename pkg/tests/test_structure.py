"""Structural detectors against explicit constructions and brute force."""

from __future__ import annotations

import random
from itertools import combinations

import pytest

from conftest import (
    brute_bumps,
    brute_near_cliques,
    instance_a,
    instance_b,
    instance_c,
    random_graph,
)
from kdfree.graphs import (
    Graph,
    block_graph,
    clique_structure,
    complete_graph,
    cycle_graph,
    cycle_power,
    strong_product,
)
from kdfree.structure import (
    NEAR_CLIQUE_PATTERNS,
    check_disjoint_max_cliques,
    check_external_neighbours,
    find_bump,
    find_near_clique,
    pipeline_eligibility,
)


def test_disjoint_cliques_witness_on_c5_k2():
    g = strong_product(cycle_graph(5), complete_graph(2))
    witness = check_disjoint_max_cliques(g, clique_structure(g))
    assert witness is not None
    c1, c2 = witness
    assert len(c1) == len(c2) == 4 and len(c1 & c2) == 2


def test_disjoint_cliques_ok_on_blocks():
    g = block_graph(3, 4)
    assert check_disjoint_max_cliques(g, clique_structure(g)) is None


def test_disjoint_cliques_near_miss_overlap():
    # K6 minus one edge: two 5-cliques sharing omega-1 vertices
    edges = [e for e in combinations(range(6), 2) if e != (0, 1)]
    g = Graph(6, edges)
    cs = clique_structure(g)
    witness = check_disjoint_max_cliques(g, cs)
    assert witness is not None
    c1, c2 = witness
    assert len(c1 & c2) == cs.omega - 1


def test_external_neighbours_witness():
    g = block_graph(2, 4, outside=[[0, 1]])
    witness = check_external_neighbours(g, clique_structure(g))
    assert witness is not None
    v, clique, nbrs = witness
    assert v == 8 and nbrs == frozenset({0, 1}) and nbrs <= clique


def test_external_neighbours_ok_with_matching():
    g = block_graph(2, 4, cross_edges=[(0, 4), (1, 5), (2, 6), (3, 7)])
    assert check_external_neighbours(g, clique_structure(g)) is None


def test_external_neighbours_on_c5_k3():
    g = strong_product(cycle_graph(5), complete_graph(3))
    assert check_external_neighbours(g, clique_structure(g)) is not None


def explicit_bump_graph() -> Graph:
    # C = K5 on 0..4, Y = {0,1,2}; 5 ~ {0,1}, 6 ~ {1,2}, 5 ~ 6
    edges = list(combinations(range(5), 2)) + [(0, 5), (1, 5), (1, 6), (2, 6), (5, 6)]
    return Graph(7, edges)


def test_find_bump_explicit():
    g = explicit_bump_graph()
    bump = find_bump(g, clique_structure(g))
    assert bump is not None and bump.validate(g)
    assert bump.clique == frozenset(range(5))
    assert (bump.v1, bump.v2) == (5, 6)


def test_find_bump_none_on_sparse_blocks():
    g = block_graph(2, 5, cross_edges=[(0, 5), (1, 6)])
    assert find_bump(g, clique_structure(g)) is None


def test_find_bump_matches_brute_force():
    rng = random.Random(71)
    for _ in range(60):
        g = random_graph(rng.randint(4, 9), rng.uniform(0.3, 0.8), rng)
        found = find_bump(g, clique_structure(g))
        hits = brute_bumps(g)
        assert (found is not None) == bool(hits)
        if found is not None:
            assert found.validate(g)


def near_clique_host(missing: list[tuple[int, int]], size: int) -> Graph:
    edges = [e for e in combinations(range(size), 2) if e not in missing]
    return Graph(size, edges)


def test_near_clique_matching2():
    g = near_clique_host([(0, 1), (2, 3)], 6)
    assert find_near_clique(g, 6, "matching2") == tuple(range(6))


def test_near_clique_p2_p3():
    g = near_clique_host([(0, 1), (1, 2), (3, 4)], 7)
    assert find_near_clique(g, 7, "P2+P3") == tuple(range(7))


def test_near_clique_two_paths():
    g = near_clique_host([(0, 1), (1, 2), (3, 4), (4, 5)], 7)
    assert find_near_clique(g, 7, "2xP3") == tuple(range(7))


def test_near_clique_p4():
    g = near_clique_host([(0, 1), (1, 2), (2, 3)], 7)
    assert find_near_clique(g, 7, "P4") == tuple(range(7))


def test_near_clique_none_on_disjoint_blocks():
    for delta in (5, 6, 7):
        g = block_graph(2, delta)
        for pattern in NEAR_CLIQUE_PATTERNS:
            assert find_near_clique(g, delta, pattern) is None


def test_near_clique_matches_brute_force():
    rng = random.Random(73)
    for _ in range(40):
        g = random_graph(rng.randint(5, 9), rng.uniform(0.5, 0.9), rng)
        delta = rng.randint(4, max(4, g.n - 1))
        for pattern in NEAR_CLIQUE_PATTERNS:
            found = find_near_clique(g, delta, pattern)
            hits = brute_near_cliques(g, delta, pattern)
            assert (found is not None) == bool(hits)
            if found is not None:
                assert found == min(hits)


def test_near_clique_rejects_unknown_pattern():
    with pytest.raises(ValueError):
        find_near_clique(complete_graph(4), 4, "zigzag")


def test_eligibility_passes_on_block_instances():
    for g in (instance_a(), instance_b(), instance_c()):
        report = pipeline_eligibility(g)
        assert report.passed and report.failures() == []


def test_eligibility_fails_on_exceptional_graphs():
    g = strong_product(cycle_graph(5), complete_graph(2))
    report = pipeline_eligibility(g)
    assert not report.passed
    assert not report.degree_ok  # Delta = 5
    assert report.disjoint_witness is not None

    report = pipeline_eligibility(cycle_power(8, 2))
    assert not report.passed and not report.degree_ok


def test_eligibility_fails_on_complete_graph():
    report = pipeline_eligibility(complete_graph(7))
    assert not report.passed and not report.omega_ok
    assert report.failures()
