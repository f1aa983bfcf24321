"""Exact LP: pricing oracle, column generation, duality, theorem suites."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from conftest import (
    brute_independence_number,
    brute_max_weight_stable,
    random_graph,
    random_weights,
)
from kdfree.errors import HypothesisViolated
from kdfree.graphs import (
    Graph,
    block_graph,
    clique_structure,
    complete_graph,
    cycle_graph,
    cycle_power,
    strong_product,
)
from kdfree.intervals import verify_certificate
from kdfree.lp import (
    chi_f,
    chi_f_brute_force,
    chi_f_weighted,
    max_weight_stable_set,
    verify_aharoni,
    verify_reed_bounds,
)

F = Fraction
ONE = F(1)


def ones(n: int) -> list[Fraction]:
    return [ONE] * n


def test_mwis_complete_graph():
    s, value = max_weight_stable_set(complete_graph(6), ones(6))
    assert value == 1 and s == frozenset({0})


def test_mwis_c5():
    s, value = max_weight_stable_set(cycle_graph(5), ones(5))
    assert value == 2 and s == frozenset({0, 2})


def test_mwis_c11_squared():
    g = cycle_power(11, 2)
    _, value = max_weight_stable_set(g, ones(11))
    assert value == brute_independence_number(g) == 3


def test_mwis_lexicographic_ties():
    g = cycle_graph(4)  # maximisers {0,2} and {1,3}
    s, value = max_weight_stable_set(g, ones(4))
    assert value == 2 and s == frozenset({0, 2})


def test_mwis_ignores_zero_weight_vertices():
    g = Graph(3, [(0, 1)])
    s, value = max_weight_stable_set(g, [F(0), ONE, F(2)])
    assert value == 3 and s == frozenset({1, 2})


def test_mwis_matches_brute_force_on_randoms():
    rng = random.Random(41)
    for _ in range(40):
        g = random_graph(rng.randint(1, 9), rng.uniform(0.2, 0.8), rng)
        w = random_weights(g.n, rng)
        _, value = max_weight_stable_set(g, w)
        assert value == brute_max_weight_stable(g, w)


@pytest.mark.parametrize("n", [1, 2, 4, 6])
def test_chi_f_complete(n):
    assert chi_f(complete_graph(n)).value == n


def test_chi_f_named_pair():
    assert chi_f(cycle_power(8, 2)).value == 4
    assert chi_f(strong_product(cycle_graph(5), complete_graph(2))).value == 5


def test_chi_f_c7_k2():
    assert chi_f(strong_product(cycle_graph(7), complete_graph(2))).value == F(14, 3)


def test_chi_f_empty_and_edgeless():
    assert chi_f(Graph(0)).value == 0
    assert chi_f(Graph(4)).value == 1


def test_strong_duality_and_oracle_on_randoms():
    rng = random.Random(43)
    for _ in range(40):
        g = random_graph(rng.randint(1, 9), rng.uniform(0.2, 0.8), rng)
        w = random_weights(g.n, rng)
        res = chi_f_weighted(g, w)
        assert verify_certificate(g, res.primal, w).ok
        assert sum(y * wv for y, wv in zip(res.dual, w)) == res.value
        _, pricing = max_weight_stable_set(g, list(res.dual))
        assert pricing <= 1
        assert res.value == chi_f_brute_force(g, w)


def test_solves_are_deterministic():
    g = cycle_power(11, 2)
    first = chi_f(g)
    second = chi_f(g)
    assert first == second
    rng = random.Random(67)
    w = random_weights(11, rng)
    assert chi_f_weighted(g, w) == chi_f_weighted(g, w)


def test_vertex_transitive_ratio():
    for g in (
        cycle_power(8, 2),
        cycle_power(11, 2),
        strong_product(cycle_graph(5), complete_graph(2)),
        strong_product(cycle_graph(7), complete_graph(2)),
        strong_product(cycle_graph(5), complete_graph(3)),
    ):
        assert chi_f(g).value == F(g.n, brute_independence_number(g))


def test_sandwich_bounds():
    rng = random.Random(47)
    for _ in range(20):
        g = random_graph(rng.randint(1, 9), 0.5, rng)
        value = chi_f(g).value
        cs = clique_structure(g)
        assert cs.omega <= value <= g.max_degree() + 1


def test_monotonicity_and_scaling():
    rng = random.Random(53)
    for _ in range(15):
        g = random_graph(rng.randint(1, 8), 0.5, rng)
        w1 = random_weights(g.n, rng)
        bump = random_weights(g.n, rng, hi=1)
        w2 = [a + b for a, b in zip(w1, bump)]
        v1 = chi_f_weighted(g, w1).value
        v2 = chi_f_weighted(g, w2).value
        assert v1 <= v2
        c = F(rng.randint(1, 5), rng.randint(1, 4))
        assert chi_f_weighted(g, [c * x for x in w1]).value == c * v1


def test_reed_bounds_c5_tight():
    report = verify_reed_bounds(cycle_graph(5), ones(5))
    assert report.ok and report.chi_f == report.rho == F(5, 2)


def test_reed_bounds_c5_k2_tight():
    g = strong_product(cycle_graph(5), complete_graph(2))
    report = verify_reed_bounds(g, ones(10))
    assert report.ok and report.chi_f == report.rho == 5
    assert report.halfsum_ok and report.local_ok


def test_reed_bounds_random_weighted():
    rng = random.Random(59)
    for _ in range(25):
        g = random_graph(rng.randint(1, 8), 0.5, rng)
        report = verify_reed_bounds(g, random_weights(g.n, rng))
        assert report.weighted_ok


def test_aharoni_disjoint_blocks():
    g = block_graph(3, 4)
    parts = [range(i * 4, (i + 1) * 4) for i in range(3)]
    report = verify_aharoni(g, parts, 2)
    assert report.ok and report.chi_f == 4


def test_aharoni_bridged_blocks():
    # blocks of four, at most two external neighbours each, max degree five
    g = block_graph(2, 4, cross_edges=[(0, 4), (1, 5), (0, 5)])
    report = verify_aharoni(g, [range(4), range(4, 8)], 2)
    assert report.ok and report.chi_f == 4


def random_partitioned_instance(rng: random.Random, omega: int, k: int, blocks: int):
    g = block_graph(blocks, omega)
    cap = omega + k - 1
    degree = {v: omega - 1 for v in range(g.n)}
    edges = set(g.edges())
    candidates = [
        (u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
        if u // omega != v // omega
    ]
    rng.shuffle(candidates)
    for u, v in candidates:
        if degree[u] < cap and degree[v] < cap and rng.random() < 0.5:
            edges.add((u, v))
            degree[u] += 1
            degree[v] += 1
    g2 = Graph(g.n, edges)
    parts = [range(i * omega, (i + 1) * omega) for i in range(blocks)]
    return g2, parts


def test_aharoni_random_instances():
    rng = random.Random(61)
    for _ in range(5):
        g, parts = random_partitioned_instance(rng, omega=6, k=3, blocks=2)
        report = verify_aharoni(g, parts, 3)
        assert report.ok and report.chi_f == 6


def test_aharoni_rejects_bad_hypotheses():
    g = block_graph(2, 4)
    with pytest.raises(HypothesisViolated, match="cover"):
        verify_aharoni(g, [range(4)], 2)
    with pytest.raises(HypothesisViolated, match="2k"):
        verify_aharoni(g, [range(4), range(4, 8)], 3)
    with pytest.raises(HypothesisViolated, match="clique"):
        verify_aharoni(Graph(4, [(0, 1)]), [range(4)], 2)
    spiked = block_graph(2, 4, cross_edges=[(0, 4), (0, 5), (0, 6), (0, 7)])
    with pytest.raises(HypothesisViolated, match="degree"):
        verify_aharoni(spiked, [range(4), range(4, 8)], 2)
