"""Shared instance builders and independent brute-force oracles."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from kdfree.graphs import Graph, block_graph


# ── eligible block instances (max degree 6, omega 5) ──────────────────────


def instance_a() -> Graph:
    """Two K5 blocks bridged at 0-5, one apex vertex seeing both blocks."""
    return block_graph(2, 5, cross_edges=[(0, 5)], outside=[[0, 5]])


def instance_b() -> Graph:
    """Two bridges plus an outside edge 10-11 hanging off distinct blocks."""
    return block_graph(
        2, 5,
        cross_edges=[(0, 5), (1, 6)],
        outside=[[1, 6], [2, 7]],
        outside_edges=[(0, 1)],
    )


def instance_c() -> Graph:
    """One bridge, two adjacent outside vertices on different block pairs."""
    return block_graph(
        2, 5,
        cross_edges=[(0, 5)],
        outside=[[0, 5], [1, 6]],
        outside_edges=[(0, 1)],
    )


def medium_instance() -> Graph:
    """Three K5 blocks chained through vertex 5, plus an outside K4.

    Vertex 5 is the only full-degree block vertex; the outside clique sits at
    level 4 so the refined level bound is exercised.
    """
    return block_graph(
        3, 5,
        cross_edges=[(0, 5), (5, 10)],
        outside=[[1], [6], [11], [2, 7]],
        outside_edges=[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    )


# ── random generators ─────────────────────────────────────────────────────


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph(n, edges)


def random_weights(n: int, rng: random.Random, hi: int = 2) -> list[Fraction]:
    out = []
    for _ in range(n):
        den = rng.randint(1, 6)
        out.append(Fraction(rng.randint(0, hi * den), den))
    return out


# ── brute-force oracles ───────────────────────────────────────────────────


def brute_stable_sets(g: Graph) -> list[frozenset[int]]:
    out = []
    for mask in range(1 << g.n):
        vs = [v for v in range(g.n) if (mask >> v) & 1]
        if g.is_stable(vs):
            out.append(frozenset(vs))
    return out


def brute_independence_number(g: Graph) -> int:
    return max(len(s) for s in brute_stable_sets(g))


def brute_max_weight_stable(g: Graph, w) -> Fraction:
    return max(sum((w[v] for v in s), Fraction(0)) for s in brute_stable_sets(g))


def brute_cliques(g: Graph) -> list[frozenset[int]]:
    out = []
    for mask in range(1 << g.n):
        vs = [v for v in range(g.n) if (mask >> v) & 1]
        if vs and g.is_clique(vs):
            out.append(frozenset(vs))
    return out


def brute_maximal_cliques(g: Graph) -> list[frozenset[int]]:
    cliques = brute_cliques(g)
    return sorted(
        (c for c in cliques if not any(c < d for d in cliques)),
        key=lambda c: tuple(sorted(c)),
    )


def brute_omega(g: Graph) -> int:
    return max((len(c) for c in brute_cliques(g)), default=0)


def brute_bumps(g: Graph) -> list[tuple]:
    """All (C, y1, y2, y3, v1, v2) bump tuples by full enumeration."""
    cliques = brute_maximal_cliques(g)
    omega = max((len(c) for c in cliques), default=0)
    hits = []
    for c in cliques:
        if len(c) != omega:
            continue
        outside = [v for v in range(g.n) if v not in c]
        for v1 in outside:
            for v2 in outside:
                if v1 == v2 or not g.has_edge(v1, v2):
                    continue
                for y1, y2, y3 in combinations(sorted(c), 3):
                    for a, b, cc in ((y1, y2, y3), (y2, y1, y3), (y1, y3, y2)):
                        ys = {a, b, cc}
                        if g.adj[v1] & ys == {a, b} and g.adj[v2] & ys == {b, cc}:
                            hits.append((tuple(sorted(c)), a, b, cc, v1, v2))
    return hits


def _component_shapes(vertices: list[int], edges: list[tuple[int, int]]) -> list[tuple[int, int, tuple[int, ...]]]:
    """(size, edge count, sorted degree sequence) per connected component."""
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in edges:
        parent[find(u)] = find(v)
    comps: dict[int, list[int]] = {}
    for v in vertices:
        comps.setdefault(find(v), []).append(v)
    deg = {v: 0 for v in vertices}
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    shapes = []
    for members in comps.values():
        size = len(members)
        ecount = sum(1 for u, v in edges if find(u) == find(members[0]))
        shapes.append((size, ecount, tuple(sorted(deg[v] for v in members))))
    return shapes


PATTERN_SHAPES = {
    # multiset of (component size, edges, degree sequence), singletons dropped
    "matching2": [(2, 1, (1, 1)), (2, 1, (1, 1))],
    "P2+P3": [(2, 1, (1, 1)), (3, 2, (1, 1, 2))],
    "2xP3": [(3, 2, (1, 1, 2)), (3, 2, (1, 1, 2))],
    "P4": [(4, 3, (1, 1, 2, 2))],
}


def brute_near_cliques(g: Graph, delta: int, pattern: str) -> list[tuple[int, ...]]:
    """All delta-subsets whose induced complement matches, via full sweep."""
    want = sorted(PATTERN_SHAPES[pattern])
    hits = []
    for sub in combinations(range(g.n), delta):
        comp_edges = [(u, v) for u, v in combinations(sub, 2) if not g.has_edge(u, v)]
        touched = sorted({v for e in comp_edges for v in e})
        shapes = sorted(_component_shapes(touched, comp_edges))
        if shapes == want:
            hits.append(sub)
    return hits
