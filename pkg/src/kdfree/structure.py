"""Detectors for the structural configurations behind the colouring pipeline.

Everything here is detection only: each operation either certifies that a
configuration is absent or returns a concrete witness that re-validates
against the graph.  Witnesses are canonical (lexicographically least) so runs
are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import SizeLimit
from .graphs import CliqueStructure, Graph, clique_structure

NEAR_CLIQUE_EXHAUSTIVE_LIMIT = 20

# pattern id -> complement edge shape on a Delta-vertex set
NEAR_CLIQUE_PATTERNS = ("matching2", "P2+P3", "2xP3", "P4")


def check_disjoint_max_cliques(
    g: Graph, cs: CliqueStructure
) -> tuple[frozenset[int], frozenset[int]] | None:
    """None if the maximum cliques are pairwise disjoint, else the least
    intersecting pair."""
    best = None
    for c1, c2 in combinations(cs.max_cliques, 2):
        if c1 & c2:
            key = (tuple(sorted(c1)), tuple(sorted(c2)))
            if best is None or key < best[0]:
                best = (key, (c1, c2))
    return best[1] if best else None


def check_external_neighbours(
    g: Graph, cs: CliqueStructure
) -> tuple[int, frozenset[int], frozenset[int]] | None:
    """None if no outside vertex sees a maximum clique twice, else the least
    witness (v, clique, v's neighbours inside it)."""
    best = None
    for c in cs.max_cliques:
        for v in range(g.n):
            if v in c:
                continue
            inside = g.adj[v] & c
            if len(inside) > 1:
                key = (v, tuple(sorted(c)))
                if best is None or key < best[0]:
                    best = (key, (v, c, frozenset(inside)))
    return best[1] if best else None


@dataclass(frozen=True)
class Bump:
    clique: frozenset[int]
    y1: int
    y2: int
    y3: int
    v1: int
    v2: int

    def validate(self, g: Graph) -> bool:
        y = {self.y1, self.y2, self.y3}
        return (
            g.is_clique(self.clique)
            and y <= self.clique
            and len(y) == 3
            and self.v1 not in self.clique
            and self.v2 not in self.clique
            and self.v1 != self.v2
            and g.has_edge(self.v1, self.v2)
            and g.adj[self.v1] & y == {self.y1, self.y2}
            and g.adj[self.v2] & y == {self.y2, self.y3}
        )


def find_bump(g: Graph, cs: CliqueStructure) -> Bump | None:
    """A maximum clique C plus adjacent outside v1,v2 whose neighbourhoods
    inside a 3-subset Y of C are {y1,y2} and {y2,y3}."""
    best: tuple | None = None
    for c in cs.max_cliques:
        outside = [v for v in range(g.n) if v not in c]
        for v1 in outside:
            for v2 in g.adj[v1]:
                if v2 in c or v2 == v1:
                    continue
                for y in combinations(sorted(c), 3):
                    ys = set(y)
                    n1 = g.adj[v1] & ys
                    n2 = g.adj[v2] & ys
                    if len(n1) != 2 or len(n2) != 2:
                        continue
                    shared = n1 & n2
                    if len(shared) != 1:
                        continue
                    y2 = next(iter(shared))
                    y1 = next(iter(n1 - shared))
                    y3 = next(iter(n2 - shared))
                    key = (tuple(sorted(c)), y1, y2, y3, v1, v2)
                    if best is None or key < best:
                        best = key
    if best is None:
        return None
    c_t, y1, y2, y3, v1, v2 = best
    return Bump(frozenset(c_t), y1, y2, y3, v1, v2)


# ── near-cliques: K_Delta minus a small edge pattern ──────────────────────


def _complement_edges(g: Graph, vertices: tuple[int, ...]) -> list[tuple[int, int]]:
    return [(u, v) for u, v in combinations(vertices, 2) if not g.has_edge(u, v)]


def _matches_pattern(edges: list[tuple[int, int]], pattern: str) -> bool:
    if pattern == "matching2":
        if len(edges) != 2:
            return False
        (a, b), (c, d) = edges
        return len({a, b, c, d}) == 4
    deg: dict[int, int] = {}
    for u, v in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    degrees = sorted(deg.values())
    if pattern == "P2+P3":
        # one lone edge plus a disjoint two-edge path
        return len(edges) == 3 and len(deg) == 5 and degrees == [1, 1, 1, 1, 2]
    if pattern == "2xP3":
        # two vertex-disjoint two-edge paths
        if len(edges) != 4 or len(deg) != 6 or degrees != [1, 1, 1, 1, 2, 2]:
            return False
        centers = [v for v, d in deg.items() if d == 2]
        return not any({u, v} == set(centers) for u, v in edges)
    if pattern == "P4":
        # a three-edge path: connected, two ends, two middles
        if len(edges) != 3 or len(deg) != 4 or degrees != [1, 1, 2, 2]:
            return False
        middles = {v for v, d in deg.items() if d == 2}
        return any({u, v} == middles for u, v in edges)
    raise ValueError(f"unsupported pattern {pattern!r}")


def find_near_clique(
    g: Graph, delta: int, pattern: str
) -> tuple[int, ...] | None:
    """A `delta`-vertex set whose induced complement is exactly the pattern.

    Exhaustive for n <= 20: every witness contains a (delta-2)-clique (each
    pattern's complement has independence number 2), so seeding from the
    (delta-2)-subsets of maximal cliques and completing with an outside pair
    covers all candidates.
    """
    if pattern not in NEAR_CLIQUE_PATTERNS:
        raise ValueError(f"unsupported pattern {pattern!r}")
    if g.n > NEAR_CLIQUE_EXHAUSTIVE_LIMIT:
        raise SizeLimit(f"near-clique search is exhaustive only for n <= {NEAR_CLIQUE_EXHAUSTIVE_LIMIT}")
    core = delta - 2
    if core < 2 or delta > g.n:
        return None
    best: tuple[int, ...] | None = None
    seen_seeds: set[frozenset[int]] = set()
    for clique in clique_structure(g).maximal_cliques:
        if len(clique) < core:
            continue
        for seed in combinations(sorted(clique), core):
            fs = frozenset(seed)
            if fs in seen_seeds:
                continue
            seen_seeds.add(fs)
            rest = [v for v in range(g.n) if v not in fs]
            for u, v in combinations(rest, 2):
                candidate = tuple(sorted(seed + (u, v)))
                if _matches_pattern(_complement_edges(g, candidate), pattern):
                    if best is None or candidate < best:
                        best = candidate
    return best


# ── aggregated eligibility ────────────────────────────────────────────────


@dataclass(frozen=True)
class EligibilityReport:
    delta: int
    omega: int
    degree_ok: bool  # Delta >= 6
    omega_ok: bool  # omega == Delta - 1
    disjoint_witness: tuple[frozenset[int], frozenset[int]] | None
    external_witness: tuple[int, frozenset[int], frozenset[int]] | None

    @property
    def passed(self) -> bool:
        return (
            self.degree_ok
            and self.omega_ok
            and self.disjoint_witness is None
            and self.external_witness is None
        )

    def failures(self) -> list[str]:
        out = []
        if not self.degree_ok:
            out.append(f"max degree {self.delta} < 6")
        if not self.omega_ok:
            out.append(f"omega {self.omega} != Delta - 1 = {self.delta - 1}")
        if self.disjoint_witness is not None:
            c1, c2 = self.disjoint_witness
            out.append(f"maximum cliques intersect: {sorted(c1)} and {sorted(c2)}")
        if self.external_witness is not None:
            v, c, nbrs = self.external_witness
            out.append(
                f"vertex {v} has {len(nbrs)} neighbours {sorted(nbrs)} in clique {sorted(c)}"
            )
        return out


def pipeline_eligibility(g: Graph, cs: CliqueStructure | None = None) -> EligibilityReport:
    """Delta >= 6, omega = Delta - 1, disjoint maximum cliques, and no outside
    vertex with two neighbours in one."""
    if cs is None:
        cs = clique_structure(g)
    delta = g.max_degree()
    return EligibilityReport(
        delta=delta,
        omega=cs.omega,
        degree_ok=delta >= 6,
        omega_ok=cs.omega == delta - 1,
        disjoint_witness=check_disjoint_max_cliques(g, cs),
        external_witness=check_external_neighbours(g, cs),
    )
