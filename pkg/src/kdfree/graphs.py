"""Graph representation, named-graph generators and clique structure queries."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import GraphFormatError


class Graph:
    """Simple undirected graph on vertex set 0..n-1.

    Adjacency is stored both as per-vertex frozensets and as bitmasks; the
    graph is immutable after construction and safe to share across threads.
    """

    __slots__ = ("n", "adj", "masks")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphFormatError("vertex count must be nonnegative")
        neighbours: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            neighbours[u].add(v)
            neighbours[v].add(u)
        self.n = n
        self.adj = tuple(frozenset(s) for s in neighbours)
        masks = []
        for s in neighbours:
            m = 0
            for v in s:
                m |= 1 << v
            masks.append(m)
        self.masks = tuple(masks)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(s) for s in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    def num_edges(self) -> int:
        return sum(len(s) for s in self.adj) // 2

    def closed_neighbourhood(self, v: int) -> frozenset[int]:
        return self.adj[v] | {v}

    def is_stable(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        seen = 0
        for v in vs:
            seen |= 1 << v
        return all(self.masks[v] & seen == 0 for v in vs)

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(u, v) for u, v in combinations(vs, 2))

    def induced(self, keep: Sequence[int]) -> "Graph":
        """Induced subgraph on `keep`, relabelled 0..len(keep)-1 in given order."""
        index = {v: i for i, v in enumerate(keep)}
        edges = [
            (index[u], index[v])
            for u in keep
            for v in self.adj[u]
            if v in index and index[u] < index[v]
        ]
        return Graph(len(keep), edges)

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges()})"


# ── generators ────────────────────────────────────────────────────────────


def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def cycle_power(n: int, k: int) -> Graph:
    """C_n^k: vertices i,j adjacent iff their circular distance is at most k."""
    if n < 3 or k < 1:
        raise GraphFormatError("cycle_power needs n >= 3 and k >= 1")
    if 2 * k >= n:
        raise GraphFormatError(f"cycle_power needs k < n/2, got n={n}, k={k}")
    edges = []
    for i in range(n):
        for d in range(1, k + 1):
            edges.append((i, (i + d) % n))
    return Graph(n, ((min(u, v), max(u, v)) for u, v in edges))


def cycle_graph(n: int) -> Graph:
    return cycle_power(n, 1)


def strong_product(g: Graph, h: Graph) -> Graph:
    """Strong product: (u1,v1)~(u2,v2) iff both coordinates are equal-or-adjacent."""
    edges = []
    for u1 in range(g.n):
        for v1 in range(h.n):
            a = u1 * h.n + v1
            for u2 in range(g.n):
                if u2 != u1 and u2 not in g.adj[u1]:
                    continue
                for v2 in range(h.n):
                    if v2 != v1 and v2 not in h.adj[v1]:
                        continue
                    b = u2 * h.n + v2
                    if a < b:
                        edges.append((a, b))
    return Graph(g.n * h.n, edges)


def generalized_petersen(n: int, k: int) -> Graph:
    """P(n,k): outer n-cycle, inner {n,k}-star polygon, spokes between them."""
    if n < 3 or k < 1 or 2 * k >= n:
        raise GraphFormatError(f"generalized_petersen needs n >= 3, 1 <= k < n/2, got ({n},{k})")
    edges = []
    for i in range(n):
        edges.append((i, (i + 1) % n))          # outer cycle
        edges.append((n + i, n + (i + k) % n))  # inner star polygon
        edges.append((i, n + i))                # spoke
    return Graph(2 * n, ((min(u, v), max(u, v)) for u, v in edges))


def delete_vertices(g: Graph, vs: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on V minus vs, relabelled compactly preserving order.

    Returns the new graph and the old->new vertex map.
    """
    drop = set(vs)
    for v in drop:
        if not 0 <= v < g.n:
            raise GraphFormatError(f"vertex {v} out of range")
    keep = [v for v in range(g.n) if v not in drop]
    mapping = {v: i for i, v in enumerate(keep)}
    return g.induced(keep), mapping


def block_graph(
    num_blocks: int,
    omega: int,
    cross_edges: Iterable[tuple[int, int]] = (),
    outside: Sequence[Iterable[int]] = (),
    outside_edges: Iterable[tuple[int, int]] = (),
) -> Graph:
    """Disjoint K_omega blocks plus explicit cross edges and outside vertices.

    Block i occupies vertices [i*omega, (i+1)*omega); outside vertex j is
    num_blocks*omega + j with the given block-vertex neighbours;
    outside_edges are pairs of outside indices.
    """
    base = num_blocks * omega
    edges = []
    for b in range(num_blocks):
        edges.extend(combinations(range(b * omega, (b + 1) * omega), 2))
    edges.extend(cross_edges)
    for j, nbrs in enumerate(outside):
        edges.extend((base + j, u) for u in nbrs)
    edges.extend((base + a, base + b) for a, b in outside_edges)
    n = base + len(outside)
    return Graph(n, ((min(u, v), max(u, v)) for u, v in edges))


def _search_deletion(
    base: Graph, count: int, delta_target: int, omega_cap: int
) -> tuple[int, ...]:
    """Lexicographically least `count`-subset whose removal hits the targets."""
    for vs in combinations(range(base.n), count):
        g, _ = delete_vertices(base, vs)
        if g.max_degree() != delta_target:
            continue
        if clique_structure(g).omega <= omega_cap:
            return vs
    raise GraphFormatError(
        f"no {count}-subset of {base!r} reaches max degree {delta_target}, omega <= {omega_cap}"
    )


_DELETION_CACHE: dict[tuple[int, int, int], tuple[int, ...]] = {}


def c5xk3_minus(count: int) -> Graph:
    """C_5 boxtimes K_3 minus 2 or 4 vertices (max degree 7/omega 6, resp. 6/5).

    The deletion set is the lexicographically least subset meeting those
    degree and clique-number targets; every qualifying subset yields the same
    fractional chromatic number, so the choice is only a tie-break.
    """
    targets = {2: (7, 6), 4: (6, 5)}
    if count not in targets:
        raise GraphFormatError("only the -2v and -4v deletions are defined")
    base = strong_product(cycle_graph(5), complete_graph(3))
    delta_target, omega_cap = targets[count]
    key = (count, delta_target, omega_cap)
    if key not in _DELETION_CACHE:
        _DELETION_CACHE[key] = _search_deletion(base, count, delta_target, omega_cap)
    g, _ = delete_vertices(base, _DELETION_CACHE[key])
    return g


NAMED_GRAPHS = {
    "c8sq": lambda: cycle_power(8, 2),
    "c11sq": lambda: cycle_power(11, 2),
    "p72": lambda: generalized_petersen(7, 2),
    "c5xk2": lambda: strong_product(cycle_graph(5), complete_graph(2)),
    "c7xk2": lambda: strong_product(cycle_graph(7), complete_graph(2)),
    "c5xk3": lambda: strong_product(cycle_graph(5), complete_graph(3)),
    "c5xk3-2v": lambda: c5xk3_minus(2),
    "c5xk3-4v": lambda: c5xk3_minus(4),
}


# ── clique structure ──────────────────────────────────────────────────────


@dataclass(frozen=True)
class CliqueStructure:
    """Maximum-clique structure of a graph.

    max_cliques are the maximum cliques B_1..B_l in lexicographic order;
    maximal_cliques is the full maximal-clique list backing clique-weight
    queries; level[v] (= omega_v[v]) is the size of the largest clique
    containing v, so the level classes partition the vertex set.
    """

    omega: int
    max_cliques: tuple[frozenset[int], ...]
    maximal_cliques: tuple[frozenset[int], ...]
    omega_v: tuple[int, ...]
    v_omega: frozenset[int]
    v_omega_prime: frozenset[int]
    d_omega: tuple[int, ...]

    @property
    def level(self) -> tuple[int, ...]:
        return self.omega_v


def degeneracy_order(g: Graph) -> list[int]:
    """Vertices in degeneracy order (repeatedly remove a minimum-degree vertex)."""
    remaining = set(range(g.n))
    deg = {v: g.degree(v) for v in remaining}
    order = []
    while remaining:
        v = min(remaining, key=lambda u: (deg[u], u))
        order.append(v)
        remaining.remove(v)
        for u in g.adj[v]:
            if u in remaining:
                deg[u] -= 1
    return order


def maximal_cliques(g: Graph) -> list[frozenset[int]]:
    """All maximal cliques via pivoting Bron-Kerbosch over a degeneracy ordering.

    Output is sorted lexicographically (by sorted vertex tuple) so downstream
    consumers are reproducible run to run.
    """
    if g.n == 0:
        return []
    found: list[frozenset[int]] = []

    def expand(r: set[int], p: set[int], x: set[int]) -> None:
        if not p and not x:
            found.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: (len(g.adj[u] & p), -u))
        for v in sorted(p - g.adj[pivot]):
            expand(r | {v}, p & g.adj[v], x & g.adj[v])
            p.remove(v)
            x.add(v)

    order = degeneracy_order(g)
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        later = {u for u in g.adj[v] if pos[u] > pos[v]}
        earlier = {u for u in g.adj[v] if pos[u] < pos[v]}
        expand({v}, later, earlier)
    return sorted(found, key=lambda c: tuple(sorted(c)))


def clique_structure(g: Graph) -> CliqueStructure:
    """Exhaustive maximum-clique structure (omega, blocks, V_omega, levels)."""
    cliques = maximal_cliques(g)
    omega = max((len(c) for c in cliques), default=0)
    maxc = tuple(c for c in cliques if len(c) == omega)
    omega_v = [0] * g.n
    for c in cliques:
        for v in c:
            if len(c) > omega_v[v]:
                omega_v[v] = len(c)
    v_omega = frozenset(v for c in maxc for v in c)
    delta = g.max_degree()
    v_prime = frozenset(v for v in v_omega if g.degree(v) == delta)
    d_omega = tuple(len(g.adj[v] & v_omega) for v in range(g.n))
    return CliqueStructure(
        omega=omega,
        max_cliques=maxc,
        maximal_cliques=tuple(cliques),
        omega_v=tuple(omega_v),
        v_omega=v_omega,
        v_omega_prime=v_prime,
        d_omega=d_omega,
    )


def reed_weight(
    g: Graph, cs: CliqueStructure, w: Sequence[Fraction]
) -> tuple[list[Fraction], Fraction]:
    """Per-vertex Reed weights and their maximum under vertex weights w.

    The Reed weight of v is half the sum of its closed-neighbourhood weight
    and the heaviest weight of a clique containing v; restricting the clique
    maximum to maximal cliques is exact for nonnegative weights.
    """
    if len(w) != g.n:
        raise ValueError(f"expected {g.n} weights, got {len(w)}")
    w = [Fraction(x) for x in w]
    if any(x < 0 for x in w):
        raise ValueError("reed_weight requires nonnegative weights")
    clique_w: list[Fraction] = [Fraction(0)] * g.n
    for c in cs.maximal_cliques:
        total = sum((w[v] for v in c), Fraction(0))
        for v in c:
            if total > clique_w[v]:
                clique_w[v] = total
    rho = []
    for v in range(g.n):
        degree_w = w[v] + sum((w[u] for u in g.adj[v]), Fraction(0))
        rho.append(Fraction(1, 2) * (degree_w + clique_w[v]))
    return rho, max(rho, default=Fraction(0))


# ── edge-list serialization ───────────────────────────────────────────────


def write_edge_list(g: Graph) -> str:
    """Canonical edge-list text: "n m" then one sorted "u v" line per edge."""
    lines = [f"{g.n} {g.num_edges()}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> Graph:
    """Parse the edge-list format, rejecting loops, duplicates and bad ranges."""
    rows = [line for line in (ln.strip() for ln in text.splitlines()) if line]
    if not rows:
        raise GraphFormatError("empty edge-list input")
    head = rows[0].split()
    if len(head) != 2:
        raise GraphFormatError(f"header must be 'n m', got {rows[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphFormatError(f"non-integer header {rows[0]!r}") from exc
    if len(rows) - 1 != m:
        raise GraphFormatError(f"expected {m} edge lines, found {len(rows) - 1}")
    seen = set()
    edges = []
    for row in rows[1:]:
        parts = row.split()
        if len(parts) != 2:
            raise GraphFormatError(f"bad edge line {row!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphFormatError(f"non-integer edge line {row!r}") from exc
        if u == v:
            raise GraphFormatError(f"self-loop {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge ({u},{v}) out of range for n={n}")
        if u > v:
            raise GraphFormatError(f"edge line {row!r} must be written u < v")
        if (u, v) in seen:
            raise GraphFormatError(f"duplicate edge ({u},{v})")
        seen.add((u, v))
        edges.append((u, v))
    return Graph(n, edges)
