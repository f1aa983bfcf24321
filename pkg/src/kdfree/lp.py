"""Exact computation of weighted fractional chromatic numbers.

The master problem (minimise total column weight subject to per-vertex
coverage) is solved through its dual -- maximise w.y subject to y(S) <= 1 for
every generated stable-set column -- because the slack basis of the dual is
immediately feasible.  Columns are priced in by an exact branch-and-bound
maximum-weight stable set oracle until none is violated, at which point the
dual solution certifies optimality over all stable sets.  Every number on the
optimality path is a Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import HypothesisViolated, LpError
from .graphs import Graph, clique_structure, degeneracy_order, reed_weight
from .intervals import StableSetWeighting, verify_certificate

_ZERO = Fraction(0)
_ONE = Fraction(1)

EXACT_SOLVE_VERTEX_CAP = 60


# ── exact primal simplex, Bland's rule ────────────────────────────────────


def _simplex_max(
    objective: Sequence[Fraction],
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """Maximise c.x subject to rows.x <= rhs, x >= 0, with rhs >= 0.

    Returns (value, x, duals).  Bland's smallest-index rule guarantees
    termination; the nonnegative right-hand side makes the slack basis the
    starting point, so no phase one is needed.
    """
    m, n = len(rows), len(objective)
    width = n + m + 1
    tab: list[list[Fraction]] = []
    for i, row in enumerate(rows):
        line = [Fraction(x) for x in row]
        line.extend(_ONE if j == i else _ZERO for j in range(m))
        line.append(Fraction(rhs[i]))
        if line[-1] < 0:
            raise LpError("negative right-hand side")
        tab.append(line)
    z = [-Fraction(x) for x in objective] + [_ZERO] * (m + 1)
    basis = list(range(n, n + m))

    while True:
        enter = -1
        for j in range(n + m):
            if z[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best: Fraction | None = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            raise LpError("unbounded linear program")
        prow = tab[leave]
        piv = prow[enter]
        if piv != 1:
            inv = _ONE / piv
            prow = [x * inv if x else x for x in prow]
            tab[leave] = prow
        for i in range(m):
            if i == leave:
                continue
            f = tab[i][enter]
            if f:
                row = tab[i]
                tab[i] = [a - f * b if b else a for a, b in zip(row, prow)]
        f = z[enter]
        if f:
            z = [a - f * b if b else a for a, b in zip(z, prow)]
        basis[leave] = enter

    x = [_ZERO] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = tab[i][-1]
    duals = z[n : n + m]
    return z[-1], x, duals


# ── maximum-weight stable set oracle ──────────────────────────────────────


def max_weight_stable_set(
    g: Graph, weights: Sequence[Fraction]
) -> tuple[frozenset[int], Fraction]:
    """Exact maximiser via branch and bound.

    Branches on the heaviest candidate; the upper bound is a greedy clique
    cover (a stable set meets each clique at most once).  Among maximisers the
    lexicographically least set of positive-weight vertices is returned.
    """
    w = [Fraction(x) for x in weights]
    if len(w) != g.n:
        raise ValueError(f"expected {g.n} weights, got {len(w)}")
    if any(x < 0 for x in w):
        raise ValueError("weights must be nonnegative")
    order = sorted((v for v in range(g.n) if w[v] > 0), key=lambda v: (-w[v], v))
    if not order:
        return frozenset(), _ZERO
    masks = g.masks
    full = 0
    for v in order:
        full |= 1 << v

    def cover_bound(mask: int) -> Fraction:
        total = _ZERO
        cliques: list[int] = []
        for v in order:
            if not (mask >> v) & 1:
                continue
            bit = 1 << v
            for idx, cm in enumerate(cliques):
                if cm & ~masks[v] == 0:
                    cliques[idx] = cm | bit
                    break
            else:
                cliques.append(bit)
                total += w[v]
        return total

    best = _ZERO

    def search(mask: int, acc: Fraction) -> None:
        nonlocal best
        if acc > best:
            best = acc
        if not mask:
            return
        if acc + cover_bound(mask) <= best:
            return
        v = next(u for u in order if (mask >> u) & 1)
        search(mask & ~masks[v] & ~(1 << v), acc + w[v])
        search(mask & ~(1 << v), acc)

    search(full, _ZERO)
    target = best

    def reaches(mask: int, acc: Fraction, needed: Fraction) -> bool:
        if acc >= needed:
            return True
        if not mask or acc + cover_bound(mask) < needed:
            return False
        v = next(u for u in order if (mask >> u) & 1)
        if reaches(mask & ~masks[v] & ~(1 << v), acc + w[v], needed):
            return True
        return reaches(mask & ~(1 << v), acc, needed)

    chosen: list[int] = []
    mask = full
    acc = _ZERO
    for v in sorted(order):
        if not (mask >> v) & 1:
            continue
        if reaches(mask & ~masks[v] & ~(1 << v), acc + w[v], target):
            chosen.append(v)
            acc += w[v]
            mask &= ~masks[v] & ~(1 << v)
        else:
            mask &= ~(1 << v)
    if acc != target:
        raise LpError("lexicographic extraction lost the optimum")
    return frozenset(chosen), target


# ── column generation ─────────────────────────────────────────────────────


@dataclass(frozen=True)
class LpResult:
    """Optimal chi_f^w with primal and dual certificates."""

    value: Fraction
    primal: StableSetWeighting
    dual: tuple[Fraction, ...]
    status: str
    columns_generated: int
    pricing_value: Fraction  # max over stable sets of dual mass; <= 1 at optimality


def _seed_columns(g: Graph) -> list[frozenset[int]]:
    order = degeneracy_order(g)
    seeds: list[frozenset[int]] = []
    seen: set[frozenset[int]] = set()
    for v in order:
        s = {v}
        for u in order:
            if u not in s and not (g.adj[u] & s):
                s.add(u)
        fs = frozenset(s)
        if fs not in seen:
            seen.add(fs)
            seeds.append(fs)
    return seeds


def chi_f_weighted(g: Graph, w: Sequence[Fraction]) -> LpResult:
    """Exact chi_f^w by column generation with verified certificates."""
    weights = [Fraction(x) for x in w]
    if len(weights) != g.n:
        raise ValueError(f"expected {g.n} weights, got {len(weights)}")
    if any(x < 0 for x in weights):
        raise ValueError("weights must be nonnegative")
    if g.n > EXACT_SOLVE_VERTEX_CAP:
        raise LpError(f"exact solves are capped at n <= {EXACT_SOLVE_VERTEX_CAP}")
    if g.n == 0:
        empty = StableSetWeighting((), _ZERO)
        return LpResult(_ZERO, empty, (), "optimal", 0, _ZERO)

    columns = _seed_columns(g)
    known = set(columns)
    while True:
        rows = [[(_ONE if v in s else _ZERO) for v in range(g.n)] for s in columns]
        value, duals, col_weights = _simplex_max(weights, rows, [_ONE] * len(columns))
        pricing_set, pricing_value = max_weight_stable_set(g, duals)
        if pricing_value <= 1:
            break
        if pricing_set in known:
            raise LpError("pricing returned a known column; simplex inconsistency")
        known.add(pricing_set)
        columns.append(pricing_set)

    primal_cols = tuple(
        (s, x) for s, x in zip(columns, col_weights) if x > 0
    )
    primal = StableSetWeighting(primal_cols, value)
    _check_optimal(g, weights, value, primal, duals, pricing_value)
    return LpResult(
        value=value,
        primal=primal,
        dual=tuple(duals),
        status="optimal",
        columns_generated=len(columns),
        pricing_value=pricing_value,
    )


def _check_optimal(g, weights, value, primal, duals, pricing_value):
    if primal.weight_sum() != value:
        raise LpError("primal column weights do not sum to the optimum")
    check = verify_certificate(g, primal, weights)
    if not check.ok:
        raise LpError(f"primal certificate failed: {check.reason}")
    if any(y < 0 for y in duals):
        raise LpError("negative dual value")
    if pricing_value > 1:
        raise LpError("dual infeasible over stable sets")
    dual_value = sum((y * wv for y, wv in zip(duals, weights)), _ZERO)
    if dual_value != value:
        raise LpError(f"strong duality failed: {dual_value} != {value}")


def chi_f(g: Graph) -> LpResult:
    return chi_f_weighted(g, [_ONE] * g.n)


# ── brute-force oracle over the explicit stable-set polytope ──────────────


def enumerate_stable_sets(g: Graph, limit: int = 20) -> list[frozenset[int]]:
    """Every stable set of g (including the empty set), by bitmask sweep."""
    if g.n > limit:
        raise LpError(f"full enumeration is capped at n <= {limit}")
    out = []
    for mask in range(1 << g.n):
        vs = [v for v in range(g.n) if (mask >> v) & 1]
        if g.is_stable(vs):
            out.append(frozenset(vs))
    return out


def chi_f_brute_force(g: Graph, w: Sequence[Fraction]) -> Fraction:
    """Solve the covering LP over the explicitly enumerated stable sets.

    Dominated (non-maximal) columns are dropped first; for nonnegative
    weights this does not change the optimum.
    """
    weights = [Fraction(x) for x in w]
    if g.n == 0:
        return _ZERO
    everything = [s for s in enumerate_stable_sets(g) if s]
    cols = [s for s in everything if not any(s < t for t in everything)]
    rows = [[(_ONE if v in s else _ZERO) for v in range(g.n)] for s in cols]
    value, _, _ = _simplex_max(weights, rows, [_ONE] * len(cols))
    return value


# ── theorem verification reports ──────────────────────────────────────────


@dataclass(frozen=True)
class ReedBoundsReport:
    chi_f: Fraction
    rho: Fraction
    weighted_ok: bool
    delta: int
    omega: int
    halfsum_bound: Fraction | None  # (Delta + 1 + omega)/2, unit weights only
    halfsum_ok: bool | None
    local_bound: Fraction | None  # max over v of (d(v) + 1 + omega(v))/2
    local_ok: bool | None

    @property
    def ok(self) -> bool:
        checks = [self.weighted_ok, self.halfsum_ok, self.local_ok]
        return all(c for c in checks if c is not None)


def verify_reed_bounds(g: Graph, w: Sequence[Fraction]) -> ReedBoundsReport:
    """Check chi_f^w <= rho_w(G) exactly; with unit weights also check the
    global and per-vertex half-sum bounds it generalizes."""
    weights = [Fraction(x) for x in w]
    cs = clique_structure(g)
    result = chi_f_weighted(g, weights)
    _, rho = reed_weight(g, cs, weights)
    delta = g.max_degree()
    unit = all(x == 1 for x in weights) and g.n > 0
    halfsum = half_ok = local = local_ok = None
    if unit:
        halfsum = Fraction(delta + 1 + cs.omega, 2)
        half_ok = result.value <= halfsum
        local = max(
            Fraction(g.degree(v) + 1 + cs.omega_v[v], 2) for v in range(g.n)
        )
        local_ok = result.value <= local
    return ReedBoundsReport(
        chi_f=result.value,
        rho=rho,
        weighted_ok=result.value <= rho,
        delta=delta,
        omega=cs.omega,
        halfsum_bound=halfsum,
        halfsum_ok=half_ok,
        local_bound=local,
        local_ok=local_ok,
    )


@dataclass(frozen=True)
class CliquePartitionReport:
    omega: int
    k: int
    delta: int
    chi_f: Fraction
    ok: bool


def verify_aharoni(
    g: Graph, partition: Sequence[Iterable[int]], k: int
) -> CliquePartitionReport:
    """Check the clique-partition hypothesis, then assert chi_f = omega exactly.

    Hypothesis: the parts partition V, each is a clique of one common size
    omega >= 2k, and the maximum degree is at most omega + k - 1.
    """
    parts = [sorted(set(p)) for p in partition]
    if k < 1:
        raise HypothesisViolated(f"k must be a positive integer, got {k}")
    covered: set[int] = set()
    for p in parts:
        overlap = covered & set(p)
        if overlap:
            raise HypothesisViolated(f"parts overlap on {sorted(overlap)}")
        covered |= set(p)
    if covered != set(range(g.n)):
        raise HypothesisViolated("parts do not cover the vertex set exactly")
    sizes = {len(p) for p in parts}
    if len(sizes) != 1:
        raise HypothesisViolated(f"parts have mixed sizes {sorted(sizes)}")
    omega = sizes.pop()
    for p in parts:
        if not g.is_clique(p):
            raise HypothesisViolated(f"part {p} is not a clique")
    if omega < 2 * k:
        raise HypothesisViolated(f"need part size >= 2k, got {omega} < {2 * k}")
    delta = g.max_degree()
    if delta > omega + k - 1:
        raise HypothesisViolated(f"max degree {delta} exceeds omega + k - 1 = {omega + k - 1}")
    result = chi_f(g)
    return CliquePartitionReport(
        omega=omega, k=k, delta=delta, chi_f=result.value, ok=result.value == omega
    )
