"""Two-stage random stable sets over the block structure.

Stage one draws a uniform 4-subset of every block, fractionally 4-colours the
induced subgraph (its maximum degree is at most 5, so the clique-partition
theorem applies), converts the colouring to a uniform column pool with exact
quarter marginals, and draws one column.  Stage two inserts the outside
vertices greedily in a uniform random order.  Tiny instances admit full
enumeration, giving exact marginals against which the Monte Carlo estimator
is validated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from random import Random
from typing import Iterable, Mapping, Sequence

from .bounds import mu_values, p_value, quarter_tail_sum
from .errors import AharoniHypothesisError, EligibilityError, SizeLimit
from .graphs import CliqueStructure, Graph, clique_structure
from .intervals import to_multiset
from .lp import chi_f_weighted
from .structure import check_disjoint_max_cliques, check_external_neighbours, pipeline_eligibility

_ZERO = Fraction(0)
_ONE = Fraction(1)

OUTSIDE_ENUMERATION_LIMIT = 8
ENUMERATION_WORK_LIMIT = 10**7

HOEFFDING_DELTA = 1e-3


def trial_rng(seed: int, trial: int) -> Random:
    """Counter-based per-trial stream; identical for serial and parallel runs."""
    return Random(f"{seed}:{trial}")


class StableSetSampler:
    """Sampler bound to one graph and its block structure.

    Requires the structural hypotheses the distribution rests on: pairwise
    disjoint maximum cliques of size >= 4, and no outside vertex with two
    neighbours in one block.  (Full pipeline eligibility -- max degree >= 6
    and omega = Delta - 1 -- is enforced by the callers that need it.)
    """

    def __init__(self, g: Graph, cs: CliqueStructure | None = None):
        self.g = g
        self.cs = cs if cs is not None else clique_structure(g)
        if self.cs.omega < 4:
            raise EligibilityError(f"blocks must have size >= 4, got omega={self.cs.omega}")
        witness = check_disjoint_max_cliques(g, self.cs)
        if witness is not None:
            raise EligibilityError(f"maximum cliques intersect: {witness}")
        witness = check_external_neighbours(g, self.cs)
        if witness is not None:
            raise EligibilityError(f"vertex {witness[0]} sees a block twice")
        self.blocks = [tuple(sorted(b)) for b in self.cs.max_cliques]
        self.block_choices = [list(combinations(b, 4)) for b in self.blocks]
        self.outside = tuple(sorted(set(range(g.n)) - set(self.cs.v_omega)))
        self._pools: dict[tuple[tuple[int, ...], ...], list[int]] = {}

    # ── stage one ─────────────────────────────────────────────────────────

    def draw_choice(self, rng: Random) -> tuple[tuple[int, ...], ...]:
        return tuple(opts[rng.randrange(len(opts))] for opts in self.block_choices)

    def pool(self, choice: tuple[tuple[int, ...], ...]) -> list[int]:
        """Column pool (as vertex bitmasks) for one joint 4-subset choice.

        Uniform over the pool, every tilde vertex appears with probability
        exactly 1/4 and every column meets every chosen 4-subset.
        """
        cached = self._pools.get(choice)
        if cached is not None:
            return cached
        tilde_vertices = sorted(v for sub in choice for v in sub)
        tilde = self.g.induced(tilde_vertices)
        if tilde.max_degree() > 5:
            raise AharoniHypothesisError(
                f"induced 4-subset graph has degree {tilde.max_degree()} > 5"
            )
        result = chi_f_weighted(tilde, [_ONE] * tilde.n)
        if result.value != 4:
            raise AharoniHypothesisError(f"chi_f of the 4-subset graph is {result.value} != 4")
        columns = to_multiset(result.primal)
        scale = len(columns) // 4
        if len(columns) != 4 * scale:
            raise AharoniHypothesisError("column pool size is not a multiple of 4")
        # trim any over-covered vertex down to exactly `scale` occurrences
        counts = {v: 0 for v in range(tilde.n)}
        trimmed: list[set[int]] = []
        for col in columns:
            keep = set()
            for v in col:
                if counts[v] < scale:
                    counts[v] += 1
                    keep.add(v)
            trimmed.append(keep)
        if any(c != scale for c in counts.values()):
            raise AharoniHypothesisError("pool coverage is not exactly a quarter")
        tilde_index = {v: i for i, v in enumerate(tilde_vertices)}
        subsets = [{tilde_index[v] for v in sub} for sub in choice]
        for col in trimmed:
            if any(len(col & sub) != 1 for sub in subsets):
                # equality of the coverage sums forces one hit per 4-subset;
                # a miss here would break maximality of the final draw
                raise AharoniHypothesisError("a pool column misses a 4-subset")
        pool = []
        for col in trimmed:
            mask = 0
            for v in col:
                mask |= 1 << tilde_vertices[v]
            pool.append(mask)
        self._pools[choice] = pool
        return pool

    def sample_s_omega(self, rng: Random) -> int:
        choice = self.draw_choice(rng)
        pool = self.pool(choice)
        return pool[rng.randrange(len(pool))]

    # ── stage two ─────────────────────────────────────────────────────────

    def extend(self, rng: Random, s_omega_mask: int, active: Sequence[int] | None = None) -> int:
        vertices = list(self.outside if active is None else sorted(active))
        for i in range(len(vertices) - 1, 0, -1):  # Fisher-Yates
            j = rng.randrange(i + 1)
            vertices[i], vertices[j] = vertices[j], vertices[i]
        s = s_omega_mask
        for u in vertices:
            if not self.g.masks[u] & s:
                s |= 1 << u
        return s

    def sample(self, rng: Random, active: Sequence[int] | None = None) -> tuple[int, int]:
        """One draw; returns (S_omega mask, S mask)."""
        s_omega = self.sample_s_omega(rng)
        return s_omega, self.extend(rng, s_omega, active)

    # ── exact enumeration ─────────────────────────────────────────────────

    def enumerate_exact(self, active: Sequence[int] | None = None) -> "ExactMarginals":
        outside = list(self.outside if active is None else sorted(active))
        if len(outside) > OUTSIDE_ENUMERATION_LIMIT:
            raise SizeLimit(
                f"exact enumeration handles at most {OUTSIDE_ENUMERATION_LIMIT} outside vertices"
            )
        n = self.g.n
        n_choices = math.prod(len(opts) for opts in self.block_choices)
        if n_choices > ENUMERATION_WORK_LIMIT:
            raise SizeLimit("too many joint 4-subset choices")
        perms = list(permutations(outside)) or [()]
        masks = self.g.masks
        closed = [masks[v] | (1 << v) for v in range(n)]

        pr_s = [_ZERO] * n
        pr_s_omega = [_ZERO] * n
        nb_empty = {v: _ZERO for v in outside}
        e_closed = [_ZERO] * n
        dist: dict[int, Fraction] = {}
        work = 0
        for joint in product(*self.block_choices):
            pool = self.pool(joint)
            work += len(pool)
            if work > ENUMERATION_WORK_LIMIT:
                raise SizeLimit("enumeration work limit exceeded")
            col_p = Fraction(1, n_choices * len(pool))
            for col in pool:
                for v in range(n):
                    if (col >> v) & 1:
                        pr_s_omega[v] += col_p
                for v in outside:
                    if not masks[v] & col:
                        nb_empty[v] += col_p
                perm_p = col_p / len(perms)
                for perm in perms:
                    s = col
                    for u in perm:
                        if not masks[u] & s:
                            s |= 1 << u
                    dist[s] = dist.get(s, _ZERO) + perm_p
        for s, p in dist.items():
            for v in range(n):
                if (s >> v) & 1:
                    pr_s[v] += p
            for v in range(n):
                e_closed[v] += p * (closed[v] & s).bit_count()
        distribution = tuple(
            (frozenset(v for v in range(n) if (s >> v) & 1), p)
            for s, p in sorted(dist.items())
        )
        return ExactMarginals(
            pr_s=tuple(pr_s),
            pr_s_omega=tuple(pr_s_omega),
            block_nb_empty=nb_empty,
            expected_closed=tuple(e_closed),
            distribution=distribution,
        )


@dataclass(frozen=True)
class ExactMarginals:
    """Full enumeration of the two-stage distribution on a tiny instance."""

    pr_s: tuple[Fraction, ...]
    pr_s_omega: tuple[Fraction, ...]
    block_nb_empty: Mapping[int, Fraction]
    expected_closed: tuple[Fraction, ...]
    distribution: tuple[tuple[frozenset[int], Fraction], ...]


# ── module-level operations ───────────────────────────────────────────────


def sample_S_omega(g: Graph, cs: CliqueStructure, rng: Random) -> frozenset[int]:
    """Random stable set over the blocks with Pr(v in S_omega) = 1/omega exactly."""
    sampler = StableSetSampler(g, cs)
    mask = sampler.sample_s_omega(rng)
    return frozenset(v for v in range(g.n) if (mask >> v) & 1)


def extend_to_S(
    g: Graph, cs: CliqueStructure, s_omega: Iterable[int], rng: Random
) -> frozenset[int]:
    """Greedy extension of s_omega over a uniform ordering of the outside.

    Maximality of the result relies on s_omega meeting every block, which
    draws from sample_S_omega do.
    """
    s = frozenset(s_omega)
    if not s <= cs.v_omega:
        raise ValueError("s_omega must lie inside the blocks")
    if not g.is_stable(s):
        raise ValueError("s_omega must be stable")
    sampler = StableSetSampler(g, cs)
    mask = 0
    for v in s:
        mask |= 1 << v
    out = sampler.extend(rng, mask)
    return frozenset(v for v in range(g.n) if (out >> v) & 1)


def exact_marginals(g: Graph, cs: CliqueStructure | None = None) -> ExactMarginals:
    """Exact per-vertex Pr(v in S) (and companions) by full enumeration."""
    return StableSetSampler(g, cs).enumerate_exact()


# ── Monte Carlo estimation ────────────────────────────────────────────────


@dataclass(frozen=True)
class SamplerCheck:
    name: str
    vertex: int
    bound: Fraction
    empirical: Fraction
    band: Fraction
    ok: bool


@dataclass(frozen=True)
class EstimateReport:
    trials: int
    seed: int
    delta: int
    omega: int
    freq_s: tuple[Fraction, ...]
    freq_s_omega: tuple[Fraction, ...]
    freq_nb_empty: Mapping[int, Fraction]
    mean_closed: tuple[Fraction, ...]
    checks: tuple[SamplerCheck, ...]
    vertex_class: tuple[str, ...]
    paper_lower_bound: tuple[Fraction, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def hoeffding_band(trials: int, delta_fail: float = HOEFFDING_DELTA, span: int = 1) -> Fraction:
    """Width such that a mean of [0,span] samples strays further with
    probability at most delta_fail."""
    return Fraction(span) * Fraction(math.sqrt(math.log(1.0 / delta_fail) / (2.0 * trials)))


def estimate(g: Graph, trials: int, seed: int, cs: CliqueStructure | None = None) -> EstimateReport:
    """Seeded Monte Carlo estimates checked against the theoretical floors.

    Deterministic for fixed (graph, seed, trials): trial t uses its own
    counter-derived stream, so aggregation order cannot matter.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if cs is None:
        cs = clique_structure(g)
    sampler = StableSetSampler(g, cs)
    n = g.n
    masks = g.masks
    closed = [masks[v] | (1 << v) for v in range(n)]
    count_s = [0] * n
    count_s_omega = [0] * n
    count_nb_empty = {v: 0 for v in sampler.outside}
    total_closed = [0] * n

    for t in range(trials):
        rng = trial_rng(seed, t)
        s_omega, s = sampler.sample(rng)
        for v in range(n):
            bit = (s >> v) & 1
            count_s[v] += bit
            count_s_omega[v] += (s_omega >> v) & 1
            total_closed[v] += (closed[v] & s).bit_count()
        for v in sampler.outside:
            if not masks[v] & s_omega:
                count_nb_empty[v] += 1

    freq_s = tuple(Fraction(c, trials) for c in count_s)
    freq_s_omega = tuple(Fraction(c, trials) for c in count_s_omega)
    freq_nb_empty = {v: Fraction(c, trials) for v, c in count_nb_empty.items()}
    mean_closed = tuple(Fraction(c, trials) for c in total_closed)

    delta = g.max_degree()
    omega = cs.omega
    band = hoeffding_band(trials)
    band3 = hoeffding_band(trials, span=3)
    checks: list[SamplerCheck] = []
    classes: list[str] = []
    lower: list[Fraction] = []
    eligible = pipeline_eligibility(g, cs).passed
    mu_k, mu, _ = mu_values(delta) if eligible else ({}, _ZERO, 0)

    for v in range(n):
        if v in cs.v_omega_prime:
            classes.append("Vw'")
        elif v in cs.v_omega:
            classes.append("Vw")
        else:
            classes.append(f"V{cs.level[v]}")
        if v in cs.v_omega:
            lower.append(Fraction(1, omega))
        elif eligible:
            lower.append(p_value(delta, cs.d_omega[v]))
        else:
            lower.append(_ZERO)

    if eligible:
        for v in range(n):
            checks.append(
                SamplerCheck(
                    "pr_s_geq_mu", v, mu, freq_s[v], band, freq_s[v] >= mu - band
                )
            )
            if v in cs.v_omega:
                bound = Fraction(1, omega)
                checks.append(
                    SamplerCheck(
                        "pr_s_omega", v, bound, freq_s_omega[v], band,
                        abs(freq_s_omega[v] - bound) <= band,
                    )
                )
            if v in cs.v_omega_prime:
                bound = 1 + 2 * mu
                checks.append(
                    SamplerCheck(
                        "closed_nb_mean", v, bound, mean_closed[v], band3,
                        mean_closed[v] >= bound - band3,
                    )
                )
            if v not in cs.v_omega:
                bound = p_value(delta, cs.d_omega[v])
                checks.append(
                    SamplerCheck(
                        "pr_s_outside", v, bound, freq_s[v], band, freq_s[v] >= bound - band
                    )
                )
                rhs = quarter_tail_sum(cs.d_omega[v], omega)
                checks.append(
                    SamplerCheck(
                        "block_nb_empty", v, rhs, freq_nb_empty[v], band,
                        freq_nb_empty[v] >= rhs - band,
                    )
                )
                k = cs.level[v]
                if 4 <= k <= omega - 1:
                    bound = mu_k[delta + 1 - k]
                    checks.append(
                        SamplerCheck(
                            "pr_s_level", v, bound, freq_s[v], band,
                            freq_s[v] >= bound - band,
                        )
                    )

    return EstimateReport(
        trials=trials,
        seed=seed,
        delta=delta,
        omega=omega,
        freq_s=freq_s,
        freq_s_omega=freq_s_omega,
        freq_nb_empty=freq_nb_empty,
        mean_closed=mean_closed,
        checks=tuple(checks),
        vertex_class=tuple(classes),
        paper_lower_bound=tuple(lower),
    )
