"""Initial-colouring iteration and the end-to-end bound verification.

The initial phase spends total weight y on random stable sets drawn from the
two-stage distribution, re-instantiated on the shrinking subgraphs H_i: each
step takes the largest y_i that no remaining capacity can overrun, pays
prob_i(v) * y_i to every vertex, removes the vertices that become full, and
stops when the budget is spent.  Block vertices always survive, every step's
distribution is itself a fractional colouring, and the accumulated weighting
is an exact certificate for the resulting vertex weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from random import Random
from typing import Sequence

from .bounds import BoundReport, main_bound, mu_values, p_value
from .errors import BoundViolation, EligibilityError, LpError
from .graphs import CliqueStructure, Graph, clique_structure, reed_weight
from .intervals import StableSetWeighting, verify_certificate
from .lp import LpResult, chi_f, chi_f_weighted
from .sampling import OUTSIDE_ENUMERATION_LIMIT, StableSetSampler
from .structure import pipeline_eligibility

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class PipelineIteration:
    active: tuple[int, ...]
    prob: dict[int, Fraction]
    y_step: Fraction
    w_step: dict[int, Fraction]
    capacity_after: dict[int, Fraction]
    leftover_after: Fraction
    removed: tuple[int, ...]
    zero_prob_flagged: tuple[int, ...]


@dataclass(frozen=True)
class PipelineTrace:
    iterations: tuple[PipelineIteration, ...]
    final_w: tuple[Fraction, ...]
    y_total: Fraction
    exact: bool


def _mask_to_set(mask: int, n: int) -> frozenset[int]:
    return frozenset(v for v in range(n) if (mask >> v) & 1)


def initial_colouring(
    g: Graph,
    y: Fraction,
    mode: str = "exact",
    trials: int = 10000,
    seed: int = 0,
    cs: CliqueStructure | None = None,
) -> tuple[PipelineTrace, StableSetWeighting]:
    """Spend weight y along the two-stage distribution; returns the trace and
    the accumulated fractional y-over-w colouring as an exact certificate."""
    if mode not in ("exact", "montecarlo"):
        raise ValueError(f"mode must be 'exact' or 'montecarlo', got {mode!r}")
    y = Fraction(y)
    if cs is None:
        cs = clique_structure(g)
    eligibility = pipeline_eligibility(g, cs)
    if not eligibility.passed:
        raise EligibilityError("; ".join(eligibility.failures()))
    omega = cs.omega
    if not 0 <= y <= omega:
        raise ValueError(f"y must lie in [0, omega]={omega}, got {y}")
    sampler = StableSetSampler(g, cs)
    if mode == "exact" and len(sampler.outside) > OUTSIDE_ENUMERATION_LIMIT:
        raise EligibilityError(
            f"exact mode handles at most {OUTSIDE_ENUMERATION_LIMIT} outside vertices"
        )

    n = g.n
    capacity = [_ONE] * n
    leftover = y
    active_outside = list(sampler.outside)
    columns: dict[frozenset[int], Fraction] = {}
    iterations: list[PipelineIteration] = []

    while leftover > 0:
        if len(iterations) > n:
            raise LpError("pipeline failed to terminate within |V| iterations")
        active = sorted(cs.v_omega) + active_outside
        flagged: tuple[int, ...] = ()
        if mode == "exact":
            ex = sampler.enumerate_exact(active_outside)
            prob = {v: ex.pr_s[v] for v in active}
            dist = [(s, p) for s, p in ex.distribution]
            for v in cs.v_omega:
                if prob[v] != Fraction(1, omega):
                    raise LpError(f"block vertex {v} has step probability {prob[v]} != 1/{omega}")
        else:
            counts = {v: 0 for v in active}
            seen: dict[int, int] = {}
            for t in range(trials):
                rng = Random(f"{seed}:{len(iterations)}:{t}")
                _, s = sampler.sample(rng, active_outside)
                seen[s] = seen.get(s, 0) + 1
                for v in active:
                    counts[v] += (s >> v) & 1
            prob = {v: Fraction(c, trials) for v, c in counts.items()}
            dist = [
                (_mask_to_set(s, n), Fraction(c, trials)) for s, c in sorted(seen.items())
            ]
            flagged = tuple(v for v in active if prob[v] == 0)

        positive = [v for v in active if prob[v] > 0]
        if mode == "exact" and len(positive) != len(active):
            raise LpError("zero step probability in exact mode")
        y_prime = min(capacity[v] / prob[v] for v in positive)
        y_step = min(leftover, y_prime)
        w_step = {v: prob[v] * y_step for v in active}
        for v in active:
            capacity[v] -= w_step[v]
            if capacity[v] < 0:
                raise LpError(f"capacity of {v} went negative")
        leftover -= y_step
        for s, p in dist:
            mass = y_step * p
            if mass > 0:
                columns[s] = columns.get(s, _ZERO) + mass

        removed: tuple[int, ...] = ()
        if leftover > 0:
            removed = tuple(v for v in active if capacity[v] == 0)
            if any(v in cs.v_omega for v in removed):
                raise LpError("a block vertex exhausted its capacity mid-run")
            active_outside = [v for v in active_outside if capacity[v] > 0]
        iterations.append(
            PipelineIteration(
                active=tuple(active),
                prob=prob,
                y_step=y_step,
                w_step=w_step,
                capacity_after={v: capacity[v] for v in active},
                leftover_after=leftover,
                removed=removed,
                zero_prob_flagged=flagged,
            )
        )

    final_w = tuple(_ONE - capacity[v] for v in range(n))
    weighting = StableSetWeighting(
        tuple(sorted(columns.items(), key=lambda item: tuple(sorted(item[0])))),
        total=y,
    )
    trace = PipelineTrace(
        iterations=tuple(iterations),
        final_w=final_w,
        y_total=y,
        exact=(mode == "exact"),
    )
    check = verify_certificate(g, weighting, final_w)
    if not check.ok:
        raise LpError(f"initial colouring certificate failed: {check.reason}")
    return trace, weighting


# ── the five weight conditions ────────────────────────────────────────────


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    ok: bool
    detail: str = ""


def _all_cliques(g: Graph, cs: CliqueStructure, max_size: int) -> set[frozenset[int]]:
    out: set[frozenset[int]] = set()
    for clique in cs.maximal_cliques:
        members = sorted(clique)
        for size in range(1, min(len(members), max_size) + 1):
            out.update(frozenset(sub) for sub in combinations(members, size))
    return out


def check_weight_conditions(
    g: Graph,
    cs: CliqueStructure,
    y: Fraction,
    w: Sequence[Fraction],
    band: Fraction = _ZERO,
) -> list[ConditionCheck]:
    """The five conditions the initial weights satisfy: block vertices pay
    y/omega; outside vertices at least min(p(Delta,l)y, 1); cliques of size
    k < omega carry k*min(mu*y,1), refined via mu_{Delta+1-k} for k >= 4; and
    any non-full vertex has closed-neighbourhood weight at least y.

    With band = 0 the checks are exact; a positive per-vertex band loosens
    them for weights achieved by Monte Carlo estimation.
    """
    delta = g.max_degree()
    omega = cs.omega
    mu_k, mu, _ = mu_values(delta)
    checks: list[ConditionCheck] = []

    bad = [v for v in cs.v_omega if abs(w[v] - y / omega) > band]
    checks.append(ConditionCheck("block_weight", not bad, f"violators {bad[:4]}"))

    bad = [
        v
        for v in range(g.n)
        if v not in cs.v_omega
        and w[v] < min(p_value(delta, cs.d_omega[v]) * y, _ONE) - band
    ]
    checks.append(ConditionCheck("outside_floor", not bad, f"violators {bad[:4]}"))

    cliques = _all_cliques(g, cs, omega - 1)
    floor = min(mu * y, _ONE)
    bad_c = [
        c
        for c in cliques
        if sum((w[v] for v in c), _ZERO) < len(c) * (floor - band)
    ]
    checks.append(ConditionCheck("clique_floor", not bad_c, f"violators {len(bad_c)}"))

    bad_c = []
    for c in cliques:
        k = len(c)
        if k < 4:
            continue
        refined = min(mu_k[delta + 1 - k] * y, _ONE)
        if sum((w[v] for v in c), _ZERO) < k * (refined - band):
            bad_c.append(c)
    checks.append(ConditionCheck("large_clique_floor", not bad_c, f"violators {len(bad_c)}"))

    bad = []
    for v in range(g.n):
        if w[v] < 1:
            closed = sum((w[u] for u in g.adj[v]), w[v])
            if closed < y - (g.degree(v) + 1) * band:
                bad.append(v)
    checks.append(ConditionCheck("closed_nb_weight", not bad, f"violators {bad[:4]}"))
    return checks


@dataclass(frozen=True)
class InitialColouringReport:
    y: Fraction
    mu: Fraction
    trace: PipelineTrace
    weighting: StableSetWeighting
    conditions: tuple[ConditionCheck, ...]
    rho_residual: Fraction
    rho_target: Fraction  # Delta - (1 + mu) y
    rho_per_vertex: tuple[Fraction, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.conditions) and self.rho_residual <= self.rho_target


def verify_theorem_initial(
    g: Graph, y: Fraction, cs: CliqueStructure | None = None
) -> InitialColouringReport:
    """Exact run of the initial colouring plus the residual Reed-weight bound
    rho_{1-w}(G) <= Delta - (1+mu)y."""
    if cs is None:
        cs = clique_structure(g)
    delta = g.max_degree()
    _, mu, _ = mu_values(delta)
    trace, weighting = initial_colouring(g, y, mode="exact", cs=cs)
    w = trace.final_w
    conditions = check_weight_conditions(g, cs, Fraction(y), w)
    residual = [_ONE - wv for wv in w]
    rho_vec, rho = reed_weight(g, cs, residual)
    target = delta - (1 + mu) * Fraction(y)
    return InitialColouringReport(
        y=Fraction(y),
        mu=mu,
        trace=trace,
        weighting=weighting,
        conditions=tuple(conditions),
        rho_residual=rho,
        rho_target=target,
        rho_per_vertex=tuple(rho_vec),
    )


# ── end to end ────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class ComposedCertificate:
    y: Fraction
    initial: StableSetWeighting
    finish: StableSetWeighting
    combined: StableSetWeighting
    finish_value: Fraction
    rho_residual: Fraction


@dataclass(frozen=True)
class EndToEndReport:
    delta: int
    omega: int
    epsilon: Fraction
    bound: Fraction
    chi_f: Fraction
    lp: LpResult
    bounds: BoundReport
    composed: ComposedCertificate | None

    @property
    def ok(self) -> bool:
        return self.chi_f <= self.bound


def end_to_end(g: Graph, compose: bool | None = None) -> EndToEndReport:
    """Verify chi_f(G) <= Delta - min(1/2, ytilde*mu) on a concrete graph.

    chi_f is computed exactly; on eligible instances small enough for exact
    sampling the two-phase construction is additionally composed: the initial
    y-over-w certificate plus an exact colouring of the residual weights,
    whose combined total must cover every vertex once within the bound.
    """
    delta = g.max_degree()
    cs = clique_structure(g)
    if delta < 6:
        raise EligibilityError(f"end_to_end needs max degree >= 6, got {delta}")
    if cs.omega > delta - 1:
        raise EligibilityError(f"end_to_end needs omega <= Delta - 1, got omega={cs.omega}")
    bounds = main_bound(delta)
    lp = chi_f(g)
    bound = delta - bounds.epsilon
    if lp.value > bound:
        raise BoundViolation(f"chi_f = {lp.value} exceeds {bound} at Delta={delta}")

    composed = None
    eligibility = pipeline_eligibility(g, cs)
    sampler_fits = (
        len(set(range(g.n)) - set(cs.v_omega)) <= OUTSIDE_ENUMERATION_LIMIT
    )
    if compose is None:
        compose = eligibility.passed and sampler_fits
    if compose:
        y = bounds.ytilde
        trace, initial = initial_colouring(g, y, mode="exact", cs=cs)
        residual = [_ONE - wv for wv in trace.final_w]
        _, rho_residual = reed_weight(g, cs, residual)
        if rho_residual > delta - (1 + bounds.mu) * y:
            raise BoundViolation(
                f"residual Reed weight {rho_residual} exceeds Delta - (1+mu)y"
            )
        finish = chi_f_weighted(g, residual)
        if finish.value > rho_residual:
            raise BoundViolation("chi_f^{1-w} exceeded the residual Reed weight")
        combined = StableSetWeighting(
            initial.columns + finish.primal.columns,
            total=y + finish.value,
        )
        if combined.total > bound:
            raise BoundViolation(f"combined certificate total {combined.total} > {bound}")
        check = verify_certificate(g, combined, [_ONE] * g.n)
        if not check.ok:
            raise BoundViolation(f"combined certificate failed: {check.reason}")
        composed = ComposedCertificate(
            y=y,
            initial=initial,
            finish=finish.primal,
            combined=combined,
            finish_value=finish.value,
            rho_residual=rho_residual,
        )
    return EndToEndReport(
        delta=delta,
        omega=cs.omega,
        epsilon=bounds.epsilon,
        bound=bound,
        chi_f=lp.value,
        lp=lp,
        bounds=bounds,
        composed=composed,
    )
