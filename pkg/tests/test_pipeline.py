"""Initial-colouring iteration, weight conditions, end-to-end bound."""

from __future__ import annotations

from fractions import Fraction

import pytest

from conftest import instance_a, instance_b, instance_c
from kdfree.bounds import main_bound, mu_values
from kdfree.errors import EligibilityError
from kdfree.graphs import (
    c5xk3_minus,
    clique_structure,
    complete_graph,
    cycle_graph,
    reed_weight,
    strong_product,
)
from kdfree.intervals import verify_certificate
from kdfree.pipeline import end_to_end, initial_colouring, verify_theorem_initial

F = Fraction
ONE = F(1)
YTILDE6 = main_bound(6).ytilde


def test_zero_budget_is_empty():
    trace, weighting = initial_colouring(instance_a(), F(0))
    assert trace.iterations == () and weighting.columns == ()
    assert all(w == 0 for w in trace.final_w)


def test_small_budget_conditions_hold_exactly():
    report = verify_theorem_initial(instance_a(), F(1, 10))
    assert report.ok
    assert all(c.ok for c in report.conditions)


def test_block_weights_and_budget_split():
    g = instance_b()
    cs = clique_structure(g)
    trace, weighting = initial_colouring(g, YTILDE6, cs=cs)
    assert sum((it.y_step for it in trace.iterations), F(0)) == YTILDE6
    for v in cs.v_omega:
        assert trace.final_w[v] == YTILDE6 / 5
    lefts = [it.leftover_after for it in trace.iterations]
    assert all(a > b for a, b in zip(lefts, lefts[1:]))
    assert lefts[-1] == 0
    assert verify_certificate(g, weighting, trace.final_w).ok


def test_trace_keeps_blocks_active():
    g = instance_c()
    cs = clique_structure(g)
    trace, _ = initial_colouring(g, F(3), cs=cs)
    for it in trace.iterations:
        assert cs.v_omega <= set(it.active)
        assert all(v not in cs.v_omega for v in it.removed)
        for v in cs.v_omega:
            assert it.prob[v] == F(1, 5)


def test_large_budget_fills_outside_vertices():
    # y = 3 exhausts the apex vertex, forcing a removal and a second step
    g = instance_a()
    trace, weighting = initial_colouring(g, F(3))
    assert len(trace.iterations) >= 2
    removed = [v for it in trace.iterations for v in it.removed]
    assert removed and all(trace.final_w[v] == 1 for v in removed)
    assert verify_certificate(g, weighting, trace.final_w).ok
    report = verify_theorem_initial(g, F(3))
    assert all(c.ok for c in report.conditions)


def test_capacity_never_exhausts_on_blocks_at_ytilde():
    g = instance_a()
    cs = clique_structure(g)
    trace, _ = initial_colouring(g, YTILDE6, cs=cs)
    for v in cs.v_omega:
        assert trace.final_w[v] < 1


@pytest.mark.parametrize("builder", [instance_a, instance_b])
def test_theorem_initial_at_ytilde(builder):
    g = builder()
    report = verify_theorem_initial(g, YTILDE6)
    assert report.ok
    _, mu, _ = mu_values(6)
    assert report.rho_target == 6 - (1 + mu) * YTILDE6
    assert report.rho_residual <= report.rho_target
    assert all(r <= report.rho_target for r in report.rho_per_vertex)


def test_theorem_initial_zero_budget_reduces_to_unit_reed():
    g = instance_c()
    report = verify_theorem_initial(g, F(0))
    assert report.rho_target == 6
    _, rho = reed_weight(g, clique_structure(g), [ONE] * g.n)
    assert report.rho_residual == rho <= 6


def test_montecarlo_mode_runs_and_is_exact_for_achieved_weights():
    g = instance_a()
    trace, weighting = initial_colouring(g, F(1, 2), mode="montecarlo", trials=400, seed=3)
    assert not trace.exact
    assert verify_certificate(g, weighting, trace.final_w).ok
    again, _ = initial_colouring(g, F(1, 2), mode="montecarlo", trials=400, seed=3)
    assert again == trace


def test_montecarlo_zero_estimates_are_flagged_not_fatal():
    # with 3 trials some vertices never appear in a draw; they are excluded
    # from the step-size minimum and flagged in the trace
    g = instance_c()
    trace, weighting = initial_colouring(g, F(1, 2), mode="montecarlo", trials=3, seed=0)
    flagged = [v for it in trace.iterations for v in it.zero_prob_flagged]
    assert flagged
    assert verify_certificate(g, weighting, trace.final_w).ok


def test_initial_colouring_validates_input():
    with pytest.raises(EligibilityError):
        initial_colouring(strong_product(cycle_graph(5), complete_graph(2)), F(1))
    with pytest.raises(ValueError):
        initial_colouring(instance_a(), F(6))
    with pytest.raises(ValueError):
        initial_colouring(instance_a(), F(1), mode="guess")


def test_end_to_end_block_instance_composes():
    report = end_to_end(instance_a())
    assert report.ok and report.chi_f == 5
    assert report.epsilon == main_bound(6).epsilon
    composed = report.composed
    assert composed is not None
    assert composed.combined.total <= report.bound
    assert verify_certificate(instance_a(), composed.combined, [ONE] * 11).ok
    assert composed.finish_value <= composed.rho_residual


def test_end_to_end_minus_4v():
    g = c5xk3_minus(4)
    report = end_to_end(g)
    assert report.ok and report.chi_f == F(11, 2)
    assert report.composed is None  # intersecting maximum cliques
    assert report.chi_f <= 6 - report.epsilon


def test_end_to_end_minus_2v():
    g = c5xk3_minus(2)
    report = end_to_end(g)
    assert report.ok and report.delta == 7 and report.chi_f == F(13, 2)


def test_end_to_end_rejects_low_degree():
    with pytest.raises(EligibilityError):
        end_to_end(cycle_graph(5))
    with pytest.raises(EligibilityError):
        end_to_end(complete_graph(8))  # omega = Delta + 1 frame
