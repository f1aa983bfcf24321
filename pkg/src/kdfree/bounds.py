"""Exact evaluation of the closed-form colouring constants.

For maximum degree Delta (clique number omega = Delta - 1) the inclusion
probability floor of an outside vertex with d block neighbours is

    p(Delta, d) = [ sum_{i=0..3} 1/4 * Pr(Bin(d, 4/omega) <= i) ] / (Delta - d + 1),

its minima mu_k / mu over d, the per-clique-size step caps ytilde_k, their
minimum ytilde, and the headline quantity Delta - min(1/2, ytilde * mu).  All
arithmetic is exact; decimal output is rounded only for display.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .errors import BoundViolation
from .rationals import format_rational, round_half_even, truncate_decimal

_ZERO = Fraction(0)
_HALF = Fraction(1, 2)

# Display rules per table column, chosen to agree with as many published
# digits as a single rule per column can (the published table itself mixes
# truncation and rounding cell by cell; see matches_published).
TABLE_COLUMN_FORMAT: dict[str, tuple[str, int]] = {
    "mu": ("truncate", 6),
    "mu_times_dp1": ("round", 3),
    "ytilde": ("round", 3),
    "ytilde_mu": ("round", 5),
    "bound": ("round", 6),
}

TABLE_HEADER = ["delta", "d_argmin", "mu", "mu_times_dp1", "ytilde", "ytilde_mu", "bound"]


def format_table_value(column: str, value: Fraction) -> str:
    mode, places = TABLE_COLUMN_FORMAT[column]
    if mode == "truncate":
        return truncate_decimal(value, places)
    return round_half_even(value, places)


def matches_published(value: Fraction, printed: str) -> bool:
    """True iff `printed` is the exact value truncated or half-even rounded
    at the printed precision (the published table mixes both per cell)."""
    printed = printed.strip()
    places = len(printed.split(".")[1]) if "." in printed else 0
    want = Fraction(printed)
    return Fraction(truncate_decimal(value, places)) == want or Fraction(
        round_half_even(value, places)
    ) == want


def quarter_tail_sum(d: int, omega: int) -> Fraction:
    """sum_{i=0..3} 1/4 * Pr(Bin(d, 4/omega) <= i), exactly."""
    if omega < 4:
        raise ValueError(f"needs omega >= 4, got {omega}")
    p = Fraction(4, omega)
    q = 1 - p
    pmf = [comb(d, j) * p**j * q ** (d - j) for j in range(min(d, 3) + 1)]
    total = _ZERO
    running = _ZERO
    for i in range(4):
        if i < len(pmf):
            running += pmf[i]
        total += running
    return Fraction(1, 4) * total


def p_value(delta: int, d: int) -> Fraction:
    """Inclusion probability floor p(Delta, d) for an outside vertex."""
    if delta < 5:
        raise ValueError(f"needs Delta >= 5, got {delta}")
    if not 0 <= d <= delta:
        raise ValueError(f"needs 0 <= d <= Delta, got d={d}")
    return quarter_tail_sum(d, delta - 1) / (delta - d + 1)


def p_curve(delta: int) -> tuple[Fraction, ...]:
    return tuple(p_value(delta, d) for d in range(delta + 1))


def mu_values(delta: int) -> tuple[dict[int, Fraction], Fraction, int]:
    """Prefix minima mu_k of the p-curve, the overall mu, and its first argmin."""
    curve = p_curve(delta)
    mu_k: dict[int, Fraction] = {}
    running = curve[0]
    argmin = 0
    for d, value in enumerate(curve):
        if value < running:
            running = value
            argmin = d
        mu_k[d] = running
    return mu_k, running, argmin


def ytilde_values(delta: int) -> tuple[dict[int, Fraction], Fraction]:
    """Step caps ytilde_k for k in [1, Delta-2] and their convenience-capped min."""
    if delta < 6:
        raise ValueError(f"needs Delta >= 6, got {delta}")
    omega = delta - 1
    mu_k, mu, _ = mu_values(delta)
    ytilde_k: dict[int, Fraction] = {}
    for k in range(1, delta - 1):
        numerator = _HALF * (delta - 1 - k)
        if k <= 3:
            denominator = _HALF + mu - _HALF * k * mu
        else:
            denominator = _HALF + mu - _HALF * k * mu_k[delta + 1 - k]
        ytilde_k[k] = numerator / denominator
    capped = min(
        min(ytilde_k.values()),
        Fraction(omega),
        Fraction(omega - 3) / (1 - 3 * mu),
    )
    return ytilde_k, capped


@dataclass(frozen=True)
class BoundReport:
    """Every constant behind the Delta - min(1/2, ytilde*mu) bound for one Delta."""

    delta: int
    omega: int
    p_curve: tuple[Fraction, ...]
    mu_k: Mapping[int, Fraction]
    mu: Fraction
    argmin_d: int
    eps_prime: Fraction
    ytilde_k: Mapping[int, Fraction]
    ytilde: Fraction
    epsilon: Fraction
    bound: Fraction


def main_bound(delta: int) -> BoundReport:
    """Assemble the full report; also checks ytilde*mu < 1/5 for this Delta."""
    if delta < 6:
        raise ValueError(f"needs Delta >= 6, got {delta}")
    mu_k, mu, argmin = mu_values(delta)
    ytilde_k, ytilde = ytilde_values(delta)
    product = ytilde * mu
    if not product < Fraction(1, 5):
        raise BoundViolation(f"ytilde*mu = {product} >= 1/5 at Delta={delta}")
    epsilon = min(_HALF, product)
    return BoundReport(
        delta=delta,
        omega=delta - 1,
        p_curve=p_curve(delta),
        mu_k=mu_k,
        mu=mu,
        argmin_d=argmin,
        eps_prime=mu,
        ytilde_k=ytilde_k,
        ytilde=ytilde,
        epsilon=epsilon,
        bound=delta - epsilon,
    )


# ── CSV emitters ──────────────────────────────────────────────────────────


def table_rows(deltas: Sequence[int]) -> list[dict[str, str]]:
    """One display row per Delta: exact "p/q" cells plus decimal companions."""
    rows = []
    for delta in deltas:
        report = main_bound(delta)
        exact = {
            "mu": report.mu,
            "mu_times_dp1": report.mu * (delta + 1),
            "ytilde": report.ytilde,
            "ytilde_mu": report.ytilde * report.mu,
            "bound": report.bound,
        }
        row = {"delta": str(delta), "d_argmin": str(report.argmin_d)}
        for name, value in exact.items():
            row[name] = format_rational(value)
        for name, value in exact.items():
            row[name + "_dec"] = format_table_value(name, value)
        rows.append(row)
    return rows


def emit_table(deltas: Sequence[int]) -> str:
    header = TABLE_HEADER + [c + "_dec" for c in TABLE_HEADER[2:]]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for row in table_rows(deltas):
        writer.writerow(row)
    return buf.getvalue()


def emit_p_curve(delta: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["d", "p", "p_dec"])
    for d, value in enumerate(p_curve(delta)):
        writer.writerow([d, format_rational(value), round_half_even(value, 6)])
    return buf.getvalue()
