"""Interval-based colour sets, stable-set weightings and the certificate checker.

Colour mass lives in [0, k) as finite unions of half-open rational intervals;
a colouring assigns disjoint interval sets to stable sets, and the weighting
form lists (stable set, weight) columns.  The three representations are
interconvertible and a colouring can be extended onto an uncoloured set via
Hall's condition and bipartite matching over unit colour slots.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import GraphFormatError, HallViolation, SizeLimit
from .graphs import Graph
from .rationals import format_rational, parse_rational

_ZERO = Fraction(0)

HALL_SET_LIMIT = 20


class IntervalSet:
    """Canonical finite union of disjoint, non-touching half-open intervals."""

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[tuple[Fraction, Fraction]] = ()):
        cleaned = []
        for lo, hi in intervals:
            lo, hi = Fraction(lo), Fraction(hi)
            if lo >= hi:
                raise ValueError(f"empty or inverted interval [{lo},{hi})")
            cleaned.append((lo, hi))
        cleaned.sort()
        merged: list[tuple[Fraction, Fraction]] = []
        for lo, hi in cleaned:
            if merged and lo <= merged[-1][1]:
                prev_lo, prev_hi = merged[-1]
                merged[-1] = (prev_lo, max(prev_hi, hi))
            else:
                merged.append((lo, hi))
        self.intervals = tuple(merged)

    @property
    def measure(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.intervals), _ZERO)

    def is_empty(self) -> bool:
        return not self.intervals

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.intervals + other.intervals)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for a_lo, a_hi in self.intervals:
            for b_lo, b_hi in other.intervals:
                lo, hi = max(a_lo, b_lo), min(a_hi, b_hi)
                if lo < hi:
                    out.append((lo, hi))
        return IntervalSet(out)

    def subtract(self, other: "IntervalSet") -> "IntervalSet":
        pieces = list(self.intervals)
        for b_lo, b_hi in other.intervals:
            next_pieces = []
            for lo, hi in pieces:
                if b_hi <= lo or hi <= b_lo:
                    next_pieces.append((lo, hi))
                    continue
                if lo < b_lo:
                    next_pieces.append((lo, b_lo))
                if b_hi < hi:
                    next_pieces.append((b_hi, hi))
            pieces = next_pieces
        return IntervalSet(pieces)

    def take(self, amount: Fraction) -> "IntervalSet":
        """Greedy-from-the-left subset of exact measure `amount`."""
        amount = Fraction(amount)
        if amount < 0 or amount > self.measure:
            raise ValueError(f"cannot take measure {amount} from measure {self.measure}")
        if amount == 0:
            return IntervalSet()
        out = []
        remaining = amount
        for lo, hi in self.intervals:
            width = hi - lo
            if width <= remaining:
                out.append((lo, hi))
                remaining -= width
            else:
                out.append((lo, lo + remaining))
                remaining = _ZERO
            if remaining == 0:
                break
        return IntervalSet(out)

    def within(self, k: Fraction) -> bool:
        return all(lo >= 0 and hi <= k for lo, hi in self.intervals)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntervalSet) and self.intervals == other.intervals

    def __hash__(self) -> int:
        return hash(self.intervals)

    def __repr__(self) -> str:
        body = " u ".join(f"[{lo},{hi})" for lo, hi in self.intervals)
        return f"IntervalSet({body or 'empty'})"


def interval_span(k: Fraction) -> IntervalSet:
    k = Fraction(k)
    return IntervalSet([(_ZERO, k)]) if k > 0 else IntervalSet()


@dataclass(frozen=True)
class IntervalColouring:
    """Assignment of disjoint interval sets within [0,k) to stable sets."""

    k: Fraction
    assignment: tuple[tuple[frozenset[int], IntervalSet], ...]

    def colour_of(self, v: int) -> IntervalSet:
        out = IntervalSet()
        for s, iv in self.assignment:
            if v in s:
                out = out.union(iv)
        return out

    def colour_of_set(self, vertices: Iterable[int]) -> IntervalSet:
        vs = set(vertices)
        out = IntervalSet()
        for s, iv in self.assignment:
            if s & vs:
                out = out.union(iv)
        return out

    def coverage(self, v: int) -> Fraction:
        return self.colour_of(v).measure

    def validate(self, g: Graph) -> None:
        used = _ZERO
        for s, iv in self.assignment:
            if not g.is_stable(s):
                raise ValueError(f"non-stable colour class {sorted(s)}")
            if not iv.within(self.k):
                raise ValueError(f"interval set escapes [0,{self.k})")
            used += iv.measure
        for (s1, iv1), (s2, iv2) in combinations(self.assignment, 2):
            if not iv1.intersect(iv2).is_empty():
                raise ValueError(f"overlapping colour for {sorted(s1)} and {sorted(s2)}")
        if used > self.k:
            raise ValueError("total colour mass exceeds k")


def empty_colouring(k: Fraction) -> IntervalColouring:
    return IntervalColouring(Fraction(k), ())


@dataclass(frozen=True)
class StableSetWeighting:
    """Columns of (stable set, positive weight) summing to `total`."""

    columns: tuple[tuple[frozenset[int], Fraction], ...]
    total: Fraction

    def coverage(self, v: int) -> Fraction:
        return sum((wt for s, wt in self.columns if v in s), _ZERO)

    def coverage_vector(self, n: int) -> list[Fraction]:
        cov = [_ZERO] * n
        for s, wt in self.columns:
            for v in s:
                cov[v] += wt
        return cov

    def weight_sum(self) -> Fraction:
        return sum((wt for _, wt in self.columns), _ZERO)


def alpha(g: Graph, kc: IntervalColouring, v: int) -> IntervalSet:
    """Colours available to v: [0,k) minus the colour on its neighbourhood."""
    return interval_span(kc.k).subtract(kc.colour_of_set(g.adj[v]))


# ── the three equivalent representations ──────────────────────────────────


def to_weighting(kc: IntervalColouring) -> StableSetWeighting:
    """Interval colouring -> weighting; unassigned mass pads an empty column."""
    merged: dict[frozenset[int], Fraction] = {}
    for s, iv in kc.assignment:
        if iv.measure > 0:
            merged[s] = merged.get(s, _ZERO) + iv.measure
    slack = Fraction(kc.k) - sum(merged.values(), _ZERO)
    if slack > 0:
        empty = frozenset()
        merged[empty] = merged.get(empty, _ZERO) + slack
    columns = tuple(sorted(merged.items(), key=lambda it: tuple(sorted(it[0]))))
    return StableSetWeighting(columns=columns, total=Fraction(kc.k))


def to_intervals(ssw: StableSetWeighting) -> IntervalColouring:
    """Weighting -> interval colouring by stacking columns left to right."""
    cursor = _ZERO
    assignment = []
    for s, wt in ssw.columns:
        if wt <= 0:
            raise ValueError("column weights must be positive")
        assignment.append((frozenset(s), IntervalSet([(cursor, cursor + wt)])))
        cursor += wt
    if cursor > ssw.total:
        raise ValueError("column weights exceed the stated total")
    return IntervalColouring(k=Fraction(ssw.total), assignment=tuple(assignment))


def multiset_scale(ssw: StableSetWeighting) -> int:
    """Least c making every column weight (and the total) an integer multiple of 1/c."""
    c = 1
    for _, wt in ssw.columns:
        c = c * wt.denominator // math.gcd(c, wt.denominator)
    c = c * ssw.total.denominator // math.gcd(c, ssw.total.denominator)
    return c


def to_multiset(ssw: StableSetWeighting, c: int | None = None) -> list[frozenset[int]]:
    """Expand to a multiset of c*total stable sets, each column repeated c*weight times."""
    if c is None:
        c = multiset_scale(ssw)
    out = []
    for s, wt in ssw.columns:
        count = c * wt
        if count.denominator != 1:
            raise ValueError(f"c={c} does not make weight {wt} integral")
        out.extend([frozenset(s)] * count.numerator)
    return out


def sample(ssw: StableSetWeighting, rng) -> frozenset[int]:
    """Draw a column with probability weight/total, exactly.

    Any slack between the column weights and the total maps to the empty set.
    """
    c = multiset_scale(ssw)
    ticket = rng.randrange((Fraction(ssw.total) * c).numerator)
    acc = 0
    for s, wt in ssw.columns:
        acc += (wt * c).numerator
        if ticket < acc:
            return frozenset(s)
    return frozenset()


# ── certificate verification ──────────────────────────────────────────────


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(
    g: Graph, ssw: StableSetWeighting, w: Sequence[Fraction]
) -> CertificateCheck:
    """Independent exact check: stable columns, weight budget, coverage >= w.

    Trusts nothing from the producer; the first violated constraint is named.
    """
    if len(w) != g.n:
        return CertificateCheck(False, f"weight vector has {len(w)} entries, graph has {g.n}")
    for idx, (s, wt) in enumerate(ssw.columns):
        if any(not 0 <= v < g.n for v in s):
            return CertificateCheck(False, f"column {idx} has out-of-range vertex")
        if wt <= 0:
            return CertificateCheck(False, f"column {idx} has non-positive weight {wt}")
        if not g.is_stable(s):
            return CertificateCheck(False, f"non-stable column {idx}: {sorted(s)}")
    if ssw.weight_sum() > ssw.total:
        return CertificateCheck(
            False, f"column weights sum to {ssw.weight_sum()} > claimed total {ssw.total}"
        )
    cov = ssw.coverage_vector(g.n)
    for v in range(g.n):
        if cov[v] < w[v]:
            return CertificateCheck(
                False, f"undercovered vertex {v}: coverage {cov[v]} < weight {w[v]}"
            )
    return CertificateCheck(True)


# ── Hall extension ────────────────────────────────────────────────────────


def _uncolour(kc: IntervalColouring, drop: frozenset[int]) -> IntervalColouring:
    merged: dict[frozenset[int], IntervalSet] = {}
    for s, iv in kc.assignment:
        s2 = s - drop
        merged[s2] = merged.get(s2, IntervalSet()).union(iv)
    assignment = tuple(
        (s, iv) for s, iv in sorted(merged.items(), key=lambda it: tuple(sorted(it[0])))
        if not iv.is_empty()
    )
    return IntervalColouring(k=kc.k, assignment=assignment)


def hall_extend(
    g: Graph,
    kc: IntervalColouring,
    target: Iterable[int],
    w: Sequence[Fraction],
) -> IntervalColouring:
    """Extend a colouring onto `target` so each v gets coverage w(v).

    Any colour already on `target` is first erased.  The availability
    condition |union of alpha(v) over v in X'| >= sum of w(v) is checked for
    every subset X' of the target (hence the size limit); the extension is
    then realized by a saturating matching between weight copies and unit
    colour slots.
    """
    X = frozenset(target)
    if len(X) > HALL_SET_LIMIT:
        raise SizeLimit(f"hall_extend handles |X| <= {HALL_SET_LIMIT}, got {len(X)}")
    need = {v: Fraction(w[v]) for v in X}
    if any(q < 0 for q in need.values()):
        raise ValueError("negative demand")
    kc.validate(g)
    work = _uncolour(kc, X)
    avail = {v: alpha(g, work, v) for v in X}

    members = sorted(X)
    for size in range(1, len(members) + 1):
        for sub in combinations(members, size):
            union = IntervalSet()
            for v in sub:
                union = union.union(avail[v])
            demand = sum((need[v] for v in sub), _ZERO)
            if union.measure < demand:
                raise HallViolation(sub, shortfall=demand - union.measure)

    # common denominator for slots: endpoints, k, and all demands
    c = Fraction(work.k).denominator
    for _, iv in work.assignment:
        for lo, hi in iv.intervals:
            c = c * lo.denominator // math.gcd(c, lo.denominator)
            c = c * hi.denominator // math.gcd(c, hi.denominator)
    for q in need.values():
        c = c * q.denominator // math.gcd(c, q.denominator)
    num_slots = (Fraction(work.k) * c).numerator

    owner: list[frozenset[int] | None] = [None] * num_slots
    for s, iv in work.assignment:
        for lo, hi in iv.intervals:
            for j in range((lo * c).numerator, (hi * c).numerator):
                owner[j] = s

    def compatible(v: int, j: int) -> bool:
        s = owner[j]
        return s is None or not (s & g.adj[v])

    copies = [v for v in members for _ in range((need[v] * c).numerator)]
    slot_match: dict[int, int] = {}  # slot -> copy index

    def augment(ci: int, seen: set[int]) -> bool:
        v = copies[ci]
        for j in range(num_slots):
            if j in seen or not compatible(v, j):
                continue
            seen.add(j)
            if j not in slot_match or augment(slot_match[j], seen):
                slot_match[j] = ci
                return True
        return False

    for ci in range(len(copies)):
        if not augment(ci, set()):
            # unreachable once the subset condition above holds
            raise HallViolation(X)

    extra: dict[int, int] = {j: copies[ci] for j, ci in slot_match.items()}
    regrouped: dict[frozenset[int], list[tuple[Fraction, Fraction]]] = {}
    for j in range(num_slots):
        s = owner[j]
        if j in extra:
            s = (s or frozenset()) | {extra[j]}
        if s is None or not s:
            continue
        regrouped.setdefault(s, []).append((Fraction(j, c), Fraction(j + 1, c)))
    assignment = tuple(
        (s, IntervalSet(pieces))
        for s, pieces in sorted(regrouped.items(), key=lambda it: tuple(sorted(it[0])))
    )
    return IntervalColouring(k=kc.k, assignment=assignment)


# ── certificate files ─────────────────────────────────────────────────────


@dataclass(frozen=True)
class CertificateFile:
    n: int
    k: Fraction
    w: tuple[Fraction, ...]
    weighting: StableSetWeighting


def certificate_to_json(n: int, w: Sequence[Fraction], ssw: StableSetWeighting) -> str:
    payload = {
        "n": n,
        "k": format_rational(ssw.total),
        "w": [format_rational(Fraction(x)) for x in w],
        "columns": [
            {"vertices": sorted(s), "weight": format_rational(wt)}
            for s, wt in ssw.columns
        ],
    }
    return json.dumps(payload, indent=1)


def certificate_from_json(text: str) -> CertificateFile:
    try:
        payload = json.loads(text)
        n = int(payload["n"])
        k = parse_rational(payload["k"])
        w = tuple(parse_rational(x) for x in payload["w"])
        columns = tuple(
            (frozenset(int(v) for v in col["vertices"]), parse_rational(col["weight"]))
            for col in payload["columns"]
        )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise GraphFormatError(f"malformed certificate: {exc}") from exc
    if len(w) != n:
        raise GraphFormatError(f"certificate lists {len(w)} weights for n={n}")
    return CertificateFile(n=n, k=k, w=w, weighting=StableSetWeighting(columns, k))
