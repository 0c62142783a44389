"""Exhaustive checks of the structural properties and conjectures of F_n networks.

Each check enumerates its whole domain and returns a :class:`PropertyReport`
carrying every violation as a witness record, never a bare boolean.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable

import numpy as np

from .fxp_map import (
    ControlParameter,
    DomainError,
    QuantizationMode,
    exact_table,
    frac_quarter,
)
from .state_net import (
    NetworkSummary,
    StateNetwork,
    build_network,
    component_labels,
    find_cycles,
    in_degrees,
    summarize,
)

CLAIM_IDS = ("P1", "P2", "P3", "C1", "C2", "D1", "D2", "D3", "D4", "D5", "D6")
CONJECTURES = frozenset({"C1", "C2"})
# Proven properties and theorem-backed claims; conjectures join only on request.
ALWAYS_ASSERTED = frozenset({"P1", "P2", "D2", "D5"})
LARGE_IN_DEGREE = 3
COMPONENT_BOUND = 6


@dataclass
class PropertyReport:
    claim_id: str
    mu: ControlParameter
    n: int | tuple[int, int]
    checked_count: int
    violations: list[dict[str, Any]] = field(default_factory=list)
    notes: str = ""
    data: dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict[str, Any]:
        n = list(self.n) if isinstance(self.n, tuple) else self.n
        return {
            "claim_id": self.claim_id,
            "mu": str(self.mu),
            "n": n,
            "holds": self.holds,
            "checked_count": self.checked_count,
            "violation_count": len(self.violations),
            "violations": self.violations,
            "notes": self.notes,
            "data": self.data,
        }


@lru_cache(maxsize=64)
def _round_net(mu: ControlParameter, n: int) -> StateNetwork:
    return build_network(mu, n, QuantizationMode.ROUND)


@dataclass(frozen=True)
class _Analysis:
    net: StateNetwork
    summary: NetworkSummary
    cycles: list[list[int]]
    in_degree: np.ndarray


@lru_cache(maxsize=64)
def _analyze(mu: ControlParameter, n: int) -> _Analysis:
    net = _round_net(mu, n)
    return _Analysis(net, summarize(net), find_cycles(net), in_degrees(net))


def _even_offset(quarter: np.ndarray) -> np.ndarray:
    """+1 for frac in [0.25, 0.5), -1 for [0.5, 0.75), else 0."""
    q = np.asarray(quarter, dtype=np.int64)
    return np.where(q == 1, 1, np.where(q == 2, -1, 0))


def check_p1_even(mu: ControlParameter, n: int) -> PropertyReport:
    """F_{n+1}(2i) = 2 F_n(i) + offset(frac(f_n(i) 2^n)) for every i in 0..2^n."""
    fn = _round_net(mu, n).successor
    fn1 = _round_net(mu, n + 1).successor
    _, rem, d = exact_table(mu, n)
    offset = _even_offset(frac_quarter(rem, d))
    i = np.arange(fn.size)
    expected = 2 * fn + offset
    actual = fn1[2 * i]
    bad = np.flatnonzero(actual != expected)
    return PropertyReport(
        "P1", mu, n, checked_count=fn.size,
        violations=[
            {"i": int(k), "expected": int(expected[k]), "actual": int(actual[k])} for k in bad
        ],
        notes="round mode, half-up ties",
    )


def odd_bound(mu: ControlParameter, n: int, i: np.ndarray, quarter: np.ndarray) -> np.ndarray:
    """|R(N/2^(n_mu+2) * (4 - (1+4i)/2^(n-1)))| + (1 if frac in [0.25, 0.75) else 2)."""
    # The inner quantity is N * (2^(n+1) - 1 - 4i) / 2^(n_mu+n+1); R is symmetric about 0.
    d = mu.exponent + n + 1
    if d + 3 < 63:
        mag = np.abs((1 << (n + 1)) - 1 - 4 * i.astype(np.int64))
        rounded = (2 * mu.numerator * mag + (1 << d)) >> (d + 1)
    else:
        mag = [abs((1 << (n + 1)) - 1 - 4 * int(k)) for k in i]
        rounded = np.array([(2 * mu.numerator * m + (1 << d)) >> (d + 1) for m in mag],
                           dtype=np.int64)
    q = np.asarray(quarter, dtype=np.int64)
    return rounded + np.where((q == 1) | (q == 2), 1, 2)


def check_p2_odd(mu: ControlParameter, n: int) -> PropertyReport:
    """|F_{n+1}(2i+1) - 2 F_n(i)| against its triangle-inequality bound.

    Labels run over 0..2^n - 1: 2i + 1 leaves the n+1 bit domain at i = 2^n.
    """
    fn = _round_net(mu, n).successor
    fn1 = _round_net(mu, n + 1).successor
    _, rem, d = exact_table(mu, n)
    i = np.arange(fn.size - 1)
    lhs = np.abs(fn1[2 * i + 1] - 2 * fn[i])
    rhs = odd_bound(mu, n, i, frac_quarter(rem, d)[:-1])
    bad = np.flatnonzero(lhs > rhs)
    return PropertyReport(
        "P2", mu, n, checked_count=int(i.size),
        violations=[{"i": int(k), "lhs": int(lhs[k]), "bound": int(rhs[k])} for k in bad],
        notes="round mode; i = 2^n excluded since 2i+1 > 2^(n+1)",
    )


def check_p3_indegree_location(
    mu: ControlParameter, extra_n: Iterable[int] = ()
) -> PropertyReport:
    """Where do nodes of in-degree >= 3 sit relative to 2^n?

    Descriptive: nothing is asserted, the maximum normalized distance
    (2^n - v) / 2^n of such nodes is reported per n.
    """
    ns = [mu.exponent] + sorted(set(extra_n) - {mu.exponent})
    per_n = []
    checked = 0
    for n in ns:
        net = _round_net(mu, n)
        deg = in_degrees(net)
        top = net.top
        heavy = np.flatnonzero(deg >= LARGE_IN_DEGREE)
        peak = net.successor[top // 2] if n >= 1 else 0
        dist = [(top - int(v)) / top for v in heavy]
        per_n.append({
            "n": n,
            "peak_image": int(peak),
            "nodes": [{"v": int(v), "in_degree": int(deg[v]), "distance": dd}
                      for v, dd in zip(heavy, dist)],
            "max_distance": max(dist) if dist else None,
            "above_peak_with_preimage": int(np.count_nonzero(deg[peak + 1:])),
        })
        checked += net.size
    return PropertyReport(
        "P3", mu, (ns[0], ns[-1]) if len(ns) > 1 else ns[0], checked_count=checked,
        notes="descriptive: 'close to 2^n' is not thresholded",
        data={"per_n": per_n},
    )


def colliding_pairs(net: StateNetwork) -> Iterable[tuple[int, int]]:
    """All label pairs i1 < i2 sharing a successor, by bucketing on successor value."""
    succ = net.successor
    order = np.argsort(succ, kind="stable")
    deg = np.bincount(succ, minlength=net.size)
    starts = np.concatenate(([0], np.cumsum(deg)))
    for v in np.flatnonzero(deg > 1):
        members = order[starts[v]:starts[v + 1]].tolist()
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                yield members[a], members[b]


def check_c1_collision_distance(
    mu: ControlParameter, n: int, mode: QuantizationMode | str = QuantizationMode.ROUND
) -> PropertyReport:
    """F_n(i1) = F_n(i2), (i1 + i2) mod 2^n != 0  =>  |i1 - i2| < 2^(n - n_mu + 1)."""
    net = build_network(mu, n, mode)
    top = net.top
    bound = 1 << (n - mu.exponent + 1)
    colliding = exempt = 0
    violations = []
    for i1, i2 in colliding_pairs(net):
        colliding += 1
        if (i1 + i2) % top == 0:
            exempt += 1
            continue
        if i2 - i1 >= bound:
            violations.append({"i1": i1, "i2": i2, "image": int(net.successor[i1]),
                               "distance": i2 - i1})
    # Non-colliding pairs satisfy the implication vacuously, so the domain is every pair.
    return PropertyReport(
        "C1", mu, n, checked_count=net.size * (net.size - 1) // 2, violations=violations,
        notes=f"mode={net.mode.value}; bound={bound}",
        data={"bound": bound, "colliding_pairs": colliding, "exempt_symmetric_pairs": exempt},
    )


def check_c2_component_count(mu: ControlParameter, n_range: Iterable[int]) -> PropertyReport:
    """C <= 6 for every precision in the range."""
    ns = list(n_range)
    seq = {}
    violations = []
    for n in ns:
        c = _analyze(mu, n).summary.component_count
        seq[n] = c
        if c > COMPONENT_BOUND:
            violations.append({"n": n, "component_count": c, "bound": COMPONENT_BOUND})
    return PropertyReport(
        "C2", mu, (ns[0], ns[-1]), checked_count=len(ns), violations=violations,
        data={"component_counts": {str(k): v for k, v in seq.items()}},
    )


def periodic_points(net: StateNetwork, m: int, cycles: list[list[int]] | None = None) -> list[int]:
    """Solutions x of F_n^(m)(x) = x: nodes on cycles whose length divides m."""
    if m < 1:
        raise DomainError(f"iteration count m must be >= 1, got {m}")
    if cycles is None:
        cycles = find_cycles(net)
    return sorted(v for c in cycles if m % len(c) == 0 for v in c)


def _d_reports(mu: ControlParameter, ns: list[int], m_max: int) -> list[PropertyReport]:
    span = (ns[0], ns[-1])
    counts: dict[str, int] = {}
    d2_viol, d4_viol, d6_viol = [], [], []
    d3_rows, d4_rows, d6_rows = [], [], []
    d_n: dict[int, int] = {}
    d2_checked = d4_checked = 0
    for n in ns:
        a = _analyze(mu, n)
        net, summary, cycles, deg = a.net, a.summary, a.cycles, a.in_degree
        counts[str(n)] = summary.component_count

        labels = component_labels(net)
        per_component = np.bincount(
            np.unique(labels, return_inverse=True)[1][[c[0] for c in cycles]],
            minlength=summary.component_count,
        )
        d2_checked += summary.component_count
        for k in np.flatnonzero(per_component != 1):
            d2_viol.append({"n": n, "component_index": int(k),
                            "cycles": int(per_component[k])})

        solutions = {m: len(periodic_points(net, m, cycles)) for m in range(1, m_max + 1)}
        d3_rows.append({
            "n": n,
            "component_count": summary.component_count,
            "cycle_count": len(cycles),
            "solutions_per_m": {str(m): s for m, s in solutions.items()},
            "total_pairs_m_x": sum(solutions.values()),
            "distinct_periodic_points": len({v for c in cycles for v in c}),
            "cycles_with_length_le_m_max": sum(1 for c in cycles if len(c) <= m_max),
        })

        long_cycles = [c for c in cycles if len(c) > 2]
        d4_checked += len(long_cycles)
        for c in long_cycles:
            top_deg = int(max(deg[v] for v in c))
            d4_rows.append({"n": n, "cycle_length": len(c), "max_in_degree_on_cycle": top_deg})
            if top_deg < LARGE_IN_DEGREE:
                d4_viol.append({"n": n, "cycle_start": c[0], "cycle_length": len(c),
                                "max_in_degree_on_cycle": top_deg})

        d_n[n] = summary.max_in_degree_node

        sizes = [c.node_count for c in summary.components]
        frac = sizes[0] / net.size
        decreasing = all(a > b for a, b in zip(sizes, sizes[1:]))
        d6_rows.append({"n": n, "sizes": sizes, "largest_fraction": frac,
                        "strictly_decreasing": decreasing})
        if frac <= 0.5 or not decreasing:
            d6_viol.append({"n": n, "largest_fraction": frac, "strictly_decreasing": decreasing})

    d5_viol = []
    for n in ns:
        if n + 1 in d_n:
            prev, nxt = d_n[n], d_n[n + 1]
            if nxt - 2 * prev not in (-1, 0, 1):
                d5_viol.append({"n": n, "D_n": prev, "D_n_plus_1": nxt})

    return [
        PropertyReport("D1", mu, span, checked_count=len(ns),
                       notes="reported: component-count sequence",
                       data={"component_counts": counts, "max": max(counts.values())}),
        PropertyReport("D2", mu, span, checked_count=d2_checked, violations=d2_viol,
                       notes="asserted: exactly one cycle per weakly connected component"),
        PropertyReport("D3", mu, span, checked_count=len(ns),
                       notes="reported: component count vs cycle count vs (m, x) solution tallies",
                       data={"m_max": m_max, "per_n": d3_rows}),
        PropertyReport("D4", mu, span, checked_count=d4_checked, violations=d4_viol,
                       notes=f"cycles longer than 2 need a node of in-degree >= {LARGE_IN_DEGREE}",
                       data={"cycles": d4_rows}),
        PropertyReport("D5", mu, span, checked_count=sum(1 for n in ns if n + 1 in d_n),
                       violations=d5_viol,
                       notes="D_(n+1) in {2D_n - 1, 2D_n, 2D_n + 1}",
                       data={"D_n": {str(k): v for k, v in d_n.items()}}),
        PropertyReport("D6", mu, span, checked_count=len(ns), violations=d6_viol,
                       notes="largest component > half the nodes, sizes strictly decreasing",
                       data={"per_n": d6_rows}),
    ]


def check_discussion_claims(
    mu: ControlParameter, n_range: Iterable[int], m_max: int = 16
) -> list[PropertyReport]:
    ns = sorted(set(n_range))
    if not ns:
        raise DomainError("empty precision range")
    return _d_reports(mu, ns, m_max)


def run_checks(
    mu: ControlParameter,
    n_range: Iterable[int],
    claims: Iterable[str] = CLAIM_IDS,
    m_max: int = 16,
    c1_mode: QuantizationMode | str = QuantizationMode.ROUND,
) -> list[PropertyReport]:
    """Selected claims over a precision range, in canonical claim order.

    Only C1 honours ``c1_mode``; every other claim is a round-mode statement.
    """
    ns = sorted(set(n_range))
    wanted = set(claims)
    unknown = wanted - set(CLAIM_IDS)
    if unknown:
        raise DomainError(f"unknown claim ids: {sorted(unknown)}")
    out: list[PropertyReport] = []
    if "P1" in wanted:
        out += [check_p1_even(mu, n) for n in ns]
    if "P2" in wanted:
        out += [check_p2_odd(mu, n) for n in ns]
    if "P3" in wanted:
        out.append(check_p3_indegree_location(mu, ns))
    if "C1" in wanted:
        out += [check_c1_collision_distance(mu, n, c1_mode) for n in ns]
    if "C2" in wanted:
        out.append(check_c2_component_count(mu, ns))
    if wanted & {"D1", "D2", "D3", "D4", "D5", "D6"}:
        out += [r for r in check_discussion_claims(mu, ns, m_max) if r.claim_id in wanted]
    return out


def failed_claims(reports: Iterable[PropertyReport], asserted: Iterable[str]) -> list[str]:
    """Claim ids that are asserted and have at least one violation."""
    asserted = set(asserted)
    return sorted({r.claim_id for r in reports if r.claim_id in asserted and not r.holds})


def clear_caches() -> None:
    _analyze.cache_clear()
    _round_net.cache_clear()
