"""Trace post-processors and experiment metrics.

The broadcast dynamics come with provable trajectory properties: states never
decrease and stay bounded by the initial maximum, the all-equal fully
authorized state is the unique fixed point on a connected graph, the energy
function V drains strictly away from it under the asymptotic dynamics, and
every initially non-maximal agent is silenced at least once on the way to
agreement. These checkers verify completed traces against those facts and
report violations instead of raising, so runs over nonideal channels (where
no guarantee holds) can still be inspected.

The ratio study compares the traditional orthogonal-access baseline with the
switching broadcast protocol on identical instances, normalizing by channel
slots: one traditional round costs n slots, one broadcast round costs two.
"""

from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass, field
from typing import Sequence

from .channel import ChannelModel
from .engine import (
    NumericMode,
    RoundRecord,
    SimulationConfig,
    run_round,
    run_until_consensus,
)
from .protocols import AgentState, ProtocolKind
from .topology import Topology, generate_random_connected

TAU = 2 * math.pi

MAX_REPORTED_VIOLATIONS = 20


@dataclass
class CheckReport:
    """Outcome of one trace check."""

    name: str
    passed: bool
    checked: int = 0
    violations: list[str] = field(default_factory=list)
    skipped: bool = False
    reason: str = ""

    def add_violation(self, message: str) -> None:
        self.passed = False
        if len(self.violations) < MAX_REPORTED_VIOLATIONS:
            self.violations.append(message)


def _vector_sum(values: Sequence):
    # fsum keeps float checks honest near equality; exact values use plain sum
    if values and isinstance(values[0], float):
        return math.fsum(values)
    return sum(values)


def lyapunov_V(x_k: Sequence, x_km1: Sequence, x_star):
    """Energy of the stacked state (x(k), x(k-1)) relative to the target:
    2*n*x_star minus the sum of both snapshots. Zero exactly at consensus."""
    n = len(x_k)
    if len(x_km1) != n:
        raise ValueError("state vectors must have equal length")
    return 2 * n * x_star - _vector_sum(x_k) - _vector_sum(x_km1)


def lyapunov_series(xs: Sequence[Sequence], x_star) -> list:
    """V along a trajectory of state vectors x(1..m); the virtual x(0) is
    taken equal to x(1)."""
    out = []
    prev = xs[0]
    for x in xs:
        out.append(lyapunov_V(x, prev, x_star))
        prev = x
    return out


def check_lyapunov(
    trace: Sequence[RoundRecord],
    x_star,
    numeric: NumericMode,
    strict: bool = True,
) -> CheckReport:
    """Verify the energy drains along a trace.

    With ``strict`` (the asymptotic protocol's guarantee) V must strictly
    decrease at every step where the stacked state is off the consensus
    point; at the consensus point, exact runs must hold V constant and float
    runs get epsilon slack. The switching protocol can hold x still for two
    rounds mid-run, so it is checked with ``strict=False``: V must never
    increase.
    """
    report = CheckReport(name="lyapunov", passed=True)
    xs = [r.x for r in trace]
    slack = 0 if numeric.kind == "exact" else numeric.epsilon * max(1.0, abs(float(x_star)))
    for j in range(len(xs) - 1):
        x_prev = xs[j - 1] if j > 0 else xs[0]
        at_equilibrium = all(numeric.equals(v, x_star) for v in xs[j]) and all(
            numeric.equals(v, x_star) for v in x_prev
        )
        # dV over the window is sum(x(j-1)) - sum(x(j+1)), computed directly
        dV = _vector_sum(x_prev) - _vector_sum(xs[j + 1])
        report.checked += 1
        if at_equilibrium:
            if abs(dV) > slack:
                report.add_violation(f"round {j + 1}: dV={dV} at equilibrium")
        elif strict:
            if not dV < 0:
                report.add_violation(f"round {j + 1}: dV={dV}, expected strict decrease")
        else:
            if dV > slack:
                report.add_violation(f"round {j + 1}: dV={dV} > 0")
    return report


def check_monotone(trace: Sequence[RoundRecord], numeric: NumericMode) -> CheckReport:
    """Componentwise non-decreasing states, bounded by the initial maximum.

    Float runs get epsilon headroom on the bound (channel sums can overshoot
    by rounding); the non-decrease itself is exact in both modes. Reports the
    first violating (agent, round) pairs.
    """
    report = CheckReport(name="monotone", passed=True)
    xs = [r.x for r in trace]
    x_star = max(xs[0])
    bound_slack = 0 if numeric.kind == "exact" else numeric.epsilon * max(1.0, abs(float(x_star)))
    for j, x in enumerate(xs):
        for i, v in enumerate(x, start=1):
            report.checked += 1
            if v > x_star + bound_slack:
                report.add_violation(
                    f"agent {i}, round {j + 1}: state {v} above initial max {x_star}"
                )
            if j + 1 < len(xs) and xs[j + 1][i - 1] < v:
                report.add_violation(
                    f"agent {i}, round {j + 2}: state decreased {v} -> {xs[j + 1][i - 1]}"
                )
    return report


def check_silencing(
    trace: Sequence[RoundRecord],
    topology: Topology,
    numeric: NumericMode,
) -> CheckReport:
    """Every initially non-maximal agent must hold authorization 0 at least
    once along a converged asymptotic run. Maximality of the initial state is
    judged under the numeric mode's equality."""
    report = CheckReport(name="silencing", passed=True)
    x1 = trace[0].x
    if len(x1) != topology.n:
        raise ValueError("trace width does not match the topology")
    x_star = max(x1)
    for i in topology.agents():
        if numeric.equals(x1[i - 1], x_star):
            continue
        report.checked += 1
        if not any(rec.y[i - 1] == 0 for rec in trace):
            report.add_violation(f"agent {i} started below the max but was never silenced")
    return report


def equilibrium_round(x: Sequence, y: Sequence, topology: Topology) -> tuple[tuple, tuple]:
    """Apply one synchronous round of the asymptotic dynamics over an ideal
    channel to an arbitrary (x, y) configuration; returns (x', y')."""
    states = [AgentState(x=xi, y=yi) for xi, yi in zip(x, y)]
    new_states, _ = run_round(
        states, topology, ProtocolKind.ASYMPTOTIC, ChannelModel.ideal(),
        NumericMode.exact(), 1, random.Random(0),
    )
    return tuple(s.x for s in new_states), tuple(s.y for s in new_states)


def equilibrium_fixed_analytic(x: Sequence, y: Sequence) -> bool:
    """Closed-form fixed-point characterization on a connected graph: all
    states equal and every agent authorized."""
    return all(yi == 1 for yi in y) and all(xi == x[0] for xi in x)


def check_equilibrium(x: Sequence, y: Sequence, topology: Topology) -> bool:
    """One-round fixedness of (x, y) under the asymptotic dynamics.

    Also cross-checks the dynamic test against the analytic characterization
    and raises if they ever disagree (that would mean one of the two is
    implemented wrong).
    """
    x_next, y_next = equilibrium_round(x, y, topology)
    dynamic = x_next == tuple(x) and y_next == tuple(y)
    analytic = equilibrium_fixed_analytic(x, y)
    if dynamic != analytic:
        raise RuntimeError(
            f"equilibrium characterization mismatch on x={x}, y={y}: "
            f"dynamic={dynamic}, analytic={analytic}"
        )
    return dynamic


def auto_edge_probability(n: int) -> float:
    """Density heuristic for random connected instances: twice the
    connectivity threshold ln(n)/n, capped at 1."""
    if n <= 2:
        return 1.0
    return min(1.0, 2 * math.log(n) / n)


@dataclass(frozen=True)
class RatioResult:
    """One trial of the slot-normalized speedup study."""

    n: int
    trial: int
    seed: int
    rounds_traditional: int
    rounds_broadcast: int
    slots_traditional: int
    slots_broadcast: int
    converged_both: bool
    r: float | None


@dataclass(frozen=True)
class RatioAggregate:
    """Per-size summary of the ratio study."""

    n: int
    trials: int
    excluded: int
    r_min: float | None
    r_median: float | None
    r_max: float | None
    rounds_traditional_median: float | None
    rounds_broadcast_median: float | None


def ratio_experiment(
    sizes: Sequence[int],
    trials: int,
    seed: int,
    edge_probability: float | None = None,
    state_low: float = 0.0,
    state_high: float = TAU,
    numeric: NumericMode | None = None,
    round_cap: int | None = None,
) -> list[RatioResult]:
    """Run the traditional baseline and the switching broadcast protocol on
    identical instances and record the slot-normalized speedup.

    Each trial draws one connected graph and one state vector, used by both
    protocols. r = (rounds_traditional * n) / (rounds_broadcast * 2): a
    traditional round occupies n slots, a broadcast round two. Trials where
    either protocol misses the cap, or that start at consensus (zero-round
    runs), carry r = None and are excluded from aggregates but still listed.
    Deterministic for a given seed: trial t of size index s uses the derived
    instance seed ``seed + s*trials + t`` (graph stream 2*inst, states stream
    2*inst + 1).
    """
    if not sizes:
        raise ValueError("sizes must be nonempty")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    numeric = numeric or NumericMode.float_mode()
    results: list[RatioResult] = []
    for si, n in enumerate(sizes):
        p = edge_probability if edge_probability is not None else auto_edge_probability(n)
        for t in range(trials):
            inst = seed + si * trials + t
            topo = generate_random_connected(n, p, 2 * inst)
            rng = random.Random(2 * inst + 1)
            x0 = tuple(state_low + (state_high - state_low) * rng.random() for _ in range(n))
            outcomes = {}
            for protocol in (ProtocolKind.TRADITIONAL, ProtocolKind.SWITCHING):
                cfg = SimulationConfig(
                    topology=topo,
                    protocol=protocol,
                    initial_states=x0,
                    numeric=numeric,
                    round_cap=round_cap,
                )
                outcomes[protocol] = run_until_consensus(cfg)
            out_t = outcomes[ProtocolKind.TRADITIONAL]
            out_b = outcomes[ProtocolKind.SWITCHING]
            usable = (
                out_t.converged and out_b.converged
                and out_t.rounds >= 1 and out_b.rounds >= 1
            )
            r = (out_t.rounds * n) / (out_b.rounds * 2) if usable else None
            results.append(
                RatioResult(
                    n=n,
                    trial=t,
                    seed=inst,
                    rounds_traditional=out_t.rounds,
                    rounds_broadcast=out_b.rounds,
                    slots_traditional=out_t.slots_used,
                    slots_broadcast=out_b.slots_used,
                    converged_both=out_t.converged and out_b.converged,
                    r=r,
                )
            )
    return results


def aggregate_ratios(results: Sequence[RatioResult]) -> list[RatioAggregate]:
    """Per-size min/median/max of r plus median round counts, in size order."""
    by_n: dict[int, list[RatioResult]] = {}
    for res in results:
        by_n.setdefault(res.n, []).append(res)
    aggregates = []
    for n in sorted(by_n):
        group = by_n[n]
        usable = [res for res in group if res.r is not None]
        rs = [res.r for res in usable]
        aggregates.append(
            RatioAggregate(
                n=n,
                trials=len(group),
                excluded=len(group) - len(usable),
                r_min=min(rs) if rs else None,
                r_median=statistics.median(rs) if rs else None,
                r_max=max(rs) if rs else None,
                rounds_traditional_median=(
                    statistics.median(res.rounds_traditional for res in usable) if usable else None
                ),
                rounds_broadcast_median=(
                    statistics.median(res.rounds_broadcast for res in usable) if usable else None
                ),
            )
        )
    return aggregates
