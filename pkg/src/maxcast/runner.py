"""Executes validated scenarios and assembles experiment-level results."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

from .analysis import (
    CheckReport,
    check_lyapunov,
    check_monotone,
    check_silencing,
    lyapunov_series,
)
from .engine import RunOutcome, run_until_consensus
from .protocols import ProtocolKind
from .scenario import Scenario


def run_scenario(scenario: Scenario) -> tuple[RunOutcome, list[CheckReport]]:
    """Resolve and run one scenario, then apply the requested trace checks.

    The energy series is attached to the outcome when the lyapunov check is
    requested. Checks report violations; they never abort the run.
    """
    cfg = scenario.resolve()
    outcome = run_until_consensus(cfg)
    reports: list[CheckReport] = []
    for name in scenario.checks:
        if name == "monotone":
            if cfg.protocol.uses_broadcast:
                reports.append(check_monotone(outcome.trace, cfg.numeric))
            else:
                reports.append(
                    CheckReport(
                        name="monotone", passed=True, skipped=True,
                        reason="monotone boundedness is a broadcast-protocol property",
                    )
                )
        elif name == "lyapunov":
            if cfg.protocol.uses_broadcast:
                strict = cfg.protocol is ProtocolKind.ASYMPTOTIC
                reports.append(check_lyapunov(outcome.trace, outcome.target, cfg.numeric, strict=strict))
                outcome.lyapunov = lyapunov_series([r.x for r in outcome.trace], outcome.target)
            else:
                reports.append(
                    CheckReport(
                        name="lyapunov", passed=True, skipped=True,
                        reason="the energy argument applies to broadcast protocols",
                    )
                )
        elif name == "silencing":
            if cfg.protocol is ProtocolKind.ASYMPTOTIC and outcome.converged:
                reports.append(check_silencing(outcome.trace, cfg.topology, cfg.numeric))
            else:
                reports.append(
                    CheckReport(
                        name="silencing", passed=True, skipped=True,
                        reason="silencing is asserted on converged asymptotic runs only",
                    )
                )
    return outcome, reports


@dataclass
class BatchTrial:
    """Summary of one batch trial."""

    trial: int
    converged: bool
    rounds: int
    slots_used: int
    n: int
    seed: int | None
    error: str | None = None


@dataclass
class BatchResult:
    """All trials of one batch plus the aggregate summary."""

    trials: list[BatchTrial] = field(default_factory=list)
    total: int = 0
    converged_count: int = 0
    failed_count: int = 0

    @property
    def convergence_rate(self) -> float:
        return self.converged_count / self.total if self.total else 0.0

    def rounds_quantiles(self) -> tuple[float, float, float] | None:
        rounds = [t.rounds for t in self.trials if t.converged]
        if not rounds:
            return None
        return (min(rounds), statistics.median(rounds), max(rounds))


def run_batch(scenario: Scenario, trials: int) -> BatchResult:
    """Run ``trials`` seed-offset copies of the scenario (trial i shifts every
    seed by i). Failed trials are recorded and the batch continues."""
    if trials < 0:
        raise ValueError("trials must be >= 0")
    result = BatchResult(total=trials)
    for i in range(trials):
        sc = scenario.with_seed_offset(i)
        try:
            outcome, _ = run_scenario(sc)
        except Exception as exc:  # noqa: BLE001 - per-trial isolation
            result.failed_count += 1
            result.trials.append(
                BatchTrial(
                    trial=i, converged=False, rounds=0, slots_used=0,
                    n=sc.topology.n, seed=sc.states_seed, error=str(exc),
                )
            )
            continue
        if outcome.converged:
            result.converged_count += 1
        result.trials.append(
            BatchTrial(
                trial=i,
                converged=outcome.converged,
                rounds=outcome.rounds,
                slots_used=outcome.slots_used,
                n=outcome.n,
                seed=sc.states_seed,
            )
        )
    return result
