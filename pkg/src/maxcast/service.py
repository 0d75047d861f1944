"""HTTP surface: pydantic request/response models over the simulation runner.

Exact-mode numbers travel as strings ("4", "7/2") so nothing is lost on the
wire; float-mode numbers travel as JSON numbers. The scenario JSON schema is
served at /schema/scenario.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI
from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .analysis import (
    CheckReport,
    RatioAggregate,
    RatioResult,
    aggregate_ratios,
    ratio_experiment,
)
from .engine import NumericMode, RoundRecord, RunOutcome
from .runner import BatchResult, run_batch, run_scenario
from .scenario import Scenario, scenario_json_schema

Number = float | int | str


def wire_number(value) -> Number:
    """Lossless wire form: rationals as strings, everything else as-is."""
    if isinstance(value, Fraction):
        return str(value)
    return value


def wire_vector(values) -> list[Number]:
    return [wire_number(v) for v in values]


class RoundModel(BaseModel):
    k: int
    x: list[Number]
    y: list[int]
    u: list[Number] | None = None
    z: list[Number] | None = None
    z_prime: list[Number] | None = None

    @classmethod
    def from_record(cls, record: RoundRecord) -> "RoundModel":
        return cls(
            k=record.k,
            x=wire_vector(record.x),
            y=list(record.y),
            u=wire_vector(record.u) if record.u is not None else None,
            z=wire_vector(record.z) if record.z is not None else None,
            z_prime=wire_vector(record.z_prime) if record.z_prime is not None else None,
        )


class OutcomeModel(BaseModel):
    converged: bool
    rounds: int
    slots_used: int
    final_x: list[Number]
    target: Number
    protocol: str
    n: int
    seed: int | None = None
    numeric: str
    lyapunov: list[Number] | None = None

    @classmethod
    def from_outcome(
        cls, outcome: RunOutcome, numeric: str, seed: int | None
    ) -> "OutcomeModel":
        return cls(
            converged=outcome.converged,
            rounds=outcome.rounds,
            slots_used=outcome.slots_used,
            final_x=wire_vector(outcome.final_x),
            target=wire_number(outcome.target),
            protocol=outcome.protocol.value,
            n=outcome.n,
            seed=seed,
            numeric=numeric,
            lyapunov=wire_vector(outcome.lyapunov) if outcome.lyapunov is not None else None,
        )


class CheckModel(BaseModel):
    name: str
    passed: bool
    checked: int = 0
    violations: list[str] = Field(default_factory=list)
    skipped: bool = False
    reason: str = ""

    @classmethod
    def from_report(cls, report: CheckReport) -> "CheckModel":
        return cls(
            name=report.name,
            passed=report.passed,
            checked=report.checked,
            violations=report.violations,
            skipped=report.skipped,
            reason=report.reason,
        )


class RunResponse(BaseModel):
    outcome: OutcomeModel
    trace: list[RoundModel] | None = None
    checks: list[CheckModel] | None = None


class BatchRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: Scenario
    trials: int = Field(ge=0)


class TrialModel(BaseModel):
    trial: int
    converged: bool
    rounds: int
    slots_used: int
    n: int
    seed: int | None = None
    error: str | None = None


class BatchSummary(BaseModel):
    trials: int
    converged: int
    failed: int
    convergence_rate: float
    rounds_min: float | None = None
    rounds_median: float | None = None
    rounds_max: float | None = None


class BatchResponse(BaseModel):
    summary: BatchSummary
    trials: list[TrialModel]


class RatioRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    sizes: list[int] = Field(min_length=1)
    trials: int = Field(ge=1)
    seed: int = 0
    edge_probability: float | None = Field(default=None, gt=0, le=1)
    epsilon: float = Field(default=1e-9, gt=0)
    round_cap: int | None = Field(default=None, ge=1)


class RatioRowModel(BaseModel):
    n: int
    trial: int
    seed: int
    rounds_traditional: int
    rounds_broadcast: int
    slots_traditional: int
    slots_broadcast: int
    converged_both: bool
    r: float | None = None

    @classmethod
    def from_result(cls, res: RatioResult) -> "RatioRowModel":
        return cls(
            n=res.n,
            trial=res.trial,
            seed=res.seed,
            rounds_traditional=res.rounds_traditional,
            rounds_broadcast=res.rounds_broadcast,
            slots_traditional=res.slots_traditional,
            slots_broadcast=res.slots_broadcast,
            converged_both=res.converged_both,
            r=res.r,
        )


class RatioAggregateModel(BaseModel):
    n: int
    trials: int
    excluded: int
    r_min: float | None = None
    r_median: float | None = None
    r_max: float | None = None
    rounds_traditional_median: float | None = None
    rounds_broadcast_median: float | None = None

    @classmethod
    def from_aggregate(cls, agg: RatioAggregate) -> "RatioAggregateModel":
        return cls(
            n=agg.n,
            trials=agg.trials,
            excluded=agg.excluded,
            r_min=agg.r_min,
            r_median=agg.r_median,
            r_max=agg.r_max,
            rounds_traditional_median=agg.rounds_traditional_median,
            rounds_broadcast_median=agg.rounds_broadcast_median,
        )


class RatioResponse(BaseModel):
    rows: list[RatioRowModel]
    aggregates: list[RatioAggregateModel]


class ValidateResponse(BaseModel):
    valid: bool
    protocol: str
    n: int
    numeric: str


class HealthResponse(BaseModel):
    status: str
    version: str


def handle_run(scenario: Scenario) -> RunResponse:
    outcome, reports = run_scenario(scenario)
    trace = None
    if scenario.trace_level == "full":
        trace = [RoundModel.from_record(rec) for rec in outcome.trace]
    checks = [CheckModel.from_report(rep) for rep in reports] if reports else None
    return RunResponse(
        outcome=OutcomeModel.from_outcome(outcome, scenario.numeric.mode, scenario.states_seed),
        trace=trace,
        checks=checks,
    )


def handle_batch(request: BatchRequest) -> BatchResponse:
    result: BatchResult = run_batch(request.scenario, request.trials)
    quantiles = result.rounds_quantiles()
    summary = BatchSummary(
        trials=result.total,
        converged=result.converged_count,
        failed=result.failed_count,
        convergence_rate=result.convergence_rate,
        rounds_min=quantiles[0] if quantiles else None,
        rounds_median=quantiles[1] if quantiles else None,
        rounds_max=quantiles[2] if quantiles else None,
    )
    trials = [
        TrialModel(
            trial=t.trial,
            converged=t.converged,
            rounds=t.rounds,
            slots_used=t.slots_used,
            n=t.n,
            seed=t.seed,
            error=t.error,
        )
        for t in result.trials
    ]
    return BatchResponse(summary=summary, trials=trials)


def handle_ratio(request: RatioRequest) -> RatioResponse:
    results = ratio_experiment(
        sizes=request.sizes,
        trials=request.trials,
        seed=request.seed,
        edge_probability=request.edge_probability,
        numeric=NumericMode.float_mode(request.epsilon),
        round_cap=request.round_cap,
    )
    return RatioResponse(
        rows=[RatioRowModel.from_result(res) for res in results],
        aggregates=[RatioAggregateModel.from_aggregate(a) for a in aggregate_ratios(results)],
    )


def handle_validate(scenario: Scenario) -> ValidateResponse:
    return ValidateResponse(
        valid=True,
        protocol=scenario.protocol,
        n=scenario.topology.n,
        numeric=scenario.numeric.mode,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="maxcast", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.get("/schema/scenario")
    def schema() -> dict:
        return scenario_json_schema()

    @app.post("/validate", response_model=ValidateResponse)
    def validate(scenario: Scenario) -> ValidateResponse:
        return handle_validate(scenario)

    @app.post("/run", response_model=RunResponse, response_model_exclude_none=True)
    def run(scenario: Scenario) -> RunResponse:
        return handle_run(scenario)

    @app.post("/batch", response_model=BatchResponse, response_model_exclude_none=True)
    def batch(request: BatchRequest) -> BatchResponse:
        return handle_batch(request)

    @app.post("/ratio", response_model=RatioResponse, response_model_exclude_none=True)
    def ratio(request: RatioRequest) -> RatioResponse:
        return handle_ratio(request)

    return app


app = create_app()
