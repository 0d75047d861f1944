"""Deterministic rendering of result artifacts.

All JSON is dumped with sorted keys and a trailing newline; CSV uses a fixed
header and LF line endings. Reruns of the same scenario and seeds therefore
produce byte-identical files (exact numeric mode keeps values themselves
identical too).
"""

from __future__ import annotations

import csv
import io
import json

from .service import (
    BatchResponse,
    OutcomeModel,
    RatioResponse,
    RoundModel,
    RunResponse,
)

TRACE_CSV_HEADER = ["k", "agent", "x", "y", "u"]
RATIO_CSV_HEADER = [
    "n",
    "trial",
    "seed",
    "rounds_traditional",
    "rounds_broadcast",
    "slots_traditional",
    "slots_broadcast",
    "r",
]


def _dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_outcome_json(outcome: OutcomeModel) -> str:
    return _dumps(outcome.model_dump(exclude_none=True))


def render_checks_json(response: RunResponse) -> str:
    checks = [c.model_dump() for c in response.checks or []]
    return _dumps(checks)


def render_trace_csv(trace: list[RoundModel]) -> str:
    """One row per (round, agent); u is blank on terminal and traditional rows."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_CSV_HEADER)
    for record in trace:
        for i in range(len(record.x)):
            u = record.u[i] if record.u is not None else ""
            writer.writerow([record.k, i + 1, record.x[i], record.y[i], u])
    return buf.getvalue()


def render_trace_json(trace: list[RoundModel]) -> str:
    return _dumps([record.model_dump(exclude_none=True) for record in trace])


def render_batch_json(response: BatchResponse) -> str:
    return _dumps(response.model_dump(exclude_none=True))


def render_ratio_csv(response: RatioResponse) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RATIO_CSV_HEADER)
    for row in response.rows:
        writer.writerow(
            [
                row.n,
                row.trial,
                row.seed,
                row.rounds_traditional,
                row.rounds_broadcast,
                row.slots_traditional,
                row.slots_broadcast,
                row.r if row.r is not None else "",
            ]
        )
    return buf.getvalue()


def render_ratio_aggregate_json(response: RatioResponse) -> str:
    return _dumps([agg.model_dump() for agg in response.aggregates])
