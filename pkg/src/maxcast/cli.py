"""Command-line front end, a thin client over the service layer.

By default commands execute in-process through the same handlers the HTTP
routes use; pass --server to drive a remote instance instead. Exit codes:
0 success/converged, 1 round-cap exhausted, 2 configuration error,
3 internal or transport error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
from pydantic import ValidationError

from .artifacts import (
    render_batch_json,
    render_checks_json,
    render_outcome_json,
    render_ratio_aggregate_json,
    render_ratio_csv,
    render_trace_csv,
    render_trace_json,
)
from .client import ConfigRejected, LocalClient, RemoteClient
from .scenario import Scenario
from .service import RatioRequest

EXIT_OK = 0
EXIT_CAP_EXHAUSTED = 1
EXIT_CONFIG = 2
EXIT_INTERNAL = 3


def _config_error(message: str) -> None:
    click.echo(f"config error: {message}", err=True)
    sys.exit(EXIT_CONFIG)


def _internal_error(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_INTERNAL)


def _format_validation_error(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"]) or "<root>"
        parts.append(f"{loc}: {err['msg']}")
    return "; ".join(parts)


def _load_scenario(path: str) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        _config_error(f"cannot read scenario file: {exc}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        _config_error(f"scenario file is not valid JSON: {exc}")
    try:
        return Scenario.model_validate(data)
    except ValidationError as exc:
        _config_error(_format_validation_error(exc))
    raise AssertionError("unreachable")


def _apply_overrides(scenario: Scenario, trace, numeric, cap, seed) -> Scenario:
    updates: dict = {}
    if trace is not None:
        updates["trace_level"] = trace
    if cap is not None:
        updates["round_cap"] = cap
    if numeric is not None:
        updates["numeric"] = scenario.numeric.model_copy(update={"mode": numeric})
    if updates:
        scenario = scenario.model_copy(update=updates)
    if seed is not None:
        scenario = scenario.with_base_seed(seed)
    return scenario


def _make_client(server: str | None):
    return RemoteClient(base_url=server) if server else LocalClient()


def _write(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(content)


@click.group()
def main() -> None:
    """Max-consensus simulations over superposing wireless channels."""


@main.command()
@click.option("--scenario", "scenario_path", required=True, type=click.Path(), help="Scenario JSON file.")
@click.option("--out", "out_dir", default=".", type=click.Path(file_okay=False), help="Output directory.")
@click.option("--trace", type=click.Choice(["summary", "full"]), default=None, help="Override trace level.")
@click.option("--numeric", type=click.Choice(["exact", "float"]), default=None, help="Override numeric mode.")
@click.option("--cap", type=int, default=None, help="Override the round cap.")
@click.option("--seed", type=int, default=None, help="Re-derive all scenario seeds from this base.")
@click.option("--server", default=None, help="Base URL of a remote service; default runs in-process.")
def run(scenario_path, out_dir, trace, numeric, cap, seed, server) -> None:
    """Run one scenario and write outcome.json (plus trace files when full)."""
    scenario = _apply_overrides(_load_scenario(scenario_path), trace, numeric, cap, seed)
    client = _make_client(server)
    try:
        response = client.run(scenario)
    except ConfigRejected as exc:
        _config_error(str(exc))
    except Exception as exc:  # noqa: BLE001 - exit 3 for anything unexpected
        _internal_error(str(exc))
    out = Path(out_dir)
    _write(out / "outcome.json", render_outcome_json(response.outcome))
    if response.checks is not None:
        _write(out / "checks.json", render_checks_json(response))
    if response.trace is not None:
        _write(out / "trace.csv", render_trace_csv(response.trace))
        _write(out / "trace.json", render_trace_json(response.trace))
    state = "converged" if response.outcome.converged else "round cap exhausted"
    click.echo(
        f"{response.outcome.protocol}: {state} after {response.outcome.rounds} rounds "
        f"({response.outcome.slots_used} slots)"
    )
    sys.exit(EXIT_OK if response.outcome.converged else EXIT_CAP_EXHAUSTED)


@main.command()
@click.option("--scenario", "scenario_path", required=True, type=click.Path(), help="Scenario JSON file (with samplers).")
@click.option("--trials", required=True, type=click.IntRange(min=0), help="Number of trials.")
@click.option("--seed", type=int, default=None, help="Re-derive all scenario seeds from this base.")
@click.option("--out", "out_dir", default=".", type=click.Path(file_okay=False), help="Output directory.")
@click.option("--server", default=None, help="Base URL of a remote service; default runs in-process.")
def batch(scenario_path, trials, seed, out_dir, server) -> None:
    """Run a seed-offset batch of trials and write batch.json."""
    scenario = _load_scenario(scenario_path)
    if seed is not None:
        scenario = scenario.with_base_seed(seed)
    client = _make_client(server)
    try:
        response = client.batch(scenario, trials)
    except ConfigRejected as exc:
        _config_error(str(exc))
    except Exception as exc:  # noqa: BLE001 - exit 3 for anything unexpected
        _internal_error(str(exc))
    _write(Path(out_dir) / "batch.json", render_batch_json(response))
    s = response.summary
    click.echo(
        f"{s.trials} trials: {s.converged} converged "
        f"({s.convergence_rate:.1%}), median rounds {s.rounds_median}"
    )
    sys.exit(EXIT_OK)


@main.command()
@click.option("--sizes", required=True, help="Comma-separated network sizes, e.g. 10,100.")
@click.option("--trials", required=True, type=click.IntRange(min=1), help="Trials per size.")
@click.option("--seed", type=int, default=0, help="Base seed for the study.")
@click.option("--density", type=click.FloatRange(min=0, min_open=True, max=1), default=None,
              help="Edge probability; default scales as 2*ln(n)/n.")
@click.option("--cap", type=int, default=None, help="Override the round cap.")
@click.option("--out", "out_dir", default=".", type=click.Path(file_okay=False), help="Output directory.")
@click.option("--server", default=None, help="Base URL of a remote service; default runs in-process.")
def ratio(sizes, trials, seed, density, cap, out_dir, server) -> None:
    """Compare traditional vs broadcast convergence cost; write ratio.csv and
    ratio_aggregate.json."""
    try:
        size_list = [int(part) for part in sizes.split(",") if part.strip()]
        request = RatioRequest(
            sizes=size_list, trials=trials, seed=seed,
            edge_probability=density, round_cap=cap,
        )
    except (ValueError, ValidationError) as exc:
        _config_error(str(exc))
    client = _make_client(server)
    try:
        response = client.ratio(request)
    except ConfigRejected as exc:
        _config_error(str(exc))
    except Exception as exc:  # noqa: BLE001 - exit 3 for anything unexpected
        _internal_error(str(exc))
    out = Path(out_dir)
    _write(out / "ratio.csv", render_ratio_csv(response))
    _write(out / "ratio_aggregate.json", render_ratio_aggregate_json(response))
    for agg in response.aggregates:
        click.echo(
            f"n={agg.n}: median r={agg.r_median} over {agg.trials - agg.excluded} usable trials"
        )
    sys.exit(EXIT_OK)


@main.command()
@click.option("--scenario", "scenario_path", required=True, type=click.Path(), help="Scenario JSON file.")
@click.option("--server", default=None, help="Base URL of a remote service; default runs in-process.")
def validate(scenario_path, server) -> None:
    """Schema-check a scenario file without running it."""
    scenario = _load_scenario(scenario_path)
    client = _make_client(server)
    try:
        response = client.validate(scenario)
    except ConfigRejected as exc:
        _config_error(str(exc))
    except Exception as exc:  # noqa: BLE001 - exit 3 for anything unexpected
        _internal_error(str(exc))
    click.echo(json.dumps(response.model_dump(), sort_keys=True))
    sys.exit(EXIT_OK)


@main.command()
@click.option("--host", default="127.0.0.1", help="Bind address.")
@click.option("--port", default=8000, type=int, help="Bind port.")
def serve(host, port) -> None:
    """Start the HTTP service."""
    import uvicorn

    uvicorn.run("maxcast.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
