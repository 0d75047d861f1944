"""Clients for driving the service: in-process (default) and remote HTTP.

Both speak the same request/response models, so the CLI behaves identically
whether it executes locally or against a running server.
"""

from __future__ import annotations

import httpx

from .scenario import Scenario
from .service import (
    BatchRequest,
    BatchResponse,
    RatioRequest,
    RatioResponse,
    RunResponse,
    ValidateResponse,
    handle_batch,
    handle_ratio,
    handle_run,
    handle_validate,
)


class ServiceError(Exception):
    """The service failed to produce a result."""


class ConfigRejected(ServiceError):
    """The service rejected the request as invalid configuration."""


class LocalClient:
    """Runs requests in-process through the same handlers the HTTP routes use."""

    def run(self, scenario: Scenario) -> RunResponse:
        return handle_run(scenario)

    def batch(self, scenario: Scenario, trials: int) -> BatchResponse:
        return handle_batch(BatchRequest(scenario=scenario, trials=trials))

    def ratio(self, request: RatioRequest) -> RatioResponse:
        return handle_ratio(request)

    def validate(self, scenario: Scenario) -> ValidateResponse:
        return handle_validate(scenario)


def _format_detail(payload) -> str:
    detail = payload.get("detail") if isinstance(payload, dict) else None
    if isinstance(detail, list):
        lines = []
        for item in detail:
            loc = ".".join(str(part) for part in item.get("loc", []) if part != "body")
            lines.append(f"{loc}: {item.get('msg', 'invalid')}")
        return "; ".join(lines)
    return str(detail or payload)


class RemoteClient:
    """Thin HTTP client against a running service."""

    def __init__(self, base_url: str | None = None, http: httpx.Client | None = None):
        if http is None and base_url is None:
            raise ValueError("either base_url or an http client is required")
        self._http = http or httpx.Client(base_url=base_url, timeout=600.0)

    def _post(self, path: str, payload: dict) -> dict:
        try:
            response = self._http.post(path, json=payload)
        except httpx.HTTPError as exc:
            raise ServiceError(f"request to {path} failed: {exc}") from exc
        if response.status_code == 422:
            raise ConfigRejected(_format_detail(response.json()))
        if response.status_code >= 400:
            raise ServiceError(f"{path} returned HTTP {response.status_code}")
        return response.json()

    def run(self, scenario: Scenario) -> RunResponse:
        payload = scenario.model_dump(mode="json", exclude_none=True)
        return RunResponse.model_validate(self._post("/run", payload))

    def batch(self, scenario: Scenario, trials: int) -> BatchResponse:
        payload = {
            "scenario": scenario.model_dump(mode="json", exclude_none=True),
            "trials": trials,
        }
        return BatchResponse.model_validate(self._post("/batch", payload))

    def ratio(self, request: RatioRequest) -> RatioResponse:
        payload = request.model_dump(mode="json", exclude_none=True)
        return RatioResponse.model_validate(self._post("/ratio", payload))

    def validate(self, scenario: Scenario) -> ValidateResponse:
        payload = scenario.model_dump(mode="json", exclude_none=True)
        return ValidateResponse.model_validate(self._post("/validate", payload))
