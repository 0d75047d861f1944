"""Scenario documents: the validated configuration surface shared by the HTTP
service and the command-line client.

A scenario is a JSON object naming a topology (explicit edges, a named family
or a seeded random draw), a protocol, the initial states (explicit vector or
a seeded uniform sampler), the channel, the numeric mode and output options.
Unknown keys are rejected everywhere. All randomness flows from seeds in the
document; there is no ambient entropy.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .channel import (
    ChannelModel,
    ConstantCoefficient,
    GaussianNoise,
    NoNoise,
    UniformCoefficient,
)
from .engine import NumericMode, SimulationConfig
from .protocols import ProtocolKind
from .topology import Topology, generate_named, generate_random_connected

CHECK_NAMES = ("monotone", "lyapunov", "silencing")


class TopologySpec(BaseModel):
    """Graph descriptor: a named family, an explicit edge list, or a seeded
    random connected draw."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["line", "ring", "star", "complete", "explicit", "random"]
    n: int = Field(ge=1)
    edges: list[tuple[int, int]] | None = None
    p: float | None = Field(default=None, gt=0, le=1)
    seed: int | None = None

    @model_validator(mode="after")
    def _check_shape(self) -> "TopologySpec":
        if self.kind == "explicit":
            if self.edges is None:
                raise ValueError("explicit topology requires 'edges'")
            for i, j in self.edges:
                if not (1 <= i <= self.n and 1 <= j <= self.n):
                    raise ValueError(f"edge ({i},{j}) has an endpoint outside 1..{self.n}")
                if i == j:
                    raise ValueError(f"self-loop ({i},{i}) is not allowed")
        elif self.edges is not None:
            raise ValueError(f"'edges' is only valid with kind='explicit', not {self.kind!r}")
        if self.kind == "random":
            if self.p is None or self.seed is None:
                raise ValueError("random topology requires 'p' and 'seed'")
        else:
            if self.p is not None or self.seed is not None:
                raise ValueError("'p' and 'seed' are only valid with kind='random'")
        if self.kind == "ring" and self.n < 3:
            raise ValueError("ring requires n >= 3")
        return self

    def resolve(self) -> Topology:
        if self.kind == "explicit":
            return Topology(self.n, self.edges or [])
        if self.kind == "random":
            return generate_random_connected(self.n, self.p, self.seed)  # type: ignore[arg-type]
        return generate_named(self.kind, self.n)


class CoefficientSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    constant: float | None = Field(default=None, gt=0, le=1)
    uniform: tuple[float, float] | None = None

    @model_validator(mode="after")
    def _one_of(self) -> "CoefficientSpec":
        if (self.constant is None) == (self.uniform is None):
            raise ValueError("specify exactly one of 'constant' or 'uniform'")
        if self.uniform is not None:
            low, high = self.uniform
            if not 0 < low <= high <= 1:
                raise ValueError(f"uniform coefficient needs 0 < low <= high <= 1, got {self.uniform}")
        return self

    def to_law(self):
        if self.constant is not None:
            return ConstantCoefficient(self.constant)
        low, high = self.uniform  # type: ignore[misc]
        return UniformCoefficient(low, high)


class NoiseSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["none", "gaussian"] = "none"
    sigma: float | None = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _check_sigma(self) -> "NoiseSpec":
        if self.kind == "gaussian" and self.sigma is None:
            raise ValueError("gaussian noise requires 'sigma'")
        if self.kind == "none" and self.sigma is not None:
            raise ValueError("'sigma' is only valid with kind='gaussian'")
        return self

    def to_law(self):
        return GaussianNoise(self.sigma) if self.kind == "gaussian" else NoNoise()


class ChannelSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mode: Literal["ideal", "affine"] = "ideal"
    coefficient: CoefficientSpec | None = None
    noise: NoiseSpec | None = None

    @model_validator(mode="after")
    def _check_mode(self) -> "ChannelSpec":
        if self.mode == "ideal" and (self.coefficient is not None or self.noise is not None):
            raise ValueError("ideal channel takes no 'coefficient' or 'noise'")
        return self

    def to_model(self) -> ChannelModel:
        if self.mode == "ideal":
            return ChannelModel.ideal()
        coefficient = self.coefficient.to_law() if self.coefficient else ConstantCoefficient(1)
        noise = self.noise.to_law() if self.noise else NoNoise()
        return ChannelModel.affine(coefficient, noise)


class InitialStatesSpec(BaseModel):
    """Explicit per-agent values, or a seeded uniform sampler over [low, high).

    Explicit entries may be strings ('7/2', '0.1') for exact decimal or
    rational values in exact-numeric runs.
    """

    model_config = ConfigDict(extra="forbid")

    values: list[float | str] | None = None
    uniform: tuple[float, float] | None = None
    seed: int | None = None

    @model_validator(mode="after")
    def _check_shape(self) -> "InitialStatesSpec":
        if (self.values is None) == (self.uniform is None):
            raise ValueError("specify exactly one of 'values' or 'uniform'")
        if self.uniform is not None:
            low, high = self.uniform
            if not (0 <= low < high):
                raise ValueError(f"uniform states need 0 <= low < high, got {self.uniform}")
            if self.seed is None:
                raise ValueError("a uniform state sampler requires 'seed'")
        else:
            if self.seed is not None:
                raise ValueError("'seed' is only valid with a 'uniform' sampler")
            for v in self.values:  # type: ignore[union-attr]
                if Fraction(v) < 0:
                    raise ValueError(f"initial states must be nonnegative, got {v}")
        return self

    def resolve(self, n: int, numeric: NumericMode) -> tuple:
        if self.values is not None:
            if len(self.values) != n:
                raise ValueError(f"expected {n} initial states, got {len(self.values)}")
            return tuple(numeric.coerce(v) for v in self.values)
        import random as _random

        low, high = self.uniform  # type: ignore[misc]
        rng = _random.Random(self.seed)
        return tuple(numeric.coerce(low + (high - low) * rng.random()) for _ in range(n))


class NumericSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mode: Literal["exact", "float"] = "exact"
    epsilon: float = Field(default=1e-9, gt=0)

    def to_mode(self) -> NumericMode:
        return NumericMode.exact() if self.mode == "exact" else NumericMode.float_mode(self.epsilon)


class Scenario(BaseModel):
    """One full simulation configuration plus output options."""

    model_config = ConfigDict(extra="forbid")

    topology: TopologySpec
    protocol: Literal["asymptotic", "switching", "traditional"]
    initial_states: InitialStatesSpec
    channel: ChannelSpec = ChannelSpec()
    numeric: NumericSpec = NumericSpec()
    round_cap: int | None = Field(default=None, ge=1)
    channel_seed: int = 0
    detection_threshold: float | None = Field(default=None, ge=0)
    trace_level: Literal["summary", "full"] = "summary"
    checks: list[Literal["monotone", "lyapunov", "silencing"]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _cross_check(self) -> "Scenario":
        if self.initial_states.values is not None:
            if len(self.initial_states.values) != self.topology.n:
                raise ValueError(
                    f"initial_states lists {len(self.initial_states.values)} values "
                    f"for a topology of {self.topology.n} agents"
                )
        return self

    @property
    def states_seed(self) -> int | None:
        return self.initial_states.seed

    def resolve(self) -> SimulationConfig:
        """Materialize the runtime configuration (builds the graph and draws
        sampled initial states)."""
        topo = self.topology.resolve()
        numeric = self.numeric.to_mode()
        x0 = self.initial_states.resolve(topo.n, numeric)
        return SimulationConfig(
            topology=topo,
            protocol=ProtocolKind(self.protocol),
            initial_states=x0,
            numeric=numeric,
            channel=self.channel.to_model(),
            round_cap=self.round_cap,
            channel_seed=self.channel_seed,
            detection_threshold=self.detection_threshold,
        )

    def with_seed_offset(self, offset: int) -> "Scenario":
        """Copy with every seed shifted by ``offset`` (used for batch trials:
        trial i runs the base scenario offset by i)."""
        updates: dict = {"channel_seed": self.channel_seed + offset}
        if self.topology.seed is not None:
            updates["topology"] = self.topology.model_copy(
                update={"seed": self.topology.seed + offset}
            )
        if self.initial_states.seed is not None:
            updates["initial_states"] = self.initial_states.model_copy(
                update={"seed": self.initial_states.seed + offset}
            )
        return self.model_copy(update=updates)

    def with_base_seed(self, base: int) -> "Scenario":
        """Copy with seeds re-derived from one base value: random topology
        gets base+1, the state sampler base+2, the channel stream base+3."""
        updates: dict = {"channel_seed": base + 3}
        if self.topology.kind == "random":
            updates["topology"] = self.topology.model_copy(update={"seed": base + 1})
        if self.initial_states.uniform is not None:
            updates["initial_states"] = self.initial_states.model_copy(update={"seed": base + 2})
        return self.model_copy(update=updates)


def scenario_json_schema() -> dict:
    """The published JSON schema every scenario document validates against."""
    return Scenario.model_json_schema()
