"""Synchronous round scheduler.

Every round, frames are generated from the frozen pre-round states
(simultaneous broadcast), the channel superposes them per receiver, and all
agents step at once. Rounds are indexed from 1; the reported round count k
is the number of executed communication rounds, i.e. the smallest k such
that every later state vector already equals the consensus target.

Two numeric instantiations are supported. Exact mode runs on rationals, so
finite-time agreement is a literal equality test and identical configs give
bit-identical traces. Float mode runs on binary doubles with a relative
tolerance for consensus detection.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .channel import ChannelModel, superpose
from .protocols import (
    AgentState,
    ProtocolKind,
    compute_u,
    initial_state,
    make_frames,
    step_asymptotic,
    step_switching,
    step_traditional,
)
from .topology import Topology, diameter, is_connected

DEFAULT_EPSILON = 1e-9


@dataclass(frozen=True)
class NumericMode:
    """Arithmetic domain of a run: exact rationals or tolerance-based floats."""

    kind: str
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self) -> None:
        if self.kind not in ("exact", "float"):
            raise ValueError(f"numeric kind must be 'exact' or 'float', got {self.kind!r}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    @classmethod
    def exact(cls) -> "NumericMode":
        return cls("exact")

    @classmethod
    def float_mode(cls, epsilon: float = DEFAULT_EPSILON) -> "NumericMode":
        return cls("float", epsilon)

    def coerce(self, value):
        """Convert an input number (int, float, Fraction or string like
        '7/2' / '0.1') into this mode's representation."""
        if self.kind == "exact":
            return value if isinstance(value, Fraction) else Fraction(value)
        if isinstance(value, str):
            return float(Fraction(value))
        return float(value)

    def equals(self, a, b) -> bool:
        """Mode-aware equality: literal in exact mode, relative tolerance
        (floored at 1) in float mode."""
        if self.kind == "exact":
            return a == b
        return abs(a - b) <= self.epsilon * max(1.0, abs(b))


@dataclass(frozen=True)
class RoundRecord:
    """Snapshot of round k: the states in effect during the round and, for
    executed communication rounds, the per-agent signals computed in it.

    The last record of a trace is the terminal state and carries no signals.
    Traditional-protocol rounds carry no signals either (there is no
    superposed aggregate to record).
    """

    k: int
    x: tuple
    y: tuple
    u: tuple | None = None
    z: tuple | None = None
    z_prime: tuple | None = None


@dataclass(frozen=True)
class SimulationConfig:
    """Resolved, runnable configuration for one simulation."""

    topology: Topology
    protocol: ProtocolKind
    initial_states: tuple
    numeric: NumericMode = NumericMode.exact()
    channel: ChannelModel = ChannelModel.ideal()
    round_cap: int | None = None
    channel_seed: int = 0
    detection_threshold: float | None = None  # None -> 0 clean, 0.5 noisy


@dataclass
class RunOutcome:
    """Result of one run: convergence flag, executed round count, channel
    slot usage, the final state vector and the full trace."""

    converged: bool
    rounds: int
    slots_used: int
    final_x: tuple
    target: object
    protocol: ProtocolKind
    n: int
    trace: list[RoundRecord] = field(default_factory=list)
    lyapunov: list | None = None


def slots_per_round(protocol: ProtocolKind, n: int) -> int:
    """Channel slots one round costs: two orthogonal broadcast signals, or one
    TDMA slot per agent for the traditional protocol."""
    return 2 if protocol.uses_broadcast else n


def default_round_cap(t: Topology) -> int:
    """10 * n * diameter, generous at experiment scale; falls back to
    10 * n * (n-1) when the graph is disconnected."""
    d = diameter(t) if is_connected(t) else max(1, t.n - 1)
    return max(1, 10 * t.n * max(1, d))


def detect_consensus(x: Sequence, target, numeric: NumericMode) -> bool:
    """True iff every entry equals the target under the numeric mode."""
    return all(numeric.equals(v, target) for v in x)


def run_round(
    states: Sequence[AgentState],
    topology: Topology,
    protocol: ProtocolKind,
    channel: ChannelModel,
    numeric: NumericMode,
    k: int,
    rng: random.Random,
    detection_threshold=0,
) -> tuple[list[AgentState], RoundRecord]:
    """Execute round k synchronously; returns (next states, round record)."""
    xs = tuple(s.x for s in states)
    ys = tuple(s.y for s in states)

    if protocol is ProtocolKind.TRADITIONAL:
        new_states = []
        for i in topology.agents():
            neigh = sorted(topology.neighbors(i))
            x_new = step_traditional(xs[i - 1], [xs[j - 1] for j in neigh])
            new_states.append(AgentState(x=x_new))
        return new_states, RoundRecord(k=k, x=xs, y=ys)

    if protocol is ProtocolKind.SWITCHING:
        # timers advance in lockstep and switch rounds are the powers of two
        timer = states[0].T
        assert all(s.T == timer for s in states)
        if k == 2 * timer:
            assert k & (k - 1) == 0

    frames = {i: make_frames(i, states[i - 1]) for i in topology.agents()}
    convert = numeric.coerce if channel.mode == "affine" else None
    us, zs, zps = [], [], []
    for i in topology.agents():
        neigh = topology.neighbors(i)
        ordered = [frames[j] for j in sorted(neigh)]
        agg = superpose(i, ordered, neigh, channel, rng, coerce=convert)
        us.append(compute_u(agg, detection_threshold))
        zs.append(agg.z)
        zps.append(agg.z_prime)

    if protocol is ProtocolKind.SWITCHING:
        new_states = [step_switching(s, u, k) for s, u in zip(states, us)]
    else:
        new_states = [step_asymptotic(s, u) for s, u in zip(states, us)]
    record = RoundRecord(k=k, x=xs, y=ys, u=tuple(us), z=tuple(zs), z_prime=tuple(zps))
    return new_states, record


def run_until_consensus(cfg: SimulationConfig) -> RunOutcome:
    """Iterate rounds until consensus on the maximum of the initial states is
    detected or the round cap is exhausted.

    The target is the maximum of the initial states, fixed at run start. A
    disconnected topology is allowed but warned about, since agreement may
    then be unreachable. Hitting the cap is reported, not raised: the
    asymptotic protocol legitimately fails to finish on some inputs.
    """
    topo = cfg.topology
    n = topo.n
    if len(cfg.initial_states) != n:
        raise ValueError(
            f"expected {n} initial states, got {len(cfg.initial_states)}"
        )
    x0 = tuple(cfg.numeric.coerce(v) for v in cfg.initial_states)
    if any(v < 0 for v in x0):
        raise ValueError("initial information states must be nonnegative")
    if not is_connected(topo):
        warnings.warn(
            "topology is disconnected; consensus may be unreachable",
            RuntimeWarning,
            stacklevel=2,
        )

    target = max(x0)
    cap = cfg.round_cap if cfg.round_cap is not None else default_round_cap(topo)
    threshold = cfg.detection_threshold
    if threshold is None:
        threshold = 0.5 if (cfg.channel.mode == "affine" and cfg.channel.is_noisy) else 0

    rng = random.Random(cfg.channel_seed)
    states = [initial_state(v) for v in x0]
    trace: list[RoundRecord] = []
    rounds = 0
    converged = detect_consensus(x0, target, cfg.numeric)
    while not converged and rounds < cap:
        states, record = run_round(
            states, topo, cfg.protocol, cfg.channel, cfg.numeric,
            rounds + 1, rng, threshold,
        )
        trace.append(record)
        rounds += 1
        converged = detect_consensus([s.x for s in states], target, cfg.numeric)

    final_x = tuple(s.x for s in states)
    trace.append(RoundRecord(k=rounds + 1, x=final_x, y=tuple(s.y for s in states)))
    return RunOutcome(
        converged=converged,
        rounds=rounds,
        slots_used=slots_per_round(cfg.protocol, n) * rounds,
        final_x=final_x,
        target=target,
        protocol=cfg.protocol,
        n=n,
        trace=trace,
    )
