"""Max-consensus simulations over superposing wireless channels.

Core layers: ``topology`` (graphs), ``channel`` (ideal/affine superposition),
``protocols`` (per-agent dynamics), ``engine`` (synchronous rounds),
``analysis`` (trace checks and the ratio study). ``scenario`` defines the
validated configuration schema, ``service`` exposes everything over HTTP,
and ``cli`` is a thin client for both.
"""

__version__ = "0.1.0"

from .channel import (
    BroadcastFrame,
    ChannelModel,
    ConstantCoefficient,
    GaussianNoise,
    NoNoise,
    ReceivedAggregate,
    UniformCoefficient,
    ota_compute,
    superpose,
)
from .engine import (
    NumericMode,
    RoundRecord,
    RunOutcome,
    SimulationConfig,
    default_round_cap,
    detect_consensus,
    run_round,
    run_until_consensus,
    slots_per_round,
)
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
from .scenario import Scenario, scenario_json_schema
from .topology import (
    Topology,
    build,
    diameter,
    enumerate_connected,
    generate_named,
    generate_random_connected,
    is_connected,
)

__all__ = [
    "AgentState",
    "BroadcastFrame",
    "ChannelModel",
    "ConstantCoefficient",
    "GaussianNoise",
    "NoNoise",
    "NumericMode",
    "ProtocolKind",
    "ReceivedAggregate",
    "RoundRecord",
    "RunOutcome",
    "Scenario",
    "SimulationConfig",
    "Topology",
    "UniformCoefficient",
    "build",
    "compute_u",
    "default_round_cap",
    "detect_consensus",
    "diameter",
    "enumerate_connected",
    "generate_named",
    "generate_random_connected",
    "initial_state",
    "is_connected",
    "make_frames",
    "ota_compute",
    "run_round",
    "run_until_consensus",
    "scenario_json_schema",
    "slots_per_round",
    "step_asymptotic",
    "step_switching",
    "step_traditional",
    "superpose",
]
