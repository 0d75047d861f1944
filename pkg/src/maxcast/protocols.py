"""Per-agent consensus state machines.

Three protocols share one goal, driving every information state to the
maximum of the initial states:

- asymptotic: agents broadcast (state, authorization) over the superposing
  channel, adopt the maximum of their own state and the received average of
  authorized neighbors, and drop authorization when strictly below it.
- switching: identical between switch rounds; at rounds k = 2*T the
  authorization becomes the conjunction of the authorization bits held over
  the whole window [T, k] and the timer doubles, which forces agreement in
  finitely many rounds.
- traditional: orthogonal channel access, each agent sees every neighbor
  value individually and takes the plain maximum.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .channel import BroadcastFrame, ReceivedAggregate


class ProtocolKind(str, Enum):
    ASYMPTOTIC = "asymptotic"
    SWITCHING = "switching"
    TRADITIONAL = "traditional"

    @property
    def uses_broadcast(self) -> bool:
        return self is not ProtocolKind.TRADITIONAL


@dataclass(frozen=True)
class AgentState:
    """One agent's state: information value x, authorization bit y, switching
    timer T, and the running conjunction of y over the current window."""

    x: object
    y: int = 1
    T: int = 1
    y_acc: int = 1

    def __post_init__(self) -> None:
        if self.y not in (0, 1) or self.y_acc not in (0, 1):
            raise ValueError("authorization bits must be 0 or 1")
        if self.T < 1:
            raise ValueError(f"timer must be >= 1, got {self.T}")
        if self.x < 0:  # type: ignore[operator]
            raise ValueError(f"information state must be nonnegative, got {self.x}")


def initial_state(x0) -> AgentState:
    """Fresh agent state: authorized, timer 1, empty window."""
    if x0 < 0:
        raise ValueError(f"initial information state must be nonnegative, got {x0}")
    return AgentState(x=x0, y=1, T=1, y_acc=1)


def make_frames(sender: int, s: AgentState) -> BroadcastFrame:
    """Both broadcast slots for one round: (y*x, y).

    A zero-valued but authorized agent still signals participation on slot_b.
    """
    return BroadcastFrame(sender=sender, slot_a=s.x * s.y, slot_b=s.y)


def compute_u(agg: ReceivedAggregate, detection_threshold=0):
    """Average of the authorized neighbors' states, recovered from the two
    superposed slots as z / z'.

    z' counts the authorized neighbors on a clean channel, so the empty case
    is exactly z' = 0 and the default threshold applies. On a noisy channel z'
    is a corrupted count; callers pass a positive cutoff (0.5 by default in
    the engine) below which the round is treated as silent, yielding u = 0.
    """
    if agg.z_prime > detection_threshold:  # type: ignore[operator]
        return agg.z / agg.z_prime  # type: ignore[operator]
    return 0


def step_asymptotic(s: AgentState, u) -> AgentState:
    """One round of the asymptotic dynamics.

    x' = max(x, u); authorization survives iff x >= u (ties keep it).
    """
    x_new = max(s.x, u)  # type: ignore[type-var]
    y_new = 1 if s.x >= u else 0  # type: ignore[operator]
    return AgentState(x=x_new, y=y_new, T=s.T, y_acc=s.y_acc & y_new)


def step_switching(s: AgentState, u, k: int, carry_switch_output: bool = False) -> AgentState:
    """One round of the switching dynamics at round index k (1-based).

    Between switch rounds this is exactly the asymptotic step, with the
    window conjunction accumulated on the side. At a switch round (k = 2*T)
    the new authorization is the conjunction of the authorization bits held
    over the window [T, k], the timer becomes k, and the next window starts
    at k, seeded with this round's bit.

    By default the conjunction skips the one bit that was itself produced by
    the previous switch. Carrying it (``carry_switch_output=True``) reads the
    window fully literally, but then a single silencing event mutes the agent
    at every later switch; on graphs where the maximum must relay through
    previously silenced agents, those relays are muted exactly when all
    non-maximal agents are, and finite-time agreement is lost. The default
    keeps muting one-shot, which is what the finite-time argument needs:
    agents silenced during the last window stay quiet for one round while
    every agent already holding the maximum broadcasts it.
    """
    if k < 1:
        raise ValueError(f"round index must be >= 1, got {k}")
    x_new = max(s.x, u)  # type: ignore[type-var]
    if k == 2 * s.T:
        y_new = s.y_acc
        seed = (s.y & y_new) if carry_switch_output else s.y
        return AgentState(x=x_new, y=y_new, T=k, y_acc=seed)
    y_new = 1 if s.x >= u else 0  # type: ignore[operator]
    return AgentState(x=x_new, y=y_new, T=s.T, y_acc=s.y_acc & y_new)


def step_traditional(x_self, neighbor_values: Sequence) -> object:
    """Orthogonal-access baseline: maximum over self and all neighbor values."""
    best = x_self
    for v in neighbor_values:
        if v > best:  # type: ignore[operator]
            best = v
    return best
