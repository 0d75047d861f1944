"""Wireless multiple-access channel models.

Simultaneous broadcasts superpose additively at each receiver. The ideal
channel is a plain sum; the affine channel weights each transmission by a
per-link, per-round coefficient in (0, 1] and adds receiver noise. Each round
an agent transmits one frame carrying two orthogonal scalar slots, modeled as
two independent uses of the same channel.

Also provides the generic trick of computing a function over the air:
broadcast pre-processed values, let the channel sum them, post-process the
superposed total.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Collection, Mapping, Sequence


@dataclass(frozen=True)
class BroadcastFrame:
    """One agent's transmission for one round.

    slot_a carries the authorization-gated information state, slot_b the
    authorization bit itself. A non-authorized agent contributes nothing on
    either slot.
    """

    sender: int
    slot_a: object  # nonnegative number (int, float or Fraction)
    slot_b: int

    def __post_init__(self) -> None:
        if self.slot_b not in (0, 1):
            raise ValueError(f"slot_b must be 0 or 1, got {self.slot_b}")
        if self.slot_b == 0 and self.slot_a != 0:
            raise ValueError("a silenced frame must carry slot_a = 0")
        if self.slot_a < 0:  # type: ignore[operator]
            raise ValueError(f"slot_a must be nonnegative, got {self.slot_a}")


@dataclass(frozen=True)
class ConstantCoefficient:
    """Fixed channel coefficient; value must lie in (0, 1]."""

    value: float = 1

    def __post_init__(self) -> None:
        if not 0 < self.value <= 1:
            raise ValueError(f"coefficient must be in (0, 1], got {self.value}")

    def sample(self, rng: random.Random) -> float:
        return self.value


@dataclass(frozen=True)
class UniformCoefficient:
    """Coefficient drawn uniformly from (low, high], with 0 < low <= high <= 1."""

    low: float
    high: float

    def __post_init__(self) -> None:
        if not 0 < self.low <= self.high <= 1:
            raise ValueError(f"need 0 < low <= high <= 1, got ({self.low}, {self.high})")

    def sample(self, rng: random.Random) -> float:
        # high - span*[0,1) keeps the sample inside (low, high]
        return self.high - (self.high - self.low) * rng.random()


@dataclass(frozen=True)
class NoNoise:
    def sample(self, rng: random.Random) -> int:
        return 0


@dataclass(frozen=True)
class GaussianNoise:
    """Zero-mean gaussian receiver noise."""

    sigma: float

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    def sample(self, rng: random.Random) -> float:
        return rng.gauss(0.0, self.sigma)


@dataclass(frozen=True)
class ChannelModel:
    """Channel configuration: ideal (sum) or affine (weighted sum plus noise)."""

    mode: str = "ideal"
    coefficient: ConstantCoefficient | UniformCoefficient = ConstantCoefficient(1)
    noise: NoNoise | GaussianNoise = NoNoise()

    def __post_init__(self) -> None:
        if self.mode not in ("ideal", "affine"):
            raise ValueError(f"mode must be 'ideal' or 'affine', got {self.mode!r}")
        if self.mode == "ideal":
            ident = isinstance(self.coefficient, ConstantCoefficient) and self.coefficient.value == 1
            if not ident or not isinstance(self.noise, NoNoise):
                raise ValueError("ideal mode means unit coefficients and no noise")

    @classmethod
    def ideal(cls) -> "ChannelModel":
        return cls()

    @classmethod
    def affine(
        cls,
        coefficient: ConstantCoefficient | UniformCoefficient | None = None,
        noise: NoNoise | GaussianNoise | None = None,
    ) -> "ChannelModel":
        return cls("affine", coefficient or ConstantCoefficient(1), noise or NoNoise())

    @property
    def is_noisy(self) -> bool:
        return not isinstance(self.noise, NoNoise)


@dataclass(frozen=True)
class ReceivedAggregate:
    """What one receiver hears in one round: the two superposed slot totals."""

    z: object
    z_prime: object


def superpose(
    receiver: int,
    frames: Sequence[BroadcastFrame],
    neighbors: Collection[int],
    model: ChannelModel,
    rng: random.Random,
    coerce: Callable | None = None,
) -> ReceivedAggregate:
    """Superpose the frames of the receiver's neighbors for one round.

    Frames must come from distinct neighbors of the receiver; anything else is
    a protocol violation. In affine mode both slots of a frame share one
    coefficient draw (coherent within the round) while each slot gets an
    independent noise draw. ``coerce`` converts sampled floats into the run's
    numeric type (e.g. Fraction for exact runs).
    """
    seen: set[int] = set()
    for frame in frames:
        if frame.sender == receiver:
            raise ValueError(f"agent {receiver} received its own frame")
        if frame.sender not in neighbors:
            raise ValueError(
                f"agent {receiver} received a frame from non-neighbor {frame.sender}"
            )
        if frame.sender in seen:
            raise ValueError(f"duplicate frame from agent {frame.sender}")
        seen.add(frame.sender)

    if model.mode == "ideal":
        z = sum(f.slot_a for f in frames)  # type: ignore[misc]
        z_prime = sum(f.slot_b for f in frames)
        return ReceivedAggregate(z, z_prime)

    convert = coerce if coerce is not None else (lambda v: v)
    z = 0
    z_prime = 0
    for frame in frames:
        h = convert(model.coefficient.sample(rng))
        if h == 1:  # identity weight: keep the operands' exact representation
            z = z + frame.slot_a  # type: ignore[operator]
            z_prime = z_prime + frame.slot_b
        else:
            z = z + h * frame.slot_a  # type: ignore[operator]
            z_prime = z_prime + h * frame.slot_b
    noise_a = convert(model.noise.sample(rng))
    noise_b = convert(model.noise.sample(rng))
    if noise_a != 0:
        z = z + noise_a
    if noise_b != 0:
        z_prime = z_prime + noise_b
    return ReceivedAggregate(z, z_prime)


def ota_compute(
    receiver: int,
    values: Mapping[int, object],
    pre_fns: Mapping[int, Callable] | Callable,
    post_fn: Callable,
) -> object:
    """Compute a function of the local values over an ideal channel.

    ``values`` maps each agent in the receiver's closed neighborhood to its
    current value. Every sender broadcasts its pre-processed value, the
    channel sums them, and the receiver post-processes its own pre-processed
    value plus the superposed total.
    """
    if receiver not in values:
        raise ValueError(f"values must include the receiver {receiver}")

    def pre(agent: int):
        fn = pre_fns[agent] if isinstance(pre_fns, Mapping) else pre_fns
        return fn(values[agent])

    superposed = sum(pre(j) for j in values if j != receiver)
    return post_fn(pre(receiver) + superposed)
