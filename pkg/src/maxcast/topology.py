"""Undirected communication graphs over agents 1..n.

Agents are identified by the integers 1..n on every public surface. Edges are
unordered pairs without self-loops, so adjacency is symmetric by construction.
Generators cover the named families used in experiments plus seeded
Erdos-Renyi draws conditioned on connectivity.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from typing import Iterable, Iterator

MAX_CONNECTIVITY_RETRIES = 10_000

NAMED_KINDS = ("line", "ring", "star", "complete")


class Topology:
    """Immutable undirected graph over agents 1..n."""

    __slots__ = ("n", "_edges", "_neighbors")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 1:
            raise ValueError(f"agent count must be >= 1, got {n}")
        neighbors: list[set[int]] = [set() for _ in range(n + 1)]
        canonical: set[tuple[int, int]] = set()
        for i, j in edges:
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"edge ({i},{j}) has an endpoint outside 1..{n}")
            if i == j:
                raise ValueError(f"self-loop ({i},{i}) is not allowed")
            canonical.add((min(i, j), max(i, j)))
            neighbors[i].add(j)
            neighbors[j].add(i)
        self.n = n
        self._edges = frozenset(canonical)
        self._neighbors = tuple(frozenset(s) for s in neighbors)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """All edges as sorted (low, high) pairs."""
        return tuple(sorted(self._edges))

    def agents(self) -> range:
        """Iterate agent identities 1..n."""
        return range(1, self.n + 1)

    def neighbors(self, i: int) -> frozenset[int]:
        """The neighbor set of agent ``i``."""
        self._check_agent(i)
        return self._neighbors[i]

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    def _check_agent(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise ValueError(f"agent {i} outside 1..{self.n}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Topology):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.n, self._edges))

    def __repr__(self) -> str:
        return f"Topology(n={self.n}, edges={sorted(self._edges)})"


def build(n: int, edges: Iterable[tuple[int, int]]) -> Topology:
    """Build a topology from an explicit unordered edge list.

    Rejects out-of-range endpoints and self-loops.
    """
    return Topology(n, edges)


def bfs_distances(t: Topology, source: int) -> list[int | None]:
    """Hop distances from ``source``; entry 0 is padding, unreachable is None."""
    t._check_agent(source)
    dist: list[int | None] = [None] * (t.n + 1)
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in t.neighbors(v):
            if dist[w] is None:
                dist[w] = dist[v] + 1  # type: ignore[operator]
                queue.append(w)
    return dist


def is_connected(t: Topology) -> bool:
    """True iff every pair of agents is joined by a path (n=1 counts)."""
    dist = bfs_distances(t, 1)
    return all(dist[i] is not None for i in t.agents())


def eccentricity(t: Topology, source: int) -> int:
    """Largest hop distance from ``source``; requires a connected graph."""
    dist = bfs_distances(t, source)
    if any(dist[i] is None for i in t.agents()):
        raise ValueError("eccentricity is undefined on a disconnected graph")
    return max(dist[i] for i in t.agents())  # type: ignore[type-var]


def diameter(t: Topology) -> int:
    """Longest shortest-path length over all agent pairs.

    Raises ValueError on disconnected input. A single agent has diameter 0.
    """
    return max(eccentricity(t, i) for i in t.agents())


def generate_named(kind: str, n: int) -> Topology:
    """Build a canonical graph family: line, ring, star (center 1), complete."""
    if kind == "line":
        return Topology(n, [(i, i + 1) for i in range(1, n)])
    if kind == "ring":
        if n < 3:
            raise ValueError(f"ring requires n >= 3, got {n}")
        return Topology(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])
    if kind == "star":
        return Topology(n, [(1, i) for i in range(2, n + 1)])
    if kind == "complete":
        return Topology(n, list(itertools.combinations(range(1, n + 1), 2)))
    raise ValueError(f"unknown topology kind {kind!r}; expected one of {NAMED_KINDS}")


def generate_random_connected(
    n: int,
    edge_probability: float,
    seed: int,
    max_retries: int = MAX_CONNECTIVITY_RETRIES,
) -> Topology:
    """Seeded Erdos-Renyi draw, redrawn until connected.

    Deterministic for a given seed. Raises RuntimeError if no connected draw
    appears within ``max_retries`` attempts (e.g. edge probability far below
    the connectivity threshold).
    """
    if not 0 < edge_probability <= 1:
        raise ValueError(f"edge probability must be in (0, 1], got {edge_probability}")
    rng = random.Random(seed)
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for _ in range(max_retries):
        edges = [pair for pair in pairs if rng.random() < edge_probability]
        t = Topology(n, edges)
        if is_connected(t):
            return t
    raise RuntimeError(
        f"no connected graph with n={n}, p={edge_probability} after {max_retries} draws"
    )


def enumerate_connected(n: int) -> Iterator[Topology]:
    """Yield every connected labeled graph on agents 1..n.

    The number of candidate edge sets is 2**(n*(n-1)/2); practical for n <= 6.
    """
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for r in range(len(pairs) + 1):
        for subset in itertools.combinations(pairs, r):
            t = Topology(n, subset)
            if is_connected(t):
                yield t
