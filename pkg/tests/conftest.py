"""Shared test helpers: an independent reference simulator and graph strategies."""

from __future__ import annotations

import itertools
from fractions import Fraction

from hypothesis import assume
from hypothesis import strategies as st

from maxcast.topology import Topology, is_connected


def reference_broadcast_run(topo, x0, rounds: int, switching: bool):
    """Straight-line transcription of the broadcast dynamics, independent of
    the package's incremental bookkeeping.

    Keeps full per-agent histories of x, y and T. At a switch round the new
    authorization is recomputed as an explicit product over the stored y
    history for the window [T, k], skipping entries that were themselves set
    by a switch. Returns (x_history, y_history) as lists indexed by round,
    x_history[k-1] = state vector in effect at round k.
    """
    agents = list(topo.agents())
    x = {i: {1: Fraction(x0[i - 1])} for i in agents}
    y = {i: {1: 1} for i in agents}
    T = {i: {1: 1} for i in agents}
    set_by_switch = {i: set() for i in agents}
    for k in range(1, rounds + 1):
        u = {}
        for i in agents:
            authorized = [j for j in sorted(topo.neighbors(i)) if y[j][k] == 1]
            if authorized:
                u[i] = sum(x[j][k] for j in authorized) / len(authorized)
            else:
                u[i] = 0
        for i in agents:
            x[i][k + 1] = max(x[i][k], u[i])
            if switching and k == 2 * T[i][k]:
                product = 1
                for t in range(T[i][k], k + 1):
                    if t in set_by_switch[i]:
                        continue
                    product &= y[i][t]
                y[i][k + 1] = product
                T[i][k + 1] = k
                set_by_switch[i].add(k + 1)
            else:
                y[i][k + 1] = 1 if x[i][k] >= u[i] else 0
                T[i][k + 1] = T[i][k]
    xs = [tuple(x[i][k] for i in agents) for k in range(1, rounds + 2)]
    ys = [tuple(y[i][k] for i in agents) for k in range(1, rounds + 2)]
    return xs, ys


@st.composite
def connected_graphs(draw, min_n: int = 2, max_n: int = 6):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    flags = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    t = Topology(n, [p for p, keep in zip(pairs, flags) if keep])
    assume(is_connected(t))
    return t


@st.composite
def graph_with_states(draw, min_n: int = 2, max_n: int = 6, max_value: int = 5):
    t = draw(connected_graphs(min_n=min_n, max_n=max_n))
    states = draw(
        st.lists(
            st.integers(min_value=0, max_value=max_value),
            min_size=t.n,
            max_size=t.n,
        )
    )
    return t, tuple(states)
