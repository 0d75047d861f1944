"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines; ``pytest -v`` shows the same pass/fail per test name.
"""

import itertools
import json
import math
import random
import statistics
from fractions import Fraction

import pytest
from click.testing import CliRunner

from maxcast.analysis import (
    aggregate_ratios,
    auto_edge_probability,
    check_equilibrium,
    check_lyapunov,
    check_monotone,
    check_silencing,
    ratio_experiment,
)
from maxcast.cli import main as cli_main
from maxcast.engine import NumericMode, SimulationConfig, run_until_consensus
from maxcast.protocols import ProtocolKind
from maxcast.runner import run_batch
from maxcast.scenario import Scenario
from maxcast.topology import (
    build,
    diameter,
    enumerate_connected,
    generate_random_connected,
)

TAU = 2 * math.pi

DIAMOND = build(4, [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])

SUITE_SEED = 20260808
SUITE_INSTANCES = 500


@pytest.fixture(scope="module")
def randomized_suite():
    """500 random connected instances (n in 5..30, states uniform over
    [0, 2*pi)), each run under all three protocols in float mode."""
    rng = random.Random(SUITE_SEED)
    suite = []
    for _ in range(SUITE_INSTANCES):
        n = rng.randrange(5, 31)
        topo = generate_random_connected(n, auto_edge_probability(n), rng.randrange(2**32))
        x0 = tuple(TAU * rng.random() for _ in range(n))
        outcomes = {}
        for protocol in ProtocolKind:
            cfg = SimulationConfig(
                topology=topo, protocol=protocol, initial_states=x0,
                numeric=NumericMode.float_mode(),
            )
            outcomes[protocol] = run_until_consensus(cfg)
        suite.append((topo, x0, outcomes))
    return suite


def test_criterion_01_finite_time_convergence_exhaustive():
    """Switching protocol, exact mode: every connected labeled topology with
    n <= 4 and every integer state vector in {0,1,2,3}^n reaches literal
    equality with the maximum within the default round cap."""
    graph_counts = {}
    instances = 0
    for n in range(1, 5):
        graphs = list(enumerate_connected(n))
        graph_counts[n] = len(graphs)
        for topo in graphs:
            for x0 in itertools.product(range(4), repeat=n):
                cfg = SimulationConfig(
                    topology=topo, protocol=ProtocolKind.SWITCHING,
                    initial_states=x0, numeric=NumericMode.exact(),
                )
                out = run_until_consensus(cfg)
                assert out.converged, (topo, x0)
                assert all(v == max(x0) for v in out.final_x), (topo, x0)
                instances += 1
    assert graph_counts == {1: 1, 2: 1, 3: 4, 4: 38}
    assert instances == 4 + 16 + 4 * 64 + 38 * 256
    print(f"\nACCEPTANCE 01 finite-time convergence: PASS ({instances} instances)")


def test_criterion_02_monotone_boundedness(randomized_suite):
    """Both broadcast protocols on 1,000 randomized runs: states never
    decrease and never exceed the initial maximum (mode tolerance on the
    bound). Zero violations."""
    runs = 0
    numeric = NumericMode.float_mode()
    for _, _, outcomes in randomized_suite:
        for protocol in (ProtocolKind.ASYMPTOTIC, ProtocolKind.SWITCHING):
            report = check_monotone(outcomes[protocol].trace, numeric)
            assert report.passed, report.violations
            runs += 1
    assert runs == 2 * SUITE_INSTANCES
    print(f"\nACCEPTANCE 02 monotone boundedness: PASS ({runs} runs, 0 violations)")


def test_criterion_03_lyapunov_decrease(randomized_suite):
    """Energy drains on every run: strictly away from the consensus point for
    the asymptotic protocol; never increases for the switching protocol
    (which may hold the states for two rounds mid-run). Zero violations."""
    numeric = NumericMode.float_mode()
    windows = 0
    for _, _, outcomes in randomized_suite:
        out_a = outcomes[ProtocolKind.ASYMPTOTIC]
        report = check_lyapunov(out_a.trace, out_a.target, numeric, strict=True)
        assert report.passed, report.violations
        windows += report.checked
        out_s = outcomes[ProtocolKind.SWITCHING]
        report = check_lyapunov(out_s.trace, out_s.target, numeric, strict=False)
        assert report.passed, report.violations
        windows += report.checked
    print(f"\nACCEPTANCE 03 lyapunov decrease: PASS ({windows} windows, 0 violations)")


def test_criterion_04_unique_equilibrium():
    """Dynamic one-round fixedness agrees with the closed-form
    characterization (constant states, all authorized) on an exhaustive
    n <= 4 sweep plus 10,000 randomized probes. Zero disagreements."""
    checks = 0
    fixed_points = 0
    for n in range(1, 5):
        for topo in enumerate_connected(n):
            for x in itertools.product(range(3), repeat=n):
                for y in itertools.product((0, 1), repeat=n):
                    fixed_points += check_equilibrium(x, y, topo)  # raises on mismatch
                    checks += 1
    # every graph contributes exactly the 3 uniform fully-authorized states
    assert fixed_points == 3 * (1 + 1 + 4 + 38)

    rng = random.Random(4242)
    probes = 0
    for _ in range(4000):  # arbitrary states and bits
        n = rng.randrange(2, 9)
        topo = generate_random_connected(n, 0.5, rng.randrange(2**32))
        x = tuple(Fraction(rng.random()) * 10 for _ in range(n))
        y = tuple(rng.randrange(2) for _ in range(n))
        check_equilibrium(x, y, topo)
        probes += 1
    for _ in range(3000):  # true fixed points
        n = rng.randrange(1, 9)
        topo = generate_random_connected(n, 0.5, rng.randrange(2**32))
        c = Fraction(rng.random()) * 10
        assert check_equilibrium((c,) * n, (1,) * n, topo)
        probes += 1
    for _ in range(3000):  # constant states, at least one agent silenced
        n = rng.randrange(2, 9)
        topo = generate_random_connected(n, 0.5, rng.randrange(2**32))
        c = Fraction(rng.random()) * 10
        y = [rng.randrange(2) for _ in range(n)]
        y[rng.randrange(n)] = 0
        assert not check_equilibrium((c,) * n, tuple(y), topo)
        probes += 1
    assert probes == 10_000
    print(f"\nACCEPTANCE 04 unique equilibrium: PASS ({checks} exhaustive + {probes} probes)")


def test_criterion_05_silencing(randomized_suite):
    """In every converged asymptotic run of the randomized suite, every
    initially non-maximal agent is silenced at least once. Zero violations."""
    numeric = NumericMode.float_mode()
    converged_runs = 0
    agents_checked = 0
    for topo, _, outcomes in randomized_suite:
        out = outcomes[ProtocolKind.ASYMPTOTIC]
        if not out.converged:
            continue
        report = check_silencing(out.trace, topo, numeric)
        assert report.passed, report.violations
        converged_runs += 1
        agents_checked += report.checked
    assert converged_runs > 0
    print(
        f"\nACCEPTANCE 05 silencing: PASS ({converged_runs} converged runs, "
        f"{agents_checked} agents, 0 violations)"
    )


def test_criterion_06_traditional_bound(randomized_suite):
    """The orthogonal-access baseline converges within the graph diameter on
    every instance of the randomized suite."""
    for topo, _, outcomes in randomized_suite:
        out = outcomes[ProtocolKind.TRADITIONAL]
        assert out.converged
        assert out.rounds <= diameter(topo), (topo.n, out.rounds)
    print(f"\nACCEPTANCE 06 traditional bound: PASS ({SUITE_INSTANCES} instances)")


def test_criterion_07_asymptotic_only_behavior_exists():
    """Derived by sweep: at least one 4-agent instance where the asymptotic
    protocol has not reached consensus by round 50 in exact mode while the
    switching protocol closes the same instance finitely."""
    x0 = (4, 3, 3, 3)
    asymptotic_only = []
    for topo in enumerate_connected(4):
        out_a = run_until_consensus(
            SimulationConfig(
                topology=topo, protocol=ProtocolKind.ASYMPTOTIC,
                initial_states=x0, numeric=NumericMode.exact(), round_cap=50,
            )
        )
        if out_a.converged:
            continue
        out_s = run_until_consensus(
            SimulationConfig(
                topology=topo, protocol=ProtocolKind.SWITCHING,
                initial_states=x0, numeric=NumericMode.exact(),
            )
        )
        assert out_s.converged and all(v == 4 for v in out_s.final_x)
        asymptotic_only.append(topo)
    assert len(asymptotic_only) >= 1
    assert DIAMOND in asymptotic_only
    print(
        f"\nACCEPTANCE 07 asymptotic-only behavior: PASS "
        f"({len(asymptotic_only)} of 38 labeled 4-agent graphs, incl. the diamond)"
    )


def test_criterion_08_randomized_scale():
    """100-trial batch, 20 agents, random connected graphs, uniform [0, 2*pi)
    states, switching protocol, exact mode: every trial converges and the
    median round count sits in the order-of-magnitude band [5, 60]."""
    scenario = Scenario.model_validate(
        {
            "topology": {"kind": "random", "n": 20, "p": 0.2, "seed": 100},
            "protocol": "switching",
            "initial_states": {"uniform": [0.0, TAU], "seed": 200},
            "numeric": {"mode": "exact"},
        }
    )
    result = run_batch(scenario, 100)
    assert result.total == 100
    assert result.converged_count == 100, f"only {result.converged_count} converged"
    median = statistics.median(t.rounds for t in result.trials)
    assert 5 <= median <= 60, median
    print(f"\nACCEPTANCE 08 randomized scale: PASS (100/100 converged, median rounds {median})")


def test_criterion_09_speedup_band():
    """Slot-normalized speedup at 100 agents over 30 trials: median r within
    [5, 20]; and the advantage grows with network size (median at n=10 is
    below median at n=100)."""
    rows = ratio_experiment(sizes=[10, 100], trials=30, seed=7)
    assert all(r.converged_both for r in rows)
    aggregates = {a.n: a for a in aggregate_ratios(rows)}
    median_100 = aggregates[100].r_median
    median_10 = aggregates[10].r_median
    assert 5 <= median_100 <= 20, median_100
    assert median_10 < median_100, (median_10, median_100)
    print(
        f"\nACCEPTANCE 09 speedup band: PASS (median r: n=10 -> {median_10:.2f}, "
        f"n=100 -> {median_100:.2f})"
    )


def test_criterion_10_determinism(tmp_path):
    """Two executions of the same scenario and seeds produce byte-identical
    outcome artifacts in exact mode."""
    scenario = {
        "topology": {"kind": "random", "n": 12, "p": 0.4, "seed": 31},
        "protocol": "switching",
        "initial_states": {"uniform": [0.0, TAU], "seed": 32},
        "numeric": {"mode": "exact"},
        "trace_level": "full",
        "checks": ["monotone", "lyapunov"],
    }
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(scenario))
    runner = CliRunner()
    artifacts = []
    for sub in ("first", "second"):
        out = tmp_path / sub
        result = runner.invoke(
            cli_main, ["run", "--scenario", str(path), "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        artifacts.append(
            {
                name: (out / name).read_bytes()
                for name in ("outcome.json", "trace.csv", "trace.json", "checks.json")
            }
        )
    assert artifacts[0] == artifacts[1]
    print("\nACCEPTANCE 10 determinism: PASS (byte-identical artifacts)")
