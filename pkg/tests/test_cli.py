"""Command-line client: exit codes, artifacts, determinism."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

import maxcast.cli as cli_module
from maxcast.cli import main
from maxcast.client import RemoteClient
from maxcast.service import create_app

DIAMOND_EDGES = [[1, 2], [1, 3], [2, 3], [2, 4], [3, 4]]


@pytest.fixture()
def runner():
    return CliRunner()


def write_scenario(tmp_path: Path, doc: dict, name: str = "scenario.json") -> str:
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def line4_doc(**overrides):
    doc = {
        "topology": {"kind": "line", "n": 4},
        "protocol": "switching",
        "initial_states": {"values": [4, 3, 3, 3]},
    }
    doc.update(overrides)
    return doc


class TestRunCommand:
    def test_converged_run_exits_zero_and_writes_outcome(self, runner, tmp_path):
        path = write_scenario(tmp_path, line4_doc())
        result = runner.invoke(main, ["run", "--scenario", path, "--out", str(tmp_path / "out")])
        assert result.exit_code == 0, result.output
        outcome = json.loads((tmp_path / "out" / "outcome.json").read_text())
        assert outcome["converged"] is True
        assert outcome["final_x"] == ["4", "4", "4", "4"]

    def test_cap_exhaustion_exits_one_with_partial_trace(self, runner, tmp_path):
        doc = line4_doc(
            topology={"kind": "explicit", "n": 4, "edges": DIAMOND_EDGES},
            protocol="asymptotic",
            round_cap=50,
            trace_level="full",
        )
        path = write_scenario(tmp_path, doc)
        result = runner.invoke(main, ["run", "--scenario", path, "--out", str(tmp_path / "out")])
        assert result.exit_code == 1, result.output
        outcome = json.loads((tmp_path / "out" / "outcome.json").read_text())
        assert outcome["converged"] is False and outcome["rounds"] == 50
        trace = (tmp_path / "out" / "trace.csv").read_text().splitlines()
        assert trace[0] == "k,agent,x,y,u"
        assert len(trace) == 1 + 4 * 51  # header + 4 agents x (50 rounds + terminal)

    def test_missing_key_exits_two_and_names_it(self, runner, tmp_path):
        doc = line4_doc()
        del doc["topology"]
        path = write_scenario(tmp_path, doc)
        result = runner.invoke(main, ["run", "--scenario", path])
        assert result.exit_code == 2
        assert "topology" in result.output

    def test_unknown_key_exits_two(self, runner, tmp_path):
        path = write_scenario(tmp_path, line4_doc(round_limit=10))
        result = runner.invoke(main, ["run", "--scenario", path])
        assert result.exit_code == 2
        assert "round_limit" in result.output

    def test_unreadable_json_exits_two(self, runner, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        result = runner.invoke(main, ["run", "--scenario", str(path)])
        assert result.exit_code == 2

    def test_missing_file_exits_two(self, runner, tmp_path):
        result = runner.invoke(main, ["run", "--scenario", str(tmp_path / "absent.json")])
        assert result.exit_code == 2

    def test_cap_override_flag(self, runner, tmp_path):
        doc = line4_doc(
            topology={"kind": "explicit", "n": 4, "edges": DIAMOND_EDGES},
            protocol="asymptotic",
        )
        path = write_scenario(tmp_path, doc)
        result = runner.invoke(
            main, ["run", "--scenario", path, "--cap", "10", "--out", str(tmp_path / "o")]
        )
        assert result.exit_code == 1
        outcome = json.loads((tmp_path / "o" / "outcome.json").read_text())
        assert outcome["rounds"] == 10


class TestDeterministicArtifacts:
    def test_byte_identical_reruns_exact_mode(self, runner, tmp_path):
        doc = {
            "topology": {"kind": "random", "n": 10, "p": 0.4, "seed": 11},
            "protocol": "switching",
            "initial_states": {"uniform": [0.0, 6.283185307179586], "seed": 12},
            "numeric": {"mode": "exact"},
            "trace_level": "full",
            "checks": ["monotone", "lyapunov"],
        }
        path = write_scenario(tmp_path, doc)
        contents = []
        for sub in ("a", "b"):
            out = tmp_path / sub
            result = runner.invoke(main, ["run", "--scenario", path, "--out", str(out)])
            assert result.exit_code == 0, result.output
            contents.append(
                {
                    name: (out / name).read_bytes()
                    for name in ("outcome.json", "trace.csv", "trace.json", "checks.json")
                }
            )
        assert contents[0] == contents[1]


class TestBatchCommand:
    def test_batch_writes_summary(self, runner, tmp_path):
        doc = {
            "topology": {"kind": "random", "n": 8, "p": 0.5, "seed": 1},
            "protocol": "switching",
            "initial_states": {"uniform": [0.0, 6.28], "seed": 2},
        }
        path = write_scenario(tmp_path, doc)
        result = runner.invoke(
            main, ["batch", "--scenario", path, "--trials", "4", "--out", str(tmp_path / "out")]
        )
        assert result.exit_code == 0, result.output
        body = json.loads((tmp_path / "out" / "batch.json").read_text())
        assert body["summary"]["trials"] == 4
        assert len(body["trials"]) == 4

    def test_zero_trials_empty_summary_exit_zero(self, runner, tmp_path):
        path = write_scenario(tmp_path, line4_doc())
        result = runner.invoke(
            main, ["batch", "--scenario", path, "--trials", "0", "--out", str(tmp_path / "out")]
        )
        assert result.exit_code == 0
        body = json.loads((tmp_path / "out" / "batch.json").read_text())
        assert body["summary"]["trials"] == 0 and body["trials"] == []

    def test_non_converged_trials_reported(self, runner, tmp_path):
        doc = line4_doc(
            topology={"kind": "explicit", "n": 4, "edges": DIAMOND_EDGES},
            protocol="asymptotic",
            round_cap=30,
        )
        path = write_scenario(tmp_path, doc)
        result = runner.invoke(
            main, ["batch", "--scenario", path, "--trials", "2", "--out", str(tmp_path / "out")]
        )
        assert result.exit_code == 0
        body = json.loads((tmp_path / "out" / "batch.json").read_text())
        assert body["summary"]["converged"] == 0


class TestRatioCommand:
    def test_ratio_artifacts(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["ratio", "--sizes", "2,6", "--trials", "3", "--seed", "4", "--out", str(tmp_path)],
        )
        assert result.exit_code == 0, result.output
        lines = (tmp_path / "ratio.csv").read_text().splitlines()
        assert lines[0] == (
            "n,trial,seed,rounds_traditional,rounds_broadcast,"
            "slots_traditional,slots_broadcast,r"
        )
        assert len(lines) == 1 + 6
        k2_rows = [line for line in lines[1:] if line.startswith("2,")]
        assert k2_rows and all(line.endswith(",1.0") for line in k2_rows)
        aggregates = json.loads((tmp_path / "ratio_aggregate.json").read_text())
        assert [a["n"] for a in aggregates] == [2, 6]

    def test_bad_sizes_exit_two(self, runner, tmp_path):
        result = runner.invoke(main, ["ratio", "--sizes", "abc", "--trials", "3"])
        assert result.exit_code == 2


class TestValidateCommand:
    def test_valid_scenario(self, runner, tmp_path):
        path = write_scenario(tmp_path, line4_doc())
        result = runner.invoke(main, ["validate", "--scenario", path])
        assert result.exit_code == 0
        assert json.loads(result.output)["valid"] is True

    def test_invalid_scenario(self, runner, tmp_path):
        path = write_scenario(tmp_path, line4_doc(initial_states={"values": [1]}))
        result = runner.invoke(main, ["validate", "--scenario", path])
        assert result.exit_code == 2


class TestRemotePathway:
    def test_run_through_http_client(self, runner, tmp_path, monkeypatch):
        http = TestClient(create_app())
        monkeypatch.setattr(
            cli_module, "_make_client",
            lambda server: RemoteClient(http=http) if server else None,
        )
        path = write_scenario(tmp_path, line4_doc())
        result = runner.invoke(
            main,
            ["run", "--scenario", path, "--server", "http://testserver", "--out", str(tmp_path / "o")],
        )
        assert result.exit_code == 0, result.output
        outcome = json.loads((tmp_path / "o" / "outcome.json").read_text())
        assert outcome["converged"] is True
