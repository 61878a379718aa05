"""Test the command-line interface."""

import json

import pytest
from click.testing import CliRunner

from thomason_lab.cli import main
from thomason_lab.core.graph import graph_to_json, k4
from thomason_lab.utils.snapshot import load_snapshot


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def env(tmp_path):
    return {"LOGS_PATH": str(tmp_path / "logs"), "LOG_LEVEL": "ERROR"}


@pytest.fixture
def k4_file(tmp_path):
    path = tmp_path / "k4.json"
    path.write_text(json.dumps(graph_to_json(k4())), encoding="utf-8")
    return str(path)


class TestBuildAndWords:
    """Test graph and word commands."""

    def test_build_json(self, runner, env):
        """Test build emits the graph with its distinguished data."""
        result = runner.invoke(main, ["build", "--n", "3"], env=env)
        payload = json.loads(result.output)

        assert result.exit_code == 0
        assert payload["n_vertices"] == 12
        assert payload["lambda_vertex"] == 1
        assert payload["green_edge"] == [1, 4]
        assert payload["wiring"]["name"] == "spiral"

        print("✅ Build JSON test passed")

    def test_build_dot(self, runner, env):
        """Test build can emit DOT with the distinguished edges coloured."""
        result = runner.invoke(main, ["build", "--n", "3", "--emit", "dot"], env=env)

        assert result.exit_code == 0
        assert result.output.startswith("graph G_3 {")
        assert 'color="green"' in result.output
        assert 'color="red"' in result.output

        print("✅ Build DOT test passed")

    def test_missing_snapshot(self, runner, env, tmp_path):
        """Test commands needing the snapshot fail without it."""
        env = dict(env, SNAPSHOT_PATH=str(tmp_path / "none.json"))
        result = runner.invoke(main, ["build", "--n", "3"], env=env)

        assert result.exit_code == 1

        print("✅ Missing snapshot test passed")

    def test_words(self, runner, env):
        """Test word listing and counting."""
        listed = runner.invoke(main, ["words", "--n", "4"], env=env)
        counted = runner.invoke(main, ["words", "--n", "4", "--emit", "count"], env=env)

        assert listed.output.split() == ["AA", "AC", "TC", "TA", "G"]
        assert counted.output.strip() == "5"

        print("✅ Words test passed")

    def test_automaton(self, runner, env):
        """Test automaton DOT export."""
        result = runner.invoke(main, ["automaton"], env=env)

        assert result.exit_code == 0
        assert "digraph J {" in result.output

        print("✅ Automaton test passed")

    def test_asymptotics(self, runner, env):
        """Test the asymptotics JSON."""
        result = runner.invoke(main, ["asymptotics", "--kmax", "10"], env=env)
        payload = json.loads(result.output)

        assert payload["a_table"][:5] == [1, 2, 3, 3, 5]
        assert abs(payload["c"] - 1.3953) < 1e-3

        print("✅ Asymptotics test passed")


class TestOracleCommands:
    """Test oracle subcommands."""

    def test_cycles(self, runner, env, k4_file):
        """Test cycle listing on K4."""
        result = runner.invoke(main, ["oracle", "cycles", "--graph", k4_file], env=env)

        assert result.exit_code == 0
        assert json.loads(result.output)["count"] == 3

        print("✅ Oracle cycles test passed")

    def test_lollipop(self, runner, env, k4_file):
        """Test lollipop summary and DOT on K4."""
        summary = runner.invoke(main, ["oracle", "lollipop", "--graph", k4_file, "--start", "0"], env=env)
        dot = runner.invoke(main, ["oracle", "lollipop", "--graph", k4_file, "--emit", "dot"], env=env)

        assert json.loads(summary.output)["degree_one"] == 6
        assert dot.output.startswith("graph lollipop {")

        print("✅ Oracle lollipop test passed")


class TestRunAndExperiments:
    """Test run, verify, sweep, report and search."""

    def test_run_trace(self, runner, env, tmp_path):
        """Test run writes the trace JSON."""
        out = tmp_path / "trace.json"
        result = runner.invoke(main, ["run", "--n", "4", "--log", "rightmost", "--out", str(out)], env=env)
        payload = json.loads(out.read_text(encoding="utf-8"))

        assert result.exit_code == 0
        assert set(payload) == {"n", "steps", "gaps", "rightmost_words", "end_cycle"}
        assert payload["rightmost_words"][0] == "PQUP"

        print("✅ Run test passed")

    def test_step_budget_env(self, runner, env):
        """Test STEP_BUDGET caps the walk and fails the command."""
        result = runner.invoke(main, ["run", "--n", "6"], env=dict(env, STEP_BUDGET="10"))

        assert result.exit_code == 1

        print("✅ Step budget test passed")

    def test_verify(self, runner, env, tmp_path):
        """Test lemma verification exits cleanly and writes reports."""
        out = tmp_path / "lemmas.json"
        result = runner.invoke(
            main, ["verify", "--lemma", "init", "--n-min", "3", "--n-max", "5", "--out", str(out)], env=env
        )

        assert result.exit_code == 0
        reports = json.loads(out.read_text(encoding="utf-8"))
        assert reports[0]["lemma"] == "init"
        assert reports[0]["passed"]

        print("✅ Verify test passed")

    def test_sweep_and_report(self, runner, env, tmp_path):
        """Test sweep output converts to the fixed CSV."""
        sweep_out = tmp_path / "sweep.json"
        csv_out = tmp_path / "sweep.csv"

        swept = runner.invoke(main, ["sweep", "--n-min", "3", "--n-max", "5", "--out", str(sweep_out)], env=env)
        reported = runner.invoke(
            main, ["report", "--input", str(sweep_out), "--format", "csv", "--out", str(csv_out)], env=env
        )

        assert swept.exit_code == 0
        assert reported.exit_code == 0
        lines = csv_out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "n,steps,rightmost_count,max_gap,end_cycle_ok"
        assert len(lines) == 4

        print("✅ Sweep and report test passed")

    def test_search(self, runner, env, tmp_path):
        """Test the search writes a loadable snapshot."""
        out = tmp_path / "wiring.json"
        result = runner.invoke(main, ["search", "--max-n", "3", "--out", str(out)], env=env)

        assert result.exit_code == 0
        assert load_snapshot(out).canonical_wiring.shift == (2, 0, 1)

        print("✅ Search test passed")
