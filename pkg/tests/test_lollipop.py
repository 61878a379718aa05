"""Test the lollipop step and Thomason's walk."""

import pytest

from thomason_lab.core.errors import BudgetExceededError, GraphError, ParameterError
from thomason_lab.core.family import GadgetWiring, build
from thomason_lab.core.graph import HamCycle, OrientedHamPath, cube_q3, k4
from thomason_lab.core.lollipop import (
    detect_rightmost,
    initial_path,
    lollipop,
    lollipop_neighbors,
    run_thomason,
    run_walk,
)
from thomason_lab.core.oracle import build_lollipop_graph, enumerate_ham_cycles
from thomason_lab.core.words import recurrence_table

SPIRAL = GadgetWiring.from_shift((2, 0, 1))


class TestLollipopStep:
    """Test the single lollipop operation."""

    def test_suffix_reversal(self):
        """Test the suffix after the pivot is reversed."""
        assert lollipop((0, 1, 2, 3, 4), 1) == (0, 1, 4, 3, 2)
        assert lollipop((0, 1, 2, 3, 4), 2) == (0, 1, 2, 4, 3)

        print("✅ Suffix reversal test passed")

    def test_closing_path_has_one_successor(self):
        """Test a path whose ends are adjacent has a single lollipop."""
        neighbors = lollipop_neighbors(k4(), OrientedHamPath((0, 1, 2, 3)))

        assert neighbors.is_cycle
        assert neighbors.successors == ((1, OrientedHamPath((0, 1, 3, 2))),)

        print("✅ Closing path test passed")

    def test_open_path_has_two_successors(self):
        """Test a non-closing path has two lollipops, pivots at interior neighbours."""
        graph = cube_q3()
        neighbors = lollipop_neighbors(graph, OrientedHamPath((0, 1, 3, 2, 6, 4, 5, 7)))

        assert not neighbors.is_cycle
        assert [pivot for pivot, _ in neighbors.successors] == [3, 6]
        assert all(q.is_valid(graph) for _, q in neighbors.successors)
        assert all(q.start == 0 for _, q in neighbors.successors)

        print("✅ Open path test passed")


class TestInitialPath:
    """Test opening the start cycle."""

    def test_edge_first(self):
        """Test the distinguished edge is the first path edge."""
        path = initial_path(HamCycle((0, 1, 2, 3)), (1, 0))

        assert path.order == (0, 1, 2, 3)
        assert initial_path(HamCycle((0, 1, 2, 3)), (0, 1), start=1).order == (1, 0, 3, 2)

        print("✅ Initial path test passed")

    def test_bad_inputs(self):
        """Test an edge off the cycle or a start off the edge is refused."""
        cycle = HamCycle((0, 1, 2, 3))

        with pytest.raises(GraphError):
            initial_path(cycle, (0, 2))
        with pytest.raises(ParameterError):
            initial_path(cycle, (0, 1), start=2)

        print("✅ Initial path guard test passed")


class TestWalk:
    """Test walks on small graphs."""

    def test_k4_single_step(self):
        """Test K4 reaches the second cycle through 0-1 in one step."""
        trace = run_walk(k4(), HamCycle((0, 1, 2, 3)), (0, 1))

        assert trace.completed
        assert trace.steps == 1
        assert trace.end_cycle == [0, 1, 3, 2]

        print("✅ K4 walk test passed")

    def test_q3_second_cycle(self):
        """Test every Q3 walk ends on another cycle through the same edge."""
        graph = cube_q3()
        cycles = enumerate_ham_cycles(graph)

        for cycle in cycles:
            for edge in sorted(cycle.edges):
                trace = run_walk(graph, cycle, edge)
                end = HamCycle(tuple(trace.end_cycle))
                assert end != cycle
                assert end.contains(edge)
                assert end.is_valid(graph)

        print("✅ Q3 walk test passed")

    def test_unknown_log_level(self):
        """Test unknown log levels are refused."""
        with pytest.raises(ParameterError):
            run_walk(k4(), HamCycle((0, 1, 2, 3)), (0, 1), log_level="verbose")  # type: ignore[arg-type]

        print("✅ Log level test passed")


class TestThomasonOnFamily:
    """Test the walk on G_n from C0 through the green edge."""

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
    def test_reaches_c1(self, n):
        """Test the walk ends at C1 with 2 a_n rightmost paths and gaps of at most 2n."""
        instance = build(n, SPIRAL)
        trace = run_thomason(instance)

        assert trace.completed
        assert trace.end_cycle == list(instance.c1.order)
        assert trace.rightmost_count == 2 * recurrence_table(n)[n]
        assert trace.max_gap <= 2 * n

        print(f"✅ Walk test passed for n={n} - {trace.steps} steps")

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_matches_lollipop_graph(self, n):
        """Test the G_n walk is the traversal of its lollipop-graph component."""
        instance = build(n, SPIRAL)
        trace = run_thomason(instance, "full")
        view = build_lollipop_graph(instance.graph, start=instance.lambda_vertex)

        walk = view.traverse(view.index_of(trace.path_log[0]))

        assert [list(order) for order in walk] == trace.path_log
        assert len(walk) == trace.steps + 1

        print(f"✅ Lollipop graph test passed for n={n} - {trace.steps} steps")

    def test_first_step(self):
        """Test the opened C0 has one lollipop and its successor is not rightmost."""
        instance = build(3, SPIRAL)
        trace = run_thomason(instance, "full")
        first, second = trace.paths()[:2]
        neighbors = lollipop_neighbors(instance.graph, first)

        assert neighbors.is_cycle
        assert neighbors.successors[0][1] == second
        assert not detect_rightmost(instance, second)

        pivot = second.order.index(neighbors.successors[0][0])
        assert lollipop(second.order, pivot) == first.order

        print("✅ First step test passed")

    def test_log_levels(self):
        """Test what each log level keeps."""
        instance = build(5, SPIRAL)
        counts = run_thomason(instance, "counts")
        rightmost = run_thomason(instance, "rightmost")
        full = run_thomason(instance, "full")

        assert counts.path_log is None and counts.rightmost_paths is None
        assert rightmost.path_log is None
        assert len(rightmost.rightmost_paths) == rightmost.rightmost_count
        assert len(full.path_log) == full.steps + 1
        assert counts.steps == rightmost.steps == full.steps
        assert all(OrientedHamPath(tuple(p)).is_valid(instance.graph) for p in full.path_log)

        print("✅ Log level test passed")

    def test_reverse_walk(self):
        """Test walking from C1 retraces the path back to C0."""
        instance = build(5, SPIRAL)
        forward = run_thomason(instance)
        backward = run_thomason(instance, from_final=True)

        assert backward.end_cycle == list(instance.c0.order)
        assert backward.steps == forward.steps

        print("✅ Reverse walk test passed")

    def test_growth(self):
        """Test T(n+4) exceeds 2 T(n) on small instances."""
        steps = {n: run_thomason(build(n, SPIRAL)).steps for n in (4, 8)}

        assert steps[8] > 2 * steps[4]

        print(f"✅ Growth test passed - {steps}")

    def test_budget(self):
        """Test an exhausted budget raises with the partial trace."""
        instance = build(6, SPIRAL)

        with pytest.raises(BudgetExceededError) as excinfo:
            run_thomason(instance, budget=5)

        assert excinfo.value.partial.steps == 5
        assert not excinfo.value.partial.completed

        print("✅ Budget test passed")

    def test_detect_rightmost(self):
        """Test rightmost detection needs a path from Λ."""
        instance = build(3, SPIRAL)
        trace = run_thomason(instance, "rightmost")
        first = OrientedHamPath(tuple(trace.rightmost_paths[0]))

        assert detect_rightmost(instance, first)
        with pytest.raises(ParameterError):
            detect_rightmost(instance, OrientedHamPath(tuple(reversed(first.order))))

        print("✅ Rightmost detection test passed")

    @pytest.mark.slow
    def test_large_instance(self):
        """Test a 20-gadget walk completes above the oracle bound."""
        instance = build(20, SPIRAL)
        trace = run_thomason(instance, checkpoint_every=100_000)

        assert trace.end_cycle == list(instance.c1.order)
        assert trace.rightmost_count == 2 * recurrence_table(20)[20]

        print(f"✅ Large instance test passed - {trace.steps:,} steps")
