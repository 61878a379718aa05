"""The lollipop step and Thomason's walk from a Hamiltonian cycle to the second one through an edge."""

from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Literal, Optional, Sequence

from loguru import logger
from pydantic import BaseModel, Field

from ..utils.logger import log_walk_checkpoint, log_walk_completion, log_walk_start
from ..utils.timing import PerformanceTimer
from .errors import BudgetExceededError, GraphError, ParameterError
from .graph import CubicGraph, Edge, HamCycle, OrientedHamPath, make_edge

if TYPE_CHECKING:
    from .family import FamilyInstance

LogLevel = Literal["full", "rightmost", "counts"]
LOG_LEVELS = ("full", "rightmost", "counts")

DEFAULT_STEP_BUDGET = 1_000_000_000
DEFAULT_CHECKPOINT = 1_000_000


def lollipop(order: Sequence[int], pivot_position: int) -> tuple[int, ...]:
    """Reverse the suffix after the pivot; the old successor of the pivot becomes the end."""
    return tuple(order[: pivot_position + 1]) + tuple(reversed(order[pivot_position + 1 :]))


@dataclass(frozen=True)
class LollipopNeighbors:
    """Successors of a path, each tagged with the interior neighbour of the end used as pivot."""

    path: OrientedHamPath
    successors: tuple[tuple[int, OrientedHamPath], ...]

    @property
    def is_cycle(self) -> bool:
        return len(self.successors) == 1


def lollipop_neighbors(graph: CubicGraph, p: OrientedHamPath) -> LollipopNeighbors:
    order = p.order
    position = {v: i for i, v in enumerate(order)}
    successors = []
    for w in graph.neighbors(p.end):
        i = position[w]
        if 1 <= i <= len(order) - 3:
            successors.append((w, OrientedHamPath(lollipop(order, i))))
    return LollipopNeighbors(p, tuple(successors))


class WalkTrace(BaseModel):
    """Record of one walk: step count, rightmost events and the cycle it ends on."""

    start_cycle: list[int]
    distinguished_edge: tuple[int, int]
    steps: int = 0
    path_log: Optional[list[list[int]]] = None
    rightmost_indices: list[int] = Field(default_factory=list)
    rightmost_paths: Optional[list[list[int]]] = None
    gap_sizes: list[int] = Field(default_factory=list)
    end_cycle: Optional[list[int]] = None
    completed: bool = False

    @property
    def rightmost_count(self) -> int:
        return len(self.rightmost_indices)

    @property
    def max_gap(self) -> int:
        return max(self.gap_sizes, default=0)

    def paths(self) -> list[OrientedHamPath]:
        if self.path_log is None:
            raise ParameterError("walk was not logged at full level")
        return [OrientedHamPath(tuple(order)) for order in self.path_log]


def initial_path(cycle: HamCycle, edge: Edge, start: Optional[int] = None) -> OrientedHamPath:
    """Open the cycle at the start endpoint of the edge so that the edge comes first."""
    u, v = edge
    if not cycle.contains(edge):
        raise GraphError(f"edge {make_edge(u, v)} is not on the cycle")
    start = min(u, v) if start is None else start
    if start not in (u, v):
        raise ParameterError(f"start {start} is not an endpoint of {make_edge(u, v)}")
    return cycle.as_path(start, v if start == u else u)


def run_walk(
    graph: CubicGraph,
    cycle: HamCycle,
    edge: Edge,
    start: Optional[int] = None,
    *,
    log_level: LogLevel = "counts",
    budget: int = DEFAULT_STEP_BUDGET,
    checkpoint_every: int = DEFAULT_CHECKPOINT,
    is_rightmost: Optional[Callable[[int], bool]] = None,
    label: str = "walk",
) -> WalkTrace:
    """Lollipop from (cycle, edge) until the path closes into a Hamiltonian cycle again.

    is_rightmost receives the end vertex of every visited path.
    """
    if log_level not in LOG_LEVELS:
        raise ParameterError(f"unknown log level {log_level!r}")
    path = list(initial_path(cycle, edge, start).order)
    n = len(path)
    position = [0] * n
    for i, v in enumerate(path):
        position[v] = i
    adjacency = graph.adjacency

    trace = WalkTrace(start_cycle=list(cycle.order), distinguished_edge=make_edge(*edge))
    if log_level == "full":
        trace.path_log = [list(path)]
    if log_level in ("full", "rightmost"):
        trace.rightmost_paths = []

    log_walk_start(label, n, budget)
    timer = PerformanceTimer()
    timer.start()
    steps = 0
    last_rightmost: Optional[int] = None
    previous_pivot = -1
    while True:
        end = path[-1]
        pivot = -1
        for w in adjacency[end]:
            i = position[w]
            if 1 <= i <= n - 3 and w != previous_pivot:
                pivot = w
                break
        if pivot < 0:
            raise GraphError(f"path ending at {end} has no forward lollipop")
        i = position[pivot]
        new_end = path[i + 1]
        path[i + 1 :] = path[:i:-1]
        for j in range(i + 1, n):
            position[path[j]] = j
        # pivoting at the same vertex again would undo this step
        previous_pivot = pivot
        steps += 1

        if trace.path_log is not None:
            trace.path_log.append(list(path))
        if is_rightmost is not None and is_rightmost(new_end):
            trace.rightmost_indices.append(steps)
            if last_rightmost is not None:
                trace.gap_sizes.append(steps - last_rightmost)
            last_rightmost = steps
            if trace.rightmost_paths is not None:
                trace.rightmost_paths.append(list(path))

        if path[0] in adjacency[new_end]:
            break
        if steps % checkpoint_every == 0:
            log_walk_checkpoint(label, steps, trace.rightmost_count)
        if steps >= budget:
            trace.steps = steps
            logger.error(f"[{label}] Step budget {budget:,} exhausted")
            raise BudgetExceededError(f"step budget {budget:,} exceeded", partial=trace)

    trace.steps = steps
    trace.end_cycle = list(HamCycle.from_sequence(path).order)
    trace.completed = True
    duration = timer.stop()
    log_walk_completion(label, steps, trace.rightmost_count, duration, trace.max_gap, timer.rate(steps))
    return trace


def run_thomason(
    instance: "FamilyInstance",
    log_level: LogLevel = "counts",
    *,
    budget: int = DEFAULT_STEP_BUDGET,
    checkpoint_every: int = DEFAULT_CHECKPOINT,
    from_final: bool = False,
) -> WalkTrace:
    """Walk from C_0 (or C_1) starting at Λ along the green edge, recording rightmost paths."""
    pac = set(instance.pac)
    cycle = instance.c1 if from_final else instance.c0
    return run_walk(
        instance.graph,
        cycle,
        instance.green_edge,
        instance.lambda_vertex,
        log_level=log_level,
        budget=budget,
        checkpoint_every=checkpoint_every,
        is_rightmost=pac.__contains__,
        label=f"G_{instance.n}",
    )


def detect_rightmost(instance: "FamilyInstance", p: OrientedHamPath) -> bool:
    if p.start != instance.lambda_vertex:
        raise ParameterError(f"path starts at {p.start}, not at Λ={instance.lambda_vertex}")
    return p.end in instance.pac
