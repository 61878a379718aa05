"""Brute-force ground truth: all Hamiltonian cycles and paths, and the full lollipop graph."""

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import networkx as nx
from loguru import logger

from .errors import BudgetExceededError, GraphError
from .graph import CubicGraph, Edge, HamCycle, OrientedHamPath, make_edge
from .lollipop import lollipop_neighbors

DEFAULT_MAX_VERTICES = 30
DEFAULT_NODE_BUDGET = 10_000_000


@dataclass(frozen=True)
class CycleSet:
    """Duplicate-free Hamiltonian cycles of one graph, in canonical form and sorted."""

    cycles: tuple[HamCycle, ...]

    def __len__(self) -> int:
        return len(self.cycles)

    def __iter__(self) -> Iterator[HamCycle]:
        return iter(self.cycles)

    def containing(self, e: Edge) -> list[HamCycle]:
        return [c for c in self.cycles if c.contains(e)]


def _search(graph: CubicGraph, start: int, closed: bool) -> Iterator[tuple[int, ...]]:
    """Depth-first extension from start, neighbours in id order.

    For closed searches a vertex that can no longer receive two path edges
    prunes the branch.
    """
    n = graph.n_vertices
    adjacency = graph.adjacency
    visited = [False] * n
    free = [len(adjacency[v]) for v in range(n)]
    path = [start]
    visited[start] = True

    def extend(cur: int) -> Iterator[tuple[int, ...]]:
        if len(path) == n:
            if not closed or start in adjacency[cur]:
                yield tuple(path)
            return
        for w in adjacency[cur]:
            if visited[w]:
                continue
            touched = []
            if cur != start or not closed:
                for u in adjacency[cur]:
                    if not visited[u] and u != w:
                        free[u] -= 1
                        touched.append(u)
            if not (closed and any(free[u] < 2 for u in touched)):
                visited[w] = True
                path.append(w)
                yield from extend(w)
                path.pop()
                visited[w] = False
            for u in touched:
                free[u] += 1

    yield from extend(start)


def enumerate_ham_cycles(graph: CubicGraph, max_vertices: int = DEFAULT_MAX_VERTICES) -> CycleSet:
    """Every Hamiltonian cycle, found once by fixing vertex 0 and the lower second neighbour."""
    if graph.n_vertices > max_vertices:
        raise BudgetExceededError(
            f"graph has {graph.n_vertices} vertices, above the oracle bound {max_vertices}"
        )
    if graph.n_vertices < 3:
        return CycleSet(())
    found = set()
    for seq in _search(graph, 0, closed=True):
        if seq[1] < seq[-1]:
            found.add(HamCycle.from_sequence(seq))
    cycles = tuple(sorted(found, key=lambda c: c.order))
    logger.debug(f"Oracle found {len(cycles)} Hamiltonian cycles on {graph.n_vertices} vertices")
    return CycleSet(cycles)


def enumerate_ham_paths(graph: CubicGraph, starts: Optional[Iterable[int]] = None) -> Iterator[OrientedHamPath]:
    """All oriented Hamiltonian paths beginning at the given start vertices (default: all)."""
    for s in range(graph.n_vertices) if starts is None else starts:
        for seq in _search(graph, s, closed=False):
            yield OrientedHamPath(seq)


def count_cycles_containing(cycles: CycleSet, e: Edge) -> int:
    return len(cycles.containing(make_edge(*e)))


@dataclass(frozen=True)
class LollipopGraphView:
    """All oriented Hamiltonian paths of a graph joined by the lollipop relation."""

    nodes: tuple[tuple[int, ...], ...]
    adjacency: tuple[tuple[int, ...], ...]
    components: tuple[tuple[int, ...], ...]

    def degree(self, node: int) -> int:
        return len(self.adjacency[node])

    def degree_one_nodes(self) -> list[int]:
        return [i for i in range(len(self.nodes)) if self.degree(i) == 1]

    def index_of(self, order: Sequence[int]) -> int:
        try:
            return self.nodes.index(tuple(order))
        except ValueError as e:
            raise GraphError(f"path {tuple(order)} is not a node of the lollipop graph") from e

    def is_path_component(self, component: Sequence[int]) -> bool:
        return any(self.degree(i) == 1 for i in component)

    def traverse(self, node: int) -> list[tuple[int, ...]]:
        """Walk a path component from one of its degree-1 ends to the other."""
        if self.degree(node) != 1:
            raise GraphError(f"node {node} is not an end of a path component")
        walk = [node]
        previous = -1
        current = node
        while True:
            forward = [m for m in self.adjacency[current] if m != previous]
            if not forward:
                break
            previous, current = current, forward[0]
            walk.append(current)
        return [self.nodes[i] for i in walk]

    def to_dot(self, name: str = "lollipop") -> str:
        lines = [f"graph {name} {{"]
        for c, component in enumerate(self.components):
            lines.append(f"  subgraph cluster_{c} {{")
            for i in component:
                shape = "doublecircle" if self.degree(i) == 1 else "circle"
                label = " ".join(map(str, self.nodes[i]))
                lines.append(f'    {i} [label="{label}", shape={shape}];')
            lines.append("  }")
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                if i < j:
                    lines.append(f"  {i} -- {j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_lollipop_graph(
    graph: CubicGraph,
    start: Optional[int] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> LollipopGraphView:
    """Materialize the lollipop graph on all paths (or on the paths beginning at start).

    The relation keeps the first vertex fixed, so the restricted view is a union of components of
    the full one.
    """
    starts = None if start is None else [start]
    nodes: list[tuple[int, ...]] = []
    for p in enumerate_ham_paths(graph, starts):
        nodes.append(p.order)
        if len(nodes) > node_budget:
            raise BudgetExceededError(f"lollipop graph exceeds node budget {node_budget:,}")
    index = {order: i for i, order in enumerate(nodes)}

    adjacency: list[tuple[int, ...]] = []
    for order in nodes:
        succ = lollipop_neighbors(graph, OrientedHamPath(order)).successors
        adjacency.append(tuple(sorted(index[q.order] for _, q in succ)))

    for i, nbrs in enumerate(adjacency):
        if not 1 <= len(nbrs) <= 2:
            raise GraphError(f"lollipop node {nodes[i]} has degree {len(nbrs)}")
        if any(i not in adjacency[j] for j in nbrs):
            raise GraphError(f"lollipop relation is not symmetric at {nodes[i]}")
        closes = graph.has_edge(nodes[i][0], nodes[i][-1])
        if closes != (len(nbrs) == 1):
            raise GraphError(f"degree of {nodes[i]} disagrees with its endpoints")

    relation = nx.Graph()
    relation.add_nodes_from(range(len(nodes)))
    relation.add_edges_from((i, j) for i, nbrs in enumerate(adjacency) for j in nbrs if i < j)
    components = tuple(tuple(sorted(c)) for c in sorted(nx.connected_components(relation), key=min))
    logger.debug(f"Lollipop graph: {len(nodes)} nodes in {len(components)} components")
    return LollipopGraphView(tuple(nodes), tuple(adjacency), components)
