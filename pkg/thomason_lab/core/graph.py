"""Cubic graphs, Hamiltonian paths and cycles, and their structural checks."""

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

import networkx as nx
from loguru import logger
from pydantic import BaseModel, Field

from .errors import GraphError

Edge = tuple[int, int]


def make_edge(u: int, v: int) -> Edge:
    """Return the normalized (low, high) form of an undirected edge."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class CubicGraph:
    """Immutable 3-regular graph with an optional rotation system."""

    adjacency: tuple[tuple[int, ...], ...]
    rotation: Optional[tuple[tuple[int, ...], ...]] = None

    @classmethod
    def from_edges(
        cls,
        n_vertices: int,
        edges: Iterable[Sequence[int]],
        rotation: Optional[Sequence[Sequence[int]]] = None,
    ) -> "CubicGraph":
        adjacency: list[list[int]] = [[] for _ in range(n_vertices)]
        for u, v in edges:
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise GraphError(f"edge ({u}, {v}) outside vertex range 0..{n_vertices - 1}")
            adjacency[u].append(v)
            adjacency[v].append(u)
        frozen_rotation = None
        if rotation is not None:
            frozen_rotation = tuple(tuple(r) for r in rotation)
        return cls(tuple(tuple(sorted(nbrs)) for nbrs in adjacency), frozen_rotation)

    @property
    def n_vertices(self) -> int:
        return len(self.adjacency)

    @property
    def edges(self) -> list[Edge]:
        return sorted({make_edge(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs})

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def with_rotation(self, rotation: Sequence[Sequence[int]]) -> "CubicGraph":
        return CubicGraph(self.adjacency, tuple(tuple(r) for r in rotation))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n_vertices))
        g.add_edges_from(self.edges)
        return g


def canonical_cycle(order: Sequence[int]) -> tuple[int, ...]:
    """Rotate a cyclic sequence to start at its lowest id, lower neighbour second."""
    seq = list(order)
    k = seq.index(min(seq))
    seq = seq[k:] + seq[:k]
    if len(seq) > 2 and seq[-1] < seq[1]:
        seq = [seq[0]] + seq[:0:-1]
    return tuple(seq)


@dataclass(frozen=True)
class HamCycle:
    """Hamiltonian cycle stored in canonical form."""

    order: tuple[int, ...]

    @classmethod
    def from_sequence(cls, order: Sequence[int]) -> "HamCycle":
        return cls(canonical_cycle(order))

    @property
    def edges(self) -> frozenset[Edge]:
        n = len(self.order)
        return frozenset(make_edge(self.order[i], self.order[(i + 1) % n]) for i in range(n))

    def contains(self, edge: Sequence[int]) -> bool:
        return make_edge(*edge) in self.edges

    def is_valid(self, graph: CubicGraph) -> bool:
        return (
            len(self.order) == graph.n_vertices
            and sorted(self.order) == list(range(graph.n_vertices))
            and all(graph.has_edge(u, v) for u, v in self.edges)
        )

    def as_path(self, start: int, second: int) -> "OrientedHamPath":
        """Open the cycle at ``start`` so that the path's first edge is ``start``-``second``."""
        n = len(self.order)
        k = self.order.index(start)
        seq = [self.order[(k + i) % n] for i in range(n)]
        if seq[1] != second:
            seq = [seq[0]] + seq[:0:-1]
        if seq[1] != second:
            raise GraphError(f"edge ({start}, {second}) is not on the cycle")
        return OrientedHamPath(tuple(seq))


@dataclass(frozen=True)
class OrientedHamPath:
    """Vertex sequence visiting every vertex once."""

    order: tuple[int, ...]

    @property
    def start(self) -> int:
        return self.order[0]

    @property
    def end(self) -> int:
        return self.order[-1]

    @property
    def edges(self) -> list[Edge]:
        return [make_edge(u, v) for u, v in zip(self.order, self.order[1:])]

    def is_valid(self, graph: CubicGraph) -> bool:
        return (
            len(self.order) == graph.n_vertices
            and sorted(self.order) == list(range(graph.n_vertices))
            and all(graph.has_edge(u, v) for u, v in zip(self.order, self.order[1:]))
        )

    def is_cycle(self, graph: CubicGraph) -> bool:
        return graph.has_edge(self.start, self.end)

    def to_cycle(self, graph: CubicGraph) -> HamCycle:
        if not self.is_cycle(graph):
            raise GraphError("path endpoints are not adjacent")
        return HamCycle.from_sequence(self.order)


class CubicReport(BaseModel):
    """Outcome of validate_cubic."""

    ok: bool
    n_vertices: int
    n_edges: int
    violations: list[str] = Field(default_factory=list)


class PlanarityResult(BaseModel):
    planar: bool
    faces: int
    euler_faces: int


def validate_cubic(graph: CubicGraph) -> CubicReport:
    """Check every CubicGraph invariant and list each violation."""
    violations: list[str] = []
    n = graph.n_vertices
    for v, nbrs in enumerate(graph.adjacency):
        if len(nbrs) != 3:
            violations.append(f"vertex {v} has degree {len(nbrs)}")
        if v in nbrs:
            violations.append(f"vertex {v} has a loop")
        if len(set(nbrs)) != len(nbrs):
            violations.append(f"vertex {v} has a repeated neighbor")
        for u in set(nbrs):
            if nbrs.count(u) != graph.adjacency[u].count(v):
                violations.append(f"adjacency of {v} and {u} is not symmetric")
    n_edges = sum(len(nbrs) for nbrs in graph.adjacency) // 2
    if 2 * n_edges != 3 * n:
        violations.append(f"edge count {n_edges} differs from 3*{n}/2")
    if n % 2:
        violations.append(f"vertex count {n} is odd")
    if graph.rotation is not None and not violations:
        for v, rot in enumerate(graph.rotation):
            if sorted(rot) != sorted(graph.adjacency[v]):
                violations.append(f"rotation at vertex {v} is not a permutation of its neighbors")
        if not violations and not check_planarity(graph).planar:
            violations.append("rotation system fails the Euler check")
    report = CubicReport(ok=not violations, n_vertices=n, n_edges=n_edges, violations=violations)
    if violations:
        logger.debug(f"validate_cubic found {len(violations)} violations")
    return report


def trace_faces(graph: CubicGraph) -> list[list[int]]:
    """Trace the faces of the embedding given by the rotation system."""
    if graph.rotation is None:
        raise GraphError("no embedding witness")
    embedding = nx.PlanarEmbedding()
    # rotation lists are read as clockwise neighbour orders
    embedding.set_data({v: list(rot) for v, rot in enumerate(graph.rotation)})
    visited: set[tuple[int, int]] = set()
    faces: list[list[int]] = []
    for u in range(graph.n_vertices):
        for v in graph.rotation[u]:
            if (u, v) not in visited:
                faces.append(embedding.traverse_face(u, v, mark_half_edges=visited))
    return faces


def check_planarity(graph: CubicGraph) -> PlanarityResult:
    """Euler check V - E + F = 2 on the faces traced from the rotation system."""
    faces = len(trace_faces(graph))
    n_edges = len(graph.edges)
    expected = n_edges - graph.n_vertices + 2
    return PlanarityResult(planar=faces == expected, faces=faces, euler_faces=expected)


def check_three_connected(graph: CubicGraph) -> bool:
    """True iff no vertex cut of size at most 2 exists (exhaustive over pairs)."""
    g = graph.to_networkx()
    if graph.n_vertices < 4 or not nx.is_connected(g):
        return False
    vertices = set(g.nodes)
    return all(nx.is_connected(g.subgraph(vertices - {i, j})) for i, j in combinations(vertices, 2))


def graph_to_json(graph: CubicGraph) -> dict:
    payload: dict = {"n_vertices": graph.n_vertices, "edges": [list(e) for e in graph.edges]}
    if graph.rotation is not None:
        payload["rotation"] = [list(r) for r in graph.rotation]
    return payload


def graph_from_json(payload: dict) -> CubicGraph:
    try:
        return CubicGraph.from_edges(payload["n_vertices"], payload["edges"], payload.get("rotation"))
    except (KeyError, TypeError, ValueError) as e:
        raise GraphError(f"malformed graph JSON: {e}") from e


def graph_to_dot(
    graph: CubicGraph,
    name: str = "G",
    colors: Optional[dict[Edge, str]] = None,
    labels: Optional[dict[int, str]] = None,
) -> str:
    colors = colors or {}
    labels = labels or {}
    lines = [f"graph {name} {{"]
    for v in range(graph.n_vertices):
        label = labels.get(v, str(v))
        lines.append(f'  {v} [label="{label}"];')
    for u, v in graph.edges:
        color = colors.get((u, v))
        attr = f' [color="{color}", penwidth=2]' if color else ""
        lines.append(f"  {u} -- {v}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def k4() -> CubicGraph:
    """K_4 with a planar rotation system."""
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    rotation = [(1, 3, 2), (2, 3, 0), (0, 3, 1), (0, 1, 2)]
    return CubicGraph.from_edges(4, edges, rotation)


def cube_q3() -> CubicGraph:
    """The 3-cube, vertices as 3-bit integers."""
    edges = [(v, v ^ (1 << b)) for v in range(8) for b in range(3) if v < v ^ (1 << b)]
    return CubicGraph.from_edges(8, edges)


def k33() -> CubicGraph:
    edges = [(u, v) for u in range(3) for v in range(3, 6)]
    graph = CubicGraph.from_edges(6, edges)
    return graph.with_rotation(graph.adjacency)
