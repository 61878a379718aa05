"""The family G_n: a cap, n two-vertex gadgets and a pac, with its distinguished data.

Three rails run from the cap to the pac. Gadget i puts vertex a_i on the rail
playing role alpha, b_i on the rail playing role beta and joins them by a rung;
the rail playing role zeta bypasses it. A wiring is the permutation telling
which role each rail plays in gadget i+1 given its role in gadget i.
"""

from dataclasses import dataclass
from itertools import permutations
from typing import Optional, Sequence

from loguru import logger
from pydantic import BaseModel

from .errors import GraphError, ParameterError, SelectionError, WiringSearchError
from .graph import CubicGraph, Edge, HamCycle, check_three_connected, make_edge, validate_cubic
from .oracle import DEFAULT_MAX_VERTICES, CycleSet, enumerate_ham_cycles
from .patterns import ALPHA, BETA, ZETA, PatternLabels, match_j_automaton

RAILS = 3
WIRING_KINDS = {1: "parallel", 2: "zigzag", 3: "spiral"}


class GadgetWiring(BaseModel):
    """Role permutation between consecutive gadgets: role of a rail in gadget i -> role in gadget i+1."""

    model_config = {"frozen": True}

    shift: tuple[int, int, int]
    name: str = ""

    @classmethod
    def from_shift(cls, shift: Sequence[int]) -> "GadgetWiring":
        shift = tuple(shift)
        orbit, role = 1, shift[ZETA]
        while role != ZETA:
            role = shift[role]
            orbit += 1
        return cls(shift=shift, name=WIRING_KINDS[orbit])

    def frames(self, n: int) -> list[tuple[int, int, int]]:
        """Rails playing (alpha, beta, zeta) in gadgets 0..n; frame n is the pac boundary."""
        frames = [(0, 1, 2)]
        for _ in range(n):
            previous = frames[-1]
            nxt = [0, 0, 0]
            for role in range(RAILS):
                nxt[self.shift[role]] = previous[role]
            frames.append((nxt[0], nxt[1], nxt[2]))
        return frames


def _variants(shift: tuple[int, ...]) -> list[tuple[int, ...]]:
    swap = (BETA, ALPHA, ZETA)
    inverse = tuple(shift.index(r) for r in range(RAILS))
    out = []
    for s in (shift, inverse):
        out.append(s)
        out.append(tuple(swap[s[swap[r]]] for r in range(RAILS)))
    return out


def enumerate_wirings() -> list[GadgetWiring]:
    """One representative per symmetry class of wirings whose bypass crosses exactly two cuts.

    The bypass of gadget i must enter gadget i+1 as a rung rail, so zeta may not map to zeta.
    Mirror images (alpha/beta swap) and left-right reversal (inverse shift) are identified; the
    lexicographically largest member represents its class.
    """
    classes: dict[tuple[int, ...], tuple[int, ...]] = {}
    for shift in permutations(range(RAILS)):
        if shift[ZETA] == ZETA:
            continue
        key = min(_variants(shift))
        classes[key] = max(classes.get(key, shift), shift)
    return sorted((GadgetWiring.from_shift(s) for s in classes.values()), key=lambda w: w.shift)


def _component(v: int, n: int, n_vertices: int) -> int:
    if v < 3:
        return -1
    if v >= n_vertices - 3:
        return n
    return (v - 3) // 2


class _Layout:
    n: int
    graph: CubicGraph

    @property
    def cap(self) -> tuple[int, int, int]:
        return (0, 1, 2)

    @property
    def pac(self) -> tuple[int, int, int]:
        v = self.graph.n_vertices
        return (v - 3, v - 2, v - 1)

    def component(self, v: int) -> int:
        """-1 for the cap, i for gadget i, n for the pac."""
        return _component(v, self.n, self.graph.n_vertices)


@dataclass(frozen=True)
class FamilySkeleton(_Layout):
    """Graph and rail layout of G_n for one wiring, before any distinguished data."""

    n: int
    wiring: GadgetWiring
    graph: CubicGraph
    frames: tuple[tuple[int, int, int], ...]
    rails: tuple[tuple[int, ...], ...]
    gadget_vertices: tuple[tuple[int, int], ...]
    cut_edges: tuple[tuple[Edge, Edge, Edge], ...]


def build_skeleton(n: int, wiring: GadgetWiring) -> FamilySkeleton:
    if n < 1:
        raise ParameterError(f"gadget count must be at least 1, got {n}")
    frames = wiring.frames(n)
    n_vertices = 2 * n + 6
    pac = [n_vertices - 3 + r for r in range(RAILS)]
    rails: list[list[int]] = [[r] for r in range(RAILS)]
    partner: dict[int, int] = {}
    gadget_vertices = []
    for i in range(n):
        r_alpha, r_beta, _ = frames[i]
        a, b = 3 + 2 * i, 4 + 2 * i
        rails[r_alpha].append(a)
        rails[r_beta].append(b)
        partner[a], partner[b] = b, a
        gadget_vertices.append((a, b))
    for r in range(RAILS):
        rails[r].append(pac[r])

    rail_of = {v: r for r in range(RAILS) for v in rails[r]}
    edges = [make_edge(r, (r + 1) % RAILS) for r in range(RAILS)]
    edges += [make_edge(pac[r], pac[(r + 1) % RAILS]) for r in range(RAILS)]
    edges += [make_edge(a, b) for a, b in gadget_vertices]
    for rail in rails:
        edges += [make_edge(u, w) for u, w in zip(rail, rail[1:])]

    # Cylinder embedding: rails run outward from the cap, the rung between
    # rails r and r+1 lies in the sector counter-clockwise of rail r.
    rotation: list[tuple[int, ...]] = [() for _ in range(n_vertices)]
    for r, rail in enumerate(rails):
        for k, v in enumerate(rail):
            if k == 0:
                rotation[v] = (rail[1], (r + 1) % RAILS, (r - 1) % RAILS)
            elif k == len(rail) - 1:
                rotation[v] = (pac[(r + 1) % RAILS], rail[k - 1], pac[(r - 1) % RAILS])
            elif rail_of[partner[v]] == (r + 1) % RAILS:
                rotation[v] = (rail[k + 1], partner[v], rail[k - 1])
            else:
                rotation[v] = (rail[k + 1], rail[k - 1], partner[v])
    graph = CubicGraph.from_edges(n_vertices, edges, rotation)

    cut_edges = []
    for k in range(n + 1):
        crossing = []
        for rail in rails:
            crossing.append(
                next(make_edge(u, w) for u, w in zip(rail, rail[1:]) if _component(u, n, n_vertices) < k <= _component(w, n, n_vertices))
            )
        cut_edges.append((crossing[0], crossing[1], crossing[2]))

    return FamilySkeleton(
        n=n,
        wiring=wiring,
        graph=graph,
        frames=tuple(frames),
        rails=tuple(tuple(r) for r in rails),
        gadget_vertices=tuple(gadget_vertices),
        cut_edges=tuple(cut_edges),
    )


def construct_ham_cycles(skeleton: FamilySkeleton) -> CycleSet:
    """Hamiltonian cycles by transfer along the cuts: each cut leaves exactly one rail unused."""
    cycles = []
    for unused_at_cap in range(RAILS):
        unused = [unused_at_cap]
        rungs = []
        for i, (r_alpha, r_beta, r_zeta) in enumerate(skeleton.frames[:-1]):
            u = unused[-1]
            if u == r_zeta:
                unused.append(u)
            else:
                rungs.append(make_edge(*skeleton.gadget_vertices[i]))
                unused.append(r_beta if u == r_alpha else r_alpha)
        edges = set(rungs)
        for r, rail in enumerate(skeleton.rails):
            for u, w in zip(rail, rail[1:]):
                crossed = range(skeleton.component(u) + 1, skeleton.component(w) + 1)
                if all(unused[k] != r for k in crossed):
                    edges.add(make_edge(u, w))
        x, y = unused[0], skeleton.pac[unused[-1]]
        edges |= {make_edge(x, (x + 1) % RAILS), make_edge(x, (x + 2) % RAILS)}
        pac = skeleton.pac
        edges |= {make_edge(y, p) for p in pac if p != y}
        cycle = _cycle_from_edges(skeleton.graph.n_vertices, edges)
        if cycle is not None:
            cycles.append(cycle)
    return CycleSet(tuple(sorted(cycles, key=lambda c: c.order)))


def _cycle_from_edges(n_vertices: int, edges: set[Edge]) -> Optional[HamCycle]:
    adjacency: dict[int, list[int]] = {}
    for u, v in edges:
        adjacency.setdefault(u, []).append(v)
        adjacency.setdefault(v, []).append(u)
    if len(adjacency) != n_vertices or any(len(nbrs) != 2 for nbrs in adjacency.values()):
        return None
    order = [0]
    previous, current = -1, 0
    while True:
        nxt = adjacency[current][0] if adjacency[current][0] != previous else adjacency[current][1]
        if nxt == 0:
            break
        order.append(nxt)
        previous, current = current, nxt
    return HamCycle.from_sequence(order) if len(order) == n_vertices else None


@dataclass(frozen=True)
class FamilyInstance(_Layout):
    """G_n with Λ, the green and red edges, C_0, C_1 and the gadget layout.

    Both distinguished edges are cap edges at Λ. Red stays inside the cap
    triangle and green is Λ's rail edge into gadget 0. Λ is the cap end of
    the rail the automaton anchor assigns to P's rung role.
    """

    n: int
    wiring: GadgetWiring
    graph: CubicGraph
    labels: PatternLabels
    lambda_vertex: int
    green_edge: Edge
    red_edge: Edge
    c0: HamCycle
    c1: HamCycle
    gadget_vertices: tuple[tuple[int, int], ...]
    frames: tuple[tuple[int, int, int], ...]
    cut_edges: tuple[tuple[Edge, Edge, Edge], ...]
    rails: tuple[tuple[int, ...], ...]

    def unused_role(self, cycle: HamCycle, k: int) -> int:
        """Role, in the frame of cut k, of the one rail the cycle does not use across that cut."""
        missing = [r for r in range(RAILS) if not cycle.contains(self.cut_edges[k][r])]
        if len(missing) != 1:
            raise GraphError(f"cycle crosses cut {k} on {RAILS - len(missing)} rails")
        return self.frames[k].index(missing[0])


def select_distinguished_cycles(
    graph: CubicGraph,
    lambda_vertex: int,
    green: Edge,
    red: Edge,
    cycles: Optional[CycleSet] = None,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> tuple[HamCycle, HamCycle]:
    """The two cycles through green; C_0 is the one that also uses red."""
    if lambda_vertex not in green or lambda_vertex not in red:
        raise SelectionError("distinguished edge selection failed: edges do not meet at Λ")
    if cycles is None:
        cycles = enumerate_ham_cycles(graph, max_vertices)
    if len(cycles) != 3:
        raise SelectionError(f"expected 3 Hamiltonian cycles, found {len(cycles)}")
    through_green = cycles.containing(green)
    if len(through_green) != 2:
        raise SelectionError(f"distinguished edge selection failed: green lies on {len(through_green)} cycles")
    with_red = [c for c in through_green if c.contains(red)]
    if len(with_red) != 1:
        raise SelectionError(f"distinguished edge selection failed: red lies on {len(with_red)} of them")
    c0 = with_red[0]
    c1 = through_green[0] if through_green[1] == c0 else through_green[1]
    return c0, c1


def build(n: int, wiring: GadgetWiring, max_vertices: int = DEFAULT_MAX_VERTICES) -> FamilyInstance:
    """Assemble G_n; cycles come from the oracle when small enough, from the cut transfer otherwise."""
    labels = match_j_automaton(wiring.shift)
    if labels is None:
        raise WiringSearchError(f"wiring {wiring.shift} does not realize the rightmost-path automaton")
    skeleton = build_skeleton(n, wiring)

    lambda_rail = skeleton.frames[0][labels.states["aa"][1]]
    lambda_vertex = lambda_rail
    green = make_edge(lambda_vertex, skeleton.rails[lambda_rail][1])
    red = make_edge(lambda_vertex, skeleton.frames[0][labels.s_role])

    if skeleton.graph.n_vertices <= max_vertices:
        cycles = enumerate_ham_cycles(skeleton.graph, max_vertices)
    else:
        cycles = construct_ham_cycles(skeleton)
    c0, c1 = select_distinguished_cycles(skeleton.graph, lambda_vertex, green, red, cycles)
    logger.debug(f"Built G_{n}: {skeleton.graph.n_vertices} vertices, Λ={lambda_vertex}, green={green}, red={red}")
    return FamilyInstance(
        n=n,
        wiring=wiring,
        graph=skeleton.graph,
        labels=labels,
        lambda_vertex=lambda_vertex,
        green_edge=green,
        red_edge=red,
        c0=c0,
        c1=c1,
        gadget_vertices=skeleton.gadget_vertices,
        frames=skeleton.frames,
        cut_edges=skeleton.cut_edges,
        rails=skeleton.rails,
    )


def wiring_failure(wiring: GadgetWiring, max_n_check: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> Optional[str]:
    """First family invariant the wiring breaks for n = 1..max_n_check, or None."""
    for n in range(1, max_n_check + 1):
        graph = build_skeleton(n, wiring).graph
        report = validate_cubic(graph)
        if not report.ok:
            return f"G_{n}: {report.violations[0]}"
        if not check_three_connected(graph):
            return f"G_{n}: not 3-connected"
        count = len(enumerate_ham_cycles(graph, max_vertices))
        if count != 3:
            return f"G_{n}: {count} Hamiltonian cycles"
    return None


class WiringSearchResult(BaseModel):
    candidates: list[GadgetWiring]
    canonical: int

    @property
    def canonical_wiring(self) -> GadgetWiring:
        return self.candidates[self.canonical]


def search_gadget_wirings(max_n_check: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> WiringSearchResult:
    """Wirings whose every G_n (n <= max_n_check) is cubic, planar, 3-connected with 3 Hamiltonian cycles.

    The canonical survivor is the one whose cut states realize the rightmost-path automaton.
    """
    if max_n_check < 3:
        raise ParameterError(f"max_n_check must be at least 3, got {max_n_check}")
    survivors = []
    for wiring in enumerate_wirings():
        failure = wiring_failure(wiring, max_n_check, max_vertices)
        if failure is None:
            logger.info(f"Wiring {wiring.name} {wiring.shift} satisfies all family invariants")
            survivors.append(wiring)
        else:
            logger.info(f"Wiring {wiring.name} {wiring.shift} rejected: {failure}")
    if not survivors:
        raise WiringSearchError("no wiring satisfies the family invariants")
    matching = [i for i, w in enumerate(survivors) if match_j_automaton(w.shift) is not None]
    if len(matching) != 1:
        raise WiringSearchError(f"{len(matching)} surviving wirings realize the rightmost-path automaton")
    return WiringSearchResult(candidates=survivors, canonical=matching[0])
