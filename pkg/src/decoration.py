import logging
from collections import Counter, defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Self

import networkx as nx

from src.constants import UNDEFINED
from src.dataclasses import MassBoundReport
from src.enums import DecorationStrategy
from src.exceptions import (
    DecompositionError,
    InvalidDecorationError,
    IrregularGraphError,
    NonUniformBallError,
)
from src.group import GroupCtx
from src.instances import GraphInstance, SchreierInstance
from src.types import Arc, Edge


def _neighbor_multisets(graph: GraphInstance) -> list[Counter[int]]:
    neighbors: list[Counter[int]] = [Counter() for _ in range(graph.vertices)]
    for u, v in graph.edges:
        neighbors[u][v] += 1
        neighbors[v][u] += 1
    return neighbors


def certified_set(
    graph: GraphInstance,
    gen_maps: Sequence[Sequence[int]],
) -> frozenset[int]:
    """Get vertices where decoration is perfect.

    Vertex x is certified iff every p_i(x) and p_i^-1(x) is defined and
    their multiset equals multiset of neighbors of x.
    :param GraphInstance graph: decorated graph.
    :param Sequence[Sequence[int]] gen_maps: partial injections.
    :returns: frozenset of certified vertices.
    """
    neighbors = _neighbor_multisets(graph)
    decorated: list[Counter[int]] = [Counter() for _ in range(graph.vertices)]
    missing = [False] * graph.vertices
    for mapping in gen_maps:
        images = set()
        for source, target in enumerate(mapping):
            if target == UNDEFINED:
                missing[source] = True
                continue
            decorated[source][target] += 1
            decorated[target][source] += 1
            images.add(target)
        for vertex in set(range(graph.vertices)) - images:
            missing[vertex] = True
    return frozenset(
        vertex
        for vertex in range(graph.vertices)
        if not missing[vertex] and decorated[vertex] == neighbors[vertex]
    )


@dataclass(frozen=True)
class Decoration:
    """Graph with n partial injections along its edges.

    Every pair x -> p_i(x) uses its own edge of graph, certified vertices
    are vertices where decoration looks like free group action.
    """

    graph: GraphInstance
    gen_maps: tuple[tuple[int, ...], ...]
    certified: frozenset[int]

    @classmethod
    def build(
        cls: type[Self],
        graph: GraphInstance,
        gen_maps: Iterable[Sequence[int]],
    ) -> Self:
        """Create decoration and compute its certified set.

        :param GraphInstance graph: decorated graph.
        :param Iterable[Sequence[int]] gen_maps: partial injections.
        :returns: Decoration.
        """
        maps = tuple(tuple(mapping) for mapping in gen_maps)
        return cls(graph, maps, certified_set(graph, maps))

    @property
    def generators(self: Self) -> int:
        """Get count of partial injections.

        :returns: n.
        """
        return len(self.gen_maps)

    @property
    def certified_fraction(self: Self) -> Fraction:
        """Get share of certified vertices.

        :returns: |C| / |V|.
        """
        return Fraction(len(self.certified), self.graph.vertices)

    def as_instance(self: Self) -> SchreierInstance:
        """Get free group instance with the same partial injections.

        :returns: SchreierInstance of free group.
        """
        return SchreierInstance(
            ctx=GroupCtx.free(self.generators),
            vertices=self.graph.vertices,
            gen_maps=self.gen_maps,
            provenance='decoration',
        )


def validate_decoration(decoration: Decoration) -> None:
    """Check every invariant of decoration from scratch.

    :param Decoration decoration: decoration to check.
    :returns: None, but raises InvalidDecorationError on first problem.
    """
    graph = decoration.graph
    available = Counter(graph.edges)
    used: Counter[Edge] = Counter()
    for index, mapping in enumerate(decoration.gen_maps, start=1):
        if len(mapping) != graph.vertices:
            msg = f'Map {index} must have {graph.vertices} entries'
            raise InvalidDecorationError(msg)
        targets = [target for target in mapping if target != UNDEFINED]
        if len(set(targets)) != len(targets):
            msg = f'Map {index} is not injective'
            raise InvalidDecorationError(msg)
        for source, target in enumerate(mapping):
            if target != UNDEFINED:
                used[Edge(min(source, target), max(source, target))] += 1
    overused = sorted(
        edge for edge, count in used.items() if count > available[edge]
    )
    if overused:
        msg = f'Decoration uses missing or busy edge {overused[0]!r}'
        raise InvalidDecorationError(msg)
    expected = certified_set(graph, decoration.gen_maps)
    if expected != decoration.certified:
        wrong = sorted(expected ^ decoration.certified)
        msg = f'Certified set is wrong at vertex {wrong[0]}'
        raise InvalidDecorationError(msg)


def _eulerian_arcs(
    graph: GraphInstance,
    extra: Iterable[Edge] = (),
) -> list[Arc]:
    """Orient edges of even graph along Eulerian circuits of components.

    Every vertex gets out-degree equal to in-degree.
    """
    edges = [*graph.edges, *extra]
    multigraph = nx.MultiGraph()
    for key, (u, v) in enumerate(edges):
        multigraph.add_edge(u, v, key=key)
    arcs: list[Arc | None] = [None] * len(edges)
    for component in sorted(nx.connected_components(multigraph), key=min):
        subgraph = multigraph.subgraph(component)
        circuit = nx.eulerian_circuit(
            subgraph,
            source=min(component),
            keys=True,
        )
        for tail, head, key in circuit:
            arcs[key] = Arc(tail, head)
    if any(arc is None for arc in arcs):
        msg = 'Eulerian circuits did not cover every edge'
        raise DecompositionError(msg)
    return [arc for arc in arcs if arc is not None]


def _pad_to_regular(
    vertices: int,
    arcs: Sequence[Arc],
    degree: int,
) -> list[Arc]:
    out_degrees = Counter(arc.tail for arc in arcs)
    in_degrees = Counter(arc.head for arc in arcs)
    tails = [
        vertex
        for vertex in range(vertices)
        for _ in range(degree - out_degrees[vertex])
    ]
    heads = [
        vertex
        for vertex in range(vertices)
        for _ in range(degree - in_degrees[vertex])
    ]
    if len(tails) != len(heads):
        msg = f'Arcs can not be padded to {degree}-regular bipartite graph'
        raise DecompositionError(msg)
    return [Arc(tail, head) for tail, head in zip(tails, heads, strict=True)]


def split_into_injections(
    vertices: int,
    arcs: Sequence[Arc],
    count: int,
) -> tuple[tuple[int, ...], ...]:
    """Split arcs into count partial injections by perfect matchings.

    Arcs form bipartite multigraph between out-copies and in-copies of
    vertices. It is padded by dummy arcs to count-regular one and by Konig
    theorem splits into count perfect matchings. Every matching minus dummy
    arcs is one partial injection.
    :param int vertices: count of vertices.
    :param Sequence[Arc] arcs: arcs with out-degrees and in-degrees <= count.
    :param int count: count of injections.
    :returns: tuple of partial injections.
    """
    real = len(arcs)
    pool: defaultdict[Arc, list[int]] = defaultdict(list)
    padding = _pad_to_regular(vertices, arcs, count)
    for index, arc in enumerate([*arcs, *padding]):
        pool[arc].append(index)
    gen_maps = []
    for _ in range(count):
        bipartite = nx.Graph()
        bipartite.add_nodes_from(range(2 * vertices))
        bipartite.add_edges_from(
            (tail, vertices + head)
            for (tail, head), ids in pool.items()
            if ids
        )
        matching = nx.bipartite.hopcroft_karp_matching(
            bipartite,
            top_nodes=range(vertices),
        )
        mapping = [UNDEFINED] * vertices
        for tail in range(vertices):
            if tail not in matching:
                msg = 'Bipartite graph of arcs has no perfect matching'
                raise DecompositionError(msg)
            head = matching[tail] - vertices
            index = pool[Arc(tail, head)].pop()
            if index < real:
                mapping[tail] = head
        gen_maps.append(tuple(mapping))
    return tuple(gen_maps)


def full_decoration(graph: GraphInstance) -> Decoration:
    """Decorate 2n-regular graph perfectly by n permutations.

    Edges are oriented along Eulerian circuits, so every vertex has n
    outgoing and n incoming arcs, then arcs split into n perfect matchings.
    :param GraphInstance graph: 2n-regular graph, n >= 1.
    :returns: Decoration with every vertex certified.
    """
    degrees = set(graph.degrees())
    if len(degrees) != 1 or (degree := degrees.pop()) % 2 or degree == 0:
        msg = 'Full decoration needs regular graph of positive even degree'
        raise IrregularGraphError(msg)
    generators = degree // 2
    arcs = _eulerian_arcs(graph)
    decoration = Decoration.build(
        graph,
        split_into_injections(graph.vertices, arcs, generators),
    )
    if len(decoration.certified) != graph.vertices:
        msg = 'Full decoration left uncertified vertices'
        raise DecompositionError(msg)
    logging.info(
        'Graph with %d vertices decorated by %d permutations',
        graph.vertices,
        generators,
    )
    return decoration


def _greedy_maps(graph: GraphInstance, generators: int) -> list[list[int]]:
    used = [False] * len(graph.edges)
    gen_maps = []
    for _ in range(generators):
        mapping = [UNDEFINED] * graph.vertices
        has_preimage = [False] * graph.vertices
        for index, (u, v) in enumerate(graph.edges):
            if used[index]:
                continue
            for tail, head in ((u, v), (v, u)):
                if mapping[tail] == UNDEFINED and not has_preimage[head]:
                    mapping[tail] = head
                    has_preimage[head] = True
                    used[index] = True
                    break
        gen_maps.append(mapping)
    return gen_maps


def _eulerian_maps(
    graph: GraphInstance,
    generators: int,
) -> tuple[tuple[int, ...], ...]:
    auxiliary = graph.vertices
    odd = [
        vertex
        for vertex, degree in enumerate(graph.degrees())
        if degree % 2
    ]
    arcs = [
        arc
        for arc in _eulerian_arcs(
            graph,
            extra=[Edge(vertex, auxiliary) for vertex in odd],
        )
        if auxiliary not in arc
    ]
    return split_into_injections(graph.vertices, arcs, generators)


def partial_decoration(
    graph: GraphInstance,
    generators: int,
    strategy: DecorationStrategy = DecorationStrategy.GREEDY,
) -> Decoration:
    """Decorate graph of max degree <= 2n by n partial injections.

    Greedy strategy takes maximal matchings of remaining edges one by one.
    Eulerian strategy joins odd vertices to auxiliary vertex, orients edges
    along Eulerian circuits and splits arcs by perfect matchings, so it
    certifies every vertex of degree 2n. Regular graph of degree 2n is
    decorated fully.
    :param GraphInstance graph: graph.
    :param int generators: n.
    :param DecorationStrategy strategy: strategy.
    :returns: Decoration.
    """
    if generators < 1:
        msg = f'Count of generators must be positive, got {generators}'
        raise ValueError(msg)
    degrees = graph.degrees()
    if max(degrees, default=0) > 2 * generators:
        msg = f'Graph has vertex of degree above {2 * generators}'
        raise IrregularGraphError(msg)
    if set(degrees) == {2 * generators}:
        return full_decoration(graph)
    match strategy:
        case DecorationStrategy.GREEDY:
            gen_maps: Sequence[Sequence[int]] = _greedy_maps(graph, generators)
        case DecorationStrategy.EULERIAN:
            gen_maps = _eulerian_maps(graph, generators)
    decoration = Decoration.build(graph, gen_maps)
    logging.info(
        'Partial decoration (%s) certified %d of %d vertices',
        strategy,
        len(decoration.certified),
        graph.vertices,
    )
    return decoration


def certified_ball_set(decoration: Decoration, radius: int) -> frozenset[int]:
    """Get vertices whose whole ball of radius is certified.

    :param Decoration decoration: decoration.
    :param int radius: k >= 0.
    :returns: frozenset C_k.
    """
    uncertified = set(range(decoration.graph.vertices)) - decoration.certified
    if not uncertified:
        return decoration.certified
    near = nx.multi_source_dijkstra_path_length(
        decoration.graph.to_simple_networkx(),
        uncertified,
        cutoff=radius,
    )
    return frozenset(range(decoration.graph.vertices)) - set(near)


@dataclass(frozen=True)
class WeightedMeasure:
    """Probability measure on vertices with exact rational weights."""

    weights: tuple[Fraction, ...]

    def __post_init__(self: Self) -> None:
        """Check that weights are non-negative and sum to 1.

        :returns: None
        """
        if any(weight < 0 for weight in self.weights):
            msg = 'Weights of measure must be non-negative'
            raise ValueError(msg)
        if sum(self.weights) != 1:
            msg = f'Weights of measure must sum to 1, got {sum(self.weights)}'
            raise ValueError(msg)

    @classmethod
    def uniform(cls: type[Self], vertices: int) -> Self:
        """Create uniform measure.

        :param int vertices: count of vertices.
        :returns: WeightedMeasure.
        """
        return cls((Fraction(1, vertices),) * vertices)

    def mass(self: Self, vertices: Iterable[int]) -> Fraction:
        """Get measure of set.

        :param Iterable[int] vertices: vertices of set.
        :returns: exact mass.
        """
        weights = (self.weights[vertex] for vertex in set(vertices))
        return sum(weights, Fraction(0))

    def __len__(self: Self) -> int:
        """Get count of vertices.

        :returns: count of vertices.
        """
        return len(self.weights)


def _balls(graph: GraphInstance, radius: int) -> list[set[int]]:
    simple = graph.to_simple_networkx()
    return [
        set(
            nx.single_source_shortest_path_length(
                simple,
                vertex,
                cutoff=radius,
            ),
        )
        for vertex in range(graph.vertices)
    ]


def mu_k(
    measure: WeightedMeasure,
    graph: GraphInstance,
    radius: int,
) -> WeightedMeasure:
    """Spread measure over balls: mu_k(v) = sum of mu(x)/|D| over N^k(v).

    :param WeightedMeasure measure: measure mu.
    :param GraphInstance graph: graph with balls of equal size.
    :param int radius: k.
    :returns: WeightedMeasure mu_k.
    """
    balls = _balls(graph, radius)
    sizes = {len(ball) for ball in balls}
    if len(sizes) != 1:
        msg = f'Balls of radius {radius} have different sizes {sorted(sizes)}'
        raise NonUniformBallError(msg)
    size = sizes.pop()
    return WeightedMeasure(
        tuple(measure.mass(ball) / size for ball in balls),
    )


def ck_mass_bound_check(
    decoration: Decoration,
    measure: WeightedMeasure,
    radius: int,
    epsilon: Fraction,
) -> MassBoundReport:
    """Check bound on measure of certified ball set C_k.

    If mu_k(C) >= 1 - eps/|D| then mu(C_k) >= 1 - eps, where D is ball of
    radius k. Averaging inequality behind it is checked as well.
    :param Decoration decoration: decoration.
    :param WeightedMeasure measure: measure mu on vertices.
    :param int radius: k.
    :param Fraction epsilon: eps.
    :returns: MassBoundReport.
    """
    spread = mu_k(measure, decoration.graph, radius)
    size = len(_balls(decoration.graph, radius)[0])
    mu_k_certified = spread.mass(decoration.certified)
    mu_ball_certified = measure.mass(certified_ball_set(decoration, radius))
    return MassBoundReport(
        ball_size=size,
        mu_k_certified=mu_k_certified,
        mu_ball_certified=mu_ball_certified,
        hypothesis=mu_k_certified >= 1 - epsilon / size,
        conclusion=mu_ball_certified >= 1 - epsilon,
        averaging_bound=(
            mu_k_certified <= mu_ball_certified / size + 1 - Fraction(1, size)
        ),
    )
