import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Self

import networkx as nx
import numpy as np

from src.constants import MIN_FREE_TORUS_MODULUS, UNDEFINED
from src.enums import Stream
from src.exceptions import (
    IdentityInWindowError,
    InconsistentActionError,
    RejectionBudgetExhaustedError,
)
from src.group import GroupCtx, GroupElement, Window
from src.rng import generator
from src.types import Edge


def _inverse_map(mapping: Sequence[int], vertices: int) -> tuple[int, ...]:
    inverse = [UNDEFINED] * vertices
    for source, target in enumerate(mapping):
        if target == UNDEFINED:
            continue
        if not 0 <= target < vertices:
            msg = f'Image {target} of vertex {source} is not a vertex'
            raise InconsistentActionError(msg)
        if inverse[target] != UNDEFINED:
            msg = (
                f'Vertices {inverse[target]} and {source} have the same '
                f'image {target}'
            )
            raise InconsistentActionError(msg)
        inverse[target] = source
    return tuple(inverse)


@dataclass(frozen=True)
class SchreierInstance:
    """Finite set with action of generators by partial injections.

    Generator i (1-based) sends vertex x to gen_maps[i - 1][x], UNDEFINED
    marks missing image. For torus the maps are total permutations.
    """

    ctx: GroupCtx
    vertices: int
    gen_maps: tuple[tuple[int, ...], ...]
    seed: int | None = None
    provenance: str = ''
    inverse_maps: tuple[tuple[int, ...], ...] = field(
        init=False,
        repr=False,
        compare=False,
    )

    def __post_init__(self: Self) -> None:
        """Validate maps and build their inverses.

        :returns: None
        """
        if self.vertices < 1:
            msg = f'Instance must have vertices, got {self.vertices}'
            raise ValueError(msg)
        if len(self.gen_maps) != self.ctx.rank:
            msg = (
                f'{self.ctx} needs {self.ctx.rank} generator maps, got '
                f'{len(self.gen_maps)}'
            )
            raise InconsistentActionError(msg)
        if any(len(mapping) != self.vertices for mapping in self.gen_maps):
            msg = f'Every generator map must have {self.vertices} entries'
            raise InconsistentActionError(msg)
        inverses = tuple(
            _inverse_map(mapping, self.vertices) for mapping in self.gen_maps
        )
        object.__setattr__(self, 'inverse_maps', inverses)

    @property
    def is_total(self: Self) -> bool:
        """Check that every generator is defined everywhere.

        :returns: True for action by permutations.
        """
        return all(UNDEFINED not in mapping for mapping in self.gen_maps)

    def step(self: Self, letter: int, vertex: int) -> int:
        """Apply one signed generator to vertex.

        :param int letter: i for generator i, -i for its inverse.
        :param int vertex: vertex or UNDEFINED.
        :returns: image or UNDEFINED.
        """
        if vertex == UNDEFINED:
            return UNDEFINED
        if letter > 0:
            return self.gen_maps[letter - 1][vertex]
        return self.inverse_maps[-letter - 1][vertex]

    def _torus_letters(self: Self, element: GroupElement) -> Iterable[int]:
        modulus = self.ctx.modulus or 0
        for coordinate, value in enumerate(element.letters, start=1):
            if value <= modulus - value:
                yield from itertools.repeat(coordinate, value)
            else:
                yield from itertools.repeat(-coordinate, modulus - value)

    def act(self: Self, element: GroupElement, vertex: int) -> int:
        """Apply group element to vertex (left action).

        Word s_1 s_2 acts as s_1(s_2(x)). Torus elements go the shorter way
        round in every coordinate.
        :param GroupElement element: element of instance group.
        :param int vertex: vertex.
        :returns: image or UNDEFINED if some step is missing.
        """
        letters = (
            reversed(element.letters)
            if self.ctx.is_free
            else self._torus_letters(element)
        )
        for letter in letters:
            vertex = self.step(letter, vertex)
            if vertex == UNDEFINED:
                break
        return vertex

    def orbit_window(
        self: Self,
        window: Window,
        vertex: int,
    ) -> tuple[int, ...] | None:
        """Get images g·x of vertex for every g of window.

        :param Window window: window of instance group.
        :param int vertex: vertex.
        :returns: tuple of images or None if some is missing.
        """
        images = tuple(self.act(element, vertex) for element in window)
        if UNDEFINED in images:
            return None
        return images

    def is_free_at(
        self: Self,
        words: Iterable[GroupElement],
        vertex: int,
    ) -> bool:
        """Check that no nontrivial word fixes vertex.

        :param Iterable[GroupElement] words: words to check.
        :param int vertex: vertex.
        :returns: True if every defined nontrivial image differs from vertex.
        """
        return all(
            word.is_identity or self.act(word, vertex) != vertex
            for word in words
        )


def _torus_index(vector: Sequence[int], modulus: int) -> int:
    index = 0
    for value in vector:
        index = index * modulus + value
    return index


def torus_instance(dimension: int, modulus: int) -> SchreierInstance:
    """Create torus (Z/mZ)^d acting on itself by translations.

    Vertices are vectors in lexicographic order.
    :param int dimension: d.
    :param int modulus: m.
    :returns: SchreierInstance.
    """
    ctx = GroupCtx.torus(dimension, modulus)
    if modulus < MIN_FREE_TORUS_MODULUS:
        logging.warning(
            'Torus with modulus %d: every generator is its own inverse, '
            'graph has double edges',
            modulus,
        )
    vectors = list(itertools.product(range(modulus), repeat=dimension))
    gen_maps = []
    for coordinate in range(dimension):
        mapping = []
        for vector in vectors:
            moved = list(vector)
            moved[coordinate] = (moved[coordinate] + 1) % modulus
            mapping.append(_torus_index(moved, modulus))
        gen_maps.append(tuple(mapping))
    return SchreierInstance(
        ctx=ctx,
        vertices=len(vectors),
        gen_maps=tuple(gen_maps),
        provenance=f'torus:{dimension}:{modulus}',
    )


def validate_torus_consistency(instance: SchreierInstance) -> None:
    """Check that maps define action of torus.

    Every map must be permutation of order dividing m and maps must commute.
    :param SchreierInstance instance: instance of torus group.
    :returns: None, but raises on inconsistency.
    """
    if instance.ctx.is_free:
        return
    if not instance.is_total:
        msg = 'Torus generators must be defined on every vertex'
        raise InconsistentActionError(msg)
    modulus = instance.ctx.modulus or 0
    maps = [np.array(mapping) for mapping in instance.gen_maps]
    identity = np.arange(instance.vertices)
    for index, mapping in enumerate(maps, start=1):
        power = identity
        for _ in range(modulus):
            power = mapping[power]
        if not np.array_equal(power, identity):
            msg = f'Generator {index} does not have order dividing {modulus}'
            raise InconsistentActionError(msg)
    for (i, left), (j, right) in itertools.combinations(
        enumerate(maps, start=1),
        2,
    ):
        if not np.array_equal(left[right], right[left]):
            msg = f'Generators {i} and {j} do not commute'
            raise InconsistentActionError(msg)


@dataclass(frozen=True)
class GraphInstance:
    """Finite undirected graph on vertices 0..n-1 with sorted edge list.

    Multigraph may contain loops and parallel edges, simple graph may not.
    """

    vertices: int
    edges: tuple[Edge, ...]
    multigraph: bool = False

    def __post_init__(self: Self) -> None:
        """Validate edges.

        :returns: None
        """
        for edge in self.edges:
            if not (0 <= edge.u <= edge.v < self.vertices):
                msg = f'Wrong edge {edge!r} for {self.vertices} vertices'
                raise ValueError(msg)
        if list(self.edges) != sorted(self.edges):
            msg = 'Edges must be sorted'
            raise ValueError(msg)
        if not self.multigraph and (
            any(edge.u == edge.v for edge in self.edges)
            or len(set(self.edges)) != len(self.edges)
        ):
            msg = 'Simple graph can not contain loops or parallel edges'
            raise ValueError(msg)

    @classmethod
    def from_edges(
        cls: type[Self],
        vertices: int,
        edges: Iterable[tuple[int, int]],
        *,
        multigraph: bool | None = False,
    ) -> Self:
        """Create graph from unordered pairs.

        :param int vertices: count of vertices.
        :param Iterable[tuple[int, int]] edges: pairs of vertices.
        :param bool | None multigraph: keep loops and parallel edges, None
         means multigraph only if there are any.
        :returns: GraphInstance.
        """
        normalized = sorted(Edge(min(u, v), max(u, v)) for u, v in edges)
        if multigraph is None:
            multigraph = len(set(normalized)) != len(normalized) or any(
                edge.u == edge.v for edge in normalized
            )
        return cls(vertices, tuple(normalized), multigraph=multigraph)

    @classmethod
    def from_networkx(cls: type[Self], graph: nx.Graph) -> Self:
        """Create graph from networkx graph, nodes are relabeled to 0..n-1.

        :param nx.Graph graph: networkx graph.
        :returns: GraphInstance.
        """
        relabeled = nx.convert_node_labels_to_integers(
            graph,
            ordering='sorted',
        )
        return cls.from_edges(
            relabeled.number_of_nodes(),
            relabeled.edges(),
            multigraph=relabeled.is_multigraph(),
        )

    def degrees(self: Self) -> tuple[int, ...]:
        """Get degrees, loop adds 2.

        :returns: tuple of degrees.
        """
        counts = [0] * self.vertices
        for u, v in self.edges:
            counts[u] += 1
            counts[v] += 1
        return tuple(counts)

    @property
    def max_degree(self: Self) -> int:
        """Get maximal degree.

        :returns: maximal degree, 0 for edgeless graph.
        """
        return max(self.degrees(), default=0)

    def to_networkx(self: Self) -> nx.Graph:
        """Convert to networkx graph (MultiGraph for multigraph).

        :returns: networkx graph with all vertices.
        """
        graph = nx.MultiGraph() if self.multigraph else nx.Graph()
        graph.add_nodes_from(range(self.vertices))
        graph.add_edges_from(self.edges)
        return graph

    def to_simple_networkx(self: Self) -> nx.Graph:
        """Convert to simple networkx graph without loops.

        :returns: networkx Graph.
        """
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertices))
        graph.add_edges_from(edge for edge in self.edges if edge.u != edge.v)
        return graph


def _sample_pairing(
    stubs: np.ndarray,
    rng: np.random.Generator,
    vertices: int,
    *,
    allow_multigraph: bool,
) -> np.ndarray | None:
    pairs = rng.permutation(stubs).reshape(-1, 2)
    low, high = pairs.min(axis=1), pairs.max(axis=1)
    if allow_multigraph:
        return np.column_stack((low, high))
    if np.any(low == high):
        return None
    keys = low * vertices + high
    if np.unique(keys).size != keys.size:
        return None
    return np.column_stack((low, high))


def random_regular(
    generators: int,
    vertices: int,
    seed: int,
    *,
    allow_multigraph: bool = False,
    rejection_budget: int = 100_000,
) -> GraphInstance:
    """Sample 2n-regular graph by configuration model.

    Stubs are paired by random permutation. Simple graph is obtained by
    rejection: whole pairing is resampled on any loop or parallel edge.
    :param int generators: n, degree is 2n.
    :param int vertices: count of vertices.
    :param int seed: run seed.
    :param bool allow_multigraph: keep loops and parallel edges.
    :param int rejection_budget: maximal count of pairings.
    :returns: GraphInstance.
    """
    degree = 2 * generators
    if generators < 1 or vertices < 1:
        msg = 'Count of generators and vertices must be positive'
        raise ValueError(msg)
    if not allow_multigraph and vertices <= degree:
        msg = (
            f'Simple {degree}-regular graph needs more than {degree} vertices'
        )
        raise ValueError(msg)
    rng = generator(seed, Stream.CONFIGURATION_MODEL, generators, vertices)
    stubs = np.repeat(np.arange(vertices, dtype=np.int64), degree)
    for attempt in range(1, rejection_budget + 1):
        pairs = _sample_pairing(
            stubs,
            rng,
            vertices,
            allow_multigraph=allow_multigraph,
        )
        if pairs is not None:
            logging.debug(
                'Configuration model accepted at attempt %d',
                attempt,
            )
            return GraphInstance.from_edges(
                vertices,
                pairs.tolist(),
                multigraph=allow_multigraph,
            )
    msg = (
        f'No simple {degree}-regular graph on {vertices} vertices after '
        f'{rejection_budget} pairings'
    )
    raise RejectionBudgetExhaustedError(msg)


def schreier_graph(
    instance: SchreierInstance,
    forbidden: Iterable[GroupElement],
) -> GraphInstance:
    """Get graph with edge {x, sigma·x} for every sigma of F.

    Loops x = sigma·x are dropped and parallel edges merged.
    :param SchreierInstance instance: instance.
    :param Iterable[GroupElement] forbidden: F without identity.
    :returns: simple GraphInstance.
    """
    shifts = list(forbidden)
    if any(sigma.is_identity for sigma in shifts):
        msg = 'Set F of Schreier graph must not contain identity'
        raise IdentityInWindowError(msg)
    edges = set()
    for vertex, sigma in itertools.product(range(instance.vertices), shifts):
        image = instance.act(sigma, vertex)
        if image not in {UNDEFINED, vertex}:
            edges.add((min(vertex, image), max(vertex, image)))
    return GraphInstance.from_edges(instance.vertices, edges)


def girth(graph: GraphInstance) -> float:
    """Get length of shortest cycle.

    Loop is cycle of length 1 and parallel edges make cycle of length 2.
    :param GraphInstance graph: graph.
    :returns: girth, math.inf for forest.
    """
    if any(edge.u == edge.v for edge in graph.edges):
        return 1
    if len(set(graph.edges)) != len(graph.edges):
        return 2
    result: float = nx.girth(graph.to_simple_networkx())
    return result


def cycle_graph(vertices: int) -> GraphInstance:
    """Get cycle C_n.

    :param int vertices: n >= 3.
    :returns: GraphInstance.
    """
    return GraphInstance.from_networkx(nx.cycle_graph(vertices))


def path_graph(vertices: int) -> GraphInstance:
    """Get path P_n.

    :param int vertices: n.
    :returns: GraphInstance.
    """
    return GraphInstance.from_networkx(nx.path_graph(vertices))


def complete_graph(vertices: int) -> GraphInstance:
    """Get complete graph K_n.

    :param int vertices: n.
    :returns: GraphInstance.
    """
    return GraphInstance.from_networkx(nx.complete_graph(vertices))


def petersen_graph() -> GraphInstance:
    """Get Petersen graph.

    :returns: GraphInstance.
    """
    return GraphInstance.from_networkx(nx.petersen_graph())
