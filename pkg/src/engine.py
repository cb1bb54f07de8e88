import itertools
import logging
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from fractions import Fraction
from typing import Self

import networkx as nx
import numpy as np

from src.constants import INT64_SAFE_LIMIT, SYNTHESIS_BATCH, UNDEFINED
from src.dataclasses import (
    DensityBound,
    SynthesisDiagnostics,
    VerificationReport,
)
from src.decoration import Decoration, WeightedMeasure
from src.enums import FailureKind
from src.exceptions import (
    ColoringNotInjectiveError,
    ContextMismatchError,
    InconsistentActionError,
    InvariantViolationError,
    NotIndependentError,
    PaletteCapExceededError,
)
from src.group import GroupCtx, GroupElement, Window, ball, inv, window_product
from src.instances import (
    GraphInstance,
    SchreierInstance,
    girth,
    schreier_graph,
)
from src.local_rule import ClopenSet, is_independent

Source = SchreierInstance | Decoration


@dataclass(frozen=True)
class AuxColoring:
    """Proper coloring of auxiliary graph by colors 0..palette-1."""

    colors: tuple[int, ...]
    palette: int

    def __post_init__(self: Self) -> None:
        """Check that colors fit the palette.

        :returns: None
        """
        if any(not 0 <= color < self.palette for color in self.colors):
            msg = f'Colors must be in range [0, {self.palette})'
            raise ValueError(msg)

    @property
    def colors_used(self: Self) -> int:
        """Get count of colors used.

        :returns: max color + 1, 0 for empty coloring.
        """
        return max(self.colors, default=-1) + 1


@dataclass(frozen=True, eq=False)
class KFoldColoring:
    """Family of vertex sets covering every domain vertex exactly fold times.

    Membership is packed bit matrix: row per set, bit x of row is vertex x
    (little bit order).
    """

    membership: np.ndarray
    vertices: int
    fold: int
    domain: frozenset[int]
    diagnostics: SynthesisDiagnostics | None = None

    @classmethod
    def from_sets(
        cls: type[Self],
        sets: Sequence[Iterable[int]],
        vertices: int,
        fold: int,
        domain: Iterable[int] | None = None,
    ) -> Self:
        """Create coloring from explicit sets.

        :param Sequence[Iterable[int]] sets: vertex sets.
        :param int vertices: count of vertices.
        :param int fold: k.
        :param Iterable[int] | None domain: vertices with exact coverage, all
         vertices by default.
        :returns: KFoldColoring.
        """
        matrix = np.zeros((len(sets), vertices), dtype=bool)
        for row, members in enumerate(sets):
            matrix[row, list(members)] = True
        return cls(
            membership=np.packbits(matrix, axis=1, bitorder='little'),
            vertices=vertices,
            fold=fold,
            domain=frozenset(range(vertices) if domain is None else domain),
        )

    @property
    def sets(self: Self) -> int:
        """Get count of sets.

        :returns: l.
        """
        return int(self.membership.shape[0])

    @property
    def ratio(self: Self) -> Fraction | None:
        """Get ratio l/k.

        :returns: Fraction, None for zero fold.
        """
        if self.fold == 0:
            return None
        return Fraction(self.sets, self.fold)

    def matrix(self: Self) -> np.ndarray:
        """Get unpacked membership.

        :returns: boolean array of shape (l, vertices).
        """
        return np.unpackbits(
            self.membership,
            axis=1,
            count=self.vertices,
            bitorder='little',
        ).astype(bool)

    def members(self: Self, index: int) -> list[int]:
        """Get vertices of one set.

        :param int index: index of set.
        :returns: sorted vertices.
        """
        row = np.unpackbits(
            self.membership[index],
            count=self.vertices,
            bitorder='little',
        )
        return np.flatnonzero(row).tolist()


def _check_radius_ball(ctx: GroupCtx, window: Window) -> int:
    radius = window.radius()
    if window != ball(ctx, radius):
        msg = 'Window on decorated graph must be ball around identity'
        raise ValueError(msg)
    return radius


def _decoration_edges(
    decoration: Decoration,
    window: Window,
) -> set[tuple[int, int]]:
    radius = _check_radius_ball(decoration.as_instance().ctx, window)
    simple = decoration.graph.to_simple_networkx()
    edges = set()
    for vertex in range(decoration.graph.vertices):
        near = nx.single_source_shortest_path_length(
            simple,
            vertex,
            cutoff=2 * radius,
        )
        edges.update((vertex, other) for other in near if other > vertex)
    return edges


def _instance_edges(
    instance: SchreierInstance,
    window: Window,
) -> set[tuple[int, int]]:
    products = {
        (gamma, delta): gamma * inv(delta)
        for gamma, delta in itertools.product(window, repeat=2)
    }
    edges = set()
    for vertex in range(instance.vertices):
        for (gamma, delta), word in products.items():
            reduced = instance.act(word, vertex)
            stepwise = instance.act(gamma, instance.act(inv(delta), vertex))
            if UNDEFINED not in {reduced, stepwise} and reduced != stepwise:
                msg = (
                    f'Action is inconsistent at vertex {vertex}: '
                    f'{gamma!r} and {delta!r} give {stepwise}, reduced word '
                    f'{word!r} gives {reduced}'
                )
                raise InconsistentActionError(msg)
            if reduced not in {UNDEFINED, vertex}:
                edges.add((min(vertex, reduced), max(vertex, reduced)))
    return edges


def auxiliary_graph(source: Source, window: Window) -> GraphInstance:
    """Get graph R with u ~ w·u for every w in D·D^-1.

    Proper coloring of R is injective on every D·x. On decorated graph
    window must be ball of radius k and R joins vertices at distance <= 2k.
    :param Source source: instance or decoration.
    :param Window window: window D.
    :returns: simple GraphInstance.
    """
    match source:
        case Decoration():
            edges = _decoration_edges(source, window)
            vertices = source.graph.vertices
        case SchreierInstance():
            edges = _instance_edges(source, window)
            vertices = source.vertices
    graph = GraphInstance.from_edges(vertices, edges)
    logging.debug(
        'Auxiliary graph has %d edges, max degree %d',
        len(graph.edges),
        graph.max_degree,
    )
    return graph


def greedy_coloring(
    graph: GraphInstance,
    order: Sequence[int] | None = None,
    palette: int | None = None,
) -> AuxColoring:
    """Color graph greedily in given order.

    :param GraphInstance graph: graph.
    :param Sequence[int] | None order: permutation of vertices, identity by
     default.
    :param int | None palette: size of palette, count of colors used by
     default.
    :returns: AuxColoring with at most max degree + 1 colors.
    """
    order = list(range(graph.vertices)) if order is None else list(order)
    if sorted(order) != list(range(graph.vertices)):
        msg = 'Order of greedy coloring must be permutation of vertices'
        raise ValueError(msg)
    coloring = nx.greedy_color(
        graph.to_simple_networkx(),
        strategy=lambda _graph, _colors: iter(order),
    )
    colors = tuple(coloring[vertex] for vertex in range(graph.vertices))
    used = max(colors, default=-1) + 1
    if palette is not None and palette < used:
        msg = f'Greedy coloring needs {used} colors, palette has {palette}'
        raise ValueError(msg)
    return AuxColoring(colors, used if palette is None else palette)


def ratio_for_rule(rule: ClopenSet) -> Fraction | None:
    """Get ratio l/k of coloring that synthesis builds from rule.

    :param ClopenSet rule: clopen rule.
    :returns: 2^|D| / |patterns|, None for empty rule.
    """
    if not rule.patterns:
        return None
    return Fraction(1 << len(rule.window), len(rule.patterns))


def _check_source_ctx(source: Source, rule: ClopenSet) -> SchreierInstance:
    instance = (
        source.as_instance() if isinstance(source, Decoration) else source
    )
    if instance.ctx != rule.ctx:
        msg = f'Rule of {rule.ctx} can not color instance of {instance.ctx}'
        raise ContextMismatchError(msg)
    return instance


def _check_forbidden(
    rule: ClopenSet,
    forbidden: Sequence[GroupElement],
    window_cap: int | None,
    *,
    allow_empty_f: bool,
) -> None:
    if not forbidden and not allow_empty_f:
        msg = 'Empty F gives no coloring constraint, allow it explicitly'
        raise ValueError(msg)
    report = is_independent(rule, forbidden, window_cap=window_cap)
    if not report.independent:
        msg = (
            f'Rule is not independent for shift {report.sigma!r}, '
            f'witness point {report.witness}'
        )
        raise NotIndependentError(msg)


def synthesis_buffer(
    window: Window,
    forbidden: Sequence[GroupElement],
) -> Window:
    """Get window D with every D·sigma.

    :param Window window: window D.
    :param Sequence[GroupElement] forbidden: F.
    :returns: Window.
    """
    return window.union(*(window.translate(sigma) for sigma in forbidden))


def _domain(
    instance: SchreierInstance,
    buffer: Window,
    allowed: frozenset[int] | None,
) -> tuple[list[int], int, int]:
    words = [
        word
        for word in window_product(buffer, buffer)
        if not word.is_identity
    ]
    domain, non_free, skipped = [], 0, 0
    for vertex in range(instance.vertices):
        if allowed is not None and vertex not in allowed:
            skipped += 1
        elif instance.orbit_window(buffer, vertex) is None:
            skipped += 1
        elif not instance.is_free_at(words, vertex):
            non_free += 1
        else:
            domain.append(vertex)
    return domain, non_free, skipped


def _membership_column(
    colors: Sequence[int],
    maps: np.ndarray,
    patterns: np.ndarray,
) -> np.ndarray:
    codes = np.zeros_like(maps)
    for position, color in enumerate(colors):
        codes |= ((maps >> color) & 1) << position
    return np.isin(codes, patterns)


def _set_packed_column(
    membership: np.ndarray,
    vertex: int,
    bits: np.ndarray,
) -> None:
    # little bit order: vertex x is bit x % 8 of byte x // 8
    membership[:, vertex >> 3] |= bits.astype(np.uint8) << (vertex & 7)


def _palette(
    window: Window,
    coloring: AuxColoring,
    n_cap: int | None,
    *,
    compact_colors: bool,
) -> tuple[int, int]:
    palette_bound = len(window_product(window, window))
    used = coloring.colors_used
    if used > palette_bound:
        logging.warning(
            'Greedy coloring used %d colors, above bound %d',
            used,
            palette_bound,
        )
    palette = used if compact_colors else max(palette_bound, used)
    palette = max(palette, len(window))
    if n_cap is not None and palette > n_cap:
        msg = (
            f'Palette of {palette} colors exceeds cap {n_cap}; try '
            f'minimize-window or --compact-colors'
        )
        raise PaletteCapExceededError(msg)
    return palette_bound, palette


def synthesize(  # noqa: PLR0913
    source: Source,
    rule: ClopenSet,
    forbidden: Sequence[GroupElement],
    *,
    n_cap: int | None = None,
    window_cap: int | None = None,
    compact_colors: bool = False,
    allow_empty_f: bool = False,
    threads: int = 1,
) -> KFoldColoring:
    """Build k-fold coloring of Schreier graph from F-independent rule.

    Auxiliary coloring f with N colors is injective on every window D·x.
    Every map phi: [N] -> {0, 1} gives set I_phi = {x : pattern phi(f(D·x))
    is in rule}. Every domain vertex lies in exactly k = |rule| * 2^(N-|D|)
    sets, and every I_phi is independent because rule is.
    :param Source source: instance or decoration.
    :param ClopenSet rule: F-independent clopen rule on window D.
    :param Sequence[GroupElement] forbidden: F.
    :param int | None n_cap: maximal palette size.
    :param int | None window_cap: maximal window of independence check.
    :param bool compact_colors: use count of colors used instead of
     |D·D^-1| as palette.
    :param bool allow_empty_f: accept empty F.
    :param int threads: count of worker threads.
    :returns: KFoldColoring with 2^N sets.
    """
    instance = _check_source_ctx(source, rule)
    _check_forbidden(rule, forbidden, window_cap, allow_empty_f=allow_empty_f)
    window = rule.window
    coloring = greedy_coloring(auxiliary_graph(source, window))
    palette_bound, palette = _palette(
        window,
        coloring,
        n_cap,
        compact_colors=compact_colors,
    )
    certified = source.certified if isinstance(source, Decoration) else None
    domain, non_free, skipped = _domain(
        instance,
        synthesis_buffer(window, forbidden),
        certified,
    )
    orbits = {}
    for vertex in domain:
        orbit = instance.orbit_window(window, vertex) or ()
        colors = tuple(coloring.colors[image] for image in orbit)
        if len(set(colors)) != len(window):
            msg = f'Auxiliary coloring is not injective on D·{vertex}'
            raise ColoringNotInjectiveError(msg)
        orbits[vertex] = colors
    maps = np.arange(1 << palette, dtype=np.int64)
    column = partial(
        _membership_column,
        maps=maps,
        patterns=rule.pattern_array(),
    )
    membership = np.zeros(
        (maps.size, (instance.vertices + 7) // 8),
        dtype=np.uint8,
    )
    with ThreadPoolExecutor(max_workers=max(threads, 1)) as executor:
        for batch in itertools.batched(domain, SYNTHESIS_BATCH):
            columns = executor.map(column, (orbits[v] for v in batch))
            for vertex, bits in zip(batch, columns, strict=True):
                _set_packed_column(membership, vertex, bits)
    fold = len(rule.patterns) << (palette - len(window))
    diagnostics = SynthesisDiagnostics(
        window_size=len(window),
        pattern_count=len(rule.patterns),
        palette_bound=palette_bound,
        colors_used=coloring.colors_used,
        palette=palette,
        domain_size=len(domain),
        non_free_vertices=non_free,
        skipped_vertices=skipped,
    )
    logging.info(
        'Synthesized %d sets, every domain vertex covered %d times',
        maps.size,
        fold,
    )
    return KFoldColoring(
        membership=membership,
        vertices=instance.vertices,
        fold=fold,
        domain=frozenset(domain),
        diagnostics=diagnostics,
    )


def _outside_domain(
    coloring: KFoldColoring,
    matrix: np.ndarray,
) -> VerificationReport | None:
    outside = np.ones(coloring.vertices, dtype=bool)
    outside[list(coloring.domain)] = False
    rows, columns = np.nonzero(matrix[:, outside])
    if rows.size == 0:
        return None
    vertex = int(np.flatnonzero(outside)[columns[0]])
    return VerificationReport(
        passed=False,
        failure=FailureKind.OUTSIDE_DOMAIN,
        counterexample={'set': int(rows[0]), 'vertex': vertex},
    )


def _coverage(
    coloring: KFoldColoring,
    matrix: np.ndarray,
) -> VerificationReport | None:
    coverage = matrix.sum(axis=0)
    for vertex in sorted(coloring.domain):
        if coverage[vertex] != coloring.fold:
            return VerificationReport(
                passed=False,
                failure=FailureKind.COVERAGE,
                counterexample={
                    'vertex': vertex,
                    'expected': coloring.fold,
                    'actual': int(coverage[vertex]),
                },
            )
    return None


def _independence(
    coloring: KFoldColoring,
    matrix: np.ndarray,
    graph: GraphInstance,
) -> VerificationReport | None:
    for u, v in graph.edges:
        if u == v or u not in coloring.domain or v not in coloring.domain:
            continue
        shared = np.flatnonzero(matrix[:, u] & matrix[:, v])
        if shared.size:
            return VerificationReport(
                passed=False,
                failure=FailureKind.INDEPENDENCE,
                counterexample={'set': int(shared[0]), 'edge': [u, v]},
            )
    return None


def verify(
    coloring: KFoldColoring,
    graph: GraphInstance,
) -> VerificationReport:
    """Check k-fold coloring of graph on its domain.

    Sets must avoid vertices outside domain, cover every domain vertex
    exactly k times and contain no edge between domain vertices.
    :param KFoldColoring coloring: coloring.
    :param GraphInstance graph: colored graph.
    :returns: VerificationReport with first counterexample.
    """
    if graph.vertices != coloring.vertices:
        msg = (
            f'Coloring of {coloring.vertices} vertices can not color graph '
            f'with {graph.vertices} vertices'
        )
        raise ValueError(msg)
    matrix = coloring.matrix()
    for check in (
        _outside_domain(coloring, matrix),
        _coverage(coloring, matrix),
        _independence(coloring, matrix, graph),
    ):
        if check is not None:
            logging.warning('Verification failed: %s', check.failure)
            return check
    return VerificationReport(passed=True)


def average_density_bound(
    coloring: KFoldColoring,
    measure: WeightedMeasure,
) -> DensityBound:
    """Get average mu-mass of sets and set with maximal mass.

    Average equals sum of mu(x)·coverage(x) over l, and maximal mass is at
    least the average.
    :param KFoldColoring coloring: coloring with at least one set.
    :param WeightedMeasure measure: measure on vertices.
    :returns: DensityBound with exact values.
    """
    if len(measure) != coloring.vertices:
        msg = 'Measure and coloring have different count of vertices'
        raise ValueError(msg)
    if coloring.sets == 0:
        msg = 'Average density needs at least one set'
        raise ValueError(msg)
    denominator = math.lcm(*(weight.denominator for weight in measure.weights))
    numerators = [
        weight.numerator * (denominator // weight.denominator)
        for weight in measure.weights
    ]
    safe = denominator * coloring.vertices < INT64_SAFE_LIMIT
    weights = np.array(numerators, dtype=np.int64 if safe else object)
    matrix = coloring.matrix()
    masses = matrix.astype(weights.dtype) @ weights
    coverage = matrix.sum(axis=0)
    average = Fraction(
        sum(int(c) * n for c, n in zip(coverage, numerators, strict=True)),
        denominator * coloring.sets,
    )
    best = int(np.argmax(masses))
    best_mass = Fraction(int(masses[best]), denominator)
    if best_mass < average:
        msg = f'Maximal mass {best_mass} is below average {average}'
        raise InvariantViolationError(msg)
    return DensityBound(average=average, best_index=best, best_mass=best_mass)


def target_graph(
    source: Source,
    forbidden: Sequence[GroupElement],
) -> GraphInstance:
    """Get graph that synthesized coloring must color.

    :param Source source: instance or decoration.
    :param Sequence[GroupElement] forbidden: F.
    :returns: Schreier graph for instance, decorated graph for decoration.
    """
    if isinstance(source, Decoration):
        return source.graph
    return schreier_graph(source, forbidden)


def wraparound_risk(
    graph: GraphInstance,
    window: Window,
    forbidden: Sequence[GroupElement],
) -> bool:
    """Check that cycles of graph are short enough to wrap around window.

    :param GraphInstance graph: colored graph.
    :param Window window: window D.
    :param Sequence[GroupElement] forbidden: F.
    :returns: True if girth <= 2 * radius of synthesis buffer.
    """
    radius = synthesis_buffer(window, forbidden).radius()
    return girth(graph) <= 2 * radius
