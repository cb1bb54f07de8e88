import itertools
import logging
import math
from collections.abc import Sequence
from fractions import Fraction

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from src.dataclasses import KFoldResult, LPResult
from src.enums import CertificateKind, LPStatus
from src.exceptions import InvariantViolationError, SizeCapExceededError
from src.instances import GraphInstance
from src.simplex import RationalSimplex

IndependentSet = tuple[int, ...]


def _simple_graph(graph: GraphInstance, vertex_cap: int | None) -> nx.Graph:
    if vertex_cap is not None and graph.vertices > vertex_cap:
        msg = (
            f'Graph with {graph.vertices} vertices exceeds oracle cap '
            f'{vertex_cap}'
        )
        raise SizeCapExceededError(msg)
    if any(edge.u == edge.v for edge in graph.edges):
        msg = 'Graph with loop has no proper coloring'
        raise ValueError(msg)
    return graph.to_simple_networkx()


def max_independent_sets(
    graph: GraphInstance,
    vertex_cap: int | None = None,
) -> list[IndependentSet]:
    """Enumerate maximal independent sets as cliques of complement.

    :param GraphInstance graph: graph without loops.
    :param int | None vertex_cap: maximal count of vertices.
    :returns: sorted list of sorted sets.
    """
    complement = nx.complement(_simple_graph(graph, vertex_cap))
    return sorted(
        tuple(sorted(clique)) for clique in nx.find_cliques(complement)
    )


def _check_certificate(
    sets: Sequence[IndependentSet],
    vertices: int,
    weights: Sequence[Fraction],
    clique_weights: Sequence[Fraction],
) -> None:
    coverage = [Fraction(0)] * vertices
    for members, weight in zip(sets, weights, strict=True):
        for vertex in members:
            coverage[vertex] += weight
    feasible_primal = all(weight >= 0 for weight in weights) and all(
        value >= 1 for value in coverage
    )
    feasible_dual = all(weight >= 0 for weight in clique_weights) and all(
        sum(clique_weights[vertex] for vertex in members) <= 1
        for members in sets
    )
    if not (feasible_primal and feasible_dual):
        msg = 'Fractional coloring certificate is not feasible'
        raise InvariantViolationError(msg)
    if sum(weights) != sum(clique_weights):
        msg = 'Primal and dual values of fractional coloring differ'
        raise InvariantViolationError(msg)


def fractional_chromatic(
    graph: GraphInstance,
    vertex_cap: int | None = None,
) -> LPResult:
    """Get exact fractional chromatic number.

    Solves fractional clique LP max sum(y) over y >= 0 with sum of y over
    every maximal independent set <= 1. Its dual is fractional coloring,
    read from reduced costs of slacks. Both are checked for feasibility and
    equal objective values.
    :param GraphInstance graph: graph without loops.
    :param int | None vertex_cap: maximal count of vertices.
    :returns: LPResult.
    """
    sets = max_independent_sets(graph, vertex_cap)
    if graph.vertices == 0:
        return LPResult(Fraction(0), (), (), CertificateKind.ENUMERATION)
    matrix = [
        [int(vertex in members) for vertex in range(graph.vertices)]
        for members in sets
    ]
    solution = RationalSimplex(
        matrix,
        [1] * len(sets),
        [1] * graph.vertices,
    ).solve()
    if solution.status is not LPStatus.OPTIMAL:
        msg = 'Fractional clique LP must be bounded'
        raise InvariantViolationError(msg)
    _check_certificate(sets, graph.vertices, solution.dual, solution.primal)
    logging.debug(
        'Fractional chromatic number %s from %d independent sets',
        solution.value,
        len(sets),
    )
    return LPResult(
        value=solution.value,
        support=tuple(
            (members, weight)
            for members, weight in zip(sets, solution.dual, strict=True)
            if weight > 0
        ),
        clique_weights=solution.primal,
        certificate_kind=CertificateKind.PRIMAL_DUAL,
    )


def _cover(
    sets: Sequence[frozenset[int]],
    deficits: tuple[int, ...],
    budget: int,
    failed: set[tuple[tuple[int, ...], int]],
) -> list[int] | None:
    """Find budget sets covering vertex v at least deficits[v] times."""
    if not any(deficits):
        return []
    largest = max(len(members) for members in sets)
    if max(deficits) > budget or sum(deficits) > budget * largest:
        return None
    if (deficits, budget) in failed:
        return None
    vertex = deficits.index(max(deficits))
    for index, members in enumerate(sets):
        if vertex not in members:
            continue
        rest = tuple(
            max(deficit - (other in members), 0)
            for other, deficit in enumerate(deficits)
        )
        found = _cover(sets, rest, budget - 1, failed)
        if found is not None:
            return [index, *found]
    failed.add((deficits, budget))
    return None


def kfold_chromatic(
    graph: GraphInstance,
    fold: int,
    vertex_cap: int | None = None,
) -> KFoldResult:
    """Get minimal l with l independent sets covering every vertex k times.

    Search starts from ceil(k * fractional chromatic number) and grows.
    Only maximal independent sets are used, extra coverage is harmless.
    :param GraphInstance graph: graph without loops.
    :param int fold: k >= 1.
    :param int | None vertex_cap: maximal count of vertices.
    :returns: KFoldResult with witness family.
    """
    if fold < 1:
        msg = f'Fold must be positive, got {fold}'
        raise ValueError(msg)
    lower = math.ceil(fold * fractional_chromatic(graph, vertex_cap).value)
    sets = max_independent_sets(graph, vertex_cap)
    members = [frozenset(independent) for independent in sets]
    for budget in itertools.count(lower):
        found = _cover(members, (fold,) * graph.vertices, budget, set())
        if found is not None:
            family = tuple(sets[index] for index in found)
            logging.debug('%d-fold chromatic number is %d', fold, budget)
            return KFoldResult(fold=fold, sets=len(family), family=family)
    msg = 'Unreachable: k-fold coloring always exists'
    raise InvariantViolationError(msg)


def independence_number(
    graph: GraphInstance,
    vertex_cap: int | None = None,
) -> tuple[int, IndependentSet]:
    """Get size of maximum independent set with witness.

    :param GraphInstance graph: graph without loops.
    :param int | None vertex_cap: maximal count of vertices.
    :returns: size and lexicographically first maximum set.
    """
    sets = max_independent_sets(graph, vertex_cap)
    best = min(
        sets,
        key=lambda members: (-len(members), members),
        default=(),
    )
    return len(best), best


def is_vertex_transitive(
    graph: GraphInstance,
    vertex_cap: int | None = None,
) -> bool:
    """Check that automorphisms move vertex 0 to every vertex.

    :param GraphInstance graph: graph.
    :param int | None vertex_cap: maximal count of vertices.
    :returns: True for vertex-transitive graph.
    """
    simple = _simple_graph(graph, vertex_cap)
    orbit = set()
    for mapping in GraphMatcher(simple, simple).isomorphisms_iter():
        orbit.add(mapping[0])
        if len(orbit) == graph.vertices:
            return True
    return graph.vertices <= 1
