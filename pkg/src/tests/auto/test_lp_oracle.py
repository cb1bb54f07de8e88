from fractions import Fraction
from typing import Self

import pytest

from src.enums import CertificateKind
from src.exceptions import SizeCapExceededError
from src.instances import (
    GraphInstance,
    complete_graph,
    cycle_graph,
    path_graph,
    petersen_graph,
)
from src.lp_oracle import (
    fractional_chromatic,
    independence_number,
    is_vertex_transitive,
    kfold_chromatic,
    max_independent_sets,
)


class TestFractionalChromatic:
    """Testing exact fractional chromatic number."""

    @pytest.mark.parametrize(
        ('graph', 'expected'),
        [
            (cycle_graph(5), Fraction(5, 2)),
            (cycle_graph(7), Fraction(7, 3)),
            (cycle_graph(6), Fraction(2)),
            (complete_graph(4), Fraction(4)),
            (path_graph(3), Fraction(2)),
            (GraphInstance(3, ()), Fraction(1)),
        ],
        ids=('C_5', 'C_7', 'C_6', 'K_4', 'Path', 'No edges'),
    )
    def test_value(
        self: Self,
        graph: GraphInstance,
        expected: Fraction,
    ) -> None:
        """Testing value and feasibility of certificate.

        :param GraphInstance graph: graph.
        :param Fraction expected: fractional chromatic number.
        :returns: None
        """
        result = fractional_chromatic(graph)

        assert result.value == expected
        assert result.certificate_kind is CertificateKind.PRIMAL_DUAL
        assert sum(weight for _, weight in result.support) == expected
        assert sum(result.clique_weights) == expected

    def test_petersen(self: Self, petersen: GraphInstance) -> None:
        """Testing that Petersen graph has value 5/2.

        :param GraphInstance petersen: fixture with Petersen graph.
        :returns: None
        """
        assert fractional_chromatic(petersen).value == Fraction(5, 2)

    def test_support_covers_vertices(self: Self, c5: GraphInstance) -> None:
        """Testing that support is fractional coloring.

        :param GraphInstance c5: fixture with C_5.
        :returns: None
        """
        result = fractional_chromatic(c5)

        for vertex in range(5):
            coverage = sum(
                weight
                for members, weight in result.support
                if vertex in members
            )
            assert coverage >= 1

    def test_empty_graph(self: Self) -> None:
        """Testing graph without vertices.

        :returns: None
        """
        result = fractional_chromatic(GraphInstance(0, ()))

        assert result.value == 0
        assert result.certificate_kind is CertificateKind.ENUMERATION

    def test_vertex_cap(self: Self, petersen: GraphInstance) -> None:
        """Testing graph above cap.

        :param GraphInstance petersen: fixture with Petersen graph.
        :returns: None
        """
        with pytest.raises(SizeCapExceededError, match='cap 9'):
            _ = fractional_chromatic(petersen, vertex_cap=9)

    def test_loop(self: Self) -> None:
        """Testing graph with loop.

        :returns: None
        """
        graph = GraphInstance.from_edges(2, [(0, 0)], multigraph=True)

        with pytest.raises(ValueError, match='loop'):
            _ = fractional_chromatic(graph)


class TestKFoldChromatic:
    """Testing minimal k-fold colorings."""

    @pytest.mark.parametrize(
        ('fold', 'expected'),
        [(1, 3), (2, 5), (3, 8)],
        ids=('Chromatic number', '2-fold', '3-fold'),
    )
    def test_cycle(
        self: Self,
        c5: GraphInstance,
        fold: int,
        expected: int,
    ) -> None:
        """Testing k-fold chromatic numbers of C_5.

        :param GraphInstance c5: fixture with C_5.
        :param int fold: k.
        :param int expected: minimal l.
        :returns: None
        """
        result = kfold_chromatic(c5, fold)

        assert result.sets == expected
        assert len(result.family) == expected
        for vertex in range(5):
            covered = sum(vertex in members for members in result.family)
            assert covered >= fold

    @pytest.mark.parametrize(
        ('fold', 'expected'),
        [(1, 3), (2, 5)],
        ids=('Chromatic number', '2-fold'),
    )
    def test_petersen(
        self: Self,
        petersen: GraphInstance,
        fold: int,
        expected: int,
    ) -> None:
        """Testing k-fold chromatic numbers of Petersen graph.

        :param GraphInstance petersen: fixture with Petersen graph.
        :param int fold: k.
        :param int expected: minimal l.
        :returns: None
        """
        assert kfold_chromatic(petersen, fold).sets == expected

    def test_zero_fold(self: Self, c5: GraphInstance) -> None:
        """Testing that fold must be positive.

        :param GraphInstance c5: fixture with C_5.
        :returns: None
        """
        with pytest.raises(ValueError, match='positive'):
            _ = kfold_chromatic(c5, 0)


class TestIndependentSets:
    """Testing maximal and maximum independent sets."""

    def test_max_independent_sets(self: Self, c5: GraphInstance) -> None:
        """Testing that C_5 has five maximal independent sets.

        :param GraphInstance c5: fixture with C_5.
        :returns: None
        """
        actual = max_independent_sets(c5)

        assert actual == [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]

    @pytest.mark.parametrize(
        ('graph', 'expected'),
        [
            (cycle_graph(5), (2, (0, 2))),
            (complete_graph(4), (1, (0,))),
            (path_graph(5), (3, (0, 2, 4))),
            (GraphInstance(0, ()), (0, ())),
        ],
        ids=('C_5', 'K_4', 'Path', 'No vertices'),
    )
    def test_independence_number(
        self: Self,
        graph: GraphInstance,
        expected: tuple[int, tuple[int, ...]],
    ) -> None:
        """Testing size and first witness.

        :param GraphInstance graph: graph.
        :param tuple[int, tuple[int, ...]] expected: size and witness.
        :returns: None
        """
        assert independence_number(graph) == expected

    def test_petersen(self: Self, petersen: GraphInstance) -> None:
        """Testing that Petersen graph has independence number 4.

        :param GraphInstance petersen: fixture with Petersen graph.
        :returns: None
        """
        size, witness = independence_number(petersen)

        assert size == 4
        assert not any(
            u in witness and v in witness for u, v in petersen.edges
        )


class TestVertexTransitive:
    """Testing vertex transitivity."""

    @pytest.mark.parametrize(
        ('graph', 'expected'),
        [
            (cycle_graph(5), True),
            (complete_graph(4), True),
            (path_graph(3), False),
            (GraphInstance(1, ()), True),
        ],
        ids=('Cycle', 'Complete graph', 'Path', 'Single vertex'),
    )
    def test_small_graphs(
        self: Self,
        graph: GraphInstance,
        expected: bool,  # noqa: FBT001
    ) -> None:
        """Testing transitivity of small graphs.

        :param GraphInstance graph: graph.
        :param bool expected: expected answer.
        :returns: None
        """
        assert is_vertex_transitive(graph) is expected

    def test_petersen(self: Self, petersen: GraphInstance) -> None:
        """Testing that Petersen graph is vertex-transitive.

        :param GraphInstance petersen: fixture with Petersen graph.
        :returns: None
        """
        assert is_vertex_transitive(petersen)

    @pytest.mark.parametrize(
        'graph',
        [cycle_graph(5), cycle_graph(7), complete_graph(4), petersen_graph()],
        ids=('C_5', 'C_7', 'K_4', 'Petersen'),
    )
    def test_value_of_transitive_graph(
        self: Self,
        graph: GraphInstance,
    ) -> None:
        """Testing that transitive graph has value n / alpha.

        :param GraphInstance graph: vertex-transitive graph.
        :returns: None
        """
        alpha, _ = independence_number(graph)

        assert is_vertex_transitive(graph)
        assert fractional_chromatic(graph).value == Fraction(
            graph.vertices,
            alpha,
        )
