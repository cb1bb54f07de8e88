from collections.abc import Callable
from pathlib import Path
from typing import Any, Self

import pytest

from src.decoration import Decoration
from src.exceptions import InstanceFormatError
from src.group import GroupCtx
from src.instances import SchreierInstance, cycle_graph, petersen_graph
from src.loaders import (
    decorate,
    load_graph,
    load_rule,
    load_source,
    parse_instance_spec,
    source_ctx,
)
from src.local_rule import ClopenSet
from src.schemas import CapsSettings
from src.serialization import format_edge_list, instance_to_data
from src.types import InstanceSpec


class TestParseInstanceSpec:
    """Testing parsing of instance argument."""

    @pytest.mark.parametrize(
        ('text', 'expected'),
        [
            ('torus:1:5', InstanceSpec('torus', ('1', '5'))),
            ('petersen', InstanceSpec('petersen', ())),
            ('file:a:b.json', InstanceSpec('file', ('a:b.json',))),
            (
                'decorated:cycle:7',
                InstanceSpec('decorated', ('cycle:7',)),
            ),
        ],
        ids=('Torus', 'No params', 'File with colon', 'Decorated'),
    )
    def test_parse(self: Self, text: str, expected: InstanceSpec) -> None:
        """Testing valid arguments.

        :param str text: argument.
        :param InstanceSpec expected: expected spec.
        :returns: None
        """
        assert parse_instance_spec(text) == expected

    def test_unknown_kind(self: Self) -> None:
        """Testing unknown instance kind.

        :returns: None
        """
        with pytest.raises(InstanceFormatError, match='Unknown instance'):
            _ = parse_instance_spec('bogus:1')


class TestLoadGraph:
    """Testing graphs built from arguments."""

    @pytest.mark.parametrize(
        ('text', 'vertices', 'edges'),
        [
            ('cycle:7', 7, 7),
            ('path:4', 4, 3),
            ('complete:5', 5, 10),
            ('petersen', 10, 15),
            ('torus:2:3', 9, 18),
            ('random:2:12', 12, 24),
            ('decorated:cycle:6', 6, 6),
        ],
        ids=(
            'Cycle',
            'Path',
            'Complete graph',
            'Petersen graph',
            'Torus',
            'Random regular',
            'Decorated cycle',
        ),
    )
    def test_named(
        self: Self,
        text: str,
        vertices: int,
        edges: int,
    ) -> None:
        """Testing sizes of built graphs.

        :param str text: argument.
        :param int vertices: expected count of vertices.
        :param int edges: expected count of edges.
        :returns: None
        """
        graph = load_graph(parse_instance_spec(text), 1, CapsSettings())

        assert graph.vertices == vertices
        assert len(graph.edges) == edges

    def test_edge_list_file(self: Self, tmp_path: Path) -> None:
        """Testing graph from edge list file.

        :param Path tmp_path: fixture with temporary directory.
        :returns: None
        """
        path = tmp_path / 'petersen.txt'
        path.write_text(format_edge_list(petersen_graph()), encoding='utf-8')

        graph = load_graph(
            parse_instance_spec(f'graph:{path}'),
            1,
            CapsSettings(),
        )

        assert graph == petersen_graph()

    @pytest.mark.parametrize(
        'text',
        ['cycle', 'cycle:x', 'torus:1', 'petersen:3'],
        ids=('No params', 'Not integer', 'Missing modulus', 'Extra param'),
    )
    def test_wrong_params(self: Self, text: str) -> None:
        """Testing arguments with wrong parameters.

        :param str text: argument.
        :returns: None
        """
        with pytest.raises(InstanceFormatError, match='integer parameters'):
            _ = load_graph(parse_instance_spec(text), 1, CapsSettings())


class TestLoadSource:
    """Testing instances of synthesis built from arguments."""

    def test_torus(self: Self) -> None:
        """Testing that torus keeps its own action.

        :returns: None
        """
        source = load_source(
            parse_instance_spec('torus:1:5'),
            1,
            CapsSettings(),
        )

        assert isinstance(source, SchreierInstance)
        assert source_ctx(source) == GroupCtx.torus(1, 5)

    @pytest.mark.parametrize(
        ('text', 'generators'),
        [('random:2:20', 2), ('cycle:8', 1), ('petersen', 2)],
        ids=('Random regular', 'Cycle', 'Petersen graph'),
    )
    def test_graphs_are_decorated(
        self: Self,
        text: str,
        generators: int,
    ) -> None:
        """Testing that graph arguments give decorations.

        :param str text: argument.
        :param int generators: expected count of generators.
        :returns: None
        """
        source = load_source(parse_instance_spec(text), 3, CapsSettings())

        assert isinstance(source, Decoration)
        assert source_ctx(source) == GroupCtx.free(generators)

    def test_decoration_file(
        self: Self,
        write_json: Callable[[str, Any], Path],
        c9_decoration: Decoration,
    ) -> None:
        """Testing decoration loaded from file.

        :param Callable[[str, Any], Path] write_json: fixture that writes
         JSON file.
        :param Decoration c9_decoration: fixture with decorated C_9.
        :returns: None
        """
        path = write_json('c9.json', instance_to_data(c9_decoration))

        source = load_source(
            parse_instance_spec(f'file:{path}'),
            1,
            CapsSettings(),
        )

        assert isinstance(source, Decoration)
        assert source.certified == c9_decoration.certified

    def test_decorate_cycle(self: Self) -> None:
        """Testing that even cycle is decorated fully by one generator.

        :returns: None
        """
        decoration = decorate(cycle_graph(8))

        assert decoration.generators == 1
        assert decoration.certified_fraction == 1


class TestLoadRule:
    """Testing rules built from arguments."""

    def test_hashmax(self: Self, free1: GroupCtx) -> None:
        """Testing hash-max rule argument.

        :param GroupCtx free1: fixture with free group of rank 1.
        :returns: None
        """
        rule = load_rule(
            'hashmax:0',
            free1,
            [free1.element(1)],
            CapsSettings(),
        )

        assert rule.to_strings() == ['100']

    def test_file(
        self: Self,
        write_json: Callable[[str, Any], Path],
        torus15: GroupCtx,
        c5_rule: ClopenSet,
    ) -> None:
        """Testing rule file argument.

        :param Callable[[str, Any], Path] write_json: fixture that writes
         JSON file.
        :param GroupCtx torus15: fixture with Z/5Z.
        :param ClopenSet c5_rule: fixture with rule on Z/5Z.
        :returns: None
        """
        path = write_json(
            'rule.json',
            {'window': [[0], [1]], 'patterns': ['10']},
        )

        rule = load_rule(f'file:{path}', torus15, [], CapsSettings())

        assert rule == c5_rule

    @pytest.mark.parametrize(
        'text',
        ['hashmax', 'hashmax:x', 'random:1'],
        ids=('No radius', 'Not integer', 'Unknown kind'),
    )
    def test_wrong(self: Self, free1: GroupCtx, text: str) -> None:
        """Testing wrong rule arguments.

        :param GroupCtx free1: fixture with free group of rank 1.
        :param str text: argument.
        :returns: None
        """
        with pytest.raises(InstanceFormatError, match='hashmax:r'):
            _ = load_rule(text, free1, [free1.element(1)], CapsSettings())
