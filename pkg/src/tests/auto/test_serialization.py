from collections.abc import Callable
from pathlib import Path
from typing import Any, Self

import pytest

from src.constants import UNDEFINED
from src.decoration import Decoration
from src.exceptions import InconsistentActionError, InstanceFormatError
from src.group import GroupCtx
from src.instances import SchreierInstance, cycle_graph, torus_instance
from src.local_rule import ClopenSet
from src.serialization import (
    dump_json,
    format_edge_list,
    instance_from_data,
    instance_to_data,
    parse_edge_list,
    parse_forbidden,
    read_json,
    rule_from_data,
    rule_to_data,
)


class TestRuleFiles:
    """Testing rule files."""

    def test_reordered_window(self: Self, c5_rule: ClopenSet) -> None:
        """Testing that patterns follow canonical order of window.

        :param ClopenSet c5_rule: fixture with rule {x(0)=1, x(1)=0}.
        :returns: None
        """
        data = {'ctx': 'torus:1:5', 'window': [[1], [0]], 'patterns': ['01']}

        rule = rule_from_data(data)

        assert rule == c5_rule
        assert rule_to_data(rule) == {
            'ctx': 'torus:1:5',
            'window': [[0], [1]],
            'patterns': ['10'],
        }

    def test_ctx_from_argument(self: Self, free1: GroupCtx) -> None:
        """Testing rule file without group.

        :param GroupCtx free1: fixture with free group of rank 1.
        :returns: None
        """
        data = {'window': [[], [1]], 'patterns': ['10', '11']}

        rule = rule_from_data(data, free1)

        assert rule.ctx == free1
        assert len(rule.patterns) == 2

    @pytest.mark.parametrize(
        ('data', 'ctx', 'match'),
        [
            (
                {'ctx': 'free:1', 'window': [[]], 'patterns': ['1']},
                GroupCtx.free(2),
                'rule is for free:1',
            ),
            ({'window': [[]], 'patterns': ['1']}, None, 'not known'),
            (
                {'ctx': 'free:1', 'window': [[], [1]], 'patterns': ['1']},
                None,
                'length 2',
            ),
            (
                {'ctx': 'free:1', 'window': [[]], 'patterns': ['2']},
                None,
                'only "0" and "1"',
            ),
            (
                {'ctx': 'free:1', 'window': [[1], [1]], 'patterns': []},
                None,
                'repeat',
            ),
            (
                {'ctx': 'free:1', 'window': [[3]], 'patterns': []},
                None,
                'window.0',
            ),
            (
                {'ctx': 'free:1', 'window': [], 'patterns': [], 'extra': 1},
                None,
                'extra',
            ),
        ],
        ids=(
            'Other group',
            'Unknown group',
            'Short pattern',
            'Wrong alphabet',
            'Repeated element',
            'Wrong letter',
            'Extra field',
        ),
    )
    def test_malformed(
        self: Self,
        data: dict[str, Any],
        ctx: GroupCtx | None,
        match: str,
    ) -> None:
        """Testing malformed rule files.

        :param dict[str, Any] data: parsed JSON.
        :param GroupCtx | None ctx: expected group.
        :param str match: part of expected message.
        :returns: None
        """
        with pytest.raises(InstanceFormatError, match=match):
            _ = rule_from_data(data, ctx)


class TestInstanceFiles:
    """Testing instance and decoration files."""

    def test_instance(
        self: Self,
        torus15_instance: SchreierInstance,
    ) -> None:
        """Testing instance data in both directions.

        :param SchreierInstance torus15_instance: fixture with Z/5Z.
        :returns: None
        """
        data = instance_to_data(torus15_instance)

        actual = instance_from_data(data)

        assert data['gen_maps'] == [[1, 2, 3, 4, 0]]
        assert isinstance(actual, SchreierInstance)
        assert actual.gen_maps == torus15_instance.gen_maps

    def test_decoration(self: Self, c9_decoration: Decoration) -> None:
        """Testing that undefined images are written as null.

        :param Decoration c9_decoration: fixture with decorated C_9.
        :returns: None
        """
        data = instance_to_data(c9_decoration)

        actual = instance_from_data(data)

        assert data['ctx'] == 'free:1'
        assert data['gen_maps'][0][-1] is None
        assert data['certified'] == list(range(1, 8))
        assert isinstance(actual, Decoration)
        assert actual.gen_maps[0][-1] == UNDEFINED
        assert actual.certified == c9_decoration.certified

    @pytest.mark.parametrize(
        ('data', 'match'),
        [
            (
                {'ctx': 'free:1', 'vertices': 3, 'gen_maps': [[1, 2]]},
                'must have 3 entries',
            ),
            (
                {'ctx': 'free:1', 'vertices': 2, 'gen_maps': [[1, 5]]},
                'below 2',
            ),
            (
                {
                    'ctx': 'free:1',
                    'vertices': 2,
                    'gen_maps': [[1, 0]],
                    'edges': [[0, 1]],
                },
                'both "edges" and "certified"',
            ),
            (
                {'ctx': 'ring:1', 'vertices': 2, 'gen_maps': [[1, 0]]},
                'ctx',
            ),
            (
                {
                    'ctx': 'free:2',
                    'vertices': 2,
                    'gen_maps': [[1, 0]],
                    'edges': [[0, 1]],
                    'certified': [],
                },
                'decoration by 1 maps acts by free:1',
            ),
            ({'vertices': 2, 'gen_maps': []}, 'ctx'),
        ],
        ids=(
            'Short map',
            'Image out of range',
            'Edges without certified',
            'Unknown group',
            'Decoration of other rank',
            'No group',
        ),
    )
    def test_malformed(self: Self, data: dict[str, Any], match: str) -> None:
        """Testing malformed instance files.

        :param dict[str, Any] data: parsed JSON.
        :param str match: part of expected message.
        :returns: None
        """
        with pytest.raises(InstanceFormatError, match=match):
            _ = instance_from_data(data)

    def test_inconsistent_torus(self: Self) -> None:
        """Testing torus file with map of wrong order.

        :returns: None
        """
        data = {'ctx': 'torus:1:3', 'vertices': 3, 'gen_maps': [[1, 0, 2]]}

        with pytest.raises(InconsistentActionError):
            _ = instance_from_data(data)

    def test_read_json(
        self: Self,
        write_json: Callable[[str, Any], Path],
        tmp_path: Path,
    ) -> None:
        """Testing reading of valid JSON and of broken or missing file.

        :param Callable[[str, Any], Path] write_json: fixture that writes
         JSON file.
        :param Path tmp_path: fixture with temporary directory.
        :returns: None
        """
        data = instance_to_data(torus_instance(1, 3))
        path = write_json('instance.json', data)
        broken = tmp_path / 'broken.json'
        broken.write_text('{"ctx":', encoding='utf-8')

        assert read_json(path)['ctx'] == 'torus:1:3'
        with pytest.raises(InstanceFormatError, match='broken.json'):
            _ = read_json(broken)
        with pytest.raises(InstanceFormatError, match='missing.json'):
            _ = read_json(tmp_path / 'missing.json')

    def test_dump_json_is_canonical(self: Self) -> None:
        """Testing that key order does not change text.

        :returns: None
        """
        assert dump_json({'b': 1, 'a': [1]}) == dump_json({'a': [1], 'b': 1})
        assert dump_json({}).endswith('\n')


class TestEdgeList:
    """Testing edge list files."""

    def test_header_and_comments(self: Self) -> None:
        """Testing header with isolated vertex and comments.

        :returns: None
        """
        text = '# vertices 4\n# triangle\n0 1\n\n1 2\n2 0\n'

        graph = parse_edge_list(text)

        assert graph.vertices == 4
        assert graph.edges == ((0, 1), (0, 2), (1, 2))
        assert parse_edge_list(format_edge_list(graph)) == graph

    def test_without_header(self: Self) -> None:
        """Testing that count of vertices is max label + 1.

        :returns: None
        """
        graph = parse_edge_list('0 1\n1 2\n2 3\n3 4\n4 0\n')

        assert graph == cycle_graph(5)

    def test_multigraph(self: Self) -> None:
        """Testing that parallel edges give multigraph.

        :returns: None
        """
        graph = parse_edge_list('0 1\n1 0\n')

        assert graph.multigraph
        assert len(graph.edges) == 2

    @pytest.mark.parametrize(
        ('text', 'match'),
        [
            ('0 1\n1 x\n', 'line 2'),
            ('0 1 2\n', 'line 1'),
            ('# vertices many\n', 'line 1: wrong count'),
            ('# vertices 2\n0 5\n', 'Wrong edge'),
        ],
        ids=('Not integer', 'Three labels', 'Wrong header', 'Label too big'),
    )
    def test_malformed(self: Self, text: str, match: str) -> None:
        """Testing malformed edge lists.

        :param str text: edge list.
        :param str match: part of expected message.
        :returns: None
        """
        with pytest.raises(InstanceFormatError, match=match):
            _ = parse_edge_list(text)


class TestParseForbidden:
    """Testing parsing of set F."""

    def test_standard(self: Self, free2: GroupCtx) -> None:
        """Testing standard generators.

        :param GroupCtx free2: fixture with free group of rank 2.
        :returns: None
        """
        assert parse_forbidden('std', free2) == list(free2.generators())

    def test_list(self: Self) -> None:
        """Testing vectors of torus.

        :returns: None
        """
        ctx = GroupCtx.torus(2, 5)

        actual = parse_forbidden('[[0, 1], [1, 0], [1, 0]]', ctx)

        assert [element.letters for element in actual] == [(0, 1), (1, 0)]

    def test_integer_items(self: Self, torus15: GroupCtx) -> None:
        """Testing integer items.

        :param GroupCtx torus15: fixture with Z/5Z.
        :returns: None
        """
        assert parse_forbidden('[1]', torus15) == [torus15.element(1)]

    @pytest.mark.parametrize(
        ('text', 'match'),
        [('oops', 'Malformed F'), ('{}', 'JSON list'), ('[[1, 2]]', 'F.0')],
        ids=('Not JSON', 'Not list', 'Wrong vector'),
    )
    def test_malformed(
        self: Self,
        torus15: GroupCtx,
        text: str,
        match: str,
    ) -> None:
        """Testing malformed F.

        :param GroupCtx torus15: fixture with Z/5Z.
        :param str text: raw F.
        :param str match: part of expected message.
        :returns: None
        """
        with pytest.raises(InstanceFormatError, match=match):
            _ = parse_forbidden(text, torus15)
