import json
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ValidationError

from src.constants import UNDEFINED
from src.decoration import Decoration
from src.exceptions import InstanceFormatError
from src.group import GroupCtx, GroupElement, Window
from src.instances import (
    GraphInstance,
    SchreierInstance,
    validate_torus_consistency,
)
from src.local_rule import ClopenSet
from src.schemas import ClopenSetFile, InstanceFile

EDGE_LIST_HEADER = '# vertices'


def dump_json(data: Any) -> str:  # noqa: ANN401
    """Dump data as canonical JSON text.

    Keys are sorted and indentation is fixed, so equal data gives byte
    identical text.
    :param Any data: JSON-friendly data.
    :returns: JSON text with trailing newline.
    """
    return json.dumps(data, sort_keys=True, indent=2) + '\n'


def read_text(path: Path) -> str:
    """Read input file, missing or unreadable file is malformed input.

    :param Path path: path to file.
    :returns: content of file.
    """
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as exc:
        raise InstanceFormatError(str(path), (), str(exc)) from exc
    return text


def read_json(path: Path) -> Any:  # noqa: ANN401
    """Read JSON file.

    :param Path path: path to file.
    :returns: parsed data.
    """
    text = read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(str(path), (), str(exc)) from exc
    return data


def _validate[Model: BaseModel](
    model: type[Model],
    data: Any,  # noqa: ANN401
    source: str,
) -> Model:
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise InstanceFormatError(source, exc.errors()) from exc


def _elements(
    ctx: GroupCtx,
    raw: Sequence[int | Sequence[int]],
    source: str,
    field: str = 'window',
) -> list[GroupElement]:
    elements = []
    for index, value in enumerate(raw):
        try:
            elements.append(ctx.element(value))
        except ValueError as exc:
            raise InstanceFormatError(
                source,
                (),
                f'{field}.{index}: {exc}',
            ) from exc
    return elements


def rule_from_data(
    data: Any,  # noqa: ANN401
    ctx: GroupCtx | None = None,
    source: str = 'rule',
) -> ClopenSet:
    """Create clopen rule from parsed JSON.

    :param Any data: parsed JSON.
    :param GroupCtx | None ctx: group of rule if file does not name it.
    :param str source: name of data for error messages.
    :returns: ClopenSet.
    """
    parsed = _validate(ClopenSetFile, data, source)
    if parsed.ctx is not None:
        own = GroupCtx.parse(parsed.ctx)
        if ctx is not None and own != ctx:
            msg = f'ctx: rule is for {own}, expected {ctx}'
            raise InstanceFormatError(source, (), msg)
        ctx = own
    if ctx is None:
        raise InstanceFormatError(source, (), 'ctx: group is not known')
    elements = _elements(ctx, parsed.window, source)
    if len(set(elements)) != len(elements):
        raise InstanceFormatError(source, (), 'window: elements repeat')
    window = Window.of(ctx, elements)
    # file order may differ from canonical one
    order = [window.index(element) for element in elements]
    patterns = [
        ''.join(pattern[order.index(i)] for i in range(len(window)))
        for pattern in parsed.patterns
    ]
    return ClopenSet.from_strings(window, patterns)


def rule_to_data(rule: ClopenSet) -> dict[str, Any]:
    """Convert clopen rule to JSON-friendly dict.

    :param ClopenSet rule: rule.
    :returns: dict.
    """
    return {
        'ctx': str(rule.ctx),
        'window': rule.window.to_json(),
        'patterns': rule.to_strings(),
    }


def _gen_maps(parsed: InstanceFile) -> tuple[tuple[int, ...], ...]:
    return tuple(
        tuple(UNDEFINED if image is None else image for image in mapping)
        for mapping in parsed.gen_maps
    )


def instance_from_data(
    data: Any,  # noqa: ANN401
    source: str = 'instance',
) -> SchreierInstance | Decoration:
    """Create instance or decoration from parsed JSON.

    :param Any data: parsed JSON.
    :param str source: name of data for error messages.
    :returns: SchreierInstance, or Decoration if data has edges.
    """
    parsed = _validate(InstanceFile, data, source)
    try:
        ctx = GroupCtx.parse(parsed.ctx)
    except ValueError as exc:
        raise InstanceFormatError(source, (), f'ctx: {exc}') from exc
    gen_maps = _gen_maps(parsed)
    if parsed.edges is not None:
        if ctx != GroupCtx.free(len(gen_maps)):
            msg = (
                f'ctx: decoration by {len(gen_maps)} maps acts by '
                f'{GroupCtx.free(len(gen_maps))}, not {ctx}'
            )
            raise InstanceFormatError(source, (), msg)
        graph = GraphInstance.from_edges(
            parsed.vertices,
            parsed.edges,
            multigraph=None,
        )
        certified = frozenset(parsed.certified or ())
        return Decoration(graph, gen_maps, certified)
    instance = SchreierInstance(
        ctx=ctx,
        vertices=parsed.vertices,
        gen_maps=gen_maps,
        seed=parsed.seed,
        provenance=source,
    )
    validate_torus_consistency(instance)
    return instance


def _maps_to_data(gen_maps: Sequence[Sequence[int]]) -> list[list[int | None]]:
    return [
        [None if image == UNDEFINED else image for image in mapping]
        for mapping in gen_maps
    ]


def instance_to_data(source: SchreierInstance | Decoration) -> dict[str, Any]:
    """Convert instance or decoration to JSON-friendly dict.

    :param SchreierInstance | Decoration source: object to convert.
    :returns: dict.
    """
    if isinstance(source, Decoration):
        return {
            'ctx': str(GroupCtx.free(source.generators)),
            'vertices': source.graph.vertices,
            'gen_maps': _maps_to_data(source.gen_maps),
            'edges': [list(edge) for edge in source.graph.edges],
            'certified': sorted(source.certified),
        }
    return {
        'ctx': str(source.ctx),
        'vertices': source.vertices,
        'gen_maps': _maps_to_data(source.gen_maps),
        'seed': source.seed,
    }


def parse_edge_list(text: str, source: str = 'edge list') -> GraphInstance:
    """Parse graph from lines "u v" with optional "# vertices N" header.

    Without header count of vertices is max label + 1. Other lines
    starting with "#" are comments.
    :param str text: text of edge list.
    :param str source: name of data for error messages.
    :returns: GraphInstance, multigraph if there are loops or parallel
     edges.
    """
    vertices, edges = None, []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith(EDGE_LIST_HEADER):
            header = stripped.removeprefix(EDGE_LIST_HEADER).strip()
            if not header.isdigit():
                msg = f'line {number}: wrong count of vertices {header!r}'
                raise InstanceFormatError(source, (), msg)
            vertices = int(header)
            continue
        if not stripped or stripped.startswith('#'):
            continue
        match stripped.split():
            case [u, v] if u.isdigit() and v.isdigit():
                edges.append((int(u), int(v)))
            case _:
                msg = f'line {number}: expected "u v", got {stripped!r}'
                raise InstanceFormatError(source, (), msg)
    if vertices is None:
        vertices = max((max(edge) for edge in edges), default=-1) + 1
    try:
        return GraphInstance.from_edges(vertices, edges, multigraph=None)
    except ValueError as exc:
        raise InstanceFormatError(source, (), str(exc)) from exc


def format_edge_list(graph: GraphInstance) -> str:
    """Format graph as edge list with header.

    :param GraphInstance graph: graph.
    :returns: text accepted by parse_edge_list.
    """
    lines = [f'{EDGE_LIST_HEADER} {graph.vertices}']
    lines.extend(f'{u} {v}' for u, v in graph.edges)
    return '\n'.join(lines) + '\n'


def parse_forbidden(text: str, ctx: GroupCtx) -> list[GroupElement]:
    """Parse set F from JSON list.

    Word "std" means standard generators. Integer item means one letter in
    free group or coordinate of one dimensional torus.
    :param str text: JSON list like "[1]" or "[[1, 0], [0, 1]]".
    :param GroupCtx ctx: group context.
    :returns: list of distinct elements in canonical order.
    """
    if text.strip() == 'std':
        return list(Window.of(ctx, ctx.generators()))
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError('F', (), str(exc)) from exc
    if not isinstance(raw, list):
        raise InstanceFormatError('F', (), 'F must be JSON list')
    return list(Window.of(ctx, _elements(ctx, raw, 'F', field='F')))
