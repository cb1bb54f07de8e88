import logging
import math
from collections.abc import Sequence
from pathlib import Path

from src.decoration import (
    Decoration,
    full_decoration,
    partial_decoration,
    validate_decoration,
)
from src.enums import DecorationStrategy, InstanceKind, RuleKind
from src.exceptions import InstanceFormatError
from src.group import GroupCtx, GroupElement
from src.heuristics import hashmax_rule
from src.instances import (
    GraphInstance,
    SchreierInstance,
    complete_graph,
    cycle_graph,
    path_graph,
    petersen_graph,
    random_regular,
    schreier_graph,
    torus_instance,
)
from src.local_rule import ClopenSet
from src.schemas import CapsSettings
from src.serialization import (
    instance_from_data,
    parse_edge_list,
    read_json,
    read_text,
    rule_from_data,
)
from src.types import InstanceSpec

Source = SchreierInstance | Decoration


def parse_instance_spec(text: str) -> InstanceSpec:
    """Parse instance argument like "torus:1:5" or "file:path.json".

    :param str text: argument.
    :returns: InstanceSpec.
    """
    kind, _, rest = text.partition(':')
    if kind not in InstanceKind.__members__.values():
        msg = f'Unknown instance kind "{kind}" in "{text}"'
        raise InstanceFormatError('instance argument', (), msg)
    if kind in {InstanceKind.FILE, InstanceKind.GRAPH, InstanceKind.DECORATED}:
        return InstanceSpec(kind, (rest,))
    return InstanceSpec(kind, tuple(rest.split(':')) if rest else ())


def _int_params(spec: InstanceSpec, count: int) -> list[int]:
    if len(spec.params) != count or not all(
        param.isdigit() for param in spec.params
    ):
        msg = f'{spec!r} needs {count} integer parameters'
        raise InstanceFormatError('instance argument', (), msg)
    return [int(param) for param in spec.params]


def _named_graph(spec: InstanceSpec) -> GraphInstance | None:
    match spec.kind:
        case InstanceKind.CYCLE:
            return cycle_graph(*_int_params(spec, 1))
        case InstanceKind.PATH:
            return path_graph(*_int_params(spec, 1))
        case InstanceKind.COMPLETE:
            return complete_graph(*_int_params(spec, 1))
        case InstanceKind.PETERSEN:
            _int_params(spec, 0)
            return petersen_graph()
    return None


def load_graph(
    spec: InstanceSpec,
    seed: int,
    caps: CapsSettings,
) -> GraphInstance:
    """Build graph from instance argument.

    Torus gives its Schreier graph of standard generators, decoration file
    gives decorated graph.
    :param InstanceSpec spec: parsed argument.
    :param int seed: run seed.
    :param CapsSettings caps: caps settings.
    :returns: GraphInstance.
    """
    named = _named_graph(spec)
    if named is not None:
        return named
    match spec.kind:
        case InstanceKind.RANDOM:
            generators, vertices = _int_params(spec, 2)
            return random_regular(
                generators,
                vertices,
                seed,
                rejection_budget=caps.rejection_budget,
            )
        case InstanceKind.GRAPH:
            path = Path(spec.params[0])
            return parse_edge_list(read_text(path), str(path))
        case InstanceKind.DECORATED:
            return load_graph(parse_instance_spec(spec.params[0]), seed, caps)
    source = load_source(spec, seed, caps)
    if isinstance(source, Decoration):
        return source.graph
    return schreier_graph(source, source.ctx.generators())


def decorate(graph: GraphInstance) -> Decoration:
    """Decorate graph by ceil(max degree / 2) generators.

    :param GraphInstance graph: graph.
    :returns: full decoration for regular graph of even degree, Eulerian
     partial decoration otherwise.
    """
    generators = max(math.ceil(graph.max_degree / 2), 1)
    return partial_decoration(graph, generators, DecorationStrategy.EULERIAN)


def load_source(spec: InstanceSpec, seed: int, caps: CapsSettings) -> Source:
    """Build instance of synthesis from instance argument.

    Graphs are decorated, torus is taken with its own action.
    :param InstanceSpec spec: parsed argument.
    :param int seed: run seed.
    :param CapsSettings caps: caps settings.
    :returns: SchreierInstance or Decoration.
    """
    match spec.kind:
        case InstanceKind.TORUS:
            dimension, modulus = _int_params(spec, 2)
            return torus_instance(dimension, modulus)
        case InstanceKind.FILE:
            path = Path(spec.params[0])
            source = instance_from_data(read_json(path), str(path))
            if isinstance(source, Decoration):
                validate_decoration(source)
            return source
        case InstanceKind.RANDOM:
            return full_decoration(load_graph(spec, seed, caps))
    return decorate(load_graph(spec, seed, caps))


def source_ctx(source: Source) -> GroupCtx:
    """Get group acting on source.

    :param Source source: instance or decoration.
    :returns: GroupCtx.
    """
    if isinstance(source, Decoration):
        return GroupCtx.free(source.generators)
    return source.ctx


def load_rule(
    text: str,
    ctx: GroupCtx,
    forbidden: Sequence[GroupElement],
    caps: CapsSettings,
) -> ClopenSet:
    """Build clopen rule from argument "file:path" or "hashmax:r".

    :param str text: argument.
    :param GroupCtx ctx: group of rule.
    :param Sequence[GroupElement] forbidden: F of hash-max rule.
    :param CapsSettings caps: caps settings.
    :returns: ClopenSet.
    """
    kind, _, rest = text.partition(':')
    match kind:
        case RuleKind.FILE:
            path = Path(rest)
            return rule_from_data(read_json(path), ctx, str(path))
        case RuleKind.HASHMAX if rest.isdigit():
            logging.debug('Hash-max rule of radius %s', rest)
            return hashmax_rule(
                ctx,
                forbidden,
                int(rest),
                window_cap=caps.window_cap,
            )
    msg = f'Rule must be "file:path" or "hashmax:r", got "{text}"'
    raise InstanceFormatError('rule argument', (), msg)
