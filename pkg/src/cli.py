import csv
import datetime
import functools
import io
import logging
import sys
from collections.abc import Callable, Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

import click
from pydantic import ValidationError

from src.constants import CSV_HEADER
from src.decoration import (
    WeightedMeasure,
    full_decoration,
    partial_decoration,
)
from src.engine import (
    average_density_bound,
    synthesize,
    target_graph,
    verify,
    wraparound_risk,
)
from src.enums import DecorationStrategy, OutputFormat
from src.exceptions import InvariantViolationError, ShiftColoringError
from src.group import GroupCtx, GroupElement, inv
from src.heuristics import multiround_rows, rule_row
from src.instances import GraphInstance
from src.loaders import (
    load_graph,
    load_rule,
    load_source,
    parse_instance_spec,
    source_ctx,
)
from src.local_rule import ClopenSet, density, minimize_window, prune
from src.lp_oracle import (
    fractional_chromatic,
    independence_number,
    is_vertex_transitive,
    kfold_chromatic,
)
from src.schemas import (
    DecorationReport,
    OracleReport,
    Settings,
    SynthesisReport,
)
from src.serialization import (
    dump_json,
    format_edge_list,
    instance_to_data,
    parse_forbidden,
    read_json,
    rule_from_data,
    rule_to_data,
)
from src.settings import SETTINGS
from src.settings_parser import SettingsParser
from src.utils import format_fraction

EXIT_VERIFY_FAILED = 1
EXIT_PRECONDITION = 2


def handle_errors[**Params](
    command: Callable[Params, None],
) -> Callable[Params, None]:
    """Turn project errors into exit code 2 with message in log.

    :param Callable command: click command callback.
    :returns: wrapped callback.
    """

    @functools.wraps(command)
    def wrapper(*args: Params.args, **kwargs: Params.kwargs) -> None:
        try:
            command(*args, **kwargs)
        except (ShiftColoringError, ValidationError, ValueError) as exc:
            logging.error('%s', exc)  # noqa: TRY400
            sys.exit(EXIT_PRECONDITION)

    return wrapper


def emit(data: dict[str, Any], out: Path | None, *, timestamp: bool) -> None:
    """Write JSON report to file or stdout.

    :param dict[str, Any] data: report.
    :param Path | None out: output file, stdout if None.
    :param bool timestamp: add UTC timestamp.
    :returns: None
    """
    if timestamp:
        data['timestamp'] = datetime.datetime.now(tz=datetime.UTC).isoformat()
    else:
        data.pop('timestamp', None)
    text = dump_json(data)
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text, encoding='utf-8')
        logging.info('Report written to %s', out)


def _settings(
    context: click.Context,
    **overrides: Any,  # noqa: ANN401
) -> Settings:
    settings: Settings = context.obj
    caps = {key: overrides.pop(key) for key in ('n_cap',) if key in overrides}
    settings = SettingsParser.with_overrides(settings, 'caps', caps)
    return SettingsParser.with_overrides(settings, 'run', overrides)


def _forbidden(text: str | None, ctx: GroupCtx) -> list[GroupElement]:
    return [] if text is None else parse_forbidden(text, ctx)


out_option = click.option(
    '--out',
    type=click.Path(dir_okay=False, writable=True, path_type=Path),
    default=None,
    help='Output file. Default is stdout.',
)
no_timestamp_option = click.option(
    '--no-timestamp',
    is_flag=True,
    help='Do not add timestamp, so equal runs give byte identical reports.',
)
seed_option = click.option(
    '--seed',
    type=click.IntRange(min=0),
    default=None,
    help='Run seed. Default is taken from settings.',
)


@click.group(
    help=(
        'Toolkit for fractional colorings of Schreier graphs built from '
        'independent clopen sets of shift space.'
    ),
)
@click.option(
    '--config',
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help='Settings toml file. Default is settings.toml in working directory.',
)
@click.option('--verbose', '-v', is_flag=True, help='Show debug messages.')
@click.pass_context
@handle_errors
def cli(context: click.Context, config: Path | None, *, verbose: bool) -> None:
    """Load settings and set log level."""
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    context.obj = (
        SETTINGS
        if config is None
        else SettingsParser.load_settings_from_toml(path=config)
    )


def _synthesis_report(
    instance: str,
    rule_text: str,
    settings: Settings,
    *,
    prune_rule: bool,
    compact_colors: bool,
    allow_empty_f: bool,
    forbidden_text: str | None,
) -> tuple[dict[str, Any], bool]:
    caps, run = settings.caps, settings.run
    source = load_source(parse_instance_spec(instance), run.seed, caps)
    ctx = source_ctx(source)
    forbidden = _forbidden(forbidden_text, ctx)
    rule = load_rule(rule_text, ctx, forbidden, caps)
    if prune_rule:
        rule = prune(rule, forbidden, window_cap=caps.window_cap)
    coloring = synthesize(
        source,
        rule,
        forbidden,
        n_cap=caps.n_cap,
        window_cap=caps.window_cap,
        compact_colors=compact_colors,
        allow_empty_f=allow_empty_f,
        threads=run.threads,
    )
    graph = target_graph(source, forbidden)
    verification = verify(coloring, graph)
    measure = WeightedMeasure.uniform(graph.vertices)
    bound = average_density_bound(coloring, measure)
    diagnostics = coloring.diagnostics
    if diagnostics is None:
        msg = 'Synthesis must report diagnostics'
        raise InvariantViolationError(msg)
    ratio = coloring.ratio
    report = SynthesisReport(
        instance=instance,
        rule=rule_text,
        ctx=str(ctx),
        forbidden=[sigma.to_json() for sigma in forbidden],
        seed=run.seed,
        window_size=len(rule.window),
        pattern_count=len(rule.patterns),
        rule_density=format_fraction(density(rule)),
        palette_bound=diagnostics.palette_bound,
        colors_used=diagnostics.colors_used,
        palette=diagnostics.palette,
        ell=coloring.sets,
        k=coloring.fold,
        ratio=None if ratio is None else format_fraction(ratio),
        ratio_decimal=None if ratio is None else float(ratio),
        vertices=coloring.vertices,
        domain_size=len(coloring.domain),
        domain_fraction=format_fraction(
            Fraction(len(coloring.domain), max(coloring.vertices, 1)),
        ),
        non_free_vertices=diagnostics.non_free_vertices,
        wraparound_risk=wraparound_risk(graph, rule.window, forbidden),
        verified=verification.passed,
        failure=verification.failure,
        counterexample=verification.counterexample,
        average_density=format_fraction(bound.average),
        best_set=bound.best_index,
        best_set_mass=format_fraction(bound.best_mass),
        set_members=(
            [coloring.members(index) for index in range(coloring.sets)]
            if coloring.sets <= caps.set_output_threshold
            else None
        ),
    )
    return report.model_dump(mode='json'), verification.passed


@cli.command(help='Build k-fold coloring from clopen rule and verify it.')
@click.option(
    '--instance',
    required=True,
    help=(
        'Instance: torus:d:m, random:n:V, cycle:n, path:n, complete:n, '
        'petersen, graph:PATH, file:PATH or decorated:<graph instance>.'
    ),
)
@click.option(
    '--rule',
    'rule_text',
    required=True,
    help='file:PATH or hashmax:r.',
)
@click.option(
    '--F',
    'forbidden_text',
    default=None,
    help='JSON list of forbidden shifts, or "std" for standard generators.',
)
@click.option('--prune', 'prune_rule', is_flag=True, help='Prune rule by F.')
@click.option('--compact-colors', is_flag=True, help='Use only colors used.')
@click.option(
    '--allow-empty-f',
    is_flag=True,
    help='Accept empty F, every rule is independent then.',
)
@click.option('--threads', type=click.IntRange(min=1), default=None)
@click.option('--n-cap', type=click.IntRange(min=1), default=None)
@seed_option
@out_option
@no_timestamp_option
@click.pass_context
@handle_errors
def synth(  # noqa: PLR0913
    context: click.Context,
    instance: str,
    rule_text: str,
    forbidden_text: str | None,
    threads: int | None,
    n_cap: int | None,
    seed: int | None,
    out: Path | None,
    *,
    prune_rule: bool,
    compact_colors: bool,
    allow_empty_f: bool,
    no_timestamp: bool,
) -> None:
    """Synthesize and verify coloring."""
    settings = _settings(context, n_cap=n_cap, threads=threads, seed=seed)
    report, passed = _synthesis_report(
        instance,
        rule_text,
        settings,
        prune_rule=prune_rule,
        compact_colors=compact_colors,
        allow_empty_f=allow_empty_f,
        forbidden_text=forbidden_text,
    )
    emit(report, out, timestamp=not no_timestamp)
    if not passed:
        sys.exit(EXIT_VERIFY_FAILED)


def _oracle_report(
    instance: str,
    graph: GraphInstance,
    max_fold: int,
    settings: Settings,
) -> dict[str, Any]:
    cap = settings.caps.lp_vertex_cap
    result = fractional_chromatic(graph, cap)
    alpha, witness = independence_number(graph, cap)
    transitive = (
        is_vertex_transitive(graph, settings.caps.transitivity_vertex_cap)
        if graph.vertices <= settings.caps.transitivity_vertex_cap
        else None
    )
    report = OracleReport(
        instance=instance,
        vertices=graph.vertices,
        edges=len(graph.edges),
        fractional_chromatic=format_fraction(result.value),
        fractional_chromatic_decimal=float(result.value),
        support=[
            (list(members), format_fraction(weight))
            for members, weight in result.support
        ],
        clique_weights=list(map(format_fraction, result.clique_weights)),
        certificate=result.certificate_kind,
        independence_number=alpha,
        maximum_independent_set=list(witness),
        kfold_chromatic={
            str(fold): kfold_chromatic(graph, fold, cap).sets
            for fold in range(1, max_fold + 1)
        },
        vertex_transitive=transitive,
    )
    return report.model_dump(mode='json')


@cli.command(help='Compute exact fractional and k-fold chromatic numbers.')
@click.option('--instance', required=True, help='Graph instance.')
@click.option('--max-fold', type=click.IntRange(min=1), default=2)
@seed_option
@out_option
@no_timestamp_option
@click.pass_context
@handle_errors
def oracle(
    context: click.Context,
    instance: str,
    max_fold: int,
    seed: int | None,
    out: Path | None,
    *,
    no_timestamp: bool,
) -> None:
    """Run exact oracle."""
    settings = _settings(context, seed=seed)
    graph = load_graph(
        parse_instance_spec(instance),
        settings.run.seed,
        settings.caps,
    )
    report = _oracle_report(instance, graph, max_fold, settings)
    emit(report, out, timestamp=not no_timestamp)


@cli.command(help='Decorate graph by partial injections.')
@click.option('--instance', required=True, help='Graph instance.')
@click.option('--generators', type=click.IntRange(min=1), default=None)
@click.option(
    '--strategy',
    type=click.Choice([strategy.value for strategy in DecorationStrategy]),
    default=DecorationStrategy.GREEDY.value,
)
@click.option('--full', is_flag=True, help='Require full decoration.')
@click.option(
    '--edges-out',
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help='Also write decorated graph as edge list, for graph:PATH.',
)
@seed_option
@out_option
@no_timestamp_option
@click.pass_context
@handle_errors
def decorate(  # noqa: PLR0913
    context: click.Context,
    instance: str,
    generators: int | None,
    strategy: str,
    seed: int | None,
    out: Path | None,
    edges_out: Path | None,
    *,
    full: bool,
    no_timestamp: bool,
) -> None:
    """Decorate graph."""
    settings = _settings(context, seed=seed)
    graph = load_graph(
        parse_instance_spec(instance),
        settings.run.seed,
        settings.caps,
    )
    count = generators or max((graph.max_degree + 1) // 2, 1)
    decoration = (
        full_decoration(graph)
        if full
        else partial_decoration(graph, count, DecorationStrategy(strategy))
    )
    fraction = decoration.certified_fraction
    report = DecorationReport(
        instance=instance,
        generators=decoration.generators,
        strategy='full' if full else strategy,
        vertices=graph.vertices,
        certified_fraction=format_fraction(fraction),
        certified_fraction_decimal=float(fraction),
        decoration=instance_to_data(decoration),
    )
    emit(report.model_dump(mode='json'), out, timestamp=not no_timestamp)
    if edges_out is not None:
        edges_out.write_text(format_edge_list(graph), encoding='utf-8')
        logging.info('Edge list written to %s', edges_out)


def _write_rows(rows: Sequence[tuple[Any, ...]], out: Path | None) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(CSV_HEADER)
    writer.writerows(
        ['' if value is None else value for value in row] for row in rows
    )
    if out is None:
        click.echo(buffer.getvalue(), nl=False)
    else:
        out.write_text(buffer.getvalue(), encoding='utf-8')
        logging.info('Report written to %s', out)


@cli.command(
    name='density',
    help='Estimate densities of independent sets by sampling.',
)
@click.option('--ctx', 'ctx_text', default='free:2', help='Group of rules.')
@click.option('--F', 'forbidden_text', default='std', help='Forbidden shifts.')
@click.option('--rule', 'rules', multiple=True, help='file:PATH or hashmax:r.')
@click.option('--instance', 'instances', multiple=True, help='Graph instance.')
@click.option('--rounds', type=click.IntRange(min=1), default=3)
@click.option('--runs', type=click.IntRange(min=1), default=10)
@click.option('--samples', type=click.IntRange(min=1), default=None)
@click.option(
    '--format',
    'output_format',
    type=click.Choice([output.value for output in OutputFormat]),
    default=OutputFormat.CSV.value,
)
@seed_option
@out_option
@click.pass_context
@handle_errors
def density_report(  # noqa: PLR0913
    context: click.Context,
    ctx_text: str,
    forbidden_text: str,
    rules: Sequence[str],
    instances: Sequence[str],
    rounds: int,
    runs: int,
    samples: int | None,
    output_format: str,
    seed: int | None,
    out: Path | None,
) -> None:
    """Write density report."""
    settings = _settings(context, samples=samples, seed=seed)
    run = settings.run
    ctx = GroupCtx.parse(ctx_text)
    forbidden = parse_forbidden(forbidden_text, ctx)
    degree = len({*forbidden, *map(inv, forbidden)})
    rows = [
        rule_row(
            text,
            load_rule(text, ctx, forbidden, settings.caps),
            run.samples,
            run.seed,
            degree,
        )
        for text in rules
    ]
    seeds = [run.seed + offset for offset in range(runs)]
    for text in instances:
        graph = load_graph(parse_instance_spec(text), run.seed, settings.caps)
        rows.extend(multiround_rows(text, graph, rounds, seeds))
    if output_format == OutputFormat.CSV:
        _write_rows(rows, out)
    else:
        emit({'rows': [row._asdict() for row in rows]}, out, timestamp=False)


def _load_file_rule(text: str, ctx_text: str | None) -> ClopenSet:
    ctx = None if ctx_text is None else GroupCtx.parse(ctx_text)
    path = Path(text.removeprefix('file:'))
    return rule_from_data(read_json(path), ctx, str(path))


@cli.command(name='prune', help='Make rule independent by pruning.')
@click.option('--rule', 'rule_text', required=True, help='Rule file.')
@click.option('--ctx', 'ctx_text', default=None, help='Group of rule.')
@click.option('--F', 'forbidden_text', required=True, help='Forbidden shifts.')
@out_option
@click.pass_context
@handle_errors
def prune_command(
    context: click.Context,
    rule_text: str,
    ctx_text: str | None,
    forbidden_text: str,
    out: Path | None,
) -> None:
    """Prune rule."""
    settings: Settings = context.obj
    rule = _load_file_rule(rule_text, ctx_text)
    pruned = prune(
        rule,
        parse_forbidden(forbidden_text, rule.ctx),
        window_cap=settings.caps.window_cap,
    )
    data = rule_to_data(pruned)
    data['density'] = format_fraction(density(pruned))
    data['initial_density'] = format_fraction(density(rule))
    emit(data, out, timestamp=False)


@cli.command(
    name='minimize-window',
    help='Remove coordinates that never change membership of rule.',
)
@click.option('--rule', 'rule_text', required=True, help='Rule file.')
@click.option('--ctx', 'ctx_text', default=None, help='Group of rule.')
@out_option
@handle_errors
def minimize_window_command(
    rule_text: str,
    ctx_text: str | None,
    out: Path | None,
) -> None:
    """Minimize window of rule."""
    rule = _load_file_rule(rule_text, ctx_text)
    minimized = minimize_window(rule)
    data = rule_to_data(minimized)
    data['initial_window_size'] = len(rule.window)
    emit(data, out, timestamp=False)
