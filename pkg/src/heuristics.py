import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from src.constants import MONTE_CARLO_BATCH
from src.dataclasses import DensityEstimate
from src.engine import ratio_for_rule
from src.enums import Stream
from src.exceptions import (
    EnumerationLimitError,
    IdentityInWindowError,
    InvariantViolationError,
)
from src.group import GroupCtx, GroupElement, Window, ball, inv
from src.instances import GraphInstance
from src.local_rule import ClopenSet, density
from src.rng import generator
from src.types import DensityRow
from src.utils import format_fraction


def _value(codes: np.ndarray, positions: Sequence[int]) -> np.ndarray:
    """Read bits at positions as big-endian number."""
    result = np.zeros_like(codes)
    for position in positions:
        result = (result << 1) | ((codes >> position) & 1)
    return result


def hashmax_rule(
    ctx: GroupCtx,
    forbidden: Sequence[GroupElement],
    radius: int,
    *,
    window_cap: int | None = None,
) -> ClopenSet:
    """Get clopen set of points whose local value beats every neighbor.

    Value of point at element c is number read from bits on ball B_r·c in
    canonical order of B_r, identity bit is most significant. Point is in
    set iff its value at identity is strictly greater than value at every
    c from F and F^-1, so set is F-independent.
    :param GroupCtx ctx: group context.
    :param Sequence[GroupElement] forbidden: F.
    :param int radius: r.
    :param int | None window_cap: maximal window size.
    :returns: ClopenSet.
    """
    if any(sigma.is_identity for sigma in forbidden):
        msg = 'Set F must not contain identity'
        raise IdentityInWindowError(msg)
    neighborhood = ball(ctx, radius)
    centers = Window.of(ctx, [*forbidden, *map(inv, forbidden)])
    window = neighborhood.union(
        *(neighborhood.translate(center) for center in centers),
    )
    if window_cap is not None and len(window) > window_cap:
        msg = f'Hash-max window of size {len(window)} exceeds {window_cap}'
        raise EnumerationLimitError(msg)
    codes = np.arange(1 << len(window), dtype=np.int64)
    own = _value(codes, [window.index(element) for element in neighborhood])
    winner = np.ones(codes.shape, dtype=bool)
    for center in centers:
        positions = [
            window.index(element * center) for element in neighborhood
        ]
        winner &= own > _value(codes, positions)
    rule = ClopenSet(window, frozenset(codes[winner].tolist()))
    logging.debug(
        'Hash-max rule of radius %d has density %s',
        radius,
        density(rule),
    )
    return rule


def _batch_hits(
    rule: ClopenSet,
    seed: int,
    batch: int,
    size: int,
) -> np.ndarray:
    rng = generator(seed, Stream.MONTE_CARLO, batch)
    bits = rng.integers(0, 2, size=(size, len(rule.window)), dtype=np.int64)
    codes = bits @ (np.int64(1) << np.arange(len(rule.window), dtype=np.int64))
    return np.isin(codes, rule.pattern_array())


def estimate_density(
    rule: ClopenSet,
    samples: int,
    seed: int,
    *,
    threads: int = 1,
) -> DensityEstimate:
    """Estimate Bernoulli(1/2) measure of clopen set by sampling.

    Samples are split in batches with own random streams, so the estimate
    does not depend on count of threads.
    :param ClopenSet rule: clopen set.
    :param int samples: count of samples.
    :param int seed: run seed.
    :param int threads: count of worker threads.
    :returns: DensityEstimate with standard error.
    """
    if samples < 1:
        msg = f'Count of samples must be positive, got {samples}'
        raise ValueError(msg)
    sizes = [
        min(MONTE_CARLO_BATCH, samples - start)
        for start in range(0, samples, MONTE_CARLO_BATCH)
    ]
    with ThreadPoolExecutor(max_workers=max(threads, 1)) as executor:
        hits = np.concatenate(
            list(
                executor.map(
                    lambda batch: _batch_hits(rule, seed, batch, sizes[batch]),
                    range(len(sizes)),
                ),
            ),
        )
    std = float(hits.std(ddof=1)) if samples > 1 else 0.0
    return DensityEstimate(
        mean=float(hits.mean()),
        std_error=std / math.sqrt(samples),
        samples=samples,
        seed=seed,
    )


def multiround_greedy(
    graph: GraphInstance,
    rounds: int,
    seed: int,
) -> tuple[frozenset[int], DensityEstimate]:
    """Build independent set by rounds of local minima of random labels.

    In every round each active vertex draws label, vertices with label
    below every active neighbor join the set and they and their neighbors
    become inactive. Labels of round t are drawn for all vertices from the
    same stream, so more rounds only extend the set.
    :param GraphInstance graph: simple graph.
    :param int rounds: count of rounds.
    :param int seed: run seed.
    :returns: independent set and its share of vertices.
    """
    if rounds < 1:
        msg = f'Count of rounds must be positive, got {rounds}'
        raise ValueError(msg)
    rng = generator(seed, Stream.MULTIROUND)
    edges = np.array(
        [edge for edge in graph.edges if edge.u != edge.v],
        dtype=np.int64,
    ).reshape(-1, 2)
    tails = np.concatenate((edges[:, 0], edges[:, 1]))
    heads = np.concatenate((edges[:, 1], edges[:, 0]))
    active = np.ones(graph.vertices, dtype=bool)
    chosen = np.zeros(graph.vertices, dtype=bool)
    for _ in range(rounds):
        labels = rng.random(graph.vertices)
        live = active[tails] & active[heads]
        lowest = np.full(graph.vertices, np.inf)
        np.minimum.at(lowest, tails[live], labels[heads[live]])
        winners = active & (labels < lowest)
        chosen |= winners
        active &= ~winners
        active[heads[winners[tails]]] = False
    if np.any(chosen[tails] & chosen[heads]):
        msg = 'Multiround greedy chose both ends of an edge'
        raise InvariantViolationError(msg)
    members = frozenset(np.flatnonzero(chosen).tolist())
    estimate = DensityEstimate(
        mean=len(members) / graph.vertices,
        std_error=0.0,
        samples=1,
        seed=seed,
    )
    return members, estimate


def rv_reference(degree: int) -> float | None:
    """Get asymptotic independence ratio log(d)/d of random d-regular graphs.

    :param int degree: d.
    :returns: log(d)/d for d >= 3, None otherwise.
    """
    if degree < 3:  # noqa: PLR2004
        return None
    return math.log(degree) / degree


def rule_row(
    rule_id: str,
    rule: ClopenSet,
    samples: int,
    seed: int,
    degree: int,
) -> DensityRow:
    """Get row of density report for clopen rule.

    :param str rule_id: name of rule.
    :param ClopenSet rule: clopen rule.
    :param int samples: count of samples.
    :param int seed: run seed.
    :param int degree: degree of Schreier graph of F.
    :returns: DensityRow.
    """
    estimate = estimate_density(rule, samples, seed)
    exact = density(rule)
    ratio = ratio_for_rule(rule)
    return DensityRow(
        rule_id=rule_id,
        instance_id='shift',
        d=degree,
        samples=samples,
        mean=estimate.mean,
        stderr=estimate.std_error,
        rv_reference=rv_reference(degree),
        engine_ratio_inverse=None if ratio is None else float(1 / ratio),
        exact_density=format_fraction(exact),
    )


def multiround_rows(
    instance_id: str,
    graph: GraphInstance,
    rounds: int,
    seeds: Sequence[int],
) -> list[DensityRow]:
    """Get rows of density report for multiround greedy, one per seed.

    :param str instance_id: name of graph.
    :param GraphInstance graph: graph.
    :param int rounds: count of rounds.
    :param Sequence[int] seeds: seeds of runs.
    :returns: list of DensityRow with share of chosen vertices.
    """
    rows = []
    for seed in seeds:
        _, estimate = multiround_greedy(graph, rounds, seed)
        rows.append(
            DensityRow(
                rule_id=f'multiround:{rounds}@{seed}',
                instance_id=instance_id,
                d=graph.max_degree,
                samples=estimate.samples,
                mean=estimate.mean,
                stderr=estimate.std_error,
                rv_reference=rv_reference(graph.max_degree),
                engine_ratio_inverse=None,
                exact_density=None,
            ),
        )
    return rows
