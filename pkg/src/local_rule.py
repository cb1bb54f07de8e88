import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Self

import numpy as np

from src.dataclasses import DensityLossReport, IndependenceReport
from src.exceptions import (
    ContextMismatchError,
    EnumerationLimitError,
    IdentityInWindowError,
    InvariantViolationError,
)
from src.group import GroupCtx, GroupElement, Window
from src.utils import bits_to_string, string_to_bits


@dataclass(frozen=True)
class ClopenSet:
    """Clopen subset of shift space 2^Gamma given by local rule.

    Point x is in set iff pattern of x on window is in patterns. Pattern is
    integer, bit i is value of x at i-th element of window.
    """

    window: Window
    patterns: frozenset[int]

    def __post_init__(self: Self) -> None:
        """Check that all patterns fit the window.

        :returns: None
        """
        limit = 1 << len(self.window)
        if any(not 0 <= pattern < limit for pattern in self.patterns):
            msg = f'Patterns must be in range [0, {limit})'
            raise ValueError(msg)

    @property
    def ctx(self: Self) -> GroupCtx:
        """Get group context.

        :returns: GroupCtx of window.
        """
        return self.window.ctx

    @classmethod
    def from_strings(
        cls: type[Self],
        window: Window,
        patterns: Iterable[str],
    ) -> Self:
        """Create set from strings of "0" and "1".

        :param Window window: window of set.
        :param Iterable[str] patterns: strings, character i is bit i.
        :returns: ClopenSet.
        """
        codes = set()
        for pattern in patterns:
            if len(pattern) != len(window):
                msg = (
                    f'Pattern {pattern!r} must have length {len(window)}'
                )
                raise ValueError(msg)
            codes.add(string_to_bits(pattern))
        return cls(window, frozenset(codes))

    @classmethod
    def cylinder(
        cls: type[Self],
        ctx: GroupCtx,
        assignment: Mapping[GroupElement, int],
    ) -> Self:
        """Create cylinder set {x : x(g) = b for every g -> b}.

        :param GroupCtx ctx: group context.
        :param Mapping[GroupElement, int] assignment: fixed values.
        :returns: ClopenSet.
        """
        window = Window.of(ctx, assignment)
        code = sum(
            (bit & 1) << window.index(element)
            for element, bit in assignment.items()
        )
        return cls(window, frozenset({code}))

    def to_strings(self: Self) -> list[str]:
        """Convert patterns to sorted strings.

        :returns: list of pattern strings.
        """
        return [
            bits_to_string(code, len(self.window))
            for code in sorted(self.patterns)
        ]

    def contains(self: Self, point: Mapping[GroupElement, int]) -> bool:
        """Check that point belongs to set.

        :param Mapping[GroupElement, int] point: values of point, at least on
         window.
        :returns: True if point belongs to set.
        """
        code = sum(
            (point[element] & 1) << i for i, element in enumerate(self.window)
        )
        return code in self.patterns

    def pattern_array(self: Self) -> np.ndarray:
        """Get sorted patterns as numpy array.

        :returns: int64 array.
        """
        return np.array(sorted(self.patterns), dtype=np.int64)


def density(clopen: ClopenSet) -> Fraction:
    """Get exact Bernoulli(1/2) measure of set.

    :param ClopenSet clopen: set.
    :returns: |patterns| / 2^|window|.
    """
    return Fraction(len(clopen.patterns), 1 << len(clopen.window))


def _check_cap(window: Window, window_cap: int | None) -> None:
    if window_cap is not None and len(window) > window_cap:
        msg = (
            f'Window of size {len(window)} exceeds enumeration cap '
            f'{window_cap}'
        )
        raise EnumerationLimitError(msg)


def _check_forbidden(
    clopen: ClopenSet,
    forbidden: Iterable[GroupElement],
) -> None:
    for sigma in forbidden:
        if sigma.ctx != clopen.ctx:
            msg = f'Element {sigma!r} is not in {clopen.ctx}'
            raise ContextMismatchError(msg)
        if sigma.is_identity:
            msg = 'Set of forbidden shifts must not contain identity'
            raise IdentityInWindowError(msg)


def _positions(sub: Window, sup: Window) -> np.ndarray:
    return np.array([sup.index(element) for element in sub], dtype=np.int64)


def _spread(codes: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Move bit i of every code to bit positions[i]."""
    result = np.zeros_like(codes)
    for i, position in enumerate(positions):
        result |= ((codes >> i) & 1) << position
    return result


def _project(codes: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Collect bit positions[i] of every code to bit i."""
    result = np.zeros_like(codes)
    for i, position in enumerate(positions):
        result |= ((codes >> position) & 1) << i
    return result


def lift(clopen: ClopenSet, window: Window) -> np.ndarray:
    """Get all patterns on bigger window of points from set.

    :param ClopenSet clopen: set.
    :param Window window: window that contains window of set.
    :returns: sorted int64 array of patterns on window.
    """
    own = _positions(clopen.window, window)
    free = np.setdiff1d(np.arange(len(window), dtype=np.int64), own)
    base = _spread(clopen.pattern_array(), own)
    fillers = _spread(np.arange(1 << len(free), dtype=np.int64), free)
    return np.sort((base[:, None] | fillers[None, :]).ravel())


def shift_pullback(clopen: ClopenSet, sigma: GroupElement) -> ClopenSet:
    """Get set {x : sigma·x in clopen}.

    Shift acts by (g·x)(d) = x(d·g), so the result reads x on window D·sigma:
    bit of element d of window moves to element d·sigma.
    :param ClopenSet clopen: set with window D.
    :param GroupElement sigma: shift.
    :returns: ClopenSet on window D·sigma.
    """
    window = clopen.window.translate(sigma)
    targets = np.array(
        [window.index(delta * sigma) for delta in clopen.window],
        dtype=np.int64,
    )
    moved = _spread(clopen.pattern_array(), targets)
    return ClopenSet(window, frozenset(int(code) for code in moved))


def _overlap_witness(
    clopen: ClopenSet,
    pulled: ClopenSet,
    window: Window,
) -> int | None:
    own = _positions(clopen.window, window)
    other = _positions(pulled.window, window)
    common = np.intersect1d(own, other)
    own_codes = _spread(clopen.pattern_array(), own)
    other_codes = _spread(pulled.pattern_array(), other)
    by_overlap = dict(
        zip(
            _project(own_codes, common).tolist(),
            own_codes.tolist(),
            strict=True,
        ),
    )
    for overlap, code in zip(
        _project(other_codes, common).tolist(),
        other_codes.tolist(),
        strict=True,
    ):
        if overlap in by_overlap:
            return by_overlap[overlap] | code
    return None


def is_independent(
    clopen: ClopenSet,
    forbidden: Sequence[GroupElement],
    *,
    window_cap: int | None = None,
) -> IndependenceReport:
    """Check that clopen set is F-independent.

    Set I is F-independent iff for every sigma in F no point x has both x
    and sigma·x in I. Check compares patterns of I and of its pullback by
    sigma on their common coordinates.
    :param ClopenSet clopen: set to check.
    :param Sequence[GroupElement] forbidden: F, finite set without identity.
    :param int | None window_cap: maximal size of joint window.
    :returns: IndependenceReport with first counterexample in canonical
     order of F.
    """
    _check_forbidden(clopen, forbidden)
    for sigma in sorted(set(forbidden), key=GroupElement.sort_key):
        pulled = shift_pullback(clopen, sigma)
        window = clopen.window.union(pulled.window)
        _check_cap(window, window_cap)
        witness = _overlap_witness(clopen, pulled, window)
        if witness is not None:
            point = {
                element: (witness >> i) & 1
                for i, element in enumerate(window)
            }
            logging.debug('Set is not independent for shift %r', sigma)
            return IndependenceReport(
                independent=False,
                sigma=sigma,
                witness=point,
            )
    return IndependenceReport(independent=True)


def _buffer(window: Window, forbidden: Sequence[GroupElement]) -> Window:
    return window.union(*(window.translate(sigma) for sigma in forbidden))


def prune(
    clopen: ClopenSet,
    forbidden: Sequence[GroupElement],
    *,
    window_cap: int | None = None,
) -> ClopenSet:
    """Remove from set every point x with sigma·x in set for some sigma.

    Result C minus union of pullbacks is F-independent for every C.
    :param ClopenSet clopen: set C.
    :param Sequence[GroupElement] forbidden: F, finite set without identity.
    :param int | None window_cap: maximal size of result window.
    :returns: ClopenSet on window D with all D·sigma.
    """
    _check_forbidden(clopen, forbidden)
    window = _buffer(clopen.window, forbidden)
    _check_cap(window, window_cap)
    codes = lift(clopen, window)
    keep = np.ones(codes.shape, dtype=bool)
    for sigma in forbidden:
        pulled = shift_pullback(clopen, sigma)
        projected = _project(codes, _positions(pulled.window, window))
        keep &= ~np.isin(projected, pulled.pattern_array())
    pruned = ClopenSet(window, frozenset(codes[keep].tolist()))
    logging.debug(
        'Pruned set density %s -> %s',
        density(clopen),
        density(pruned),
    )
    return pruned


def density_loss_check(
    independent: ClopenSet,
    candidate: ClopenSet,
    forbidden: Sequence[GroupElement],
    *,
    window_cap: int | None = None,
) -> DensityLossReport:
    """Check inequality of density loss of pruning near independent set.

    :param ClopenSet independent: F-independent set J.
    :param ClopenSet candidate: arbitrary set C.
    :param Sequence[GroupElement] forbidden: F.
    :param int | None window_cap: maximal size of windows.
    :returns: DensityLossReport.
    """
    report = is_independent(independent, forbidden, window_cap=window_cap)
    if not report.independent:
        logging.warning('Set J of density loss check is not independent')
    window = independent.window.union(candidate.window)
    _check_cap(window, window_cap)
    difference = np.setxor1d(
        lift(independent, window),
        lift(candidate, window),
    )
    beta_difference = Fraction(difference.size, 1 << len(window))
    beta_independent = density(independent)
    beta_pruned = density(prune(candidate, forbidden, window_cap=window_cap))
    bound = beta_independent - (len(set(forbidden)) + 1) * beta_difference
    return DensityLossReport(
        beta_independent=beta_independent,
        beta_difference=beta_difference,
        beta_pruned=beta_pruned,
        bound=bound,
        holds=beta_pruned >= bound,
    )


def _drop_coordinate(clopen: ClopenSet, index: int) -> ClopenSet:
    elements = clopen.window.elements
    window = Window(clopen.ctx, elements[:index] + elements[index + 1 :])
    low = (1 << index) - 1
    patterns = frozenset(
        ((code >> (index + 1)) << index) | (code & low)
        for code in clopen.patterns
    )
    return ClopenSet(window, patterns)


def _irrelevant_coordinate(clopen: ClopenSet) -> int | None:
    for index in range(len(clopen.window)):
        bit = 1 << index
        if all(code ^ bit in clopen.patterns for code in clopen.patterns):
            return index
    return None


def minimize_window(clopen: ClopenSet) -> ClopenSet:
    """Remove coordinates that never change membership.

    :param ClopenSet clopen: set.
    :returns: equal set on minimal window.
    """
    result = clopen
    while (index := _irrelevant_coordinate(result)) is not None:
        result = _drop_coordinate(result, index)
    codes = np.arange(1 << len(clopen.window), dtype=np.int64)
    reduced = _project(codes, _positions(result.window, clopen.window))
    same = np.isin(codes, clopen.pattern_array()) == np.isin(
        reduced,
        result.pattern_array(),
    )
    if not same.all():
        msg = 'Minimized window changed membership of set'
        raise InvariantViolationError(msg)
    logging.debug(
        'Window minimized from %d to %d elements',
        len(clopen.window),
        len(result.window),
    )
    return result
