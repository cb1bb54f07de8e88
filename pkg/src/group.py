from collections import deque
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from itertools import pairwise
from typing import Self

from src.enums import GroupKind
from src.exceptions import ContextMismatchError, IdentityInWindowError


@dataclass(frozen=True)
class GroupCtx:
    """Context of group: free group F_n or torus (Z/mZ)^d.

    For free group rank is count of free generators n, for torus rank is
    dimension d and modulus is m.
    """

    kind: GroupKind
    rank: int
    modulus: int | None = None

    def __post_init__(self: Self) -> None:
        """Validate parameters of group.

        :returns: None
        """
        if self.rank < 1:
            msg = f'Rank of group must be positive, got {self.rank}'
            raise ValueError(msg)
        match self.kind:
            case GroupKind.FREE if self.modulus is not None:
                msg = 'Free group has no modulus'
                raise ValueError(msg)
            case GroupKind.TORUS if self.modulus is None or self.modulus < 2:
                msg = f'Torus modulus must be at least 2, got {self.modulus}'
                raise ValueError(msg)

    @classmethod
    def free(cls: type[Self], rank: int) -> Self:
        """Create context of free group.

        :param int rank: count of free generators.
        :returns: GroupCtx.
        """
        return cls(kind=GroupKind.FREE, rank=rank)

    @classmethod
    def torus(cls: type[Self], dimension: int, modulus: int) -> Self:
        """Create context of torus group.

        :param int dimension: count of coordinates.
        :param int modulus: size of every cyclic factor.
        :returns: GroupCtx.
        """
        return cls(kind=GroupKind.TORUS, rank=dimension, modulus=modulus)

    @classmethod
    def parse(cls: type[Self], text: str) -> Self:
        """Parse context from string like "free:2" or "torus:1:5".

        :param str text: string representation.
        :returns: GroupCtx.
        """
        parts = text.strip().split(':')
        try:
            match parts:
                case ['free', rank]:
                    return cls.free(int(rank))
                case ['torus', dimension, modulus]:
                    return cls.torus(int(dimension), int(modulus))
        except ValueError as exc:
            msg = f'Wrong group context "{text}": {exc}'
            raise ValueError(msg) from exc
        msg = (
            f'Wrong group context "{text}", expected "free:n" or '
            f'"torus:d:m"'
        )
        raise ValueError(msg)

    def __str__(self: Self) -> str:
        """Representation like "free:2" or "torus:1:5".

        :returns: string that parse accepts back.
        """
        if self.kind is GroupKind.FREE:
            return f'free:{self.rank}'
        return f'torus:{self.rank}:{self.modulus}'

    @property
    def is_free(self: Self) -> bool:
        """Check that group is free.

        :returns: True for free group.
        """
        return self.kind is GroupKind.FREE

    def identity(self: Self) -> 'GroupElement':
        """Get identity element.

        :returns: identity.
        """
        if self.is_free:
            return GroupElement(self, ())
        return GroupElement(self, (0,) * self.rank)

    def generators(self: Self) -> tuple['GroupElement', ...]:
        """Get standard generators s_1..s_n or e_1..e_d.

        :returns: tuple of generators in canonical order.
        """
        if self.is_free:
            return tuple(
                GroupElement(self, (i,)) for i in range(1, self.rank + 1)
            )
        return tuple(
            GroupElement(
                self,
                tuple(int(i == j) for j in range(self.rank)),
            )
            for i in range(self.rank)
        )

    def element(self: Self, raw: int | Sequence[int]) -> 'GroupElement':
        """Create element from JSON-friendly value.

        Free group element is list of nonzero signed letters (i means s_i,
        -i means s_i^-1), it is reduced on creation. Torus element is vector
        of coordinates, they are taken modulo m. Single integer means word
        with one letter or, for one dimensional torus, the coordinate.
        :param int | Sequence[int] raw: raw value.
        :returns: GroupElement.
        """
        values = [raw] if isinstance(raw, int) else list(raw)
        if self.is_free:
            result = self.identity()
            for letter in values:
                if letter == 0 or abs(letter) > self.rank:
                    msg = f'Letter {letter} is not generator of {self}'
                    raise ValueError(msg)
                result = result * GroupElement(self, (letter,))
            return result
        if len(values) != self.rank:
            msg = f'Element of {self} needs {self.rank} coordinates'
            raise ValueError(msg)
        modulus = self.modulus or 0
        return GroupElement(self, tuple(value % modulus for value in values))


@dataclass(frozen=True)
class GroupElement:
    """Element of group in its canonical form.

    Free group elements are stored as reduced words of signed letters, torus
    elements as vectors with coordinates in [0, m).
    """

    ctx: GroupCtx
    letters: tuple[int, ...]

    def __post_init__(self: Self) -> None:
        """Check that element is in canonical form.

        :returns: None
        """
        if self.ctx.is_free:
            for left, right in pairwise(self.letters):
                if left == -right:
                    msg = f'Word {self.letters} is not reduced'
                    raise ValueError(msg)
            if any(
                letter == 0 or abs(letter) > self.ctx.rank
                for letter in self.letters
            ):
                msg = f'Word {self.letters} has letters outside {self.ctx}'
                raise ValueError(msg)
        elif len(self.letters) != self.ctx.rank or any(
            not 0 <= value < (self.ctx.modulus or 0) for value in self.letters
        ):
            msg = f'Vector {self.letters} is not canonical in {self.ctx}'
            raise ValueError(msg)

    def __repr__(self: Self) -> str:
        """Representation like "s1 s2^-1", "e" or "(1, 0)".

        :returns: human readable string.
        """
        if not self.ctx.is_free:
            return f'({', '.join(map(str, self.letters))})'
        if not self.letters:
            return 'e'
        return ' '.join(
            f's{letter}' if letter > 0 else f's{-letter}^-1'
            for letter in self.letters
        )

    def __mul__(self: Self, other: 'GroupElement') -> 'GroupElement':
        """Multiply elements, see mul.

        :param GroupElement other: right factor.
        :returns: product.
        """
        return mul(self, other)

    @property
    def is_identity(self: Self) -> bool:
        """Check that element is identity.

        :returns: True for identity.
        """
        return not any(self.letters)

    def sort_key(self: Self) -> tuple[int, tuple[int, ...]]:
        """Get key of canonical order.

        Free words are ordered by length and then lexicographically with
        letters ordered as s_1 < s_1^-1 < s_2 < s_2^-1 < ...; torus
        vectors lexicographically.
        :returns: sortable key.
        """
        if self.ctx.is_free:
            return len(self.letters), tuple(
                2 * (abs(letter) - 1) + (letter < 0) for letter in self.letters
            )
        return 0, self.letters

    def to_json(self: Self) -> list[int]:
        """Convert to JSON-friendly value accepted by GroupCtx.element.

        :returns: list of letters or coordinates.
        """
        return list(self.letters)


def _check_same_ctx(*elements: GroupElement) -> GroupCtx:
    ctx = elements[0].ctx
    for element in elements[1:]:
        if element.ctx != ctx:
            msg = f'Elements of {ctx} and {element.ctx} can not be mixed'
            raise ContextMismatchError(msg)
    return ctx


def mul(left: GroupElement, right: GroupElement) -> GroupElement:
    """Multiply two elements of the same group.

    :param GroupElement left: left factor.
    :param GroupElement right: right factor.
    :returns: product in canonical form.
    """
    ctx = _check_same_ctx(left, right)
    if not ctx.is_free:
        modulus = ctx.modulus or 0
        return GroupElement(
            ctx,
            tuple(
                (x + y) % modulus
                for x, y in zip(left.letters, right.letters, strict=True)
            ),
        )
    word = list(left.letters)
    for letter in right.letters:
        if word and word[-1] == -letter:
            word.pop()
        else:
            word.append(letter)
    return GroupElement(ctx, tuple(word))


def inv(element: GroupElement) -> GroupElement:
    """Get inverse element.

    :param GroupElement element: element of group.
    :returns: inverse in canonical form.
    """
    ctx = element.ctx
    if ctx.is_free:
        letters = tuple(-letter for letter in reversed(element.letters))
        return GroupElement(ctx, letters)
    modulus = ctx.modulus or 0
    return GroupElement(ctx, tuple(-x % modulus for x in element.letters))


def word_norm(element: GroupElement) -> int:
    """Get word length of element w.r.t. standard generators.

    For torus the shortest direction is taken in every coordinate.
    :param GroupElement element: element of group.
    :returns: norm.
    """
    if element.ctx.is_free:
        return len(element.letters)
    modulus = element.ctx.modulus or 0
    return sum(min(x, modulus - x) for x in element.letters)


@dataclass(frozen=True)
class Window:
    """Finite set of elements of one group in canonical order.

    Position of element in window is position of its bit in patterns.
    """

    ctx: GroupCtx
    elements: tuple[GroupElement, ...]
    _positions: dict[GroupElement, int] = field(
        init=False,
        repr=False,
        compare=False,
        hash=False,
    )

    def __post_init__(self: Self) -> None:
        """Check canonical order and context of elements.

        :returns: None
        """
        keys = [element.sort_key() for element in self.elements]
        if any(left >= right for left, right in pairwise(keys)):
            msg = 'Window elements must be unique and in canonical order'
            raise ValueError(msg)
        if any(element.ctx != self.ctx for element in self.elements):
            msg = f'Window of {self.ctx} has elements of other group'
            raise ContextMismatchError(msg)
        positions = {element: i for i, element in enumerate(self.elements)}
        object.__setattr__(self, '_positions', positions)

    @classmethod
    def of(
        cls: type[Self],
        ctx: GroupCtx,
        elements: Iterable[GroupElement],
    ) -> Self:
        """Create window from any iterable, duplicates are dropped.

        :param GroupCtx ctx: group context.
        :param Iterable[GroupElement] elements: elements of window.
        :returns: Window.
        """
        unique = set(elements)
        return cls(ctx, tuple(sorted(unique, key=GroupElement.sort_key)))

    def __len__(self: Self) -> int:
        """Get count of elements.

        :returns: count of elements.
        """
        return len(self.elements)

    def __iter__(self: Self) -> Iterator[GroupElement]:
        """Iterate elements in canonical order.

        :returns: iterator of elements.
        """
        return iter(self.elements)

    def __contains__(self: Self, element: object) -> bool:
        """Check membership.

        :param object element: element to check.
        :returns: True if element is in window.
        """
        return element in self._positions

    def index(self: Self, element: GroupElement) -> int:
        """Get position of element.

        :param GroupElement element: element of window.
        :returns: position in canonical order.
        """
        try:
            return self._positions[element]
        except KeyError:
            msg = f'{element!r} is not in window'
            raise ValueError(msg) from None

    def union(self: Self, *others: 'Window') -> 'Window':
        """Get union of windows.

        :param Window others: other windows of the same group.
        :returns: new Window.
        """
        for other in others:
            if other.ctx != self.ctx:
                msg = f'Windows of {self.ctx} and {other.ctx} can not be mixed'
                raise ContextMismatchError(msg)
        return Window.of(
            self.ctx,
            [*self.elements, *(e for other in others for e in other)],
        )

    def translate(self: Self, element: GroupElement) -> 'Window':
        """Get right translate D·element.

        :param GroupElement element: right factor.
        :returns: new Window.
        """
        return Window.of(self.ctx, (delta * element for delta in self))

    def inverses(self: Self) -> 'Window':
        """Get window of inverse elements.

        :returns: new Window.
        """
        return Window.of(self.ctx, map(inv, self))

    def radius(self: Self) -> int:
        """Get maximal word norm of elements.

        :returns: radius, 0 for empty window.
        """
        return max(map(word_norm, self), default=0)

    def to_json(self: Self) -> list[list[int]]:
        """Convert to JSON-friendly list.

        :returns: list of elements.
        """
        return [element.to_json() for element in self]


def _symmetric_generators(ctx: GroupCtx, generators: Window | None) -> Window:
    window = (
        Window.of(ctx, ctx.generators()) if generators is None else generators
    )
    if ctx.identity() in window:
        msg = 'Generating set must not contain identity'
        raise IdentityInWindowError(msg)
    if not window.elements:
        msg = 'Generating set must not be empty'
        raise ValueError(msg)
    return window.union(window.inverses())


def ball(
    ctx: GroupCtx,
    radius: int,
    generators: Window | None = None,
) -> Window:
    """Get ball of elements with word norm <= radius.

    :param GroupCtx ctx: group context.
    :param int radius: radius of ball.
    :param Window | None generators: generating set, standard generators by
     default. Inverses are added automatically.
    :returns: Window with ball.
    """
    if radius < 0:
        msg = f'Radius must be non-negative, got {radius}'
        raise ValueError(msg)
    steps = _symmetric_generators(ctx, generators)
    identity = ctx.identity()
    seen = {identity: 0}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        if seen[current] == radius:
            continue
        for step in steps:
            following = current * step
            if following not in seen:
                seen[following] = seen[current] + 1
                queue.append(following)
    return Window.of(ctx, seen)


def window_product(
    left: Window,
    right: Window,
    *,
    invert_right: bool = True,
) -> Window:
    """Get product window {d * e^-1} (or {d * e} without inversion).

    :param Window left: window D.
    :param Window right: window E.
    :param bool invert_right: invert elements of right window.
    :returns: Window with all products.
    """
    if left.ctx != right.ctx:
        msg = f'Windows of {left.ctx} and {right.ctx} can not be mixed'
        raise ContextMismatchError(msg)
    factors = [inv(e) if invert_right else e for e in right]
    return Window.of(left.ctx, (d * e for d in left for e in factors))
