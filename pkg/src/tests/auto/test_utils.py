from fractions import Fraction
from pathlib import Path
from typing import Self

import pytest

from src.utils import (
    bits_to_string,
    format_fraction,
    from_root,
    string_to_bits,
)


class TestPatterns:
    """Testing conversion of patterns."""

    @pytest.mark.parametrize(
        ('code', 'length', 'expected'),
        [(1, 3, '100'), (6, 3, '011'), (0, 2, '00')],
        ids=('First bit', 'Last bits', 'Empty pattern'),
    )
    def test_bits_to_string(
        self: Self,
        code: int,
        length: int,
        expected: str,
    ) -> None:
        """Testing that character i is bit i.

        :param int code: pattern code.
        :param int length: count of bits.
        :param str expected: expected string.
        :returns: None
        """
        assert bits_to_string(code, length) == expected
        assert string_to_bits(expected) == code

    def test_wrong_character(self: Self) -> None:
        """Testing pattern with character other than 0 and 1.

        :returns: None
        """
        with pytest.raises(ValueError, match='only "0" and "1"'):
            _ = string_to_bits('102')

    @pytest.mark.parametrize(
        ('value', 'expected'),
        [(Fraction(5, 2), '5/2'), (Fraction(4), '4/1'), (Fraction(0), '0/1')],
        ids=('Proper fraction', 'Integer', 'Zero'),
    )
    def test_format_fraction(
        self: Self,
        value: Fraction,
        expected: str,
    ) -> None:
        """Testing that denominator is always printed.

        :param Fraction value: rational number.
        :param str expected: expected text.
        :returns: None
        """
        assert format_fraction(value) == expected


class TestFromRoot:
    """Testing paths from test directories."""

    @pytest.mark.parametrize(
        ('cwd', 'expected'),
        [
            (Path('/repo'), Path('settings.toml')),
            (Path('/repo/src'), Path('../settings.toml')),
            (Path('/repo/src/tests/auto'), Path('../../../settings.toml')),
        ],
        ids=('Root', 'Package', 'Auto tests'),
    )
    def test_from_root(self: Self, cwd: Path, expected: Path) -> None:
        """Testing that path climbs to root.

        :param Path cwd: working directory.
        :param Path expected: expected path.
        :returns: None
        """
        assert from_root(Path('settings.toml'), cwd) == expected
