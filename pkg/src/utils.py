import sys
from fractions import Fraction
from pathlib import Path

from src.constants import TEST_DIRECTORY_DEPTH


def is_ran_by_pytest() -> bool:
    """Check that pytest is imported.

    :returns: True under pytest.
    """
    return 'pytest' in sys.modules


def from_root(path: Path, cwd: Path | None = None) -> Path:
    """Get path relative to root when tests run from its subdirectories.

    :param Path path: path relative to repository root.
    :param Path | None cwd: working directory, default is current one.
    :returns: path that points to the same file from cwd.
    """
    depth = TEST_DIRECTORY_DEPTH.get((cwd or Path.cwd()).name, 0)
    return Path(*(['..'] * depth), path)


def format_fraction(value: Fraction) -> str:
    """Format rational as "p/q" (denominator is printed even if it is 1).

    :param Fraction value: rational number.
    :returns: string like "5/2".
    """
    return f'{value.numerator}/{value.denominator}'


def bits_to_string(code: int, length: int) -> str:
    """Convert pattern code to string, character i is bit i.

    :param int code: pattern as integer.
    :param int length: count of bits.
    :returns: string of "0" and "1".
    """
    return ''.join('1' if (code >> i) & 1 else '0' for i in range(length))


def string_to_bits(pattern: str) -> int:
    """Convert string of "0" and "1" to pattern code, character i is bit i.

    :param str pattern: pattern string.
    :returns: pattern code.
    """
    code = 0
    for index, char in enumerate(pattern):
        if char == '1':
            code |= 1 << index
        elif char != '0':
            msg = f'Pattern must contain only "0" and "1", got {pattern!r}'
            raise ValueError(msg)
    return code
