from collections.abc import Sequence
from typing import Self

from pydantic_core import ErrorDetails


def _format_pydantic_errors(
    pydantic_errors: Sequence[ErrorDetails],
) -> list[str]:
    """Convert pydantic errors to lines like "dotted.location: message".

    :param Sequence[ErrorDetails] pydantic_errors: sequence of pydantic
     errors.
    :returns: list of formatted errors.
    """
    errors = []
    for pydantic_error in pydantic_errors:
        loc = '.'.join(map(str, pydantic_error['loc'])) or '<root>'
        errors.append(f'{loc}: {pydantic_error['msg']}')
    return errors


class ShiftColoringError(Exception):
    """Base exception of this project."""


class SettingsParsingError(ShiftColoringError):
    """Exception of parsing settings."""

    def __init__(
        self: Self,
        *args: str,
        pydantic_errors: Sequence[ErrorDetails],
    ) -> None:
        """Convert pydantic errors to custom.

        :param str args: strings of exceptions for custom errors.
        :param Sequence[ErrorDetails] pydantic_errors: sequence of pydantic
         errors.
        :returns: None
        """
        self.errors: list[str] = [*args]
        self.errors.extend(_format_pydantic_errors(pydantic_errors))
        super().__init__(str(self))

    def __str__(self: Self) -> str:
        """Return multistring error message.

        :returns: multistring error message.
        """
        return f'Validation errors in settings:\n{'\n'.join(self.errors)}'


class InstanceFormatError(ShiftColoringError):
    """Exception of malformed instance, rule or decoration file."""

    def __init__(
        self: Self,
        source: str,
        pydantic_errors: Sequence[ErrorDetails] = (),
        *args: str,
    ) -> None:
        """Collect errors of file with location of every broken JSON field.

        :param str source: file name or description of parsed data.
        :param Sequence[ErrorDetails] pydantic_errors: sequence of pydantic
         errors.
        :param str args: additional errors.
        :returns: None
        """
        self.source = source
        self.errors: list[str] = _format_pydantic_errors(pydantic_errors)
        self.errors.extend(args)
        super().__init__(str(self))

    def __str__(self: Self) -> str:
        """Return multistring error message.

        :returns: multistring error message.
        """
        return f'Malformed {self.source}:\n{'\n'.join(self.errors)}'


class ContextMismatchError(ShiftColoringError):
    """Exception of mixing elements of different groups."""


class IdentityInWindowError(ShiftColoringError):
    """Exception of identity element inside generating window."""


class EnumerationLimitError(ShiftColoringError):
    """Exception of window too large for exact enumeration."""


class NotIndependentError(ShiftColoringError):
    """Exception of clopen rule that is not independent."""


class InconsistentActionError(ShiftColoringError):
    """Exception of generator maps that do not define a group action."""


class RejectionBudgetExhaustedError(ShiftColoringError):
    """Exception of configuration model that never produced simple graph."""


class IrregularGraphError(ShiftColoringError):
    """Exception of graph without required regularity or degree bound."""


class DecompositionError(ShiftColoringError):
    """Exception of failed decomposition into partial injections."""


class InvalidDecorationError(ShiftColoringError):
    """Exception of decoration that breaks its invariants."""


class NonUniformBallError(ShiftColoringError):
    """Exception of graph whose balls of same radius have different sizes."""


class ColoringNotInjectiveError(ShiftColoringError):
    """Exception of auxiliary coloring that repeats color inside window."""


class PaletteCapExceededError(ShiftColoringError):
    """Exception of palette too large for enumeration of all maps."""


class SizeCapExceededError(ShiftColoringError):
    """Exception of graph too large for exact oracle."""


class InvariantViolationError(ShiftColoringError):
    """Exception of broken internal certificate."""
