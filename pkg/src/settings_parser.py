import logging
import tomllib
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from src.constants import SETTINGS_FILE_PATH
from src.exceptions import SettingsParsingError
from src.schemas import Settings


class SettingsParser:
    """Loading of caps and run defaults, with command line overrides."""

    @staticmethod
    def parse_toml(path: Path = SETTINGS_FILE_PATH) -> dict[str, Any]:
        """Read toml file.

        :param Path path: path to toml file.
        :returns: dict of parsed file.
        """
        if path.suffix != SETTINGS_FILE_PATH.suffix:
            msg = f'Settings file {path} is not {SETTINGS_FILE_PATH.suffix}'
            raise ValueError(msg)
        try:
            parsed = tomllib.loads(path.read_text(encoding='utf-8'))
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise SettingsParsingError(
                f'{path}: {exc}',
                pydantic_errors=(),
            ) from exc
        return parsed

    @staticmethod
    def parse_data(data: dict[str, Any]) -> Settings:
        """Validate raw settings, missing keys take defaults.

        :param dict[str, Any] data: dict like parsed toml.
        :returns: Settings pydantic model.
        """
        try:
            settings = Settings.model_validate(data)
        except ValidationError as exc:
            raise SettingsParsingError(pydantic_errors=exc.errors()) from exc
        return settings

    @staticmethod
    def load_settings_from_toml(path: Path = SETTINGS_FILE_PATH) -> Settings:
        """Load settings from toml file.

        :param Path path: path to toml file.
        :returns: Settings pydantic model.
        """
        settings = SettingsParser.parse_data(SettingsParser.parse_toml(path))
        logging.debug(
            'Settings from %s: caps %s, run %s',
            path,
            settings.caps.model_dump(),
            settings.run.model_dump(),
        )
        return settings

    @staticmethod
    def with_overrides(
        settings: Settings,
        section: str,
        overrides: dict[str, Any],
    ) -> Settings:
        """Get settings with values of section replaced by not None overrides.

        Command line flags come here, so they are validated like toml.
        :param Settings settings: base settings.
        :param str section: name of section, "caps" or "run".
        :param dict[str, Any] overrides: new values, None means keep.
        :returns: new Settings pydantic model.
        """
        data = settings.model_dump()
        if section not in data:
            msg = f'Settings have no section "{section}"'
            raise ValueError(msg)
        data[section].update(
            {
                key: value
                for key, value in overrides.items()
                if value is not None
            },
        )
        return SettingsParser.parse_data(data)
