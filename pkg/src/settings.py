import logging
from pathlib import Path

from src.constants import SETTINGS_FILE_PATH
from src.schemas import Settings
from src.settings_parser import SettingsParser
from src.utils import from_root, is_ran_by_pytest


def _settings_path() -> Path | None:
    if SETTINGS_FILE_PATH.exists():
        return SETTINGS_FILE_PATH
    if is_ran_by_pytest():
        return from_root(SETTINGS_FILE_PATH)
    return None


SETTINGS: Settings

if (path := _settings_path()) is not None:
    SETTINGS = SettingsParser.load_settings_from_toml(path=path)
else:
    logging.debug(
        'No %s in working directory, defaults used',
        SETTINGS_FILE_PATH,
    )
    SETTINGS = Settings()
