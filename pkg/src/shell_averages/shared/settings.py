"""
Optional per-user settings file.

A flat key = value TOML file whose keys mirror the long command-line flags
(with '-' written as '_'). Explicit flags always win over file values.
"""
import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

import appdirs

from shell_averages.shared.config import APP_AUTHOR, APP_NAME, CONFIG_FILE_NAME, OUTPUT_FORMATS
from shell_averages.shared.errors import ConfigError

logger = logging.getLogger(__name__)

SETTING_TYPES = {
    "max_ell": int,
    "max_n": int,
    "format": str,
    "decimal": bool,
    "digits": int,
    "factorial_cap": int,
    "generating_cap": int,
    "matrix_cap": int,
    "verbose": bool,
    "quiet": bool,
}


def get_config_dir() -> Path:
    """Get the user configuration directory for the application."""
    return Path(appdirs.user_config_dir(APP_NAME, APP_AUTHOR))


def get_config_path() -> Path:
    return get_config_dir() / CONFIG_FILE_NAME


def _check(key: str, value):
    expected = SETTING_TYPES.get(key)
    if expected is None:
        raise ConfigError(f"Unknown setting {key!r}; known settings: {', '.join(sorted(SETTING_TYPES))}")
    # bool is an int subclass
    if not isinstance(value, expected) or (expected is int and isinstance(value, bool)):
        raise ConfigError(f"Setting {key!r} must be {expected.__name__}, got {value!r}")
    if key == "format" and value not in OUTPUT_FORMATS:
        raise ConfigError(f"Setting 'format' must be one of {OUTPUT_FORMATS}, got {value!r}")
    if expected is int and value < 0:
        raise ConfigError(f"Setting {key!r} must be non-negative, got {value}")
    return value


def load_settings(path: Path | None = None) -> dict:
    """
    Read settings from path, or from the user config file when path is None.
    A missing default file means no settings; a missing explicit file is an error.
    """
    explicit = path is not None
    path = Path(path) if explicit else get_config_path()
    if not path.exists():
        if explicit:
            raise ConfigError(f"Config file not found: {path}")
        return {}
    try:
        with open(path, "rb") as f:
            raw = tomllib.load(f)
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e
    settings = {key.replace("-", "_"): value for key, value in raw.items()}
    for key, value in settings.items():
        _check(key, value)
    logger.debug(f"Loaded {len(settings)} settings from {path}")
    return settings
