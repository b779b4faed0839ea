"""Toolkit settings read from the environment (and a local .env file)."""
import importlib.metadata
import logging
import os
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# Load environment variables from .env file
load_dotenv()

DEFAULT_LOG_LEVEL = "WARNING"
LOG_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")


def get_version() -> str:
    """Get the toolkit version.

    Returns:
        Version string
    """
    try:
        from pamr.__version__ import __version__
        return __version__
    except ImportError:
        try:
            return importlib.metadata.version("pamr")
        except importlib.metadata.PackageNotFoundError:
            return "0.1.0"


def get_lexicon_path() -> Optional[str]:
    """Lexicon file from PAMR_LEXICON, or None for the builtin lexicon."""
    return os.getenv("PAMR_LEXICON") or None


def get_log_level() -> str:
    level = (os.getenv("PAMR_LOG_LEVEL") or DEFAULT_LOG_LEVEL).upper()
    if level not in LOG_LEVELS:
        logger.warning(f"Unknown PAMR_LOG_LEVEL {level!r}, using {DEFAULT_LOG_LEVEL}")
        return DEFAULT_LOG_LEVEL
    return level


def _split_env_list(name: str) -> List[str]:
    value = os.getenv(name, "")
    return [item.strip() for item in value.split(",") if item.strip()]


def get_default_rules() -> List[str]:
    """Rule ids from PAMR_RULES; an empty list means every rule."""
    return _split_env_list("PAMR_RULES")


def get_severity_overrides() -> List[str]:
    """``RULE=severity`` strings from PAMR_SEVERITY."""
    return _split_env_list("PAMR_SEVERITY")


def get_default_settings() -> Dict[str, Any]:
    """Get default scoring and serialization settings.

    Returns:
        Dictionary of default settings
    """
    return {
        "restarts": 8,
        "seed": 0,
        "include_top": True,
        "exact_threshold": 6,
        "indent": 3,
    }


def get_app_config() -> Dict[str, Any]:
    """Get toolkit configuration.

    Returns:
        Dictionary of configuration values
    """
    return {
        "version": get_version(),
        "lexicon": get_lexicon_path(),
        "log_level": get_log_level(),
        "rules": get_default_rules(),
        "severity": get_severity_overrides(),
        "default_settings": get_default_settings(),
        "app_name": "pamr",
    }
