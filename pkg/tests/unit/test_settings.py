"""Tests for environment-driven settings and CLI helpers."""
import io
from unittest.mock import patch

import pytest

from pamr.__version__ import __version__
from pamr.config.settings import (
    DEFAULT_LOG_LEVEL,
    get_app_config,
    get_default_rules,
    get_default_settings,
    get_lexicon_path,
    get_log_level,
    get_severity_overrides,
    get_version,
)
from pamr.utils.helpers import annotator_names, format_score, read_text, split_list_args, to_json


@pytest.mark.unit
def test_version():
    """Test that the version comes from the package."""
    assert get_version() == __version__


@pytest.mark.unit
def test_defaults_without_environment():
    """Test the settings when no variables are set."""
    # Act
    with patch.dict("os.environ", {}, clear=True):
        config = get_app_config()

    # Assert
    assert config["lexicon"] is None
    assert config["log_level"] == DEFAULT_LOG_LEVEL
    assert config["rules"] == []
    assert config["severity"] == []
    assert config["default_settings"] == get_default_settings()
    assert get_default_settings()["restarts"] == 8


@pytest.mark.unit
def test_environment_overrides():
    """Test that PAMR_* variables are picked up."""
    # Arrange
    env = {
        "PAMR_LEXICON": "/data/fa.lex",
        "PAMR_LOG_LEVEL": "debug",
        "PAMR_RULES": "R1, R5,,R10",
        "PAMR_SEVERITY": "R3=error",
    }

    # Act
    with patch.dict("os.environ", env, clear=True):
        lexicon, level = get_lexicon_path(), get_log_level()
        rules, severity = get_default_rules(), get_severity_overrides()

    # Assert
    assert lexicon == "/data/fa.lex"
    assert level == "DEBUG"
    assert rules == ["R1", "R5", "R10"]
    assert severity == ["R3=error"]


@pytest.mark.unit
def test_unknown_log_level_falls_back():
    """Test that an invalid level is replaced by the default."""
    with patch.dict("os.environ", {"PAMR_LOG_LEVEL": "loud"}, clear=True):
        assert get_log_level() == DEFAULT_LOG_LEVEL


@pytest.mark.unit
def test_format_score():
    """Test the six-decimal score format."""
    assert format_score(0.75) == "0.750000"
    assert format_score(1) == "1.000000"


@pytest.mark.unit
def test_to_json_keeps_persian_text():
    """Test that JSON output is not ASCII-escaped."""
    assert '"shâyad"' in to_json({"concept": "shâyad"})


@pytest.mark.unit
def test_split_list_args():
    """Test flattening of repeated comma-separated options."""
    assert split_list_args(["R1,R2", " R5 ", ""]) == ["R1", "R2", "R5"]
    assert split_list_args(None) == []


@pytest.mark.unit
def test_read_text_from_stdin():
    """Test that '-' reads standard input."""
    with patch("sys.stdin", io.StringIO("(a / b)")):
        assert read_text("-") == "(a / b)"


@pytest.mark.unit
@pytest.mark.parametrize("paths, declared, expected", [
    (["x/a.amr", "y/b.amr"], [["ann_a", "ann_a"], ["ann_b"]], ["ann_a", "ann_b"]),
    (["x/a.amr", "y/b.amr"], [["ann_a", None], []], ["a", "b"]),
    (["x/a.amr", "y/a.amr"], [[], []], ["x/a.amr", "y/a.amr"]),
    (["x/a.amr", "x/a.amr"], [[], []], ["x/a.amr#1", "x/a.amr#2"]),
    (["-", "y/b.amr"], [[], ["ann_b"]], ["stdin", "ann_b"]),
])
def test_annotator_names(paths, declared, expected):
    """Test how corpus files are named in agreement reports."""
    assert annotator_names(paths, declared) == expected
