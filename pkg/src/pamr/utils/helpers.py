"""Utility functions shared by the file readers and the command-line front end."""
import json
import logging
import sys
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Union

from ..errors import EncodingError

logger = logging.getLogger(__name__)

STDIN = "-"


def decode_utf8(data: bytes, where: str) -> str:
    """Decode UTF-8 bytes, naming ``where`` and the byte offset on failure.

    Raises:
        EncodingError: if ``data`` is not valid UTF-8
    """
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise EncodingError(where, e.start) from None


def read_utf8(path: Union[str, Path]) -> str:
    """Read a whole file as UTF-8.

    Raises:
        OSError: if the file cannot be read
        EncodingError: if the file is not valid UTF-8
    """
    with open(path, "rb") as f:
        return decode_utf8(f.read(), str(path))


def read_text(path: str) -> str:
    """Read a UTF-8 file, or standard input when ``path`` is ``-``.

    Args:
        path: file path or ``-``

    Returns:
        File contents
    """
    if path == STDIN:
        logger.debug("Reading standard input")
        buffer = getattr(sys.stdin, "buffer", None)
        if buffer is None:
            return sys.stdin.read()
        return decode_utf8(buffer.read(), "<stdin>")
    return read_utf8(path)


def format_score(value: float) -> str:
    """Format a score with the fixed six decimals used in every text report."""
    return f"{value:.6f}"


def to_json(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False)


def split_list_args(values: Iterable[str]) -> List[str]:
    """Flatten repeated comma-separated options: ``["R1,R2", "R5"]`` -> ``["R1", "R2", "R5"]``."""
    return [item.strip() for value in values or () for item in value.split(",") if item.strip()]


def annotator_names(paths: Sequence[str], declared: Sequence[Sequence[str]]) -> List[str]:
    """Pick a display name per corpus file.

    A file whose records all carry the same ``::annotator`` value is named
    after it; otherwise the file stem is used. Names that would collide fall
    back to the path as given.

    Args:
        paths: corpus paths in command-line order
        declared: for each path, the ``::annotator`` values of its records

    Returns:
        One unique name per path
    """
    names = []
    for path, values in zip(paths, declared):
        distinct = {v for v in values if v}
        if len(distinct) == 1 and len(values) == len([v for v in values if v]):
            names.append(distinct.pop())
        else:
            names.append("stdin" if path == STDIN else Path(path).stem)
    if len(set(names)) != len(names):
        names = list(paths)
    if len(set(names)) != len(names):
        names = [f"{name}#{i}" for i, name in enumerate(names, start=1)]
    return names
