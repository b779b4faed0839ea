"""PENMAN notation reader and writer.

Tokenizing, tree building and layout are done by the ``penman`` package. This
module adds what PAMR annotation needs around it: NFC text with ZWNJ kept,
multiword concepts joined into one underscore lemma, strict variable checks,
typed constants, and a single ParseDiagnostic with a UTF-8 byte span into the
normalized input for the first problem found.
"""
import logging
import re
import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

import penman
from penman.model import Model

from ..errors import PenmanParseError
from .graph import (
    Attribute,
    Branch,
    Constant,
    ConstantKind,
    Edge,
    Graph,
    Instance,
    canonical_names,
    require_wellformed,
)

logger = logging.getLogger(__name__)

# The decoder and formatter recurse once or twice per level.
MAX_DEPTH = 200

_NUMBER_RE = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$")
_CONCEPT_RE = re.compile(r"(/[ \t]*)([^\s()\"/:]+(?:[ \t]+[^\s()\"/:]+)+)")
_ESCAPE_RE = re.compile(r"\\(.)")
_EMPTY_NODE_RE = re.compile(r"\(\s*\)")
_DELIMITERS = set('()"')


class ParseErrorKind(Enum):
    UNBALANCED_PAREN = "UnbalancedParen"
    DUPLICATE_VARIABLE = "DuplicateVariable"
    UNDEFINED_VARIABLE = "UndefinedVariable"
    BAD_TOKEN = "BadToken"
    EMPTY_GRAPH = "EmptyGraph"


@dataclass(frozen=True)
class SourceSpan:
    """Byte range (UTF-8) of a token plus the 1-based line it starts on."""

    byte_offset_start: int
    byte_offset_end: int
    line: int


@dataclass(frozen=True)
class ParseDiagnostic:
    span: SourceSpan
    message: str
    kind: ParseErrorKind

    def __str__(self) -> str:
        return f"line {self.span.line}: {self.kind.value}: {self.message}"

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "message": self.message,
            "line": self.span.line,
            "byte_offset_start": self.span.byte_offset_start,
            "byte_offset_end": self.span.byte_offset_end,
        }


@dataclass(frozen=True)
class SerializeStyle:
    """Options for serialize_penman.

    Attributes:
        canonical_vars: rename variables to first-letter-plus-suffix form
        indent: spaces per nesting level
    """

    canonical_vars: bool = False
    indent: int = 3


class _WrittenRoleModel(Model):
    """Keeps every role as written; inverse roles are handled by the graph model."""

    def deinvert(self, triple):
        return triple

    def invert(self, triple):
        return triple


_MODEL = _WrittenRoleModel()


class _Abort(Exception):
    """Internal signal carrying the character span of the failure."""

    def __init__(self, kind: ParseErrorKind, message: str, start: int, end: int):
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.start = start
        self.end = end


def _token_end(text: str, pos: int) -> int:
    end = pos
    while end < len(text) and not text[end].isspace() and text[end] not in _DELIMITERS:
        end += 1
    return max(end, min(pos + 1, len(text)))


def _at_line_start(text: str, pos: int) -> bool:
    line_start = text.rfind("\n", 0, pos) + 1
    return text[line_start:pos].strip() == ""


def _string_end(text: str, start: int) -> Optional[int]:
    pos = start + 1
    while pos < len(text):
        if text[pos] == "\\":
            pos += 2
            continue
        if text[pos] == '"':
            return pos + 1
        pos += 1
    return None


class _Source:
    """Normalized input prepared for the decoder.

    ``text`` is what the decoder sees: comment lines blanked and multiword
    concepts joined. ``masked`` additionally hides string contents so
    positions can be searched with regular expressions. Both keep the length
    of ``normalized``, so every offset refers to the normalized input.
    """

    def __init__(self, normalized: str):
        self.normalized = normalized
        self.segments: List[Tuple[int, int]] = []
        self._scan()
        self._join_concepts()

    def _scan(self) -> None:
        text = self.normalized
        decoded, masked = list(text), list(text)
        stack: List[int] = []
        segment_start = 0
        pos = 0
        while pos < len(text):
            char = text[pos]
            if char == "#" and _at_line_start(text, pos):
                end = text.find("\n", pos)
                end = len(text) if end < 0 else end
                decoded[pos:end] = masked[pos:end] = " " * (end - pos)
                pos = end
                continue
            if not stack and not char.isspace() and char != "(":
                if char == ")":
                    raise _Abort(ParseErrorKind.UNBALANCED_PAREN, "unexpected ')'", pos, pos + 1)
                end = _token_end(text, pos)
                message = "expected '(' but found " + repr(text[pos:end])
                raise _Abort(ParseErrorKind.BAD_TOKEN, message, pos, end)
            if char == '"':
                end = _string_end(text, pos)
                if end is None:
                    raise _Abort(ParseErrorKind.BAD_TOKEN, "unterminated string literal", pos, len(text))
                masked[pos + 1:end - 1] = "_" * (end - pos - 2)
                pos = end
                continue
            if char == "(":
                if not stack:
                    segment_start = pos
                stack.append(pos)
                if len(stack) > MAX_DEPTH + 1:
                    raise _Abort(ParseErrorKind.BAD_TOKEN, f"graph nested deeper than {MAX_DEPTH} levels",
                                 pos, pos + 1)
                if _EMPTY_NODE_RE.match(text, pos):
                    raise _Abort(ParseErrorKind.BAD_TOKEN, "expected a variable after '('", pos, pos + 1)
            elif char == ")":
                stack.pop()
                if not stack:
                    self.segments.append((segment_start, pos + 1))
            pos += 1
        if stack:
            raise _Abort(ParseErrorKind.UNBALANCED_PAREN, "unclosed '('", stack[-1], stack[-1] + 1)
        self.text, self.masked = "".join(decoded), "".join(masked)

    def _join_concepts(self) -> None:
        decoded, masked = list(self.text), list(self.masked)
        for match in _CONCEPT_RE.finditer(self.masked):
            start, end = match.span(2)
            joined = "_".join(match.group(2).split()).ljust(end - start)
            decoded[start:end] = masked[start:end] = joined
        self.text, self.masked = "".join(decoded), "".join(masked)

    def locate(self, pattern: str, start: int, end: int, nth: int = 1) -> Tuple[int, int]:
        """Span of group 1 of the nth match of ``pattern`` inside [start, end)."""
        matches = list(re.finditer(pattern, self.masked[:end]))
        matches = [m for m in matches if m.start() >= start]
        if len(matches) >= nth:
            return matches[nth - 1].span(1)
        return start, start + 1

    def definition(self, variable: str, start: int, end: int, nth: int = 1) -> Tuple[int, int]:
        return self.locate(rf"\(\s*({re.escape(variable)})(?![^\s/()])", start, end, nth)

    def error_position(self, error: penman.DecodeError, start: int, end: int) -> int:
        """Character offset of a decoder error raised on the segment [start, end)."""
        lineno = getattr(error, "lineno", None)
        offset = getattr(error, "offset", None) or 0
        if not lineno:
            return start
        lines = self.text[start:end].splitlines(keepends=True) or [""]
        index = min(max(lineno, 1), len(lines)) - 1
        column = min(max(offset, 0), len(lines[index]))
        return start + sum(len(line) for line in lines[:index]) + column


def _constant(value: str) -> Optional[Constant]:
    if value.startswith('"'):
        return Constant(_ESCAPE_RE.sub(r"\1", value[1:-1]), ConstantKind.STRING)
    if value in ("+", "-"):
        return Constant(value, ConstantKind.SYMBOL)
    if _NUMBER_RE.match(value):
        return Constant(value, ConstantKind.NUMBER)
    return None


def _decode(source: _Source, start: int, end: int) -> Graph:
    try:
        decoded = penman.decode(source.text[start:end], model=_MODEL)
    except penman.DecodeError as e:
        pos = source.error_position(e, start, end)
        message = getattr(e, "message", None) or str(e)
        raise _Abort(ParseErrorKind.BAD_TOKEN, message, pos, _token_end(source.text, pos)) from None

    variables = {s for s, role, _ in decoded.triples if role == ":instance"}
    definitions = {}
    instances: List[Instance] = []
    branches: List[Branch] = []
    for variable, role, target in decoded.triples:
        if role == ":instance":
            definitions[variable] = definitions.get(variable, 0) + 1
            count = definitions[variable]
            if count > 1:
                first, last = source.definition(variable, start, end, count)
                raise _Abort(ParseErrorKind.DUPLICATE_VARIABLE, f"variable {variable} is defined twice",
                             first, last)
            if target is None or target.startswith('"'):
                first, last = source.definition(variable, start, end)
                problem = "missing concept" if target is None else "quoted concept"
                raise _Abort(ParseErrorKind.BAD_TOKEN, f"{problem} for variable {variable}", first, last)
            instances.append(Instance(variable, target))
            continue

        name = role[1:]
        node_start = source.definition(variable, start, end)[0]
        if not name:
            first, last = source.locate(r"(:)(?![^\s()])", node_start, end)
            raise _Abort(ParseErrorKind.BAD_TOKEN, "empty role name", first, last)
        if target is None:
            first, last = source.locate(rf"(:{re.escape(name)})(?![^\s()])", node_start, end)
            raise _Abort(ParseErrorKind.BAD_TOKEN, f"missing value after :{name}", first, last)
        constant = _constant(target)
        if constant is not None:
            branches.append(Attribute(variable, name, constant))
        elif target in variables:
            branches.append(Edge(variable, name, target))
        else:
            pattern = rf":{re.escape(name)}\s+({re.escape(target)})(?![^\s()])"
            first, last = source.locate(pattern, node_start, end)
            raise _Abort(ParseErrorKind.UNDEFINED_VARIABLE, f"variable {target} is never defined",
                         first, last)
    return Graph(decoded.top, tuple(instances), tuple(branches))


def _to_diagnostic(text: str, abort: _Abort) -> ParseDiagnostic:
    start = len(text[:abort.start].encode("utf-8"))
    end = start + len(text[abort.start:abort.end].encode("utf-8"))
    line = text.count("\n", 0, abort.start) + 1
    return ParseDiagnostic(SourceSpan(start, end, line), abort.message, abort.kind)


def _decode_all(text: str, single: bool) -> List[Graph]:
    normalized = unicodedata.normalize("NFC", text)
    try:
        source = _Source(normalized)
        if single and not source.segments:
            end = len(normalized)
            raise _Abort(ParseErrorKind.EMPTY_GRAPH, "no graph found", end, end)
        if single and len(source.segments) > 1:
            extra = source.segments[1][0]
            raise _Abort(ParseErrorKind.BAD_TOKEN, "unexpected '(' after the graph", extra, extra + 1)
        return [_decode(source, start, end) for start, end in source.segments]
    except _Abort as abort:
        diagnostic = _to_diagnostic(normalized, abort)
        logger.debug(f"PENMAN rejected at line {diagnostic.span.line}: {diagnostic.message}")
        raise PenmanParseError(diagnostic) from None


def try_parse_penman(text: str) -> Union[Graph, ParseDiagnostic]:
    """Parse one graph, returning the ParseDiagnostic instead of raising."""
    try:
        return parse_penman(text)
    except PenmanParseError as e:
        return e.diagnostic


def parse_penman(text: str) -> Graph:
    """Parse exactly one PENMAN graph.

    Args:
        text: PENMAN text; surrounding whitespace and leading ``#`` lines are allowed

    Returns:
        The parsed Graph (not yet checked for wellformedness)

    Raises:
        PenmanParseError: carrying the ParseDiagnostic of the first problem
    """
    return _decode_all(text, single=True)[0]


def parse_penman_many(text: str) -> List[Graph]:
    """Parse a sequence of graphs written one after another."""
    return _decode_all(text, single=False)


def serialize_penman(graph: Graph, style: Optional[SerializeStyle] = None) -> str:
    """Write a wellformed graph as indented PENMAN text.

    Children appear in recorded order; a variable is defined at its first
    occurrence and written bare afterwards.

    Raises:
        GraphError: if the graph is not wellformed
    """
    style = style or SerializeStyle()
    require_wellformed(graph)
    names = canonical_names(graph) if style.canonical_vars else {}
    concepts = graph.concepts()
    placed = set()

    def name(var: str) -> str:
        return names.get(var, var)

    def node(var: str) -> tuple:
        placed.add(var)
        edges = [("/", concepts[var])]
        for branch in graph.children(var):
            if isinstance(branch, Attribute):
                target = branch.value.render()
            elif branch.target in placed:
                target = name(branch.target)
            else:
                target = node(branch.target)
            edges.append((f":{branch.role}", target))
        return name(var), edges

    return penman.format(penman.Tree(node(graph.root)), indent=style.indent)
