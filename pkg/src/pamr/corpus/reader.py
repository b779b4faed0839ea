"""Reading and writing AMR corpus files (metadata comment lines + PENMAN blocks)."""
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

from ..amr.graph import Graph, check_wellformed
from ..amr.penman import SerializeStyle, parse_penman, serialize_penman
from ..errors import CorpusError, PenmanParseError
from ..utils.helpers import read_utf8

logger = logging.getLogger(__name__)

_METADATA_LINE_RE = re.compile(r"^#\s*::")
_SNT_RE = re.compile(r"^#\s*::snt(?:[ \t]+(.*))?$")
_FIELD_RE = re.compile(r"::(\S+)(?:[ \t]+((?:[^:]|:(?!:))*))?")


@dataclass(frozen=True)
class AnnotatedSentence:
    """One corpus record.

    Attributes:
        id: record id from ``# ::id``
        snt: sentence text from ``# ::snt``
        annotator: value of ``# ::annotator``, if present
        metadata: every other ``# ::key value`` pair, in file order
        graph: the parsed graph
    """

    id: str
    snt: str
    graph: Graph
    annotator: Optional[str] = None
    metadata: Dict[str, str] = field(default_factory=dict)

    @property
    def clitic_vars(self) -> FrozenSet[str]:
        """Variables listed in ``# ::clitic`` as expanded pronominal clitics."""
        return frozenset(self.metadata.get("clitic", "").split())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "snt": self.snt,
            "annotator": self.annotator,
            "metadata": dict(self.metadata),
            "graph": self.graph.to_dict(),
        }


@dataclass
class _RawRecord:
    ordinal: int
    metadata: List[Tuple[str, str]]
    graph_lines: List[str]
    graph_line: int  # 1-based file line where the PENMAN block starts


def _metadata_fields(line: str) -> List[Tuple[str, str]]:
    snt = _SNT_RE.match(line)
    if snt:
        return [("snt", (snt.group(1) or "").strip())]
    return [(key, (value or "").strip()) for key, value in _FIELD_RE.findall(line)]


def _split_records(lines: Iterable[str]) -> Iterator[_RawRecord]:
    """Group lines into blank-line separated records."""
    block: List[Tuple[int, str]] = []
    count = 0

    def flush(ordinal: int) -> Optional[_RawRecord]:
        metadata: List[Tuple[str, str]] = []
        graph_lines: List[str] = []
        graph_line = 0
        for number, text in block:
            if _METADATA_LINE_RE.match(text):
                metadata.extend(_metadata_fields(text))
                graph_lines, graph_line = [], 0
            elif graph_lines or not text.lstrip().startswith("#"):
                if not graph_lines:
                    graph_line = number
                graph_lines.append(text)
        if not metadata and not graph_lines:
            return None
        return _RawRecord(ordinal, metadata, graph_lines, graph_line)

    for number, raw in enumerate(lines, start=1):
        text = raw.rstrip("\r\n")
        if text.strip():
            block.append((number, text))
            continue
        record = flush(count + 1) if block else None
        if record is not None:
            count += 1
            yield record
        block = []
    record = flush(count + 1) if block else None
    if record is not None:
        yield record


def _build(raw: _RawRecord, source: Optional[str], require_ids: bool,
           require_wellformed: bool) -> AnnotatedSentence:
    metadata: Dict[str, str] = {}
    for key, value in raw.metadata:
        if key in metadata:
            logger.warning(f"{source or '<text>'}: record {raw.ordinal}: repeated ::{key}, keeping the last")
        metadata[key] = value

    record_id = metadata.pop("id", "")
    if not record_id:
        if require_ids:
            raise CorpusError("missing ::id", source, raw.ordinal)
        record_id = str(raw.ordinal)
    if not raw.graph_lines:
        raise CorpusError(f"record {record_id} has no graph", source, raw.ordinal)

    try:
        graph = parse_penman("\n".join(raw.graph_lines))
    except PenmanParseError as e:
        d = e.diagnostic
        line = raw.graph_line + d.span.line - 1
        raise CorpusError(f"line {line}: {d.kind.value}: {d.message}", source, raw.ordinal) from e

    if require_wellformed:
        findings = check_wellformed(graph)
        if findings:
            summary = "; ".join(f"{d.rule.value} {d.message}" for d in findings)
            raise CorpusError(f"graph {record_id} is not wellformed: {summary}", source, raw.ordinal)

    return AnnotatedSentence(
        id=record_id,
        snt=metadata.pop("snt", ""),
        graph=graph,
        annotator=metadata.pop("annotator", None),
        metadata=metadata,
    )


def read_corpus(text: str,
                source: Optional[str] = None,
                require_ids: bool = True,
                require_wellformed: bool = True) -> List[AnnotatedSentence]:
    """Parse corpus text.

    Args:
        text: corpus contents
        source: name used in error messages
        require_ids: reject records without ``# ::id`` (otherwise the
            record ordinal becomes the id)
        require_wellformed: reject graphs that fail check_wellformed

    Returns:
        The records in file order

    Raises:
        CorpusError: on parse errors, missing or duplicate ids, non-wellformed graphs
    """
    sentences: List[AnnotatedSentence] = []
    seen: Dict[str, int] = {}
    for raw in _split_records(text.splitlines()):
        sentence = _build(raw, source, require_ids, require_wellformed)
        if sentence.id in seen:
            raise CorpusError(
                f"duplicate id {sentence.id} (first used by record {seen[sentence.id]})", source, raw.ordinal)
        seen[sentence.id] = raw.ordinal
        sentences.append(sentence)
    return sentences


def load_corpus(path: Union[str, Path], **kwargs) -> List[AnnotatedSentence]:
    """Load a corpus file; keyword arguments are passed to read_corpus.

    Raises:
        OSError: if the file cannot be read
        EncodingError: if the file is not valid UTF-8
        CorpusError: see read_corpus
    """
    sentences = read_corpus(read_utf8(path), source=str(path), **kwargs)
    logger.info(f"Loaded {len(sentences)} sentences from {path}")
    return sentences


def format_record(sentence: AnnotatedSentence, style: Optional[SerializeStyle] = None) -> str:
    """Write one record: ``::id``, ``::snt``, ``::annotator``, other metadata, then the graph."""
    lines = [f"# ::id {sentence.id}", f"# ::snt {sentence.snt}".rstrip()]
    if sentence.annotator is not None:
        lines.append(f"# ::annotator {sentence.annotator}")
    lines.extend(f"# ::{key} {value}".rstrip() for key, value in sentence.metadata.items())
    lines.append(serialize_penman(sentence.graph, style))
    return "\n".join(lines)


def dump_corpus(sentences: Iterable[AnnotatedSentence],
                path: Optional[Union[str, Path]] = None,
                style: Optional[SerializeStyle] = None) -> str:
    """Serialize records separated by blank lines, optionally writing them to ``path``.

    Returns:
        The corpus text
    """
    records = [format_record(s, style) for s in sentences]
    text = "\n\n".join(records) + "\n" if records else ""
    if path is not None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"Wrote {len(records)} sentences to {path}")
    return text
