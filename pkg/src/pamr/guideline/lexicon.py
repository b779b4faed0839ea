"""Valency lexicon: verb frames, light verb constructions and concept inventories."""
import logging
import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Set, Tuple, Union

from ..amr.graph import Concept, ConceptKind
from ..errors import LexiconError
from ..utils.helpers import read_utf8

logger = logging.getLogger(__name__)

_ARG_RE = re.compile(r"^ARG[0-5]$")
BUILTIN_NAME = "<builtin>"


def _nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text.strip())


class FrameSource(Enum):
    BUILTIN = "builtin"
    FILE = "file"


@dataclass(frozen=True)
class VerbFrame:
    """A predicate lemma with its core argument slots.

    Attributes:
        lemma: infinitive concept label, underscore-joined for LVCs
        args: ARGn -> role gloss
        source: where the frame came from
        variants: lemmas that normalize to this frame without politeness
    """

    lemma: str
    args: Mapping[str, str]
    source: FrameSource = FrameSource.FILE
    variants: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.lemma:
            raise ValueError("frame lemma must not be empty")
        if not self.args:
            raise ValueError(f"frame {self.lemma} defines no arguments")
        for role in self.args:
            if not _ARG_RE.match(role):
                raise ValueError(f"frame {self.lemma}: {role} is not one of ARG0..ARG5")

    def defines(self, role: str) -> bool:
        return role in self.args


@dataclass(frozen=True)
class LVCEntry:
    """A light verb construction and the lemmas normalized to it."""

    canonical: str
    nv: str
    lv: str
    variant_lvs: Tuple[str, ...] = ()
    formal_variants: Tuple[str, ...] = ()
    simple_equivalents: Tuple[str, ...] = ()
    nv_predicative: bool = False
    separable: bool = False
    homograph_role: Optional[str] = None

    def __post_init__(self):
        if self.canonical != f"{self.nv}_{self.lv}":
            raise ValueError(f"LVC {self.canonical} is not {self.nv}_{self.lv}")

    @property
    def light_verbs(self) -> FrozenSet[str]:
        """The canonical light verb plus the light verbs of its variants."""
        verbs = {self.lv}
        prefix = f"{self.nv}_"
        for lemma in self.variant_lvs + self.formal_variants:
            if lemma.startswith(prefix):
                verbs.add(lemma[len(prefix):])
        return frozenset(verbs)


@dataclass(frozen=True)
class Inventories:
    abstract_concepts: FrozenSet[str] = frozenset()
    pronouns: FrozenSet[str] = frozenset()


class Normalization(NamedTuple):
    lemma: str
    polite: bool
    changed: bool


@dataclass
class _Records:
    frames: Dict[str, VerbFrame] = field(default_factory=dict)
    lvcs: Dict[str, LVCEntry] = field(default_factory=dict)
    abstract: Set[str] = field(default_factory=set)
    pronouns: Set[str] = field(default_factory=set)


class Lexicon:
    """Immutable, merged view over frames, LVC entries and inventories."""

    def __init__(self,
                 frames: Mapping[str, VerbFrame],
                 lvcs: Mapping[str, LVCEntry],
                 inventories: Inventories):
        self._frames = dict(frames)
        self._lvcs = dict(lvcs)
        self.inventories = inventories
        self._normalization: Dict[str, Tuple[str, bool]] = {}
        self._by_nv: Dict[str, List[LVCEntry]] = {}
        self._build_indexes()

    def _build_indexes(self) -> None:
        sources: List[Tuple[str, str, bool]] = []
        for frame in self._frames.values():
            sources.extend((lemma, frame.lemma, False) for lemma in frame.variants)
        for entry in self._lvcs.values():
            sources.extend((lemma, entry.canonical, False) for lemma in entry.variant_lvs)
            sources.extend((lemma, entry.canonical, False) for lemma in entry.simple_equivalents)
            sources.extend((lemma, entry.canonical, True) for lemma in entry.formal_variants)
            self._by_nv.setdefault(entry.nv, []).append(entry)
            if entry.canonical not in self._frames:
                raise LexiconError(f"LVC {entry.canonical} has no frame")

        targets = {target for _, target, _ in sources}
        for lemma, target, polite in sources:
            if lemma in self._normalization:
                raise LexiconError(
                    f"{lemma} is listed for both {self._normalization[lemma][0]} and {target}")
            if lemma in targets or lemma in self._lvcs:
                raise LexiconError(f"{lemma} is both a normalization source and a canonical lemma")
            self._normalization[lemma] = (target, polite)

    @property
    def frames(self) -> Mapping[str, VerbFrame]:
        return dict(self._frames)

    @property
    def lvcs(self) -> Mapping[str, LVCEntry]:
        return dict(self._lvcs)

    def lookup_frame(self, lemma: str) -> Optional[VerbFrame]:
        """Exact-match lookup on the NFC-normalized lemma."""
        return self._frames.get(_nfc(lemma))

    def normalize_verb(self, lemma: str) -> Normalization:
        """Map variant, simple-verb and formal lemmas to their canonical lemma."""
        lemma = _nfc(lemma)
        if lemma in self._normalization:
            target, polite = self._normalization[lemma]
            return Normalization(target, polite, True)
        return Normalization(lemma, False, False)

    def frame_for(self, concept: str) -> Optional[VerbFrame]:
        """Frame of a concept after normalization."""
        return self.lookup_frame(self.normalize_verb(concept).lemma)

    def lvc(self, canonical: str) -> Optional[LVCEntry]:
        return self._lvcs.get(_nfc(canonical))

    def entry_for_variant(self, lemma: str) -> Optional[LVCEntry]:
        """The LVC entry a variant, simple or formal lemma belongs to."""
        lemma = _nfc(lemma)
        if lemma not in self._normalization:
            return None
        return self._lvcs.get(self._normalization[lemma][0])

    def entries_for_nv(self, nv: str) -> List[LVCEntry]:
        return list(self._by_nv.get(_nfc(nv), []))

    def is_abstract(self, label: str) -> bool:
        return _nfc(label) in self.inventories.abstract_concepts

    def is_pronoun(self, label: str) -> bool:
        return _nfc(label) in self.inventories.pronouns

    def classify(self, label: str) -> Concept:
        """Attach the concept kind: abstract iff the label is in the abstract inventory."""
        kind = ConceptKind.ABSTRACT if self.is_abstract(label) else ConceptKind.LEXICAL
        return Concept(_nfc(label), kind)


def _split_list(value: str) -> Tuple[str, ...]:
    return tuple(_nfc(v) for v in value.split(",") if v.strip())


def _flag(value: str, name: str, where: str, line: int) -> bool:
    if value.strip() in ("", "0"):
        return False
    if value.strip() == "1":
        return True
    raise LexiconError(f"{name} must be 0 or 1, got {value!r}", where, line)


def _parse_frame(fields: List[str], source: FrameSource, where: str, line: int) -> VerbFrame:
    if len(fields) < 2 or not fields[1].strip():
        raise LexiconError("FRAME record needs a lemma", where, line)
    args: Dict[str, str] = {}
    variants: Tuple[str, ...] = ()
    for item in fields[2:]:
        if not item.strip():
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep:
            raise LexiconError(f"expected key=value, got {item!r}", where, line)
        if key == "variants":
            variants = _split_list(value)
        elif _ARG_RE.match(key.upper()):
            if key.upper() in args:
                raise LexiconError(f"{key} defined twice", where, line)
            args[key.upper()] = value.strip()
        else:
            raise LexiconError(f"unknown FRAME field {key!r}", where, line)
    try:
        return VerbFrame(_nfc(fields[1]), args, source, variants)
    except ValueError as e:
        raise LexiconError(str(e), where, line) from None


def _parse_lvc(fields: List[str], where: str, line: int) -> LVCEntry:
    if len(fields) < 4:
        raise LexiconError("LVC record needs canonical, nv and lv", where, line)
    options: Dict[str, str] = {}
    for item in fields[4:]:
        if not item.strip():
            continue
        key, sep, value = item.partition("=")
        if not sep:
            raise LexiconError(f"expected key=value, got {item!r}", where, line)
        options[key.strip()] = value
    unknown = set(options) - {"variants", "formal", "simple", "predicative", "separable", "homograph"}
    if unknown:
        raise LexiconError(f"unknown LVC field(s) {sorted(unknown)}", where, line)
    homograph = options.get("homograph", "").strip().upper() or None
    if homograph is not None and not _ARG_RE.match(homograph):
        raise LexiconError(f"homograph must name ARG0..ARG5, got {homograph!r}", where, line)
    try:
        return LVCEntry(
            canonical=_nfc(fields[1]),
            nv=_nfc(fields[2]),
            lv=_nfc(fields[3]),
            variant_lvs=_split_list(options.get("variants", "")),
            formal_variants=_split_list(options.get("formal", "")),
            simple_equivalents=_split_list(options.get("simple", "")),
            nv_predicative=_flag(options.get("predicative", ""), "predicative", where, line),
            separable=_flag(options.get("separable", ""), "separable", where, line),
            homograph_role=homograph,
        )
    except ValueError as e:
        raise LexiconError(str(e), where, line) from None


def _parse_lines(lines: Iterable[str], where: str, source: FrameSource) -> _Records:
    records = _Records()
    for number, raw in enumerate(lines, start=1):
        text = raw.rstrip("\r\n")
        if not text.strip() or text.lstrip().startswith("#"):
            continue
        fields = text.split("\t")
        kind = fields[0].strip().upper()
        if kind == "FRAME":
            frame = _parse_frame(fields, source, where, number)
            if frame.lemma in records.frames:
                raise LexiconError(f"duplicate frame {frame.lemma}", where, number)
            records.frames[frame.lemma] = frame
        elif kind == "LVC":
            entry = _parse_lvc(fields, where, number)
            if entry.canonical in records.lvcs:
                raise LexiconError(f"duplicate LVC {entry.canonical}", where, number)
            records.lvcs[entry.canonical] = entry
        elif kind in ("ABSTRACT", "PRONOUN"):
            if len(fields) < 2 or not fields[1].strip():
                raise LexiconError(f"{kind} record needs a label", where, number)
            (records.abstract if kind == "ABSTRACT" else records.pronouns).add(_nfc(fields[1]))
        else:
            raise LexiconError(f"unknown record type {fields[0]!r}", where, number)
    return records


@lru_cache(maxsize=1)
def _builtin_records() -> _Records:
    text = resources.files("pamr.guideline").joinpath("data", "builtin.lex").read_text(encoding="utf-8")
    return _parse_lines(text.splitlines(), BUILTIN_NAME, FrameSource.BUILTIN)


def _merge(base: _Records, overlay: _Records, where: str) -> _Records:
    merged = _Records(dict(base.frames), dict(base.lvcs), set(base.abstract), set(base.pronouns))
    for lemma, frame in overlay.frames.items():
        if lemma in merged.frames:
            logger.info(f"{where}: frame {lemma} overrides the builtin definition")
        merged.frames[lemma] = frame
    for canonical, entry in overlay.lvcs.items():
        if canonical in merged.lvcs:
            logger.info(f"{where}: LVC {canonical} overrides the builtin definition")
        merged.lvcs[canonical] = entry
    merged.abstract |= overlay.abstract
    merged.pronouns |= overlay.pronouns
    return merged


def _from_records(records: _Records) -> Lexicon:
    inventories = Inventories(frozenset(records.abstract), frozenset(records.pronouns))
    return Lexicon(records.frames, records.lvcs, inventories)


@lru_cache(maxsize=1)
def builtin_lexicon() -> Lexicon:
    """The lexicon shipped with the package."""
    return _from_records(_builtin_records())


def load_lexicon(path: Optional[Union[str, Path]] = None, include_builtin: bool = True) -> Lexicon:
    """Load a lexicon file and merge it over the builtin entries.

    Args:
        path: lexicon file, or None for the builtin lexicon alone
        include_builtin: merge the builtin entries underneath the file's

    Returns:
        The merged Lexicon

    Raises:
        OSError: if the file cannot be read
        EncodingError: if the file is not valid UTF-8
        LexiconError: on format errors, duplicate lemmas within the file or
            inconsistent normalization lists
    """
    if path is None:
        return builtin_lexicon()
    where = str(path)
    records = _parse_lines(read_utf8(path).split("\n"), where, FrameSource.FILE)
    if include_builtin:
        records = _merge(_builtin_records(), records, where)
    try:
        lexicon = _from_records(records)
    except LexiconError as e:
        raise LexiconError(str(e), where) from None
    logger.info(f"Loaded lexicon {where}: {len(records.frames)} frames, {len(records.lvcs)} LVCs")
    return lexicon


def lookup_frame(lex: Lexicon, lemma: str) -> Optional[VerbFrame]:
    return lex.lookup_frame(lemma)


def normalize_verb(lex: Lexicon, lemma: str) -> Normalization:
    return lex.normalize_verb(lemma)
