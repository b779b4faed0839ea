"""Guideline rule catalog: checks a graph against the PAMR annotation conventions."""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from ..amr.graph import (
    CORE_ROLES,
    Attribute,
    Constant,
    ConstantKind,
    Edge,
    Graph,
    check_wellformed,
    sort_diagnostics,
)
from ..diagnostics import Diagnostic, RuleId, Severity, default_severity
from .lexicon import Lexicon

logger = logging.getLogger(__name__)

SHAYAD = "shâyad"
MODAL_VERBS = frozenset({"bâyestan", "tavânestan"})
POSSESSIVE_VERB = "dâshtan"
POSSESSIVE_ARGS = frozenset({"ARG1", "ARG2"})


@dataclass(frozen=True)
class RuleConfig:
    """Which rules run and with what severity.

    Attributes:
        enabled: rule ids to run (all rules by default)
        severity_overrides: replacement severities for individual rules
    """

    enabled: FrozenSet[RuleId] = field(default_factory=lambda: frozenset(RuleId))
    severity_overrides: Mapping[RuleId, Severity] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "enabled", frozenset(self.enabled))
        for rule in self.severity_overrides:
            if not isinstance(rule, RuleId):
                raise ValueError(f"severity override for unknown rule {rule!r}")

    @classmethod
    def from_strings(cls,
                     rules: Optional[Iterable[str]] = None,
                     severities: Optional[Iterable[str]] = None) -> "RuleConfig":
        """Build a config from CLI/env strings such as ``R1,R5`` and ``R3=error``.

        Raises:
            ValueError: for unknown rule ids or severities
        """
        enabled = frozenset(RuleId)
        if rules:
            names = [name for item in rules for name in item.split(",") if name.strip()]
            enabled = frozenset(RuleId.parse(name) for name in names)
        overrides: Dict[RuleId, Severity] = {}
        for item in severities or ():
            for pair in item.split(","):
                if not pair.strip():
                    continue
                rule, sep, level = pair.partition("=")
                if not sep:
                    raise ValueError(f"expected RULE=severity, got {pair!r}")
                overrides[RuleId.parse(rule)] = Severity(level.strip().lower())
        return cls(enabled, overrides)

    def severity(self, rule: RuleId) -> Severity:
        return self.severity_overrides.get(rule, default_severity(rule))


class _Context:
    """Per-graph lookups shared by the rules."""

    def __init__(self, graph: Graph, lexicon: Lexicon, clitic_vars: FrozenSet[str]):
        self.graph = graph
        self.lexicon = lexicon
        self.clitic_vars = clitic_vars
        self.concepts = graph.concepts()
        self.order = graph.preorder()
        self.edges = [e.normalized() for e in graph.edges]

    def outgoing(self, var: str) -> List[Edge]:
        return [e for e in self.edges if e.source == var]

    def incoming(self, var: str) -> List[Edge]:
        return [e for e in self.edges if e.target == var]

    def core_edges(self, var: str) -> List[Edge]:
        return [e for e in self.outgoing(var) if e.role in CORE_ROLES]

    def attributes(self, var: str) -> List[Attribute]:
        return [a for a in self.graph.attributes if a.source == var]

    def is_predicative_nv(self, concept: str) -> bool:
        return any(entry.nv_predicative for entry in self.lexicon.entries_for_nv(concept))


Finding = Tuple[str, str]  # (variable, message)
Rule = Callable[[_Context], List[Finding]]


def _infinitive_lemma(ctx: _Context) -> List[Finding]:
    findings = []
    for var in ctx.order:
        concept = ctx.concepts[var]
        if not ctx.core_edges(var) or concept == SHAYAD:
            continue
        if ctx.lexicon.is_abstract(concept) or ctx.is_predicative_nv(concept):
            continue
        if ctx.lexicon.frame_for(concept) is None:
            findings.append((var, f"{concept} bears core roles but is not an infinitive frame lemma"))
    return findings


def _lvc_unified(ctx: _Context) -> List[Finding]:
    findings = []
    for var in ctx.order:
        concept = ctx.concepts[var]
        for edge in ctx.core_edges(var):
            nv = ctx.concepts.get(edge.target)
            for entry in ctx.lexicon.entries_for_nv(nv or ""):
                if concept not in entry.light_verbs:
                    continue
                if entry.homograph_role == edge.role and concept == entry.lv:
                    continue
                findings.append((var, f"{concept} with :{edge.role} {nv} is the separated LVC "
                                      f"{entry.canonical}; annotate it as one event"))
    return findings


def _variant_lv(ctx: _Context) -> List[Finding]:
    findings = []
    for var in ctx.order:
        concept = ctx.concepts[var]
        norm = ctx.lexicon.normalize_verb(concept)
        if norm.changed and not norm.polite:
            findings.append((var, f"{concept} should be normalized to {norm.lemma}"))
    return findings


def _is_plus(value: Constant) -> bool:
    """The bare ``+`` marker; a quoted ``"+"`` is a string."""
    return value.kind is ConstantKind.SYMBOL and value.value == "+"


def _polite_form(ctx: _Context) -> List[Finding]:
    findings = []
    for var in ctx.order:
        concept = ctx.concepts[var]
        polite = [a for a in ctx.attributes(var) if a.role == "polite"]
        norm = ctx.lexicon.normalize_verb(concept)
        if norm.polite and not any(_is_plus(a.value) for a in polite):
            findings.append((var, f"formal variant {concept} should be {norm.lemma} with :polite +"))
    return findings


def _polite_value(ctx: _Context) -> List[Finding]:
    findings = []
    for var in ctx.order:
        for attribute in ctx.attributes(var):
            if attribute.role == "polite" and not _is_plus(attribute.value):
                findings.append((var, f":polite takes only +, got {attribute.value.render()}"))
    return findings


def _shayad_as_mod(ctx: _Context) -> List[Finding]:
    findings = []
    for var in ctx.order:
        if ctx.concepts[var] != SHAYAD:
            continue
        if ctx.outgoing(var) or ctx.attributes(var):
            findings.append((var, f"{SHAYAD} is an adverb and cannot take arguments; attach it with :mod"))
        elif any(e.role != "mod" for e in ctx.incoming(var)) or var == ctx.graph.root:
            findings.append((var, f"{SHAYAD} must appear only as the target of :mod"))
    return findings


def _modal_verb_args(ctx: _Context) -> List[Finding]:
    findings = []
    for var in ctx.order:
        concept = ctx.concepts[var]
        if concept not in MODAL_VERBS:
            continue
        events = [e for e in ctx.outgoing(var)
                  if e.role == "ARG1" and ctx.lexicon.frame_for(ctx.concepts.get(e.target, "")) is not None]
        if not events:
            findings.append((var, f"{concept} needs an :ARG1 whose concept is an event frame"))
    return findings


def _possessor_clitic(ctx: _Context) -> List[Finding]:
    findings = []
    for var in ctx.order:
        if ctx.concepts[var] != POSSESSIVE_VERB:
            continue
        roles = {e.role for e in ctx.core_edges(var)}
        if roles != POSSESSIVE_ARGS:
            found = ", ".join(sorted(roles)) or "none"
            findings.append((var, f"{POSSESSIVE_VERB} is expected with ARG1 (owner) and ARG2 "
                                  f"(possession); found {found}"))
    return findings


def _pronoun_inventory(ctx: _Context) -> List[Finding]:
    findings = []
    for var in ctx.order:
        if var not in ctx.clitic_vars:
            continue
        concept = ctx.concepts[var]
        if ctx.outgoing(var) or ctx.attributes(var):
            findings.append((var, f"clitic-expanded node {concept} must be a leaf pronoun"))
        elif not ctx.lexicon.is_pronoun(concept):
            findings.append((var, f"clitic-expanded node {concept} is not a full pronoun"))
    return findings


def _causative_args(ctx: _Context) -> List[Finding]:
    findings = []
    for var in ctx.order:
        concept = ctx.concepts[var]
        frame = ctx.lexicon.frame_for(concept)
        if frame is None or not frame.defines("ARG1"):
            continue
        roles = {e.role for e in ctx.core_edges(var)}
        if roles == {"ARG0"}:
            findings.append((var, f"{concept} has :ARG0 but no other core argument; the "
                                  f"inchoative keeps :ARG1, the causative adds :ARG0"))
    return findings


def _arg_in_frame(ctx: _Context) -> List[Finding]:
    findings = []
    for var in ctx.order:
        concept = ctx.concepts[var]
        frame = ctx.lexicon.frame_for(concept)
        if frame is None:
            continue
        for edge in ctx.core_edges(var):
            if not frame.defines(edge.role):
                defined = ", ".join(sorted(frame.args))
                findings.append((var, f":{edge.role} is not defined by frame {frame.lemma} ({defined})"))
    return findings


def _predicative_nominal(ctx: _Context) -> List[Finding]:
    findings = []
    for var in ctx.order:
        concept = ctx.concepts[var]
        core = ctx.core_edges(var)
        if not core or not ctx.is_predicative_nv(concept):
            continue
        for entry in ctx.lexicon.entries_for_nv(concept):
            frame = ctx.lexicon.lookup_frame(entry.canonical)
            extra = sorted({e.role for e in core if not frame.defines(e.role)})
            if entry.nv_predicative and extra:
                findings.append((var, f"predicative nominal {concept} uses {', '.join(extra)} "
                                      f"outside the frame of {entry.canonical}"))
    return findings


# R4 covers both the missing :polite + and a non-+ :polite value; the value
# check is an Error unless R4 is explicitly overridden.
_RULES: Dict[RuleId, List[Rule]] = {
    RuleId.R1: [_infinitive_lemma],
    RuleId.R2: [_lvc_unified],
    RuleId.R3: [_variant_lv],
    RuleId.R4: [_polite_form],
    RuleId.R5: [_shayad_as_mod],
    RuleId.R6: [_modal_verb_args],
    RuleId.R7: [_possessor_clitic],
    RuleId.R8: [_pronoun_inventory],
    RuleId.R9: [_causative_args],
    RuleId.R10: [_arg_in_frame],
    RuleId.R11: [_predicative_nominal],
}


def validate(g: Graph,
             lex: Lexicon,
             cfg: Optional[RuleConfig] = None,
             clitic_vars: Iterable[str] = ()) -> List[Diagnostic]:
    """Run the graph checks and the guideline rules.

    Args:
        g: graph to check
        lex: lexicon providing frames, LVC entries and inventories
        cfg: enabled rules and severity overrides (all rules by default)
        clitic_vars: variables the corpus marks as clitic-expanded pronouns

    Returns:
        Diagnostics ordered by variable preorder, then rule id. Guideline
        rules are skipped when the graph is not wellformed.
    """
    cfg = cfg or RuleConfig()
    structural = check_wellformed(g)
    diagnostics = [
        Diagnostic(d.rule, cfg.severity(d.rule), d.variable, d.message)
        for d in structural if d.rule in cfg.enabled
    ]
    if structural:
        logger.debug(f"Skipping guideline rules: {len(structural)} structural finding(s)")
        return sort_diagnostics(g, diagnostics)

    ctx = _Context(g, lex, frozenset(clitic_vars))
    for rule, checks in _RULES.items():
        if rule not in cfg.enabled:
            continue
        for check in checks:
            for variable, message in check(ctx):
                diagnostics.append(Diagnostic(rule, cfg.severity(rule), variable, message))
        if rule is RuleId.R4:
            for variable, message in _polite_value(ctx):
                level = cfg.severity_overrides.get(rule, Severity.ERROR)
                diagnostics.append(Diagnostic(rule, level, variable, message))
    return sort_diagnostics(g, diagnostics)
