"""Diagnostic records produced by the graph checks and the guideline validator."""
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict


class Severity(Enum):
    """How serious a finding is."""

    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


class RuleId(Enum):
    """Stable rule identifiers, usable in config files and CLI flags."""

    G_INSTANCE = "G-INSTANCE"
    G_DANGLE = "G-DANGLE"
    G_UNREACHABLE = "G-UNREACHABLE"
    G_CYCLE = "G-CYCLE"
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    R4 = "R4"
    R5 = "R5"
    R6 = "R6"
    R7 = "R7"
    R8 = "R8"
    R9 = "R9"
    R10 = "R10"
    R11 = "R11"

    @classmethod
    def parse(cls, text: str) -> "RuleId":
        """Look up a rule id by its string form (case-insensitive)."""
        wanted = text.strip().upper()
        for rule in cls:
            if rule.value == wanted:
                return rule
        raise ValueError(f"Unknown rule id: {text!r}")

    @property
    def order(self) -> int:
        """Position in the catalog, used to sort findings on one variable."""
        return list(RuleId).index(self)

    @property
    def is_graph_rule(self) -> bool:
        return self.value.startswith("G-")


# rule -> (default severity, short name)
RULE_CATALOG: Dict[RuleId, tuple] = {
    RuleId.G_INSTANCE: (Severity.ERROR, "OneInstancePerVariable"),
    RuleId.G_DANGLE: (Severity.ERROR, "DanglingVariable"),
    RuleId.G_UNREACHABLE: (Severity.ERROR, "Unreachable"),
    RuleId.G_CYCLE: (Severity.ERROR, "Cycle"),
    RuleId.R1: (Severity.ERROR, "InfinitiveLemma"),
    RuleId.R2: (Severity.ERROR, "LVCUnified"),
    RuleId.R3: (Severity.WARNING, "VariantLV"),
    RuleId.R4: (Severity.WARNING, "PoliteForm"),
    RuleId.R5: (Severity.ERROR, "ShayadAsMod"),
    RuleId.R6: (Severity.ERROR, "ModalVerbArgs"),
    RuleId.R7: (Severity.INFO, "PossessorClitic"),
    RuleId.R8: (Severity.ERROR, "PronounInventory"),
    RuleId.R9: (Severity.WARNING, "CausativeArgs"),
    RuleId.R10: (Severity.ERROR, "ArgInFrame"),
    RuleId.R11: (Severity.ERROR, "PredicativeNominal"),
}


def default_severity(rule: RuleId) -> Severity:
    return RULE_CATALOG[rule][0]


@dataclass(frozen=True)
class Diagnostic:
    """A single finding attached to a graph variable."""

    rule: RuleId
    severity: Severity
    variable: str
    message: str

    def __post_init__(self):
        if not self.message:
            raise ValueError("Diagnostic message must not be empty")

    def to_dict(self) -> Dict[str, Any]:
        """Convert diagnostic to dictionary representation."""
        return {
            "rule": self.rule.value,
            "severity": self.severity.value,
            "variable": self.variable,
            "message": self.message,
        }
