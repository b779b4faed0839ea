"""The AMR graph data model: variables, concepts, edges, constants and triples."""
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple, Union

import networkx as nx

from ..diagnostics import Diagnostic, RuleId, default_severity
from ..errors import GraphError

logger = logging.getLogger(__name__)

INSTANCE = "instance"
TOP = "TOP"

CORE_ROLES = ("ARG0", "ARG1", "ARG2", "ARG3", "ARG4", "ARG5")

# Role names that end in "-of" without being inverses.
NON_INVERSE_OF_ROLES = frozenset({"consist-of", "prep-out-of", "prep-on-behalf-of"})


class ConstantKind(Enum):
    """Lexical class of an attribute value."""

    STRING = "string"
    NUMBER = "number"
    SYMBOL = "symbol"  # polarity-style markers: + and -


@dataclass(frozen=True)
class Constant:
    """An attribute value such as "tehrân", 1562 or +."""

    value: str
    kind: ConstantKind = ConstantKind.STRING

    def __post_init__(self):
        if self.kind is ConstantKind.SYMBOL and self.value not in ("+", "-"):
            raise ValueError(f"Symbol constant must be + or -, got {self.value!r}")

    def render(self) -> str:
        """Render the constant the way it is written in PENMAN text."""
        if self.kind is ConstantKind.STRING:
            escaped = self.value.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"'
        return self.value

    def __str__(self) -> str:
        return self.render()


class ConceptKind(Enum):
    LEXICAL = "lexical"
    ABSTRACT = "abstract"


@dataclass(frozen=True)
class Concept:
    """A node label plus the kind assigned by a lexicon lookup."""

    label: str
    kind: ConceptKind = ConceptKind.LEXICAL

    def __post_init__(self):
        if not self.label:
            raise ValueError("Concept label must not be empty")


class TripleKind(Enum):
    TOP = "top"
    INSTANCE = "instance"
    RELATION = "relation"
    ATTRIBUTE = "attribute"


@dataclass(frozen=True)
class Triple:
    """Atomic unit used for matching and serialization."""

    source: str
    role: str
    target: Union[str, Constant]
    kind: TripleKind

    def to_dict(self) -> Dict[str, Any]:
        target = self.target.render() if isinstance(self.target, Constant) else self.target
        return {
            "kind": self.kind.value,
            "source": self.source,
            "role": self.role,
            "target": target,
        }


@dataclass(frozen=True)
class Instance:
    variable: str
    concept: str


def is_inverse_role(role: str) -> bool:
    """Whether a role such as ``ARG0-of`` points from target to source."""
    return role.endswith("-of") and role not in NON_INVERSE_OF_ROLES and len(role) > 3


@dataclass(frozen=True)
class Edge:
    """A relation between two variables, as written in the source notation."""

    source: str
    role: str
    target: str

    @property
    def is_inverse(self) -> bool:
        return is_inverse_role(self.role)

    def normalized(self) -> "Edge":
        """Forward form of the edge: ``(a :ARG0-of b)`` becomes ``(b :ARG0 a)``."""
        if self.is_inverse:
            return Edge(self.target, self.role[:-3], self.source)
        return self


@dataclass(frozen=True)
class Attribute:
    """A relation from a variable to a constant."""

    source: str
    role: str
    value: Constant


Branch = Union[Edge, Attribute]


@dataclass(frozen=True)
class Graph:
    """A rooted semantic graph.

    Branches (edges and attributes) keep the order in which they were recorded,
    so serialization mirrors the annotator's layout. Instances are kept as a
    sequence rather than a map so that malformed graphs built programmatically
    (a variable defined twice) can still be represented and diagnosed.

    Attributes:
        root: the top variable
        instances: one Instance per variable, in definition order
        branches: edges and attributes in recorded order
    """

    root: str
    instances: Tuple[Instance, ...] = field(default_factory=tuple)
    branches: Tuple[Branch, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "instances", tuple(self.instances))
        object.__setattr__(self, "branches", tuple(self.branches))

    @classmethod
    def build(cls,
              root: str,
              instances: Union[Mapping[str, str], Iterable[Tuple[str, str]]],
              edges: Iterable[Tuple[str, str, str]] = (),
              attributes: Iterable[Tuple[str, str, Constant]] = ()) -> "Graph":
        """Convenience constructor from plain tuples.

        Args:
            root: the top variable
            instances: variable -> concept mapping, or (variable, concept) pairs
            edges: (source, role, target) triples
            attributes: (source, role, Constant) triples

        Returns:
            A new Graph with edges recorded before attributes
        """
        pairs = instances.items() if isinstance(instances, Mapping) else instances
        branches: List[Branch] = [Edge(s, r, t) for s, r, t in edges]
        branches.extend(Attribute(s, r, c) for s, r, c in attributes)
        return cls(root, tuple(Instance(v, c) for v, c in pairs), tuple(branches))

    @property
    def edges(self) -> List[Edge]:
        return [b for b in self.branches if isinstance(b, Edge)]

    @property
    def attributes(self) -> List[Attribute]:
        return [b for b in self.branches if isinstance(b, Attribute)]

    @property
    def variables(self) -> List[str]:
        """Distinct instantiated variables in definition order."""
        return list(dict.fromkeys(i.variable for i in self.instances))

    def concept_of(self, variable: str) -> Optional[str]:
        for instance in self.instances:
            if instance.variable == variable:
                return instance.concept
        return None

    def concepts(self) -> Dict[str, str]:
        """Variable -> concept map (first definition wins)."""
        result: Dict[str, str] = {}
        for instance in self.instances:
            result.setdefault(instance.variable, instance.concept)
        return result

    def children(self, variable: str) -> List[Branch]:
        """Branches written under ``variable``, in recorded order."""
        return [b for b in self.branches if b.source == variable]

    def preorder(self) -> List[str]:
        """Variables in depth-first preorder from the root over written edges.

        Unreachable variables are not included.
        """
        order: List[str] = []
        seen = set()
        stack = [self.root]
        while stack:
            var = stack.pop()
            if var in seen:
                continue
            seen.add(var)
            order.append(var)
            targets = [b.target for b in self.children(var) if isinstance(b, Edge)]
            stack.extend(t for t in reversed(targets) if t not in seen)
        return order

    def to_dict(self) -> Dict[str, Any]:
        """Convert graph to dictionary representation."""
        return {
            "root": self.root,
            "instances": [{"variable": i.variable, "concept": i.concept} for i in self.instances],
            "edges": [{"source": e.source, "role": e.role, "target": e.target} for e in self.edges],
            "attributes": [
                {"source": a.source, "role": a.role, "value": a.value.render()}
                for a in self.attributes
            ],
        }


def triples(g: Graph, include_top: bool = True) -> List[Triple]:
    """Decompose a graph into triples.

    Order: the TOP triple (when requested), instance triples, relation triples
    (inverse roles normalized to the forward direction), attribute triples.
    """
    result: List[Triple] = []
    if include_top:
        result.append(Triple(g.root, TOP, g.concept_of(g.root) or "", TripleKind.TOP))
    result.extend(Triple(i.variable, INSTANCE, i.concept, TripleKind.INSTANCE) for i in g.instances)
    for edge in g.edges:
        forward = edge.normalized()
        result.append(Triple(forward.source, forward.role, forward.target, TripleKind.RELATION))
    result.extend(Triple(a.source, a.role, a.value, TripleKind.ATTRIBUTE) for a in g.attributes)
    return result


def normalize_inverse(g: Graph) -> Graph:
    """Return a copy of ``g`` where every inverse edge is written forward."""
    branches = [b.normalized() if isinstance(b, Edge) else b for b in g.branches]
    return Graph(g.root, g.instances, tuple(branches))


def _diagnostic(rule: RuleId, variable: str, message: str) -> Diagnostic:
    return Diagnostic(rule, default_severity(rule), variable, message)


def variable_order(g: Graph) -> Dict[str, int]:
    """Sort key for variables: preorder first, then everything else by first mention."""
    order = {var: i for i, var in enumerate(g.preorder())}
    mentioned = [i.variable for i in g.instances]
    for branch in g.branches:
        mentioned.append(branch.source)
        if isinstance(branch, Edge):
            mentioned.append(branch.target)
    for var in mentioned:
        if var not in order:
            order[var] = len(order)
    return order


def sort_diagnostics(g: Graph, diagnostics: Iterable[Diagnostic]) -> List[Diagnostic]:
    """Order findings by variable preorder, then by rule id."""
    order = variable_order(g)
    return sorted(diagnostics, key=lambda d: (order.get(d.variable, len(order)), d.rule.order))


def check_wellformed(g: Graph) -> List[Diagnostic]:
    """Check the structural constraints of an AMR graph.

    Returns:
        An empty list iff every variable has exactly one instance, every edge
        endpoint is defined, every variable is reachable from the root and the
        (inverse-normalized) edge relation has no directed cycle.
    """
    findings: List[Diagnostic] = []
    counts = Counter(i.variable for i in g.instances)
    for var, count in counts.items():
        if count > 1:
            findings.append(_diagnostic(
                RuleId.G_INSTANCE, var, f"variable {var} is defined {count} times"))

    defined = set(counts)
    dangling: List[str] = []
    mentioned = [g.root]
    for branch in g.branches:
        mentioned.append(branch.source)
        if isinstance(branch, Edge):
            mentioned.append(branch.target)
    for var in mentioned:
        if var not in defined and var not in dangling:
            dangling.append(var)
    for var in dangling:
        findings.append(_diagnostic(
            RuleId.G_DANGLE, var, f"variable {var} is used but never instantiated"))

    written = nx.DiGraph()
    written.add_nodes_from(g.variables)
    written.add_edges_from((e.source, e.target) for e in g.edges)
    reachable = set()
    if g.root in written:
        reachable = {g.root} | nx.descendants(written, g.root)
    for var in g.variables:
        if var not in reachable:
            findings.append(_diagnostic(
                RuleId.G_UNREACHABLE, var, f"variable {var} is not reachable from root {g.root}"))

    forward = nx.DiGraph()
    forward.add_nodes_from(g.variables)
    forward.add_edges_from((e.source, e.target) for e in (b.normalized() for b in g.edges))
    if not nx.is_directed_acyclic_graph(forward):
        order = variable_order(g)
        for cycle in nx.simple_cycles(forward):
            anchor = min(cycle, key=lambda v: order.get(v, len(order)))
            path = " -> ".join(cycle + [cycle[0]])
            findings.append(_diagnostic(RuleId.G_CYCLE, anchor, f"directed cycle {path}"))

    return sort_diagnostics(g, findings)


def require_wellformed(g: Graph) -> None:
    """Raise GraphError when ``g`` fails check_wellformed."""
    findings = check_wellformed(g)
    if findings:
        summary = "; ".join(f"{d.rule.value}: {d.message}" for d in findings)
        raise GraphError(f"graph is not wellformed: {summary}", findings)


def rename(g: Graph, mapping: Mapping[str, str]) -> Graph:
    """Rename variables; names missing from ``mapping`` are kept."""
    def name(var: str) -> str:
        return mapping.get(var, var)

    instances = tuple(Instance(name(i.variable), i.concept) for i in g.instances)
    branches: List[Branch] = []
    for branch in g.branches:
        if isinstance(branch, Edge):
            branches.append(Edge(name(branch.source), branch.role, name(branch.target)))
        else:
            branches.append(Attribute(name(branch.source), branch.role, branch.value))
    return Graph(name(g.root), instances, tuple(branches))


def canonical_names(g: Graph) -> Dict[str, str]:
    """Map each variable to first-letter-of-concept plus a disambiguating suffix.

    Variables are visited in preorder, so ``x``, ``x2``, ``x3`` are handed out
    in the order the nodes appear in the serialized graph.
    """
    concepts = g.concepts()
    used: Counter = Counter()
    names: Dict[str, str] = {}
    for var in g.preorder():
        concept = concepts.get(var, "")
        letter = next((ch for ch in concept if ch.isalpha()), "v")
        used[letter] += 1
        names[var] = letter if used[letter] == 1 else f"{letter}{used[letter]}"
    return names


def canonicalize(g: Graph) -> Graph:
    """Deterministically rename variables by preorder and re-record the graph.

    Instances and branches are re-emitted in depth-first order, so two graphs
    that differ only in variable names (or in the global interleaving of their
    branches) produce identical results.
    """
    require_wellformed(g)
    names = canonical_names(g)
    concepts = g.concepts()
    instances: List[Instance] = []
    branches: List[Branch] = []
    visited = set()

    def visit(var: str) -> None:
        visited.add(var)
        instances.append(Instance(names[var], concepts[var]))
        for branch in g.children(var):
            if isinstance(branch, Attribute):
                branches.append(Attribute(names[var], branch.role, branch.value))
                continue
            branches.append(Edge(names[var], branch.role, names[branch.target]))
            if branch.target not in visited:
                visit(branch.target)

    visit(g.root)
    return Graph(names[g.root], tuple(instances), tuple(branches))
