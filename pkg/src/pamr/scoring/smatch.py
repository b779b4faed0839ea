"""Smatch: triple-overlap similarity between two graphs under a variable mapping."""
import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from ..amr.graph import Graph, TripleKind, require_wellformed, triples
from ..errors import SmatchError, SmatchSizeError

logger = logging.getLogger(__name__)

EXACT_CAP = 8


class MatchMode(Enum):
    LABELED = "labeled"
    UNLABELED = "unlabeled"


@dataclass(frozen=True)
class SmatchConfig:
    """Search settings for score_pair.

    Attributes:
        restarts: hill-climbing restarts; restart 0 is the greedy seed
        seed: seed for the random restarts
        include_top: count the TOP triple
        mode: LABELED compares relation and attribute roles, UNLABELED ignores them
        exact_threshold: use exhaustive search up to this many variables
    """

    restarts: int = 8
    seed: int = 0
    include_top: bool = True
    mode: MatchMode = MatchMode.LABELED
    exact_threshold: int = 6

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError(f"restarts must be at least 1, got {self.restarts}")
        if self.exact_threshold < 0:
            raise ValueError(f"exact_threshold must not be negative, got {self.exact_threshold}")


def _precision_recall_f1(matched: int, total_a: int, total_b: int) -> Tuple[float, float, float]:
    p, r, f = 0.0, 0.0, 0.0
    if total_a > 0:
        p = matched / total_a
    if total_b > 0:
        r = matched / total_b
    if p + r > 0:
        f = 2 * p * r / (p + r)
    return p, r, f


@dataclass(frozen=True)
class ScoreReport:
    """Result of one Smatch computation. A is the candidate, B the reference."""

    matched: int
    total_a: int
    total_b: int
    precision: float
    recall: float
    f1: float
    mapping: Dict[str, str] = field(default_factory=dict)
    mode: MatchMode = MatchMode.LABELED

    @classmethod
    def from_counts(cls,
                    matched: int,
                    total_a: int,
                    total_b: int,
                    mapping: Optional[Dict[str, str]] = None,
                    mode: MatchMode = MatchMode.LABELED) -> "ScoreReport":
        p, r, f = _precision_recall_f1(matched, total_a, total_b)
        return cls(matched, total_a, total_b, p, r, f, dict(mapping or {}), mode)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "matched": self.matched,
            "total_a": self.total_a,
            "total_b": self.total_b,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "mode": self.mode.value,
            "mapping": dict(self.mapping),
        }


@dataclass(frozen=True)
class CorpusScore:
    """Micro-aggregated score plus the per-pair reports it was summed from."""

    micro: ScoreReport
    pairs: Tuple[ScoreReport, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "micro": self.micro.to_dict(),
            "pairs": [p.to_dict() for p in self.pairs],
        }


class _Problem:
    """Triples of both graphs indexed for mapping search.

    Triples touching one variable (instance, TOP, attributes, self-loops) are
    folded into ``unary[i, j]``: the number of such triples of A's i-th
    variable matched when it maps to B's j-th variable. Relations between two
    distinct variables are scored per mapping. Triples are counted as a multiset:
    a repeated triple matches as often as it occurs on both sides.
    """

    def __init__(self, a: Graph, b: Graph, cfg: SmatchConfig):
        self.mode = cfg.mode
        self.a_vars = a.preorder()
        self.b_vars = b.preorder()
        a_index = {v: i for i, v in enumerate(self.a_vars)}
        b_index = {v: j for j, v in enumerate(self.b_vars)}

        a_unary, a_binary = self._split(a, a_index, cfg.include_top)
        b_unary, b_binary = self._split(b, b_index, cfg.include_top)
        self.total_a = sum(sum(keys.values()) for keys in a_unary.values()) + sum(a_binary.values())
        self.total_b = sum(sum(keys.values()) for keys in b_unary.values()) + sum(b_binary.values())

        self.unary = np.zeros((len(self.a_vars), len(self.b_vars)), dtype=np.int64)
        for i, keys in a_unary.items():
            for j, other in b_unary.items():
                self.unary[i, j] = sum((keys & other).values())

        self.binary = sorted(a_binary)
        self.binary_counts = [a_binary[key] for key in self.binary]
        self.b_binary = b_binary
        self.incident: List[List[int]] = [[] for _ in self.a_vars]
        for k, (src, _, tgt) in enumerate(self.binary):
            self.incident[src].append(k)
            self.incident[tgt].append(k)

    def _role(self, role: str) -> str:
        return role if self.mode is MatchMode.LABELED else ""

    def _split(self, g: Graph, index: Dict[str, int], include_top: bool):
        unary: Dict[int, Counter] = {i: Counter() for i in index.values()}
        binary: Counter = Counter()
        for t in triples(g, include_top=include_top):
            if t.kind is TripleKind.TOP:
                unary[index[t.source]][("top", t.target)] += 1
            elif t.kind is TripleKind.INSTANCE:
                unary[index[t.source]][("instance", t.target)] += 1
            elif t.kind is TripleKind.ATTRIBUTE:
                unary[index[t.source]][("attribute", self._role(t.role), t.target.render())] += 1
            elif t.source == t.target:
                unary[index[t.source]][("loop", self._role(t.role))] += 1
            else:
                binary[(index[t.source], self._role(t.role), index[t.target])] += 1
        return unary, binary

    def _relation_hit(self, mapping: Sequence[Optional[int]], k: int) -> int:
        src, role, tgt = self.binary[k]
        ms, mt = mapping[src], mapping[tgt]
        if ms is None or mt is None:
            return 0
        return min(self.binary_counts[k], self.b_binary.get((ms, role, mt), 0))

    def score(self, mapping: Sequence[Optional[int]]) -> int:
        total = sum(int(self.unary[i, j]) for i, j in enumerate(mapping) if j is not None)
        return total + sum(self._relation_hit(mapping, k) for k in range(len(self.binary)))

    def local(self, mapping: Sequence[Optional[int]], variables: Sequence[int]) -> int:
        """Contribution of the triples touching ``variables``."""
        total = sum(int(self.unary[i, mapping[i]]) for i in variables if mapping[i] is not None)
        touched = {k for i in variables for k in self.incident[i]}
        return total + sum(self._relation_hit(mapping, k) for k in touched)

    def upper_bound(self) -> int:
        return min(self.total_a, self.total_b)

    def report(self, matched: int, mapping: Sequence[Optional[int]]) -> ScoreReport:
        named = {self.a_vars[i]: self.b_vars[j] for i, j in enumerate(mapping) if j is not None}
        return ScoreReport.from_counts(matched, self.total_a, self.total_b, named, self.mode)


def _greedy(problem: _Problem) -> List[Optional[int]]:
    """Assign each A variable, in preorder, the free B variable it matches best."""
    mapping: List[Optional[int]] = [None] * len(problem.a_vars)
    taken: Set[int] = set()
    for i in range(len(problem.a_vars)):
        best, best_weight = None, 0
        for j in range(len(problem.b_vars)):
            weight = int(problem.unary[i, j])
            if j not in taken and weight > best_weight:
                best, best_weight = j, weight
        if best is not None:
            mapping[i] = best
            taken.add(best)
    return mapping


def _random(problem: _Problem, rng: np.random.Generator) -> List[Optional[int]]:
    n, m = len(problem.a_vars), len(problem.b_vars)
    mapping: List[Optional[int]] = [None] * n
    a_order = rng.permutation(n)
    b_order = rng.permutation(m)
    for i, j in zip(a_order, b_order):
        mapping[int(i)] = int(j)
    return mapping


def _climb(problem: _Problem, mapping: List[Optional[int]]) -> int:
    """Apply the best improving move until none is left; returns the final score."""
    current = problem.score(mapping)
    n, m = len(problem.a_vars), len(problem.b_vars)
    while True:
        best_gain, best_move = 0, None
        used = {j for j in mapping if j is not None}
        free = [j for j in range(m) if j not in used]
        for i in range(n):
            before = problem.local(mapping, [i])
            old = mapping[i]
            for j in free:
                mapping[i] = j
                gain = problem.local(mapping, [i]) - before
                if gain > best_gain:
                    best_gain, best_move = gain, ("move", i, j)
            mapping[i] = old
            for k in range(i + 1, n):
                if mapping[i] == mapping[k]:
                    continue
                pair = [i, k]
                before_pair = problem.local(mapping, pair)
                mapping[i], mapping[k] = mapping[k], mapping[i]
                gain = problem.local(mapping, pair) - before_pair
                mapping[i], mapping[k] = mapping[k], mapping[i]
                if gain > best_gain:
                    best_gain, best_move = gain, ("swap", i, k)
        if best_move is None:
            return current
        kind, i, other = best_move
        if kind == "move":
            mapping[i] = other
        else:
            mapping[i], mapping[other] = mapping[other], mapping[i]
        current += best_gain


def _search_exact(problem: _Problem) -> ScoreReport:
    n, m = len(problem.a_vars), len(problem.b_vars)
    best_score, best_mapping = -1, [None] * n
    if n <= m:
        candidates = (list(p) for p in itertools.permutations(range(m), n))
    else:
        candidates = (_inverse(p, n) for p in itertools.permutations(range(n), m))
    for mapping in candidates:
        score = problem.score(mapping)
        if score > best_score:
            best_score, best_mapping = score, mapping
            if score == problem.upper_bound():
                break
    return problem.report(best_score, best_mapping)


def _inverse(chosen: Tuple[int, ...], n: int) -> List[Optional[int]]:
    """A mapping where A variable ``chosen[j]`` maps to B variable j."""
    mapping: List[Optional[int]] = [None] * n
    for j, i in enumerate(chosen):
        mapping[i] = j
    return mapping


def _prepare(a: Graph, b: Graph, cfg: SmatchConfig) -> _Problem:
    require_wellformed(a)
    require_wellformed(b)
    return _Problem(a, b, cfg)


def score_exact(a: Graph, b: Graph, cfg: Optional[SmatchConfig] = None) -> ScoreReport:
    """Exhaustive Smatch over every injective mapping.

    Raises:
        GraphError: if either graph is not wellformed
        SmatchSizeError: if either graph has more than 8 variables
    """
    cfg = cfg or SmatchConfig()
    size = max(len(a.variables), len(b.variables))
    if size > EXACT_CAP:
        raise SmatchSizeError(f"exact search supports at most {EXACT_CAP} variables, got {size}")
    return _search_exact(_prepare(a, b, cfg))


def score_pair(a: Graph, b: Graph, cfg: Optional[SmatchConfig] = None) -> ScoreReport:
    """Smatch between candidate ``a`` and reference ``b``.

    Small graphs (at most ``cfg.exact_threshold`` variables on either side)
    are scored exhaustively; larger ones by hill-climbing from a greedy seed
    followed by ``cfg.restarts - 1`` random restarts.

    Args:
        a: candidate graph
        b: reference graph
        cfg: search settings

    Returns:
        ScoreReport with the best mapping found

    Raises:
        GraphError: if either graph is not wellformed
    """
    cfg = cfg or SmatchConfig()
    problem = _prepare(a, b, cfg)
    if max(len(problem.a_vars), len(problem.b_vars)) <= min(cfg.exact_threshold, EXACT_CAP):
        return _search_exact(problem)

    rng = np.random.default_rng(cfg.seed)
    best_score, best_mapping = -1, []
    for restart in range(cfg.restarts):
        mapping = _greedy(problem) if restart == 0 else _random(problem, rng)
        score = _climb(problem, mapping)
        logger.debug(f"Restart {restart}: {score}/{problem.upper_bound()}")
        if score > best_score:
            best_score, best_mapping = score, list(mapping)
        if best_score == problem.upper_bound():
            break
    return problem.report(best_score, best_mapping)


def score_corpus(pairs: Sequence[Tuple[Graph, Graph]], cfg: Optional[SmatchConfig] = None) -> CorpusScore:
    """Micro-averaged Smatch: counts are summed over pairs before P/R/F1.

    Raises:
        SmatchError: if ``pairs`` is empty
        GraphError: if any graph is not wellformed
    """
    if not pairs:
        raise SmatchError("cannot score an empty list of graph pairs")
    cfg = cfg or SmatchConfig()
    reports = tuple(score_pair(a, b, cfg) for a, b in pairs)
    micro = ScoreReport.from_counts(
        sum(r.matched for r in reports),
        sum(r.total_a for r in reports),
        sum(r.total_b for r in reports),
        mode=cfg.mode,
    )
    logger.info(f"Scored {len(reports)} pair(s): f1={micro.f1:.4f}")
    return CorpusScore(micro, reports)