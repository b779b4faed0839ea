"""Corpus statistics and inter-annotator agreement."""
import itertools
import logging
from collections import Counter
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..amr.graph import Graph, triples
from ..errors import CorpusError
from ..scoring.smatch import MatchMode, ScoreReport, SmatchConfig, score_corpus
from .reader import AnnotatedSentence

logger = logging.getLogger(__name__)


def _frequency_table(labels: Sequence[str], name: str) -> pd.Series:
    """Counts sorted by frequency (descending), ties broken by label."""
    if not labels:
        return pd.Series(dtype="int64", name="count").rename_axis(name)
    counts = pd.Series(labels, dtype="object").value_counts().rename_axis(name).reset_index(name="count")
    counts = counts.sort_values(["count", name], ascending=[False, True], kind="mergesort")
    return counts.set_index(name)["count"]


def reentrancies(g: Graph) -> int:
    """Number of extra incoming edges: a variable entered k times contributes k - 1
    (k for the root, whose first mention is the graph itself)."""
    incoming = Counter(e.target for e in g.edges)
    return sum(count if var == g.root else count - 1 for var, count in incoming.items())


@dataclass(frozen=True)
class CorpusStats:
    """Summary statistics of a corpus.

    Attributes:
        sentence_count: number of records
        concepts: concept -> number of instances
        roles: role (as written) -> number of edges and attributes
        reentrancy_count: extra incoming edges summed over graphs
        mean_triples: mean triples per graph, TOP excluded
        median_triples: median triples per graph, TOP excluded
        lvc_concept_count: instances of underscore-joined concepts
    """

    sentence_count: int
    concepts: pd.Series
    roles: pd.Series
    reentrancy_count: int
    mean_triples: float
    median_triples: float
    lvc_concept_count: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sentence_count": self.sentence_count,
            "concepts": {str(k): int(v) for k, v in self.concepts.items()},
            "roles": {str(k): int(v) for k, v in self.roles.items()},
            "reentrancy_count": self.reentrancy_count,
            "mean_triples": self.mean_triples,
            "median_triples": self.median_triples,
            "lvc_concept_count": self.lvc_concept_count,
        }


def stats(corpus: Sequence[AnnotatedSentence]) -> CorpusStats:
    """Compute corpus statistics.

    Raises:
        CorpusError: if the corpus is empty
    """
    if not corpus:
        raise CorpusError("cannot compute statistics of an empty corpus")
    concepts: List[str] = []
    roles: List[str] = []
    sizes: List[int] = []
    reentrancy_count = 0
    for sentence in corpus:
        g = sentence.graph
        concepts.extend(i.concept for i in g.instances)
        roles.extend(b.role for b in g.branches)
        sizes.append(len(triples(g, include_top=False)))
        reentrancy_count += reentrancies(g)

    result = CorpusStats(
        sentence_count=len(corpus),
        concepts=_frequency_table(concepts, "concept"),
        roles=_frequency_table(roles, "role"),
        reentrancy_count=reentrancy_count,
        mean_triples=float(np.mean(sizes)),
        median_triples=float(np.median(sizes)),
        lvc_concept_count=sum(1 for c in concepts if "_" in c),
    )
    logger.info(f"Computed statistics for {result.sentence_count} sentences")
    return result


@dataclass(frozen=True)
class IaaReport:
    """Pairwise agreement between annotators over the ids they share.

    Attributes:
        annotators: annotator names in input order
        shared_ids: ids present in every corpus, in the first annotator's order
        pairwise: (annotator, annotator) -> micro Smatch, first name as candidate
        average_f1: arithmetic mean of the pairwise f1 scores
        mode: labeled or unlabeled matching
    """

    annotators: Tuple[str, ...]
    shared_ids: Tuple[str, ...]
    pairwise: Mapping[Tuple[str, str], ScoreReport]
    average_f1: float
    mode: MatchMode

    def to_frame(self) -> pd.DataFrame:
        """One row per annotator pair."""
        rows = [
            {
                "annotator_a": a,
                "annotator_b": b,
                "matched": r.matched,
                "total_a": r.total_a,
                "total_b": r.total_b,
                "precision": r.precision,
                "recall": r.recall,
                "f1": r.f1,
            }
            for (a, b), r in self.pairwise.items()
        ]
        return pd.DataFrame(rows, columns=[
            "annotator_a", "annotator_b", "matched", "total_a", "total_b", "precision", "recall", "f1"])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "annotators": list(self.annotators),
            "shared_ids": list(self.shared_ids),
            "mode": self.mode.value,
            "average_f1": self.average_f1,
            "pairwise": [
                {"annotator_a": a, "annotator_b": b, **report.to_dict()}
                for (a, b), report in self.pairwise.items()
            ],
        }


def shared_ids(corpora: Mapping[str, Sequence[AnnotatedSentence]]) -> List[str]:
    """Ids present in every corpus, in the order of the first one."""
    names = list(corpora)
    if not names:
        return []
    common = set.intersection(*({s.id for s in corpora[n]} for n in names))
    return [s.id for s in corpora[names[0]] if s.id in common]


def iaa(corpora: Mapping[str, Sequence[AnnotatedSentence]], cfg: Optional[SmatchConfig] = None) -> IaaReport:
    """Inter-annotator agreement: micro Smatch for every unordered annotator pair.

    Args:
        corpora: annotator name -> that annotator's corpus
        cfg: Smatch settings, including labeled/unlabeled mode

    Returns:
        IaaReport with every pairwise score and their average

    Raises:
        CorpusError: with fewer than two annotators or no shared ids
    """
    cfg = cfg or SmatchConfig()
    names = list(corpora)
    if len(names) < 2:
        raise CorpusError(f"agreement needs at least two annotators, got {len(names)}")
    ids = shared_ids(corpora)
    if not ids:
        raise CorpusError(f"annotators {', '.join(names)} share no sentence ids")
    by_id = {name: {s.id: s.graph for s in corpora[name]} for name in names}

    pairwise: Dict[Tuple[str, str], ScoreReport] = {}
    for a, b in itertools.combinations(names, 2):
        pairs = [(by_id[a][i], by_id[b][i]) for i in ids]
        pairwise[(a, b)] = score_corpus(pairs, cfg).micro
        logger.info(f"Agreement {a}/{b} ({cfg.mode.value}): f1={pairwise[(a, b)].f1:.4f}")

    average = float(np.mean([r.f1 for r in pairwise.values()]))
    return IaaReport(tuple(names), tuple(ids), pairwise, average, cfg.mode)


def iaa_both(corpora: Mapping[str, Sequence[AnnotatedSentence]],
             cfg: Optional[SmatchConfig] = None) -> Dict[MatchMode, IaaReport]:
    """Run iaa in labeled and unlabeled mode with otherwise identical settings."""
    cfg = cfg or SmatchConfig()
    return {mode: iaa(corpora, replace(cfg, mode=mode)) for mode in MatchMode}
