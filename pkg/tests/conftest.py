"""Shared fixtures for pytest."""
import sys
import tempfile
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import pytest

# Add the src directory to the path
src_dir = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_dir))

from pamr.amr.graph import Constant, ConstantKind, Graph  # noqa: E402
from pamr.corpus.reader import AnnotatedSentence, load_corpus  # noqa: E402
from pamr.guideline.lexicon import builtin_lexicon  # noqa: E402

DATA_DIR = Path(__file__).parent / "data"

RANDOM_CONCEPTS = ("xastan", "raftan", "doxtar", "city")
RANDOM_ROLES = ("ARG0", "ARG1", "mod")


def random_graph(rng: np.random.Generator, max_vars: int = 5) -> Graph:
    """Build a wellformed graph whose edges only point from earlier to later variables.

    Every variable after the first hangs off an earlier one, so the graph is
    rooted and acyclic. Extra edges may add a reentrancy or repeat an existing
    source/target pair under another role, and attributes may repeat one
    constant under two roles.
    """
    n = int(rng.integers(1, max_vars + 1))
    variables = [f"v{i}" for i in range(n)]
    instances = [(v, RANDOM_CONCEPTS[int(rng.integers(len(RANDOM_CONCEPTS)))]) for v in variables]
    edges = []
    for i in range(1, n):
        parent = variables[int(rng.integers(i))]
        edges.append((parent, RANDOM_ROLES[int(rng.integers(len(RANDOM_ROLES)))], variables[i]))
    if n > 2 and rng.random() < 0.5:
        source = int(rng.integers(n - 1))
        target = int(rng.integers(source + 1, n))
        edges.append((variables[source], RANDOM_ROLES[int(rng.integers(len(RANDOM_ROLES)))],
                      variables[target]))
    if n > 1 and rng.random() < 0.3:
        source, _, target = edges[int(rng.integers(len(edges)))]
        edges.append((source, RANDOM_ROLES[int(rng.integers(len(RANDOM_ROLES)))], target))
    attributes = []
    if rng.random() < 0.4:
        attributes.append((variables[int(rng.integers(n))], "polarity", Constant("-", ConstantKind.SYMBOL)))
    if rng.random() < 0.3:
        holder = variables[int(rng.integers(n))]
        attributes.append((holder, "op1", Constant("x")))
        attributes.append((holder, "op2", Constant("x")))
    return Graph.build(variables[0], instances, edges, attributes)


@pytest.fixture(scope="session")
def data_dir() -> Path:
    """Directory holding the fixture corpora."""
    return DATA_DIR


@pytest.fixture(scope="session")
def guideline_corpus() -> List[AnnotatedSentence]:
    """Every annotation printed in the guideline, corrected where noted in the file."""
    return load_corpus(DATA_DIR / "guideline_examples.amr")


@pytest.fixture(scope="session")
def guideline_graphs(guideline_corpus) -> Dict[str, Graph]:
    return {s.id: s.graph for s in guideline_corpus}


@pytest.fixture(scope="session")
def lexicon():
    """The builtin lexicon."""
    return builtin_lexicon()


@pytest.fixture(scope="session")
def random_pairs() -> List[Tuple[Graph, Graph]]:
    """200 seeded random graph pairs with at most 5 variables each."""
    rng = np.random.default_rng(20240101)
    return [(random_graph(rng), random_graph(rng)) for _ in range(200)]


@pytest.fixture
def temp_dir():
    """Create a temporary directory for written corpora and lexicons."""
    with tempfile.TemporaryDirectory() as tmpdirname:
        yield Path(tmpdirname)
