import pytest

from curveinv.catalog import DIAGRAM_FIXTURES
from curveinv.diagram import parse_diagram
from curveinv.moves import random_diagram


@pytest.fixture(scope="session")
def fixtures():
    return {name: parse_diagram(text) for name, text in DIAGRAM_FIXTURES.items()}


def build_corpus(max_n=6, genera=(0, 2), seeds_per_cell=16):
    """Deterministic corpus of homologically trivial diagrams."""
    corpus = []
    for n in range(max_n + 1):
        for genus in genera:
            for seed in range(seeds_per_cell):
                corpus.append(random_diagram(n, genus, seed))
    return corpus


@pytest.fixture(scope="session")
def random_corpus():
    corpus = build_corpus()
    assert len(corpus) >= 200
    return corpus
