from typing import List

import numpy as np
import pytest

from aibs_informatics_sgcurv.fixtures import CorpusInstance, random_corpus
from aibs_informatics_sgcurv.signed_graph import SignedGraph

SMALL_CORPUS_SIZE = 25
SMALL_CORPUS_SEED = 7


@pytest.fixture(scope="session")
def small_corpus() -> List[CorpusInstance]:
    return random_corpus(SMALL_CORPUS_SIZE, SMALL_CORPUS_SEED, n_range=(3, 8))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def unit_edge() -> SignedGraph:
    return SignedGraph.from_edges(2, [(0, 1, 1)])
