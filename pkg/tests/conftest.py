"""Shared fixtures: the seeded tuple corpus used by the acceptance gate."""

import numpy as np
import pytest

from krange.generators import bidisk_triplet, corona_triplet, random_tuple

#: (positive slots, negative slots) patterns; mostly triplets, with a few
#: other shapes exercising the general tuple form.
CORPUS_SHAPES = [(2, 1), (2, 1), (2, 1), (1, 1), (3, 2)]


def corpus_specs():
    return [
        (2 + i % 11, 2000 + i, CORPUS_SHAPES[i % len(CORPUS_SHAPES)]) for i in range(100)
    ]


@pytest.fixture(scope="session")
def random_corpus():
    """100 seeded random full tuples with dims 2..12."""
    tuples = []
    for dim, seed, (pos, neg) in corpus_specs():
        t = random_tuple(pos, neg, dim, seed=seed, margin=0.3)
        assert t.validation.level == "full"
        tuples.append(t)
    return tuples


@pytest.fixture(scope="session")
def structured_corpus():
    """Exact generator instances mixed into corpus-wide property checks."""
    sq2 = np.sqrt(2.0)
    corona, _ = corona_triplet([0, 1 / sq2], [0, 0, 1 / sq2], [1 / sq2], [1 / sq2], n=6)
    return [bidisk_triplet(2), bidisk_triplet(3), corona]


@pytest.fixture(scope="session")
def full_corpus(random_corpus, structured_corpus):
    return random_corpus + structured_corpus
