import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from foxprim.words import Word, reduce_letters

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def letters(n, max_size=12):
    alphabet = [i for i in range(1, n + 1)] + [-i for i in range(1, n + 1)]
    return st.lists(st.sampled_from(alphabet), max_size=max_size)


def words(n, max_size=12):
    return letters(n, max_size).map(lambda xs: Word(reduce_letters(xs), n))


def ranked_words(ranks=(2, 3, 4), max_size=12):
    return st.sampled_from(ranks).flatmap(lambda n: words(n, max_size))


def word_pairs(ranks=(2, 3), max_size=10):
    return st.sampled_from(ranks).flatmap(lambda n: st.tuples(words(n, max_size), words(n, max_size)))


@pytest.fixture
def rng():
    return random.Random(20261018)
