import random

import pytest
from hypothesis import HealthCheck, settings

from bartholdi.corpus import builtin, random_connected_graph

settings.register_profile(
    "repo",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def corpus():
    from bartholdi.corpus import BUILTIN_NAMES

    return {name: builtin(name) for name in BUILTIN_NAMES}


@pytest.fixture
def rng():
    return random.Random(1234)


def small_random_graphs(count: int, seed: int = 7, max_vertices: int = 7):
    r = random.Random(seed)
    return [random_connected_graph(r, r.randint(2, max_vertices)) for _ in range(count)]
