import random

import pytest

from multicast_speedup.conflict_graph import ConflictGraph, build_conflict_graph, build_kn_graph
from multicast_speedup.traffic import odd_hole_pattern


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run slow sweeps')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long vertex sweeps, run with --runslow')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


def cycle_graph(n: int) -> ConflictGraph:
    vertices = ['c%d' % k for k in range(n)]
    return ConflictGraph(vertices, [(vertices[k], vertices[(k + 1) % n]) for k in range(n)])


def complete_graph(n: int) -> ConflictGraph:
    vertices = ['k%d' % k for k in range(n)]
    return ConflictGraph(vertices, [(a, b) for k, a in enumerate(vertices) for b in vertices[k + 1:]])


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def hole_pattern():
    return odd_hole_pattern()


@pytest.fixture
def hole_graph():
    p = odd_hole_pattern()
    return build_conflict_graph(p.shape, p.structure)


@pytest.fixture
def kn23():
    return build_kn_graph(2, 3)


@pytest.fixture
def c5():
    return cycle_graph(5)
