import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'src'))

from complexes.complex import build_complex  # noqa: E402
from complexes.generators import product_complex, random_partite, single_edge_complex  # noqa: E402

settings.register_profile('hdx', deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile('hdx')

CORPUS_MANIFEST = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'corpus', 'manifest.json')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: runs over the whole bundled corpus')


@pytest.fixture
def uniform_square():
    """Uniform distribution on {0,1}^2."""
    return product_complex([[0.5, 0.5], [0.5, 0.5]])


@pytest.fixture
def three_color_edge():
    """Proper 3-colorings of a single edge: 6 facets."""
    return single_edge_complex(2, 2)


@pytest.fixture
def biased_product():
    return product_complex([[0.2, 0.3, 0.5], [0.7, 0.3], [0.1, 0.9]])


@pytest.fixture
def disconnected_pair():
    """Two facets sharing no vertex: every update is the identity."""
    return build_complex([[0, 1], [0, 1]], [(0, 0), (1, 1)])


@pytest.fixture
def small_random():
    return random_partite(3, [2, 3, 2], 0.8, 7, connected_only=True)


@pytest.fixture
def corpus_manifest():
    return CORPUS_MANIFEST
