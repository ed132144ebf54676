"""Benchmark instances: coloring complexes, product complexes and seeded random partite complexes."""
import itertools

import numpy as np

from complexes.complex import build_complex, is_link_connected
from complexes.distribution import Distribution
from complexes.errors import EmptySide, GenerationFailed, NoProperColoring, TooLarge
from others.logging import logger

MAX_COLORING_VERTICES = 10
MAX_COLORING_STATES = 2000000


def coloring_complex(edges, m, q):
    """
    Uniform distribution over the proper q-colorings of a graph on m vertices.

    Side i of the complex is vertex i, its vertex ids are the q colors.
    """
    if m > MAX_COLORING_VERTICES or q ** m > MAX_COLORING_STATES:
        raise TooLarge('%d^%d colorings is too many to enumerate' % (q, m))
    edges = [(int(u), int(v)) for u, v in edges]
    for u, v in edges:
        if not (0 <= u < m and 0 <= v < m):
            raise ValueError('edge (%d, %d) leaves the vertex range [0, %d)' % (u, v, m))
    colorings = np.indices((q,) * m).reshape(m, -1).T
    proper = np.ones(colorings.shape[0], dtype=bool)
    for u, v in edges:
        proper &= colorings[:, u] != colorings[:, v]
    if not proper.any():
        raise NoProperColoring('graph with edges %r has no proper %d-coloring' % (edges, q))
    facets = colorings[proper]
    logger.debug('%d proper %d-colorings of a %d-vertex graph' % (facets.shape[0], q, m))
    return build_complex([range(q)] * m, facets, None,
                         metadata={'generator': 'coloring', 'edges': [list(e) for e in edges], 'q': q})


def single_edge_complex(k, n):
    """Proper (k+1)-colorings of one edge {0, 1} among n vertices."""
    return coloring_complex([(0, 1)], n, k + 1)


def product_complex(side_marginals):
    """Independent sides: every tuple is a facet, weighted by the product of the marginals."""
    sides, masses = [], []
    for i, marg in enumerate(side_marginals):
        if isinstance(marg, Distribution):
            labels, mass = list(marg.support), np.asarray(marg.mass)
        else:
            mass = np.asarray(marg, dtype=np.float64).reshape(-1)
            labels = list(range(mass.shape[0]))
        if len(labels) == 0:
            raise EmptySide('side %d has no vertices' % i)
        sides.append(labels)
        masses.append(mass / mass.sum())
    facets = list(itertools.product(*sides))
    weights = [float(np.prod(w)) for w in itertools.product(*masses)]
    return build_complex(sides, facets, weights, metadata={'generator': 'product'})


def random_partite(n, side_sizes, density, seed, max_retries=100, connected_only=False):
    """
    Keep every tuple of the full product independently with probability
    `density` and weight the survivors uniformly on [0.1, 1]. At density 1
    every tuple survives and the weights are a product of per-side marginals
    drawn uniformly on [0.1, 1], so the result is a product complex.

    Draws that leave a vertex uncovered (or, with `connected_only`, give a
    complex with a disconnected link) are discarded and redrawn from the next
    child stream of the seed.
    """
    side_sizes = [int(s) for s in side_sizes]
    if len(side_sizes) != n:
        raise ValueError('%d side sizes given for n=%d' % (len(side_sizes), n))
    if not 0 < density <= 1:
        raise ValueError('facet density must lie in (0, 1], got %r' % density)
    if any(s < 1 for s in side_sizes):
        raise EmptySide('side sizes must be positive: %r' % side_sizes)

    full = np.indices(side_sizes).reshape(n, -1).T
    streams = np.random.SeedSequence(seed).spawn(max_retries)
    for attempt, child in enumerate(streams):
        rng = np.random.Generator(np.random.PCG64(child))
        keep = rng.random(full.shape[0]) < density
        facets = full[keep]
        if facets.shape[0] == 0:
            continue
        if any(len(np.unique(facets[:, i])) < side_sizes[i] for i in range(n)):
            continue
        if density >= 1.:
            side_weights = [rng.uniform(0.1, 1.0, size=s) for s in side_sizes]
            weights = np.prod([side_weights[i][facets[:, i]] for i in range(n)], axis=0)
        else:
            weights = rng.uniform(0.1, 1.0, size=facets.shape[0])
        X = build_complex([range(s) for s in side_sizes], facets, weights,
                          metadata={'generator': 'random_partite', 'seed': seed, 'attempt': attempt,
                                    'density': density})
        connected = is_link_connected(X)
        if connected_only and not connected:
            continue
        X.metadata['link_connected'] = connected
        return X
    raise GenerationFailed('no valid instance after %d draws (n=%d, sizes=%r, density=%g, seed=%r)'
                           % (max_retries, n, side_sizes, density, seed))
