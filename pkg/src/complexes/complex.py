"""
Weighted pure n-partite simplicial complexes.

A complex is stored by its facets only: an (m, n) integer array whose row
is the vertex chosen on every side, together with the facet distribution
pi. Every lower face is a partial assignment and is recovered by grouping
facet rows on a subset of columns.
"""
import itertools
import json

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.special import comb

from complexes.distribution import Distribution
from complexes.errors import (ArityMismatch, DuplicateFacet, EmptyComplex, FaceNotInComplex,
                              LevelOutOfRange, OverlappingFaces, SideOutOfRange, UncoveredVertex,
                              ZeroWeight)
from others.logging import logger
from others.utils import hashhex


class Face(object):
    """
    Partial assignment of side-local vertices to sides.

    Args:
        assignment: mapping side -> vertex, or iterable of (side, vertex) pairs.
    """
    __slots__ = ('assignment',)

    def __init__(self, assignment=()):
        items = assignment.items() if isinstance(assignment, dict) else assignment
        pairs = sorted((int(s), int(v)) for s, v in items)
        sides = [s for s, _ in pairs]
        if len(set(sides)) != len(sides):
            raise ArityMismatch('face assigns two vertices to one side: %r' % (pairs,))
        self.assignment = tuple(pairs)

    @classmethod
    def from_coords(cls, sides, coords):
        return cls(zip(sides, coords))

    @property
    def type_set(self):
        return tuple(s for s, _ in self.assignment)

    @property
    def values(self):
        return tuple(v for _, v in self.assignment)

    def sort_key(self):
        return (len(self.assignment), self.type_set, self.values)

    def join(self, other):
        if set(self.type_set) & set(other.type_set):
            raise OverlappingFaces('cannot join %r and %r' % (self, other))
        return Face(self.assignment + other.assignment)

    def without(self, side):
        return Face((s, v) for s, v in self.assignment if s != side)

    def as_dict(self):
        return dict(self.assignment)

    def __len__(self):
        return len(self.assignment)

    def __eq__(self, other):
        return isinstance(other, Face) and self.assignment == other.assignment

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        return hash(self.assignment)

    def __repr__(self):
        return 'Face({%s})' % ', '.join('%d: %d' % p for p in self.assignment)


class WeightedComplex(object):
    """
    Immutable weighted pure n-partite complex. Build instances with
    `build_complex`, which validates; this constructor trusts its input.

    Args:
        sides: tuple of sorted vertex-id tuples, one per side.
        facets: (m, n) int array, rows sorted lexicographically and distinct.
        pi: facet distribution aligned with the rows.
        side_labels: side indices of an enclosing complex (set by `link`).
        metadata: free-form dictionary carried into reports.
    """

    def __init__(self, sides, facets, pi, side_labels=None, metadata=None):
        self.n = len(sides)
        self.sides = tuple(tuple(int(v) for v in s) for s in sides)
        self.pi = np.asarray(pi, dtype=np.float64).reshape(-1)
        self.pi.setflags(write=False)
        self.facets = np.asarray(facets, dtype=np.int64).reshape(self.pi.shape[0], self.n)
        self.facets.setflags(write=False)
        self.side_labels = tuple(side_labels) if side_labels is not None else tuple(range(self.n))
        self.metadata = dict(metadata or {})
        self.facet_labels = tuple(tuple(int(v) for v in row) for row in self.facets)
        self.facet_index = {f: i for i, f in enumerate(self.facet_labels)}
        self._digest = None

    @property
    def num_facets(self):
        return self.facets.shape[0]

    @property
    def distribution(self):
        return Distribution(self.facet_labels, self.pi)

    def __repr__(self):
        return 'WeightedComplex(n=%d, sides=%s, facets=%d)' % (
            self.n, [len(s) for s in self.sides], self.num_facets)

    def group_by(self, cols):
        """Group facet rows by their values on `cols`.

        Returns the sorted distinct keys and, per facet, the index of its key.
        """
        cols = list(cols)
        if len(cols) == 0:
            return [()], np.zeros(self.num_facets, dtype=np.int64)
        keys, inverse = np.unique(self.facets[:, cols], axis=0, return_inverse=True)
        return [tuple(int(v) for v in k) for k in keys], np.asarray(inverse).reshape(-1)

    def check_sides(self, S):
        for s in S:
            if not 0 <= s < self.n:
                raise SideOutOfRange('side %r not in range(%d)' % (s, self.n))

    def extends(self, face):
        """Boolean mask of the facets containing `face`."""
        self.check_sides(face.type_set)
        mask = np.ones(self.num_facets, dtype=bool)
        for s, v in face.assignment:
            mask &= self.facets[:, s] == v
        return mask

    def check_face(self, face):
        mask = self.extends(face)
        if not mask.any():
            raise FaceNotInComplex('%r is not a face of %r' % (face, self))
        return mask

    def faces_of_type(self, T):
        T = tuple(sorted(T))
        self.check_sides(T)
        keys, _ = self.group_by(T)
        return [Face.from_coords(T, k) for k in keys]

    def faces(self, j):
        """All faces of rank j, ordered by type then lexicographically."""
        if not 0 <= j <= self.n:
            raise LevelOutOfRange('level %d outside [0, %d]' % (j, self.n))
        out = []
        for T in itertools.combinations(range(self.n), j):
            out.extend(self.faces_of_type(T))
        return out

    def pinned_weights(self, face):
        """Facet indices extending `face` and the conditioned distribution on them."""
        mask = self.check_face(face)
        idx = np.flatnonzero(mask)
        w = self.pi[idx]
        return idx, w / w.sum()

    def to_dict(self):
        out = {'sides': [list(s) for s in self.sides],
               'facets': [{'coords': list(f), 'weight': float(w)}
                          for f, w in zip(self.facet_labels, self.pi)]}
        if self.metadata:
            out['metadata'] = self.metadata
        return out

    def digest(self):
        if self._digest is not None:
            return self._digest
        body = {'sides': [list(s) for s in self.sides],
                'facets': [list(f) for f in self.facet_labels],
                'pi': [repr(float(w)) for w in self.pi]}
        self._digest = hashhex(json.dumps(body, sort_keys=True))
        return self._digest


def _facet_coords(facet, n, sides_sets):
    if isinstance(facet, dict):
        pairs = list(facet.items())
    elif len(facet) > 0 and all(isinstance(x, (tuple, list)) for x in facet):
        pairs = [tuple(x) for x in facet]
    else:
        pairs = None

    if pairs is not None:
        seen = [int(s) for s, _ in pairs]
        if len(set(seen)) != len(seen):
            raise ArityMismatch('facet %r assigns two vertices to one side' % (facet,))
        if sorted(seen) != list(range(n)):
            raise ArityMismatch('facet %r does not cover every one of %d sides' % (facet, n))
        coords = [v for _, v in sorted((int(s), int(v)) for s, v in pairs)]
    else:
        coords = [int(v) for v in facet]
        if len(coords) != n:
            raise ArityMismatch('facet %r has arity %d, expected %d' % (facet, len(coords), n))

    for i, v in enumerate(coords):
        if v not in sides_sets[i]:
            raise ArityMismatch('vertex %d of facet %r is not on side %d' % (v, facet, i))
    return tuple(coords)


def build_complex(sides, facets, weights=None, metadata=None):
    """
    Validate and normalize a weighted n-partite complex.

    Args:
        sides: list of vertex-id collections, one per side.
        facets: list of facets; each an n-tuple of vertex ids, a list of
            (side, vertex) pairs or a {side: vertex} mapping.
        weights: positive weight per facet, uniform when omitted.

    Returns:
        WeightedComplex with lexicographically sorted facets.
    """
    facets = list(facets)
    if len(facets) == 0:
        raise EmptyComplex('complex has no facets')
    sides = [tuple(sorted(set(int(v) for v in s))) for s in sides]
    n = len(sides)
    sides_sets = [set(s) for s in sides]

    coords = [_facet_coords(f, n, sides_sets) for f in facets]
    if weights is None:
        weights = np.ones(len(coords))
    weights = np.asarray(weights, dtype=np.float64).reshape(-1)
    if weights.shape[0] != len(coords):
        raise ArityMismatch('%d weights given for %d facets' % (weights.shape[0], len(coords)))
    if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
        raise ZeroWeight('facet weights must be finite and strictly positive')

    if len(set(coords)) != len(coords):
        seen = set()
        for c in coords:
            if c in seen:
                raise DuplicateFacet('facet %r listed twice' % (c,))
            seen.add(c)

    arr = np.array(coords, dtype=np.int64).reshape(len(coords), n)
    for i in range(n):
        missing = sides_sets[i] - set(arr[:, i].tolist())
        if missing:
            raise UncoveredVertex('vertices %s of side %d lie in no facet' % (sorted(missing), i))

    if n > 0:
        order = np.lexsort(arr.T[::-1])
        arr = arr[order]
        weights = weights[order]
    return WeightedComplex(sides, arr, weights / weights.sum(), metadata=metadata)


def link(X, face):
    """The link of `face`: facets extending it, restricted to the other sides, with pi conditioned."""
    idx, w = X.pinned_weights(face)
    rest = [i for i in range(X.n) if i not in face.type_set]
    sub = X.facets[idx][:, rest]
    sides = [tuple(np.unique(sub[:, k]).tolist()) for k in range(len(rest))]
    labels = [X.side_labels[i] for i in rest]
    return WeightedComplex(sides, sub, w, side_labels=labels, metadata=X.metadata)


def marginal(X, S):
    """pi_S: the distribution of the facet restricted to the sides S."""
    S = tuple(sorted(S))
    X.check_sides(S)
    keys, inverse = X.group_by(S)
    mass = np.bincount(inverse, weights=X.pi, minlength=len(keys))
    return Distribution(keys, mass)


def pinned_marginal(X, face, S):
    """pi_S conditioned on `face`; S must avoid the sides of the face."""
    S = tuple(sorted(S))
    X.check_sides(S)
    if set(S) & set(face.type_set):
        raise OverlappingFaces('sides %r overlap the pinned face %r' % (S, face))
    idx, w = X.pinned_weights(face)
    if len(S) == 0:
        return Distribution([()], [1.])
    keys, inverse = np.unique(X.facets[idx][:, list(S)], axis=0, return_inverse=True)
    mass = np.bincount(np.asarray(inverse).reshape(-1), weights=w, minlength=len(keys))
    return Distribution([tuple(int(v) for v in k) for k in keys], mass)


def level_distribution(X, j):
    """pi_j over all rank-j faces: pi_j(a) = pi_typ(a)(a) / C(n, j)."""
    if not 0 <= j <= X.n:
        raise LevelOutOfRange('level %d outside [0, %d]' % (j, X.n))
    scale = float(comb(X.n, j, exact=True))
    faces, mass = [], []
    for T in itertools.combinations(range(X.n), j):
        keys, inverse = X.group_by(T)
        m = np.bincount(inverse, weights=X.pi, minlength=len(keys))
        faces.extend(Face.from_coords(T, k) for k in keys)
        mass.append(m / scale)
    return Distribution(faces, np.concatenate(mass))


def level_distribution_iterated(X, j):
    """pi_j obtained by repeatedly dropping a uniformly random element, starting from pi."""
    if not 0 <= j <= X.n:
        raise LevelOutOfRange('level %d outside [0, %d]' % (j, X.n))
    current = {Face.from_coords(range(X.n), f): float(w) for f, w in zip(X.facet_labels, X.pi)}
    for level in range(X.n, j, -1):
        nxt = {}
        for face, m in current.items():
            for s in face.type_set:
                sub = face.without(s)
                nxt[sub] = nxt.get(sub, 0.) + m / level
        current = nxt
    faces = sorted(current)
    return Distribution(faces, [current[f] for f in faces])


def vertex_index(X):
    """Global index of every (side, vertex) pair, sides in order."""
    index, k = {}, 0
    for s, vs in enumerate(X.sides):
        for v in vs:
            index[(s, v)] = k
            k += 1
    return index


def link_graph(X):
    """Adjacency of the 1-skeleton of X as a sparse matrix over (side, vertex) pairs."""
    index = vertex_index(X)
    offsets = np.cumsum([0] + [len(s) for s in X.sides])
    rows, cols = [], []
    for s, t in itertools.combinations(range(X.n), 2):
        a = offsets[s] + np.searchsorted(X.sides[s], X.facets[:, s])
        b = offsets[t] + np.searchsorted(X.sides[t], X.facets[:, t])
        rows.extend([a, b])
        cols.extend([b, a])
    size = len(index)
    if not rows:
        return sp.csr_matrix((size, size))
    rows, cols = np.concatenate(rows), np.concatenate(cols)
    return sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))


def is_link_connected(X):
    """True when the link graph of every face of rank at most n-2 is connected."""
    for j in range(0, X.n - 1):
        for face in X.faces(j):
            L = link(X, face)
            n_components, _ = connected_components(link_graph(L), directed=False)
            if n_components > 1:
                logger.debug('link of %r is disconnected (%d components)' % (face, n_components))
                return False
    return True


def complex_from_dict(d):
    try:
        sides = d['sides']
        facets = [f['coords'] for f in d['facets']]
        weights = [f.get('weight', 1.) for f in d['facets']]
    except (KeyError, TypeError) as e:
        raise ArityMismatch('malformed complex description: %s' % e)
    return build_complex(sides, facets, weights, metadata=d.get('metadata'))


def load_complex(path):
    with open(path) as f:
        d = json.load(f)
    X = complex_from_dict(d)
    logger.info('Loaded %r from %s' % (X, path))
    return X


def save_complex(X, path):
    with open(path, 'w') as f:
        json.dump(X.to_dict(), f, sort_keys=True, indent=1)
