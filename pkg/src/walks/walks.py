"""
Constructors for every walk on a weighted partite complex.

All operators are dense. Facet-indexed operators use the facet order of
the complex, so products and adjoints line up without any lookup.
"""
import itertools

import numpy as np
from scipy.special import comb

from complexes.complex import Face, level_distribution, link
from complexes.distribution import Distribution
from complexes.errors import (FaceTooLarge, LevelOutOfRange, NotAPermutation, OverlappingColorSets,
                              SideOutOfRange)
from spectra.linalg import weighted_adjoint
from walks.operator import MarkovOperator


def _unique_rows(arr):
    if arr.shape[1] == 0:
        return [()], np.zeros(arr.shape[0], dtype=np.int64)
    keys, inverse = np.unique(arr, axis=0, return_inverse=True)
    return [tuple(int(v) for v in k) for k in keys], np.asarray(inverse).reshape(-1)


def order_label(order):
    return ','.join(str(i) for i in order)


def update_operator(X, i):
    """Q_i: resample side i from its conditional given the other sides."""
    if not 0 <= i < X.n:
        raise SideOutOfRange('side %r not in range(%d)' % (i, X.n))
    _, inverse = X.group_by([j for j in range(X.n) if j != i])
    fiber = np.bincount(inverse, weights=X.pi)
    same = inverse[:, None] == inverse[None, :]
    Q = np.where(same, X.pi[None, :] / fiber[inverse][:, None], 0.)
    pi = X.distribution
    return MarkovOperator(Q, pi, pi, name='Q%d' % i)


def down_up_walk(X):
    """P_GD = (1/n) sum_i Q_i."""
    P = sum(update_operator(X, i).matrix for i in range(X.n)) / X.n
    pi = X.distribution
    return MarkovOperator(P, pi, pi, name='P_GD')


def check_order(X, order):
    order = tuple(int(i) for i in order)
    if sorted(order) != list(range(X.n)):
        raise NotAPermutation('%r is not a permutation of range(%d)' % (order, X.n))
    return order


def sequential_sweep(X, order=None):
    """P_SQ = Q_{s(1)} ... Q_{s(n)} for the ordering s."""
    order = check_order(X, range(X.n) if order is None else order)
    P = update_operator(X, order[0]).matrix
    for i in order[1:]:
        P = P @ update_operator(X, i).matrix
    pi = X.distribution
    return MarkovOperator(P, pi, pi, name='P_SQ(%s)' % order_label(order))


def check_color_sets(X, face, I, J):
    I = tuple(sorted(int(i) for i in I))
    J = tuple(sorted(int(j) for j in J))
    if len(I) == 0 or len(J) == 0:
        raise OverlappingColorSets('color sets must be nonempty')
    X.check_sides(I + J)
    if len(set(I) | set(J)) != len(I) + len(J):
        raise OverlappingColorSets('color sets %r and %r intersect' % (I, J))
    if (set(I) | set(J)) & set(face.type_set):
        raise OverlappingColorSets('color sets touch the pinned sides %r' % (face.type_set,))
    return I, J


def pinned_joint(X, face, I, J):
    """Joint law of (sides I, sides J) under pi conditioned on `face`."""
    idx, w = X.pinned_weights(face)
    rows, r_inv = _unique_rows(X.facets[idx][:, list(I)])
    cols, c_inv = _unique_rows(X.facets[idx][:, list(J)])
    joint = np.zeros((len(rows), len(cols)))
    np.add.at(joint, (r_inv, c_inv), w)
    return rows, cols, joint


def colored_walk(X, face, I, J):
    """C_a^{I->J}(t_I, t_J) = pi_J^{(a + t_I)}(t_J), from X_a[I] to X_a[J]."""
    if face is None:
        face = Face()
    I, J = check_color_sets(X, face, I, J)
    rows, cols, joint = pinned_joint(X, face, I, J)
    p_I = joint.sum(axis=1)
    p_J = joint.sum(axis=0)
    C = joint / p_I[:, None]
    return MarkovOperator(C, Distribution.normalized(rows, p_I), Distribution.normalized(cols, p_J),
                          name='C[%r](%s->%s)' % (face, order_label(I), order_label(J)))


class LinkData(object):
    """
    Vertex-level statistics of a link X_a used by the link walk, the
    influence matrix and the trivial projector.

    Vertices are labelled (side, vertex) with sides of the enclosing complex.
    """

    def __init__(self, X, face):
        if len(face) > X.n - 2:
            raise FaceTooLarge('face of rank %d has no link walk in a %d-partite complex' % (len(face), X.n))
        L = link(X, face)
        self.k = L.n
        sizes = [len(s) for s in L.sides]
        offsets = np.cumsum([0] + sizes)
        pos = [offsets[s] + np.searchsorted(L.sides[s], L.facets[:, s]) for s in range(L.n)]
        size = int(offsets[-1])

        self.labels = [(L.side_labels[s], v) for s in range(L.n) for v in L.sides[s]]
        self.side_of = np.repeat(np.array(L.side_labels, dtype=np.int64), sizes)
        # pi_{side}^{(a)} of each vertex, not yet divided by k
        self.marginal = np.zeros(size)
        for s in range(L.n):
            np.add.at(self.marginal, pos[s], L.pi)
        self.joint = np.zeros((size, size))
        for s, t in itertools.permutations(range(L.n), 2):
            np.add.at(self.joint, (pos[s], pos[t]), L.pi)
        self.same_side = self.side_of[:, None] == self.side_of[None, :]

    @property
    def measure(self):
        return Distribution(self.labels, self.marginal / self.k)


def link_walk(X, face=None):
    """M_a(x, y) = pi_2^(a)(x, y) / (2 pi_1^(a)(x)) on the vertices of the link."""
    data = LinkData(X, Face() if face is None else face)
    M = data.joint / ((data.k - 1) * data.marginal[:, None])
    mu = data.measure
    return MarkovOperator(M, mu, mu, name='M[%r]' % (face,))


def influence_matrix(X, face=None):
    """Inf_a(x, y) = pi_t^(a + x)(y) - pi_t^(a)(y) for sides s != t, zero on diagonal blocks."""
    data = LinkData(X, Face() if face is None else face)
    inf = data.joint / data.marginal[:, None] - data.marginal[None, :]
    inf[data.same_side] = 0.
    mu = data.measure
    return MarkovOperator(inf, mu, mu, row_stochastic=False, name='Inf[%r]' % (face,))


def trivial_projector(X, face=None):
    """Projection in L2(pi_1^(a)) onto the span of the side indicators of the link."""
    data = LinkData(X, Face() if face is None else face)
    T = np.where(data.same_side, data.marginal[None, :], 0.)
    mu = data.measure
    return MarkovOperator(T, mu, mu, name='T[%r]' % (face,))


def phi_vector(X, face, i):
    """phi_i: (k-1) on the vertices of side i of the link and -1 elsewhere."""
    data = LinkData(X, Face() if face is None else face)
    if i not in set(data.side_of.tolist()):
        raise SideOutOfRange('side %r is not a side of the link of %r' % (i, face))
    return np.where(data.side_of == i, data.k - 1., -1.)


def down_operator(X, level):
    """D_{n->l}(w, a) = 1[a in w] / C(n, l), from facets to rank-l faces."""
    if not 0 <= level <= X.n:
        raise LevelOutOfRange('level %d outside [0, %d]' % (level, X.n))
    pi_l = level_distribution(X, level)
    D = np.zeros((X.num_facets, len(pi_l)))
    scale = 1. / comb(X.n, level, exact=True)
    rows = np.arange(X.num_facets)
    offset = 0
    for T in itertools.combinations(range(X.n), level):
        keys, inverse = X.group_by(T)
        D[rows, offset + inverse] = scale
        offset += len(keys)
    return MarkovOperator(D, X.distribution, pi_l, name='D[%d->%d]' % (X.n, level))


def down_up_walk_level(X, level):
    """The level-l down-up walk D D* on facets; level n-1 gives P_GD."""
    if not 1 <= level <= X.n:
        raise LevelOutOfRange('level %d outside [1, %d]' % (level, X.n))
    D = down_operator(X, level)
    P = D @ weighted_adjoint(D)
    P.name = 'P_DU[%d]' % level
    return P
