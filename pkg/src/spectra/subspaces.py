"""
Subspaces of functions on facets under the pi-weighted inner product.

Bases are stored in pi-orthonormal form; all angle computations move to
Euclidean coordinates through f -> D^{1/2} f, where they are ordinary
principal-angle problems (QR + SVD).
"""
import numpy as np
import scipy.linalg as la

from complexes.errors import MeasureMismatch
from others.logging import logger

RANK_TOL = 1e-9
INTERSECTION_TOL = 1e-9


class WeightedSubspace(object):
    """
    Args:
        ambient_measure (Distribution): the facet distribution pi.
        basis (ndarray): (m, d) array, columns pi-orthonormal.
    """

    def __init__(self, ambient_measure, basis):
        self.ambient_measure = ambient_measure
        self.basis = np.asarray(basis, dtype=np.float64).reshape(len(ambient_measure), -1)

    @classmethod
    def from_euclidean(cls, ambient_measure, W):
        return cls(ambient_measure, W / np.sqrt(ambient_measure.mass)[:, None])

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def euclidean(self):
        return np.sqrt(self.ambient_measure.mass)[:, None] * self.basis

    def gram(self):
        return self.basis.T @ (self.ambient_measure.mass[:, None] * self.basis)

    def __repr__(self):
        return 'WeightedSubspace(dim=%d, ambient=%d)' % (self.dim, len(self.ambient_measure))


def _check_same_ambient(U, V):
    if U.ambient_measure.support != V.ambient_measure.support or \
            not np.allclose(U.ambient_measure.mass, V.ambient_measure.mass, rtol=0, atol=1e-14):
        raise MeasureMismatch('subspaces live in different weighted spaces')


def orthonormal_columns(W, tol=RANK_TOL, scale=None):
    """
    Orthonormal basis of the column span of W. Singular values at or below
    tol * scale are cut; scale defaults to the top singular value of W.
    Pass the norm of the matrix W was computed from when W is a residual.
    """
    if W.shape[1] == 0:
        return W
    u, s, _ = la.svd(W, full_matrices=False)
    if len(s) == 0 or s[0] == 0:
        return W[:, :0]
    if scale is None:
        scale = s[0]
    return u[:, s > tol * scale]


def subspace_U(X, I):
    """span{u_a : a in X[I^c]}, u_a the indicator of the facets containing a."""
    rest = [s for s in range(X.n) if s not in set(I)]
    keys, inverse = X.group_by(rest)
    B = np.zeros((X.num_facets, len(keys)))
    B[np.arange(X.num_facets), inverse] = 1.
    # ||u_a||^2 = pi_{I^c}(a); the u_a have disjoint supports
    norms = np.sqrt(np.bincount(inverse, weights=X.pi, minlength=len(keys)))
    return WeightedSubspace(X.distribution, B / norms[None, :])


def projector(U):
    """Matrix of the pi-orthogonal projection onto U acting on column vectors f."""
    return U.basis @ (U.basis.T * U.ambient_measure.mass[None, :])


def principal_cosines(U, V):
    _check_same_ambient(U, V)
    if U.dim == 0 or V.dim == 0:
        return np.zeros(0)
    return la.svdvals(U.euclidean.T @ V.euclidean)


def subspace_intersection(U, V, tol=INTERSECTION_TOL):
    """Span of the principal vectors of U whose cosine with V is at least 1 - tol."""
    _check_same_ambient(U, V)
    if U.dim == 0 or V.dim == 0:
        return WeightedSubspace(U.ambient_measure, np.zeros((len(U.ambient_measure), 0)))
    WU = U.euclidean
    Y, s, _ = la.svd(WU.T @ V.euclidean, full_matrices=False)
    K = orthonormal_columns(WU @ Y[:, s >= 1. - tol])
    return WeightedSubspace.from_euclidean(U.ambient_measure, K)


def deflate(U, K):
    """U intersected with the orthogonal complement of K."""
    WU = U.euclidean
    WK = K.euclidean
    R = WU - WK @ (WK.T @ WU)
    # a residual of pure rounding noise must not survive the rank cut
    scale = max(1., la.norm(WU, 2)) if WU.size else 1.
    return WeightedSubspace.from_euclidean(U.ambient_measure, orthonormal_columns(R, scale=scale))


def subspace_cosine(U, V):
    """Largest cosine between unit vectors of U and V orthogonal to U cap V."""
    K = subspace_intersection(U, V)
    Ud = deflate(U, K)
    Vd = deflate(V, K)
    if Ud.dim == 0 or Vd.dim == 0:
        return 0.
    return float(la.svdvals(Ud.euclidean.T @ Vd.euclidean)[0])


def subspace_distance(U, V):
    """Spectral norm of the difference of the orthogonal projections."""
    _check_same_ambient(U, V)
    PU = U.euclidean @ U.euclidean.T
    PV = V.euclidean @ V.euclidean.T
    if PU.size == 0:
        return 0.
    return float(la.norm(PU - PV, 2))


def intersect_all(subspaces):
    out = subspaces[0]
    for V in subspaces[1:]:
        out = subspace_intersection(out, V)
    return out


def sweep_contraction_factor(X, order):
    """
    1 - prod_{j >= 2} sin^2(U_{s(j)}, V_{j-1}) with V_j the intersection of
    U_{s(1)} .. U_{s(j)}: the contraction of the projection product
    Q_{s(1)} .. Q_{s(n)} on the complement of the common subspace.

    Returns:
        (factor, common subspace V_n)
    """
    U = [subspace_U(X, [i]) for i in order]
    V = U[0]
    prod = 1.
    for j in range(1, len(U)):
        c = subspace_cosine(U[j], V)
        prod *= 1. - c * c
        V = subspace_intersection(V, U[j])
    logger.debug('sweep contraction factor for order %r: %.6g' % (tuple(order), 1. - prod))
    return 1. - prod, V
