"""
Linear algebra under weighted inner products.

Every singular value and eigenvalue in the project comes from the
symmetrization D_U^{1/2} B D_V^{-1/2}, D being the diagonal of a measure.
"""
import numpy as np
import scipy.linalg as la

from complexes.errors import MeasureMismatch, ZeroMassState
from walks.operator import MarkovOperator

MEASURE_TOL = 1e-10


def _check_positive(measure, what):
    if np.any(measure.mass <= 0):
        raise ZeroMassState('%s measure has states of zero mass' % what)


def weighted_adjoint(M):
    """B*(y, x) = B(x, y) pi_U(x) / pi_V(y)."""
    _check_positive(M.domain_measure, 'domain')
    _check_positive(M.codomain_measure, 'codomain')
    pu = M.domain_measure.mass
    pv = M.codomain_measure.mass
    adj = (M.matrix * pu[:, None] / pv[None, :]).T
    name = M.name + '*' if not M.name.endswith('*') else M.name[:-1]
    return MarkovOperator(adj, M.codomain_measure, M.domain_measure,
                          row_stochastic=M.row_stochastic, name=name)


def symmetrized(M):
    _check_positive(M.domain_measure, 'domain')
    _check_positive(M.codomain_measure, 'codomain')
    su = np.sqrt(M.domain_measure.mass)
    sv = np.sqrt(M.codomain_measure.mass)
    return su[:, None] * M.matrix / sv[None, :]


def singular_values(M):
    """Singular values of M between L2(pi_U) and L2(pi_V), descending."""
    if M.row_stochastic:
        pushed = M.domain_measure.mass @ M.matrix
        if np.max(np.abs(pushed - M.codomain_measure.mass)) > MEASURE_TOL:
            raise MeasureMismatch('%s does not push its domain measure to its codomain measure' % M.name)
    return la.svdvals(symmetrized(M))


def sigma2(M):
    """Second weighted singular value; 0 when a side has a single state."""
    s = singular_values(M)
    if len(s) < 2:
        return 0.
    return float(s[1])


def self_adjoint_spectrum(M):
    """Eigenvalues of an operator self-adjoint in L2(pi), descending."""
    if M.domain_labels != M.codomain_labels:
        raise MeasureMismatch('%s is not an operator on a single space' % M.name)
    A = symmetrized(M)
    return la.eigvalsh((A + A.T) / 2.)[::-1]


def second_eigenvalue(M):
    ev = self_adjoint_spectrum(M)
    if len(ev) < 2:
        return 0.
    return float(ev[1])


def spectral_gap(M):
    return 1. - sigma2(M)


def inner(f, g, measure):
    return float(np.sum(measure.mass * f * g))


def norm(f, measure):
    return np.sqrt(inner(f, f, measure))
