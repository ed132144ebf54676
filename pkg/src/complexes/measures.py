"""KL divergence and the distribution utilities used by the entropy results."""
import numpy as np
from scipy.special import rel_entr

from complexes.distribution import Distribution, tuple_marginal, tuple_pinning
from complexes.errors import DomainMismatch, SupportViolation


def kl_array(p, q):
    """D(p||q) in nats for aligned arrays; 0 log 0 = 0, +inf off the support of q."""
    return float(np.sum(rel_entr(p, q)))


def kl_divergence(mu, nu):
    """D(mu||nu) for two Distributions over a common label universe."""
    labels = list(nu.support) + [l for l in mu.support if l not in nu.index]
    p = mu.aligned(labels)
    q = nu.aligned(labels)
    if np.any((p > 0) & (q <= 0)):
        raise SupportViolation('mu charges states outside the support of nu')
    return kl_array(p, q)


def chain_rule_decomposition(mu, nu, S):
    """
    Split D(mu||nu) over tuple labels into the S-marginal term and the
    expected divergence of the conditionals given the S-coordinates.

    Returns:
        (D(mu_S||nu_S), E_{w ~ mu_S} D(mu^(w)||nu^(w)))
    """
    S = tuple(sorted(S))
    for l, m in mu.items():
        if m > 0 and nu[l] <= 0:
            raise SupportViolation('mu charges %r outside the support of nu' % (l,))
    mu_S = tuple_marginal(mu, S)
    nu_S = tuple_marginal(nu, S)
    head = kl_divergence(mu_S, nu_S)
    tail = 0.
    if len(S) == len(mu.support[0]):
        return head, tail
    for w, m in mu_S.items():
        if m <= 0:
            continue
        tail += m * kl_divergence(tuple_pinning(mu, S, w), tuple_pinning(nu, S, w))
    return head, tail


def push_forward(mu, M):
    """The row-vector action mu M, as a Distribution over M's codomain states."""
    labels = M.domain_measure.support
    extra = [l for l, m in mu.items() if m > 0 and l not in M.domain_measure.index]
    if extra:
        raise DomainMismatch('%d states of mu are outside the operator domain' % len(extra))
    out = mu.aligned(labels) @ M.matrix
    out = np.clip(out, 0., None)
    return Distribution(M.codomain_measure.support, out / out.sum())
