"""Local expansion parameters: gamma_i, eps^{I->J} and the eps-product profile."""
import itertools

from complexes.errors import OverlappingColorSets
from others.logging import logger
from spectra.linalg import second_eigenvalue, self_adjoint_spectrum, sigma2
from walks.walks import colored_walk, influence_matrix, link_walk


def gamma_params(X):
    """gamma_i = max over rank-i faces a of lambda_2(M_a), for i = 0 .. n-2."""
    if X.n < 2:
        raise ValueError('gamma is defined for n >= 2, got n=%d' % X.n)
    gamma = []
    for i in range(X.n - 1):
        gamma.append(max(second_eigenvalue(link_walk(X, face)) for face in X.faces(i)))
    return gamma


def max_influence_profile(X):
    """max over rank-i faces of lambda_max(Inf_a), i = 0 .. n-2."""
    out = []
    for i in range(X.n - 1):
        out.append(max(float(self_adjoint_spectrum(influence_matrix(X, f))[0]) for f in X.faces(i)))
    return out


def eps_pinned(X, I, J):
    """sigma_2(C_a^{I->J}) for every pinning a of the remaining sides, as (face, value) pairs."""
    I = tuple(sorted(I))
    J = tuple(sorted(J))
    if set(I) & set(J):
        raise OverlappingColorSets('color sets %r and %r intersect' % (I, J))
    rest = [s for s in range(X.n) if s not in I and s not in J]
    return [(face, sigma2(colored_walk(X, face, I, J))) for face in X.faces_of_type(rest)]


def eps_param(X, I, J):
    """eps^{I->J}: worst sigma_2 of the (I, J) colored walk over all pinnings of the other sides."""
    return max(v for _, v in eps_pinned(X, I, J))


def eps_product_profile(X):
    """eps_l = max over rank-l faces a and sides i != j off a of sigma_2(C_a^{i->j})."""
    if X.n < 2:
        raise ValueError('the eps-product profile is defined for n >= 2, got n=%d' % X.n)
    profile = []
    for level in range(X.n - 1):
        worst = 0.
        for face in X.faces(level):
            free = [s for s in range(X.n) if s not in face.type_set]
            # sigma_2 is symmetric in (i, j)
            for i, j in itertools.combinations(free, 2):
                worst = max(worst, sigma2(colored_walk(X, face, [i], [j])))
        profile.append(worst)
    return profile


def eps_pairwise(X):
    """eps^{{i}->{j}} for every pair i < j."""
    return {(i, j): eps_param(X, [i], [j]) for i, j in itertools.combinations(range(X.n), 2)}


def sweep_pairs(order):
    """The (s([j-1]), s(j)) pairs consumed by the sweep bound, j = 2 .. n."""
    return [(tuple(sorted(order[:j])), (order[j],)) for j in range(1, len(order))]


def sweep_eta_pairs(order):
    """The (s([j+1, n]), s(j)) pairs consumed by the entropy bound, j = 1 .. n-1."""
    return [(tuple(sorted(order[j + 1:])), (order[j],)) for j in range(len(order) - 1)]


def eps_sets(X, pairs):
    """eps^{I->J} for the requested pairs, computing each unordered pair once."""
    cache = {}
    out = {}
    for I, J in pairs:
        key = tuple(sorted([tuple(sorted(I)), tuple(sorted(J))]))
        if key not in cache:
            cache[key] = eps_param(X, key[0], key[1])
        out[(tuple(sorted(I)), tuple(sorted(J)))] = cache[key]
    logger.debug('computed %d eps values for %d pairs' % (len(cache), len(pairs)))
    return out
