"""
Numerical certificates: each compares a directly measured quantity with the
bound a theorem predicts for it on the given instance.
"""
import itertools
import math

import numpy as np
from scipy.special import rel_entr

from complexes.errors import InstanceTooLarge, ZeroGap
from others.logging import logger
from others.utils import disjoint_pairs, pair_label
from spectra.cache import SpectralCache
from spectra.linalg import norm, sigma2
from spectra.optimizers import MAX_GRID_POINTS, grid_size, simplex_grid
from spectra.params import sweep_eta_pairs, sweep_pairs
from spectra.subspaces import intersect_all, projector, subspace_cosine, subspace_distance, \
    sweep_contraction_factor
from walks.walks import check_order, colored_walk, order_label, update_operator

PASS = 'pass'
FAIL = 'fail'
VACUOUS = 'vacuous'

LE = '<='
GE = '>='

CERT_TOL = 1e-8
TRIVIAL_TOL = 1e-12


class Certificate(object):
    """
    Args:
        theorem_id (str): which inequality is checked.
        measured (float): the directly computed left-hand side.
        bound (float): the value the inequality predicts.
        direction (str): '<=' or '>=' (measured against bound).
        tolerance (float): additive slack for floating point error.
        inputs_digest (str): sha1 of the instance.
        vacuous (bool): the bound holds trivially or a hypothesis fails.
        details (dict): context (ordering, pinning, parameters).
    """

    def __init__(self, theorem_id, measured, bound, direction=LE, tolerance=CERT_TOL,
                 inputs_digest='', vacuous=False, details=None):
        self.theorem_id = theorem_id
        self.measured = float(measured)
        self.bound = float(bound)
        self.direction = direction
        self.tolerance = tolerance
        self.inputs_digest = inputs_digest
        self.details = dict(details or {})
        if direction == LE:
            self.holds = self.measured <= self.bound + tolerance
        elif direction == GE:
            self.holds = self.measured >= self.bound - tolerance
        else:
            raise ValueError('unknown direction %r' % direction)
        if vacuous:
            self.verdict = VACUOUS
        else:
            self.verdict = PASS if self.holds else FAIL

    @property
    def failed(self):
        return self.verdict == FAIL

    def to_dict(self):
        return {'theorem_id': self.theorem_id,
                'measured': self.measured,
                'bound': self.bound,
                'direction': self.direction,
                'tolerance': self.tolerance,
                'verdict': self.verdict,
                'holds': self.holds,
                'inputs_digest': self.inputs_digest,
                'details': self.details}

    @classmethod
    def from_dict(cls, d):
        return cls(d['theorem_id'], d['measured'], d['bound'], d['direction'], d['tolerance'],
                   d['inputs_digest'], vacuous=d['verdict'] == VACUOUS, details=d.get('details'))

    def __repr__(self):
        return 'Certificate(%s: %.6g %s %.6g -> %s)' % (
            self.theorem_id, self.measured, self.direction, self.bound, self.verdict)


def _one_minus_prod(values):
    return 1. - float(np.prod([1. - v * v for v in values]))


def _cache(X, cache):
    return cache if cache is not None else SpectralCache(X)


def certify_csv(X, order, cache=None):
    """sigma_2(P_SQ)^2 <= 1 - prod_{j>=2} (1 - (eps^{s([j-1]) -> s(j)})^2)."""
    cache = _cache(X, cache)
    if X.n < 2:
        raise ValueError('the sweep bound needs n >= 2')
    order = check_order(X, order)
    s2 = cache.sigma2_sweep(order)
    eps = [cache.eps(I, J) for I, J in sweep_pairs(order)]
    bound = _one_minus_prod(eps)
    return Certificate('csv', s2 * s2, bound, LE, inputs_digest=X.digest(),
                       vacuous=bound >= 1. - TRIVIAL_TOL,
                       details={'order': order_label(order), 'sigma2': s2,
                                'eps': {pair_label(I, J): e for (I, J), e in zip(sweep_pairs(order), eps)}})


def certify_csv_product(X, order, cache=None):
    """The same sweep bound with every eps^{I->J} replaced through the eps-product profile."""
    cache = _cache(X, cache)
    order = check_order(X, order)
    profile = cache.profile()
    factors = []
    for j in range(2, X.n + 1):
        factors.extend(profile[p] for p in range(j - 1))
    bound = _one_minus_prod(factors)
    s2 = cache.sigma2_sweep(order)
    return Certificate('csv_product', s2 * s2, bound, LE, inputs_digest=X.digest(),
                       vacuous=bound >= 1. - TRIVIAL_TOL,
                       details={'order': order_label(order), 'profile': profile})


def certify_coraa(X, order, cache=None):
    """
    sigma_2(P_SQ) <= n eps / sqrt(2) with eps the largest profile entry, and
    sigma_2(P_SQ) <= eps / sqrt(2) whenever gamma_{n-2} <= eps / (2n).
    """
    cache = _cache(X, cache)
    order = check_order(X, order)
    s2 = cache.sigma2_sweep(order)
    digest = X.digest()
    eps = max(cache.profile())
    bound = X.n * eps / math.sqrt(2.)
    out = [Certificate('coraa_profile', s2, bound, LE, inputs_digest=digest, vacuous=bound >= 1. - TRIVIAL_TOL,
                       details={'order': order_label(order), 'eps': eps})]

    g = cache.gamma()[-1]
    eps_top = 2. * X.n * max(g, 0.)
    bound = eps_top / math.sqrt(2.)
    connected = cache.link_connected()
    cert = Certificate('coraa_top_link', s2, bound, LE, inputs_digest=digest,
                       vacuous=(not connected) or eps_top > 1.,
                       details={'order': order_label(order), 'gamma_top': g, 'eps': eps_top,
                                'link_connected': connected,
                                'tight': bool(bound > 0 and s2 >= 0.9 * bound)})
    if cert.details['tight'] and cert.verdict != VACUOUS:
        logger.info('top-link sweep bound is tight on %s: %.6g vs %.6g' % (digest[:8], s2, bound))
    out.append(cert)
    return out


def certify_cwadv(X, face, I, J, cache=None):
    """sigma_2(C_a^{I->J})^2 <= 1 - prod_{p<|I|} prod_{q<|J|} (1 - eps_{|a|+p+q}^2)."""
    cache = _cache(X, cache)
    C = colored_walk(X, face, I, J)
    I, J = tuple(sorted(I)), tuple(sorted(J))
    s2 = sigma2(C)
    profile = cache.profile()
    a = len(face)
    bound = _one_minus_prod([profile[a + p + q] for p in range(len(I)) for q in range(len(J))])
    eps = max(profile)
    baseline = len(I) * len(J) * eps * eps
    # a baseline at or above 1 is vacuous, and products tie at 0
    comparable = bool(baseline < 1. and eps > TRIVIAL_TOL)
    return Certificate('cwadv', s2 * s2, bound, LE, inputs_digest=X.digest(),
                       vacuous=bound >= 1. - TRIVIAL_TOL,
                       details={'face': repr(face), 'pair': pair_label(I, J), 'baseline': baseline,
                                'baseline_comparable': comparable,
                                'improves_baseline': bool(comparable and bound < baseline - TRIVIAL_TOL)})


def certify_cwadv_all(X, cache=None):
    """The colored-walk bound at every pinning and every unordered disjoint pair of free sides."""
    cache = _cache(X, cache)
    out = []
    for level in range(X.n - 1):
        for face in X.faces(level):
            free = [s for s in range(X.n) if s not in face.type_set]
            for I, J in disjoint_pairs(free):
                if I < J:
                    out.append(certify_cwadv(X, face, I, J, cache=cache))
    return out


def certify_angles(X, cache=None):
    """cos(U_I, U_J) <= eps^{I->J} for every unordered disjoint pair."""
    cache = _cache(X, cache)
    out = []
    digest = X.digest()
    for I, J in disjoint_pairs(range(X.n)):
        if I > J:
            continue
        eps = cache.eps(I, J)
        cos = subspace_cosine(cache.subspace(I), cache.subspace(J))
        out.append(Certificate('angl', cos, eps, LE, inputs_digest=digest, vacuous=eps >= 1. - TRIVIAL_TOL,
                               details={'pair': pair_label(I, J)}))
    return out


def certify_geometry(X, cache=None):
    """Q_i is the projection onto U_{i}; on link-connected complexes the U_t intersect to U_T."""
    cache = _cache(X, cache)
    digest = X.digest()
    worst = 0.
    for i in range(X.n):
        diff = update_operator(X, i).matrix - projector(cache.subspace([i]))
        worst = max(worst, float(np.max(np.abs(diff))))
    out = [Certificate('proj', worst, 0., LE, tolerance=1e-10, inputs_digest=digest)]

    connected = cache.link_connected()
    worst = 0.
    for size in range(2, X.n + 1):
        for T in itertools.combinations(range(X.n), size):
            K = intersect_all([cache.subspace([t]) for t in T])
            worst = max(worst, subspace_distance(K, cache.subspace(T)))
    out.append(Certificate('ints', worst, 0., LE, inputs_digest=digest, vacuous=not connected,
                           details={'link_connected': connected}))
    return out


def certify_projection_product(X, order, trials=100, seed=0, cache=None):
    """||P_SQ f - Q_* f||^2 <= (1 - prod sin^2) ||f - Q_* f||^2 on random f."""
    cache = _cache(X, cache)
    order = check_order(X, order)
    factor, V = sweep_contraction_factor(X, order)
    Qs = projector(V)
    P = cache.sweep(order).matrix
    pi = X.distribution
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(trials):
        f = rng.standard_normal(X.num_facets)
        r = f - Qs @ f
        scale = norm(r, pi)
        if scale <= 1e-12:
            continue
        f, r = f / scale, r / scale
        lhs = norm(P @ f - Qs @ f, pi) ** 2
        worst = max(worst, lhs - factor)
    if worst == -np.inf:
        worst = 0.
    return Certificate('prprod', worst, 0., LE, inputs_digest=X.digest(),
                       vacuous=factor >= 1. - TRIVIAL_TOL,
                       details={'order': order_label(order), 'factor': factor, 'trials': trials})


def certify_ecc(X, order, grid_resolution=0.05, cache=None):
    """D(mu P_SQ || pi) <= (1 - prod_j eta^{s([j+1,n]) -> s(j)}) D(mu || pi) on a lattice of mu."""
    cache = _cache(X, cache)
    order = check_order(X, order)
    steps = int(round(1. / grid_resolution))
    m = X.num_facets
    if grid_size(m, steps) > MAX_GRID_POINTS:
        raise InstanceTooLarge('%d facets at grid step %g' % (m, grid_resolution))
    pairs = sweep_eta_pairs(order)
    etas = [cache.eta(I, J) for I, J in pairs]
    coef = 1. - float(np.prod([e.eta for e in etas]))
    P = cache.sweep(order).matrix
    pi = X.pi

    grid = simplex_grid(m, steps)
    worst, kappa = -np.inf, 0.
    for start in range(0, grid.shape[0], 65536):
        mu = grid[start:start + 65536]
        lhs = rel_entr(mu @ P, pi[None, :]).sum(axis=1)
        rhs = rel_entr(mu, pi[None, :]).sum(axis=1)
        worst = max(worst, float(np.max(lhs - coef * rhs)))
        ok = rhs > 1e-12
        if ok.any():
            kappa = max(kappa, float(np.max(lhs[ok] / rhs[ok])))
    return Certificate('ecc', worst, 0., LE, inputs_digest=X.digest(),
                       details={'order': order_label(order), 'coefficient': coef,
                                'grid_points': int(grid.shape[0]), 'grid_step': grid_resolution,
                                'kappa_grid': kappa, 'eta_exact': all(e.exact for e in etas),
                                'eta': {pair_label(I, J): e.eta for (I, J), e in zip(pairs, etas)}})


def certify_glauber(X, cache=None):
    """Gap(P_GD) >= (1/n) prod (1 - gamma_i), and Gap(P_GD) <= 2/n when no side is a singleton."""
    cache = _cache(X, cache)
    digest = X.digest()
    gap = 1. - sigma2(cache.glauber())
    gamma = cache.gamma()
    lower = float(np.prod([1. - g for g in gamma])) / X.n
    out = [Certificate('glauber_lower', gap, lower, GE, inputs_digest=digest, vacuous=lower <= TRIVIAL_TOL,
                       details={'gamma': gamma})]
    applies = all(len(s) >= 2 for s in X.sides)
    upper = 2. / X.n
    details = {} if applies else {'skipped': 'a side has a single vertex'}
    out.append(Certificate('glauber_upper', gap, upper, LE, inputs_digest=digest,
                           vacuous=(not applies) or upper >= 1., details=details))
    return out


def certify_downtrickle(X, cache=None):
    """
    eps_l <= (n-1-l) gamma_l at every level, and, on link-connected complexes
    with gamma_{n-2} <= eps / ((n-2) eps + 1), eps_k <= eps / ((k-1) eps + 1).
    """
    cache = _cache(X, cache)
    digest = X.digest()
    gamma = cache.gamma()
    profile = cache.profile()
    n = X.n
    out = []
    for level in range(n - 1):
        # negative gamma only comes from links whose sides are all singletons,
        # where lambda_max(Inf) = 0
        bound = (n - 1 - level) * max(gamma[level], 0.)
        out.append(Certificate('impl', profile[level], bound, LE, inputs_digest=digest,
                               vacuous=bound >= 1. - TRIVIAL_TOL,
                               details={'level': level, 'gamma': gamma[level]}))

    g = max(gamma[-1], 0.)
    denom = 1. - (n - 2) * g
    connected = cache.link_connected()
    eps = g / denom if denom > 0 else float('inf')
    for level in range(n - 1):
        d = (level - 1) * eps + 1.
        bound = eps / d if d > 0 and math.isfinite(eps) else float('inf')
        out.append(Certificate('yod', profile[level], bound if math.isfinite(bound) else 1., LE,
                               inputs_digest=digest,
                               vacuous=(not connected) or not math.isfinite(bound) or bound >= 1. - TRIVIAL_TOL,
                               details={'level': level, 'eps': eps if math.isfinite(eps) else None,
                                        'link_connected': connected}))
    return out


class MixingBounds(object):
    """Upper bounds on the mixing time of the sweep at accuracy eps_target."""

    def __init__(self, order, eps_target, sigma2, spectral_bound, ec_lower=None, entropy_bound=None):
        self.order = order
        self.eps_target = eps_target
        self.sigma2 = sigma2
        self.gap = 1. - sigma2
        self.spectral_bound = spectral_bound
        self.ec_lower = ec_lower
        self.entropy_bound = entropy_bound

    def to_dict(self):
        return {'order': order_label(self.order), 'eps_target': self.eps_target, 'sigma2': self.sigma2,
                'gap': self.gap, 'spectral_bound': self.spectral_bound, 'ec_lower': self.ec_lower,
                'entropy_bound': self.entropy_bound,
                'entropy_constant': 'up to universal constant (C=1 reported)'}


def mixing_bounds(X, order, eps_target=0.01, cache=None):
    if not 0 < eps_target < 1:
        raise ValueError('eps_target must lie in (0, 1), got %r' % eps_target)
    cache = _cache(X, cache)
    order = check_order(X, order)
    s2 = cache.sigma2_sweep(order)
    gap = 1. - s2
    if gap <= TRIVIAL_TOL:
        raise ZeroGap('the sweep %s has no spectral gap' % order_label(order))
    min_pi = float(X.pi.min())
    spectral = math.log(1. / (eps_target * math.sqrt(min_pi))) / gap

    etas = [cache.eta(I, J) for I, J in sweep_eta_pairs(order)]
    ec_lower, entropy = None, None
    if all(e.exact for e in etas):
        ec_lower = float(np.prod([e.eta for e in etas]))
        if ec_lower > TRIVIAL_TOL:
            # log log is negative once 1/(eps min pi) < e; a mixing time is never negative
            entropy = max(math.log(math.log(1. / (eps_target * min_pi))), 0.) / ec_lower
    return MixingBounds(order, eps_target, s2, spectral, ec_lower, entropy)

