"""
One-sided estimates of entropy contraction.

kappa is the supremum of D(mu C || p_out) / D(mu || p_in) over mu != p_in.
Every estimate here is the value of that ratio at points actually found,
or a limit of such values, so it never exceeds the true kappa; eta and EC
are reported as 1 - kappa and are therefore upper bounds.
"""
import numpy as np
import scipy.linalg as la

from complexes.complex import Face
from others.logging import logger
from spectra.optimizers import MAX_GRID_POINTS, SimplexAscent, grid_ratios, grid_size, simplex_grid
from walks.walks import check_color_sets, colored_walk

KAPPA_LOWER_BOUND = 'kappa_lower_bound'


def default_grid_step(d):
    if d <= 4:
        return 0.01
    if d <= 8:
        return 0.05
    return None


class RatioEstimate(object):
    """
    Best divergence ratio found for one operator.

    Attributes:
        kappa (float): best ratio (a lower bound on the supremum).
        exact (bool): the lattice covered the simplex at step 0.01.
        method (str): 'grid', 'ascent', 'local' or 'trivial'.
        grid_step (float or None): lattice resolution when a grid was used.
    """

    def __init__(self, kappa, exact, method, grid_step=None):
        self.kappa = kappa
        self.exact = exact
        self.method = method
        self.grid_step = grid_step

    def __repr__(self):
        return 'RatioEstimate(kappa=%.6g, method=%s, exact=%s)' % (self.kappa, self.method, self.exact)


def local_ratio_limit(C, p_in, p_out):
    """sigma_2^2: the limit of the ratio as mu approaches p_in along the top direction."""
    A = np.sqrt(p_in)[:, None] * C / np.sqrt(p_out)[None, :]
    s = la.svdvals(A)
    return float(s[1] ** 2) if len(s) > 1 else 0.


def estimate_ratio_sup(C, p_in, p_out, budget=8, seed=0, grid_step=None, ascent=None):
    """
    Lower estimate of sup_mu D(mu C || p_out) / D(mu || p_in).

    Args:
        budget (int): gradient-ascent restarts (>= 1).
        grid_step (float): lattice resolution; picked from the support size when None.
    """
    C = np.asarray(C, dtype=np.float64)
    p_in = np.asarray(p_in, dtype=np.float64)
    p_out = np.asarray(p_out, dtype=np.float64)
    d = p_in.shape[0]
    if d == 1:
        # the only point of the simplex is p_in itself
        return RatioEstimate(0., True, 'trivial')

    best = local_ratio_limit(C, p_in, p_out)
    method = 'local'
    step = grid_step if grid_step is not None else default_grid_step(d)
    starts = None
    exact = False
    if step is not None and grid_size(d, int(round(1. / step))) <= MAX_GRID_POINTS:
        grid = simplex_grid(d, int(round(1. / step)))
        ratios = grid_ratios(grid, C, p_in, p_out)
        top = np.argsort(-ratios, kind='stable')[:max(1, budget)]
        starts = grid[top]
        if ratios[top[0]] > best:
            best, method = float(ratios[top[0]]), 'grid'
        exact = step <= 0.01 + 1e-12
    else:
        step = None

    ascent = ascent or SimplexAscent()
    val, _ = ascent.maximize(C, p_in, p_out, restarts=max(1, budget), seed=seed, starts=starts)
    if val > best:
        best, method = val, 'ascent'
    return RatioEstimate(best, exact, method, grid_step=step)


class EtaEstimate(object):
    """
    kappa_hat <= kappa^{I->J} and eta_hat = 1 - kappa_hat >= eta^{I->J}.

    Attributes:
        pinned: list of (Face, RatioEstimate), one per pinning of the other sides.
    """
    direction = KAPPA_LOWER_BOUND

    def __init__(self, I, J, pinned):
        self.I = I
        self.J = J
        self.pinned = pinned
        self.kappa = max(r.kappa for _, r in pinned)
        self.eta = 1. - self.kappa
        self.exact = all(r.exact or r.method == 'trivial' for _, r in pinned)

    def to_dict(self):
        return {'kappa': self.kappa, 'eta': self.eta, 'exact': self.exact, 'direction': self.direction}

    def __repr__(self):
        return 'EtaEstimate(%s->%s, kappa=%.6g, eta=%.6g)' % (self.I, self.J, self.kappa, self.eta)


def eta_param_estimate(X, I, J, budget=8, seed=0, grid_step=None):
    """Estimate eta^{I->J} = 1 - sup over pinnings and mu of the contraction ratio of C_a^{I->J}."""
    I, J = check_color_sets(X, Face(), I, J)
    rest = [s for s in range(X.n) if s not in I and s not in J]
    pinned = []
    for k, face in enumerate(X.faces_of_type(rest)):
        C = colored_walk(X, face, I, J)
        est = estimate_ratio_sup(C.matrix, C.domain_measure.mass, C.codomain_measure.mass,
                                 budget=budget, seed=seed + k, grid_step=grid_step)
        pinned.append((face, est))
    out = EtaEstimate(I, J, pinned)
    logger.debug('%r' % out)
    return out


class ContractionEstimate(object):
    direction = KAPPA_LOWER_BOUND

    def __init__(self, ratio):
        self.kappa = ratio.kappa
        self.ec = 1. - ratio.kappa
        self.exact = ratio.exact
        self.method = ratio.method

    def to_dict(self):
        return {'kappa': self.kappa, 'ec': self.ec, 'exact': self.exact, 'direction': self.direction}


def entropy_contraction_estimate(P, budget=8, seed=0, grid_step=None):
    """Lower estimate of kappa(P) = sup_mu D(mu P || pi) / D(mu || pi); EC(P) <= 1 - kappa_hat."""
    pi = P.domain_measure.mass
    ratio = estimate_ratio_sup(P.matrix, pi, P.codomain_measure.mass, budget=budget, seed=seed,
                               grid_step=grid_step)
    return ContractionEstimate(ratio)
