"""
Monte-Carlo execution of the sequential sweep.

Random streams: chains are grouped in fixed blocks of CHAIN_BLOCK; the
block b of start state x draws from Philox with the 128-bit key
(seed, x), advanced by b jumps of 2^128 draws. Results therefore do not
depend on how many worker processes run the blocks.
"""
import numpy as np
import pandas as pd
from multiprocess import Pool
from tqdm import tqdm

from complexes.errors import BudgetExceeded
from others.logging import logger
from walks.walks import check_order, sequential_sweep

CHAIN_BLOCK = 8192
Z_SCORE = 1.96


def chain_rng(seed, start, block):
    key = np.array([int(seed) % 2 ** 64, int(start)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key).jumped(int(block)))


class PinningTable(object):
    """
    Conditional law of side i given the other sides, one padded row per
    fiber (set of facets that agree off side i).
    """

    def __init__(self, X, i):
        _, inverse = X.group_by([j for j in range(X.n) if j != i])
        self.fiber_of = inverse
        n_fibers = int(inverse.max()) + 1
        sizes = np.bincount(inverse, minlength=n_fibers)
        width = int(sizes.max())
        self.members = np.zeros((n_fibers, width), dtype=np.int64)
        # padding never falls below a uniform draw in [0, 1)
        self.cdf = np.full((n_fibers, width), 2.)
        for f in range(n_fibers):
            idx = np.flatnonzero(inverse == f)
            w = X.pi[idx]
            c = np.cumsum(w / w.sum())
            c[-1] = 1.
            self.members[f, :len(idx)] = idx
            self.cdf[f, :len(idx)] = c

    def sample(self, states, u):
        f = self.fiber_of[states]
        k = (self.cdf[f] <= u[:, None]).sum(axis=1)
        return self.members[f, k]


class SweepSampler(object):
    """
    Args:
        X (WeightedComplex): the instance.
        order: permutation of range(n); sides are updated in this order.
    """

    def __init__(self, X, order):
        self.X = X
        self.order = check_order(X, order)
        self.tables = [PinningTable(X, i) for i in self.order]

    def step(self, states, rng):
        """One full sweep applied to an array of facet indices."""
        states = np.asarray(states, dtype=np.int64)
        for table in self.tables:
            states = table.sample(states, rng.random(states.shape[0]))
        return states

    def trajectory(self, start, steps, rng):
        path = [int(start)]
        state = np.array([start], dtype=np.int64)
        for _ in range(steps):
            state = self.step(state, rng)
            path.append(int(state[0]))
        return path


def sweep_step(X, order, state, rng):
    """One sweep from the facet `state` (a tuple); returns the new facet."""
    idx = X.facet_index[tuple(state)]
    return X.facet_labels[int(SweepSampler(X, order).step([idx], rng)[0])]


def _run_block(params):
    X, order, start, steps, size, seed, block = params
    sampler = SweepSampler(X, order)
    rng = chain_rng(seed, start, block)
    m = X.num_facets
    states = np.full(size, start, dtype=np.int64)
    counts = np.zeros((steps + 1, m), dtype=np.int64)
    counts[0] = np.bincount(states, minlength=m)
    for t in range(1, steps + 1):
        states = sampler.step(states, rng)
        counts[t] = np.bincount(states, minlength=m)
    return start, counts


def empirical_counts(X, order, starts, steps, chains, seed, n_cpus=1):
    """Visit counts at every time 0..steps, per start state: {start: (steps+1, m) array}."""
    order = check_order(X, order)
    jobs = []
    for start in starts:
        for block, lo in enumerate(range(0, chains, CHAIN_BLOCK)):
            jobs.append((X, order, int(start), steps, min(CHAIN_BLOCK, chains - lo), seed, block))
    totals = {int(s): np.zeros((steps + 1, X.num_facets), dtype=np.int64) for s in starts}
    if n_cpus > 1:
        pool = Pool(n_cpus)
        results = pool.imap(_run_block, jobs)
    else:
        pool = None
        results = map(_run_block, jobs)
    for start, counts in tqdm(results, total=len(jobs), disable=len(jobs) < 8):
        totals[start] += counts
    if pool is not None:
        pool.close()
        pool.join()
    return totals


class TVDEstimate(object):
    def __init__(self, t, estimate, half_width, start):
        self.t = t
        self.estimate = float(estimate)
        self.ci_low = max(0., self.estimate - half_width)
        self.ci_high = self.estimate + half_width
        self.start = start

    def to_dict(self):
        return {'t': self.t, 'estimate': self.estimate, 'ci_low': self.ci_low, 'ci_high': self.ci_high,
                'start': self.start}


def empirical_tvd_curve(X, order, steps, chains, seed, starts=None, n_cpus=1):
    """
    Max over start states of ||p_hat_t(x, .) - pi||_1 for t = 0..steps, with
    a normal-approximation band summed over the per-state binomial errors.
    """
    if starts is None:
        starts = range(X.num_facets)
    totals = empirical_counts(X, order, starts, steps, chains, seed, n_cpus=n_cpus)
    curve = []
    for t in range(steps + 1):
        best = None
        for start, counts in sorted(totals.items()):
            p = counts[t] / float(chains)
            est = np.abs(p - X.pi).sum()
            half = Z_SCORE * np.sqrt(p * (1. - p) / chains).sum()
            if best is None or est > best.estimate:
                best = TVDEstimate(t, est, half, start)
        curve.append(best)
    return curve


def empirical_tvd(X, order, t, chains, seed, n_cpus=1):
    return empirical_tvd_curve(X, order, t, chains, seed, n_cpus=n_cpus)[-1]


def noise_floor(pi, chains):
    """Scale of the plug-in bias of ||p_hat - pi||_1 at p = pi: sum_y sqrt(pi(y)(1 - pi(y)) / chains)."""
    pi = np.asarray(pi, dtype=np.float64)
    return float(np.sqrt(pi * (1. - pi)).sum() / np.sqrt(chains))


def required_chains(pi, eps_target):
    """Chains per start state that keep the noise floor at or below eps_target / 2."""
    pi = np.asarray(pi, dtype=np.float64)
    return int(np.ceil((2. * np.sqrt(pi * (1. - pi)).sum() / eps_target) ** 2))


def empirical_mixing_time(X, order, eps_target, seed, chains=20000, max_steps=256, n_cpus=1,
                          max_chains=1000000):
    """
    Smallest t whose estimated max-over-start distance is within eps_target.

    The estimate is biased upwards by sampling noise, so `chains` is raised
    until the noise floor is at most eps_target / 2; past `max_chains` the
    target is out of reach and BudgetExceeded is raised.
    """
    if not 0 < eps_target < 1:
        raise ValueError('eps_target must lie in (0, 1), got %r' % eps_target)
    needed = required_chains(X.pi, eps_target)
    if needed > max_chains:
        raise BudgetExceeded('eps %.3g needs %d chains per start state, above the cap of %d'
                             % (eps_target, needed, max_chains))
    if needed > chains:
        logger.info('raising chains per start state from %d to %d for eps %.3g' % (chains, needed, eps_target))
        chains = needed
    horizon = 4
    while True:
        horizon = min(horizon, max_steps)
        curve = empirical_tvd_curve(X, order, horizon, chains, seed, n_cpus=n_cpus)
        for row in curve:
            if row.estimate <= eps_target:
                logger.info('empirical mixing time %d (estimate %.4g at eps %.3g, %d chains)'
                            % (row.t, row.estimate, eps_target, chains))
                return row.t
        if horizon >= max_steps:
            raise BudgetExceeded('distance still %.4g after %d sweeps' % (curve[-1].estimate, max_steps))
        horizon *= 2


def exact_tvd_curve(X, order, steps):
    """max_x ||P_SQ^t(x, .) - pi||_1 for t = 0..steps, from matrix powers."""
    P = sequential_sweep(X, order).matrix
    Pt = np.eye(X.num_facets)
    out = []
    for t in range(steps + 1):
        out.append(float(np.abs(Pt - X.pi[None, :]).sum(axis=1).max()))
        Pt = Pt @ P
    return out


def write_tvd_csv(curve, path, exact=None):
    df = pd.DataFrame([row.to_dict() for row in curve], columns=['t', 'estimate', 'ci_low', 'ci_high', 'start'])
    if exact is not None:
        df['exact'] = exact[:len(curve)]
    df.to_csv(path, index=False, float_format='%.10g')
    return df


def write_trajectory_csv(X, path_states, path):
    labels = [' '.join(str(v) for v in X.facet_labels[s]) for s in path_states]
    df = pd.DataFrame({'step': np.arange(len(path_states)), 'facet': labels})
    df.to_csv(path, index=False)
    return df
