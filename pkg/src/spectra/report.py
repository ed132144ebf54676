import numpy as np

from others.logging import logger
from others.utils import all_orders, disjoint_pairs, pair_label
from spectra.cache import SpectralCache
from spectra.entropy import entropy_contraction_estimate
from spectra.linalg import sigma2
from spectra.params import sweep_eta_pairs, sweep_pairs
from walks.walks import order_label

REPORT_VERSION = 1

FIELDS = ['report_version', 'digest', 'n', 'side_sizes', 'num_facets', 'link_connected', 'gamma',
          'eps_profile', 'eps_pairwise', 'eps_sets', 'sigma2_by_order', 'sigma2_sweep', 'gap_sweep',
          'gap_glauber', 'ec_sweep_estimate', 'ec_sweep_lower', 'eta_sets']


class SpectralReport(object):
    """
    Spectral and entropic parameters of one instance.

    Pair keys are 'I->J' with comma separated 0-based sides, orders are
    comma separated permutations.
    """

    def __init__(self, **fields):
        missing = [f for f in FIELDS if f not in fields]
        if missing:
            raise KeyError('report is missing fields %s' % missing)
        for f in FIELDS:
            setattr(self, f, fields[f])

    def to_dict(self):
        return {f: getattr(self, f) for f in FIELDS}

    @classmethod
    def from_dict(cls, d):
        return cls(**{f: d[f] for f in FIELDS})

    def csv_row(self):
        """Flat view for corpus sweeps: nested mappings become dotted columns."""
        row = {}
        for f in FIELDS:
            v = getattr(self, f)
            if isinstance(v, dict):
                for k, x in sorted(v.items()):
                    if isinstance(x, dict):
                        for kk, xx in sorted(x.items()):
                            row['%s.%s.%s' % (f, k, kk)] = xx
                    else:
                        row['%s.%s' % (f, k)] = x
            elif isinstance(v, list):
                for i, x in enumerate(v):
                    row['%s.%d' % (f, i)] = x
            else:
                row[f] = v
        return row

    def out_of_range(self, slack=1e-9):
        """Names of scalar entries outside [0, 1] (gamma may be negative and is skipped)."""
        bad = []
        for key, value in self.csv_row().items():
            if key.startswith('gamma') or not isinstance(value, float):
                continue
            if key.endswith('.exact') or 'direction' in key:
                continue
            if value < -slack or value > 1. + slack:
                bad.append(key)
        return bad


def select_orders(n, orders='canonical'):
    """'auto' means every ordering up to n=4 and the canonical one beyond."""
    if orders == 'auto':
        orders = 'all' if n <= 4 else 'canonical'
    if orders == 'canonical':
        return [tuple(range(n))]
    if orders == 'all':
        return all_orders(n)
    order = tuple(int(i) for i in orders.split(','))
    return [order]


def build_report(X, orders='canonical', levels=None, pairs='sweep', cache=None, entropy=True):
    """
    Args:
        orders: 'canonical', 'all' or a comma separated permutation.
        levels (int): keep gamma and the eps profile up to this level.
        pairs: 'sweep' for the pairs the sweep bounds consume, 'all' for every disjoint pair.
        entropy (bool): run the entropy estimators.
    """
    cache = cache if cache is not None else SpectralCache(X)
    order_list = select_orders(X.n, orders)
    gamma = cache.gamma()
    profile = cache.profile()
    if levels is not None:
        gamma, profile = gamma[:levels + 1], profile[:levels + 1]

    pairwise = {pair_label((i,), (j,)): cache.eps([i], [j])
                for i in range(X.n) for j in range(i + 1, X.n)}
    if pairs == 'all':
        wanted = [p for p in disjoint_pairs(range(X.n)) if p[0] < p[1]]
    else:
        wanted = sorted(set(p for o in order_list for p in sweep_pairs(o)))
    eps_sets = {pair_label(I, J): cache.eps(I, J) for I, J in wanted}

    by_order = {order_label(o): cache.sigma2_sweep(o) for o in order_list}
    main = order_list[0]
    s2 = cache.sigma2_sweep(main)

    ec_estimate, ec_lower, eta_sets = None, None, {}
    if entropy:
        ec_estimate = entropy_contraction_estimate(cache.sweep(main), budget=cache.budget,
                                                   seed=cache.seed).to_dict()
        etas = []
        for I, J in sweep_eta_pairs(main):
            e = cache.eta(I, J)
            etas.append(e)
            eta_sets[pair_label(I, J)] = e.to_dict()
        if all(e.exact for e in etas):
            ec_lower = float(np.prod([e.eta for e in etas]))

    report = SpectralReport(report_version=REPORT_VERSION, digest=X.digest(), n=X.n,
                            side_sizes=[len(s) for s in X.sides], num_facets=X.num_facets,
                            link_connected=cache.link_connected(), gamma=gamma, eps_profile=profile,
                            eps_pairwise=pairwise, eps_sets=eps_sets, sigma2_by_order=by_order,
                            sigma2_sweep=s2, gap_sweep=1. - s2, gap_glauber=1. - sigma2(cache.glauber()),
                            ec_sweep_estimate=ec_estimate, ec_sweep_lower=ec_lower, eta_sets=eta_sets)
    logger.info('report %s: sigma2_sweep %.6g, gap_glauber %.6g' % (X.digest()[:8], s2, report.gap_glauber))
    return report
