"""
Runs certificate suites over single instances or a whole corpus.
"""
from multiprocess import Pool
from tqdm import tqdm

from certify.certificates import (certify_angles, certify_coraa, certify_csv, certify_csv_product,
                                  certify_cwadv_all, certify_downtrickle, certify_ecc, certify_geometry,
                                  certify_glauber, certify_projection_product)
from certify.reporter import build_report_manager
from complexes.errors import InstanceTooLarge
from others.logging import logger
from spectra.cache import SpectralCache
from spectra.report import select_orders

SUITES = ['all', 'csv', 'cwadv', 'ecc', 'glauber', 'trickle', 'geometry']
ECC_MAX_FACETS = 8
CERTIFY_VERSION = 1


def build_certifier(args):
    report_manager = build_report_manager(args)
    return Certifier(suite=args.suite, orders=args.orders, grid_step=args.grid_step, budget=args.budget,
                     seed=args.seed, trials=args.trials, n_cpus=args.n_cpus, report_manager=report_manager)


class Certifier(object):
    """
    Args:
        suite (str): one of SUITES.
        orders (str): 'auto' (every ordering up to n=4), 'all', 'canonical' or a permutation.
        grid_step (float): facet lattice resolution of the entropy certificate.
        budget (int): restarts for the entropy estimators.
        seed (int): seed of the estimators and of the random test vectors.
        trials (int): random vectors for the projection-product certificate.
    """

    def __init__(self, suite='all', orders='auto', grid_step=0.05, budget=8, seed=0, trials=100, n_cpus=1,
                 report_manager=None):
        if suite not in SUITES:
            raise ValueError('unknown suite %r, expected one of %s' % (suite, SUITES))
        self.suite = suite
        self.orders = orders
        self.grid_step = grid_step
        self.budget = budget
        self.seed = seed
        self.trials = trials
        self.n_cpus = n_cpus
        self.report_manager = report_manager

    def _wants(self, name):
        return self.suite in ('all', name)

    def certify(self, X):
        """All certificates of the configured suite on one instance."""
        cache = SpectralCache(X, budget=self.budget, seed=self.seed)
        orders = select_orders(X.n, self.orders)
        certs = []
        if X.n >= 2 and self._wants('csv'):
            for order in orders:
                certs.append(certify_csv(X, order, cache=cache))
                certs.append(certify_csv_product(X, order, cache=cache))
                certs.extend(certify_coraa(X, order, cache=cache))
        if X.n >= 2 and self._wants('cwadv'):
            certs.extend(certify_cwadv_all(X, cache=cache))
        if self._wants('ecc'):
            if X.num_facets > ECC_MAX_FACETS:
                logger.info('skipping entropy certificate: %d facets > %d' % (X.num_facets, ECC_MAX_FACETS))
            else:
                for order in orders:
                    try:
                        certs.append(certify_ecc(X, order, grid_resolution=self.grid_step, cache=cache))
                    except InstanceTooLarge as e:
                        logger.warning('skipping entropy certificate: %s' % e)
                        break
        if self._wants('glauber'):
            certs.extend(certify_glauber(X, cache=cache))
        if X.n >= 2 and self._wants('trickle'):
            certs.extend(certify_downtrickle(X, cache=cache))
        if self._wants('geometry'):
            certs.extend(certify_angles(X, cache=cache))
            certs.extend(certify_geometry(X, cache=cache))
            for order in orders:
                certs.append(certify_projection_product(X, order, trials=self.trials, seed=self.seed,
                                                        cache=cache))
        return certs

    def config(self):
        return dict(suite=self.suite, orders=self.orders, grid_step=self.grid_step, budget=self.budget,
                    seed=self.seed, trials=self.trials)

    def run(self, instances):
        """
        Certify (name, complex) pairs; results keep the input order.

        Returns:
            dict with the certificate list and verdict summary.
        """
        instances = list(instances)
        if self.n_cpus > 1 and len(instances) > 1:
            pool = Pool(self.n_cpus)
            results = pool.imap(_certify_job, [(self.config(), item) for item in instances])
        else:
            pool = None
            results = map(_certify_job, [(self.config(), item) for item in instances])

        rows = []
        for name, certs in tqdm(results, total=len(instances), disable=len(instances) < 2):
            if self.report_manager is not None:
                self.report_manager.report_certificates(name, certs)
            for c in certs:
                d = c.to_dict()
                d['instance'] = name
                rows.append(d)
        if pool is not None:
            pool.close()
            pool.join()

        summary = self.report_manager.stats.to_dict() if self.report_manager is not None else None
        return {'report_version': CERTIFY_VERSION, 'suite': self.suite, 'certificates': rows,
                'summary': summary}


def _certify_job(params):
    config, (name, X) = params
    return name, Certifier(**config).certify(X)


def any_failure(payload):
    return any(c['verdict'] == 'fail' for c in payload['certificates'])
