#!/usr/bin/env python
"""
    Command line workflow: analyze, certify, sample, generate, corpus
"""
from __future__ import division

import argparse
import json
import os
import sys

import pandas as pd
from tqdm import tqdm

from certify.certificates import mixing_bounds
from certify.certifier import SUITES, any_failure, build_certifier
from certify.reporter import build_report_manager
from complexes.complex import complex_from_dict, save_complex
from complexes.errors import BudgetExceeded, HdxError, TooLarge, ZeroGap
from complexes.generators import coloring_complex, product_complex, random_partite
from others.logging import init_logger, logger
from others.utils import dump_json, parse_int_list, str2bool
from prepro.corpus_builder import expand_manifest, load_corpus, build_instance
from sampler.sweep import (SweepSampler, chain_rng, empirical_mixing_time, empirical_tvd_curve, exact_tvd_curve,
                           write_trajectory_csv, write_tvd_csv)
from spectra.cache import SpectralCache
from spectra.report import build_report, select_orders
from walks.operator import write_operator_csv
from walks.walks import down_up_walk, influence_matrix

DEFAULT_SEED = 666
MODES = ['analyze', 'certify', 'sample', 'generate', 'corpus']


def resolve_seed(args):
    if args.seed is not None:
        return args.seed
    return int(os.environ.get('HDX_SEED', DEFAULT_SEED))


def parse_graph(s):
    """'0-1,1-2' -> [(0, 1), (1, 2)]"""
    edges = []
    for e in s.split(','):
        if e.strip() == '':
            continue
        u, v = e.split('-')
        edges.append((int(u), int(v)))
    return edges


def parse_marginals(s):
    """'0.5,0.5;0.9,0.1' -> one weight list per side"""
    return [[float(x) for x in side.split(',')] for side in s.split(';')]


def generate_complex(args):
    if args.generator == 'coloring':
        return coloring_complex(parse_graph(args.graph), args.vertices, args.colors)
    elif args.generator == 'product':
        return product_complex(parse_marginals(args.marginals))
    elif args.generator == 'random':
        sizes = parse_int_list(args.side_sizes)
        n = args.sides if args.sides > 0 else len(sizes)
        return random_partite(n, sizes, args.density, args.seed)
    raise ValueError('unknown generator %r' % args.generator)


def check_size(X, args):
    if X.num_facets > args.max_facets and not args.force:
        raise TooLarge('%d facets exceeds -max_facets %d (dense operators); pass -force to go on'
                       % (X.num_facets, args.max_facets))
    return X


def load_instances(args):
    """
    (name, complex) pairs from -input (complex file, manifest file or
    directory of complex files) or from -generator.
    """
    if args.input == '':
        if args.generator == '':
            raise ValueError('either -input or -generator is required')
        return [(args.generator, check_size(generate_complex(args), args))]
    if os.path.isdir(args.input):
        return [(name, check_size(X, args)) for name, X in load_corpus(args.input)]
    with open(args.input) as f:
        d = json.load(f)
    if 'instances' in d:
        return [(name, check_size(build_instance(params), args)) for name, params in expand_manifest(d)]
    name = os.path.splitext(os.path.basename(args.input))[0]
    return [(name, check_size(complex_from_dict(d), args))]


def single_instance(args):
    instances = load_instances(args)
    if len(instances) != 1:
        raise ValueError('-mode %s takes one instance, got %d' % (args.mode, len(instances)))
    return instances[0]


def emit(text, path):
    if path == '':
        sys.stdout.write(text + '\n')
    else:
        logger.info('Writing %s' % path)


def analyze(args):
    name, X = single_instance(args)
    cache = SpectralCache(X, budget=args.budget, seed=args.seed)
    report = build_report(X, orders=args.orders, levels=args.levels, pairs=args.pairs, cache=cache,
                          entropy=args.entropy)
    emit(dump_json(report.to_dict(), args.out), args.out)
    if args.csv_dir != '':
        if not os.path.exists(args.csv_dir):
            os.makedirs(args.csv_dir)
        order = select_orders(X.n, args.orders)[0]
        write_operator_csv(cache.sweep(order), os.path.join(args.csv_dir, 'sweep.csv'))
        write_operator_csv(down_up_walk(X), os.path.join(args.csv_dir, 'glauber.csv'))
        if X.n >= 2:
            write_operator_csv(influence_matrix(X), os.path.join(args.csv_dir, 'influence.csv'))
    return 0


def certify(args):
    instances = load_instances(args)
    certifier = build_certifier(args)
    payload = certifier.run(instances)
    certifier.report_manager.close()
    emit(dump_json(payload, args.out), args.out)
    if any_failure(payload):
        logger.error('%d certificate(s) failed' % sum(c['verdict'] == 'fail' for c in payload['certificates']))
        return 1
    return 0


def sample(args):
    name, X = single_instance(args)
    order = select_orders(X.n, args.order)[0]
    report_manager = build_report_manager(args)

    curve = empirical_tvd_curve(X, order, args.steps, args.chains, args.seed, n_cpus=args.n_cpus)
    exact = exact_tvd_curve(X, order, args.steps) if args.exact else None
    report_manager.report_curve('tvd/%s' % name, curve, exact)
    if args.out == '':
        write_tvd_csv(curve, sys.stdout, exact)
    else:
        write_tvd_csv(curve, args.out, exact)

    if args.csv_dir != '':
        if not os.path.exists(args.csv_dir):
            os.makedirs(args.csv_dir)
        sampler = SweepSampler(X, order)
        path = sampler.trajectory(0, args.steps, chain_rng(args.seed, 0, 0))
        write_trajectory_csv(X, path, os.path.join(args.csv_dir, 'trajectory.csv'))

    if args.eps_target > 0:
        summary = {'instance': name, 'eps_target': args.eps_target}
        try:
            summary['bounds'] = mixing_bounds(X, order, args.eps_target).to_dict()
        except ZeroGap as e:
            logger.warning('no spectral bound: %s' % e)
            summary['bounds'] = None
        try:
            summary['empirical_mixing_time'] = empirical_mixing_time(X, order, args.eps_target, args.seed,
                                                                     chains=args.chains, n_cpus=args.n_cpus)
        except BudgetExceeded as e:
            logger.warning('%s' % e)
            summary['empirical_mixing_time'] = None
        if args.csv_dir != '':
            dump_json(summary, os.path.join(args.csv_dir, 'mixing.json'))
        logger.info('mixing: %s' % json.dumps(summary, sort_keys=True))
    report_manager.close()
    return 0


def generate(args):
    name, X = single_instance(args)
    if args.out == '':
        sys.stdout.write(json.dumps(X.to_dict(), sort_keys=True, indent=1) + '\n')
    else:
        save_complex(X, args.out)
        logger.info('Saved %r to %s' % (X, args.out))
    return 0


def corpus(args):
    """One flattened report row per instance, written as CSV."""
    rows = []
    for name, X in tqdm(load_instances(args)):
        cache = SpectralCache(X, budget=args.budget, seed=args.seed)
        row = build_report(X, orders=args.orders, levels=args.levels, pairs=args.pairs, cache=cache,
                           entropy=args.entropy).csv_row()
        row['instance'] = name
        rows.append(row)
    df = pd.DataFrame(rows)
    df = df[['instance'] + sorted(c for c in df.columns if c != 'instance')]
    df.to_csv(sys.stdout if args.out == '' else args.out, index=False, float_format='%.10g')
    return 0


def build_parser():
    parser = argparse.ArgumentParser()
    parser.add_argument("-mode", default='analyze', type=str, choices=MODES)
    parser.add_argument("-input", default='', type=str)
    parser.add_argument("-out", default='', type=str)
    parser.add_argument("-csv_dir", default='', type=str)

    parser.add_argument("-generator", default='', type=str, choices=['', 'coloring', 'product', 'random'])
    parser.add_argument("-graph", default='0-1', type=str)
    parser.add_argument("-vertices", default=2, type=int)
    parser.add_argument("-colors", default=3, type=int)
    parser.add_argument("-marginals", default='0.5,0.5;0.5,0.5', type=str)
    parser.add_argument("-sides", default=0, type=int)
    parser.add_argument("-side_sizes", default='3,3,3', type=str)
    parser.add_argument("-density", default=0.7, type=float)

    parser.add_argument("-order", default='canonical', type=str)
    parser.add_argument("-orders", default='auto', type=str)
    parser.add_argument("-levels", default=None, type=int)
    parser.add_argument("-pairs", default='sweep', type=str, choices=['sweep', 'all'])
    parser.add_argument("-entropy", type=str2bool, nargs='?', const=True, default=True)
    parser.add_argument("-suite", default='all', type=str, choices=SUITES)
    parser.add_argument("-trials", default=100, type=int)
    parser.add_argument("-grid_step", default=0.05, type=float)
    parser.add_argument("-budget", default=8, type=int)

    parser.add_argument("-steps", default=10, type=int)
    parser.add_argument("-chains", default=20000, type=int)
    parser.add_argument("-eps_target", default=0., type=float)
    parser.add_argument("-exact", type=str2bool, nargs='?', const=True, default=False)

    parser.add_argument("-seed", default=None, type=int)
    parser.add_argument("-force", type=str2bool, nargs='?', const=True, default=False)
    parser.add_argument("-max_facets", default=5000, type=int)
    parser.add_argument("-n_cpus", default=1, type=int)
    parser.add_argument('-log_file', default='')
    parser.add_argument("-verbose", type=str2bool, nargs='?', const=True, default=False)
    parser.add_argument("-tensorboard", type=str2bool, nargs='?', const=True, default=False)
    parser.add_argument("-tensorboard_log_dir", default='../logs/tensorboard', type=str)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    init_logger(args.log_file, verbose=args.verbose)
    args.seed = resolve_seed(args)

    try:
        if args.mode == 'analyze':
            return analyze(args)
        elif args.mode == 'certify':
            return certify(args)
        elif args.mode == 'sample':
            return sample(args)
        elif args.mode == 'generate':
            return generate(args)
        elif args.mode == 'corpus':
            return corpus(args)
    except (HdxError, ValueError, KeyError, OSError) as e:
        # json.JSONDecodeError is a ValueError
        logger.error('%s: %s' % (type(e).__name__, e))
        return 2


if __name__ == '__main__':
    sys.exit(main())
