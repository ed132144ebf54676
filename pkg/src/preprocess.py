#encoding=utf-8


import argparse
import time

from others.logging import init_logger, logger
from others.utils import str2bool
from prepro import corpus_builder


def do_build_corpus(args):
    start = time.time()
    corpus_builder.build_corpus(args)
    logger.info('build_corpus took %.1f sec' % (time.time() - start))


if __name__ == '__main__':
    parser = argparse.ArgumentParser()
    parser.add_argument("-mode", default='build_corpus', type=str, choices=['build_corpus'])
    parser.add_argument("-manifest", default='../corpus/manifest.json')
    parser.add_argument("-save_path", default='../corpus/instances/')
    parser.add_argument('-n_cpus', default=2, type=int)
    parser.add_argument('-log_file', default='')
    parser.add_argument("-verbose", type=str2bool, nargs='?', const=True, default=False)

    args = parser.parse_args()
    init_logger(args.log_file, verbose=args.verbose)
    eval('do_' + args.mode + '(args)')
