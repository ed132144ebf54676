import argparse
import hashlib
import itertools
import json
import os

import numpy as np


def str2bool(v):
    if v.lower() in ('yes', 'true', 't', 'y', '1'):
        return True
    elif v.lower() in ('no', 'false', 'f', 'n', '0'):
        return False
    else:
        raise argparse.ArgumentTypeError('Boolean value expected.')


def hashhex(s):
    """Returns a heximal formated SHA1 hash of the input string."""
    h = hashlib.sha1()
    h.update(s.encode('utf-8'))
    return h.hexdigest()


def parse_int_list(s, sep=','):
    s = s.strip()
    if s == '':
        return []
    return [int(x) for x in s.split(sep)]


def set_label(sides):
    return ','.join(str(i) for i in sides)


def pair_label(I, J):
    return '%s->%s' % (set_label(I), set_label(J))


def all_orders(n):
    return [tuple(p) for p in itertools.permutations(range(n))]


def disjoint_pairs(sides):
    """All ordered pairs (I, J) of nonempty disjoint subsets of `sides`.

    Pairs come out sorted by (|I|+|J|, I, J) so that reports are stable.
    """
    sides = tuple(sorted(sides))
    pairs = []
    # each side goes to I, to J or to neither
    for labels in itertools.product((0, 1, 2), repeat=len(sides)):
        I = tuple(s for s, l in zip(sides, labels) if l == 1)
        J = tuple(s for s, l in zip(sides, labels) if l == 2)
        if I and J:
            pairs.append((I, J))
    pairs.sort(key=lambda p: (len(p[0]) + len(p[1]), p[0], p[1]))
    return pairs


class NumpyEncoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        return super(NumpyEncoder, self).default(o)


def dump_json(obj, path=None):
    text = json.dumps(obj, sort_keys=True, indent=2, cls=NumpyEncoder)
    if path is None or path == '':
        return text
    d = os.path.dirname(path)
    if d and not os.path.exists(d):
        os.makedirs(d)
    with open(path, 'w') as f:
        f.write(text + '\n')
    return text
