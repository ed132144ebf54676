import glob
import json
import os
from os.path import join as pjoin

from multiprocess import Pool
from tqdm import tqdm

from complexes.complex import load_complex, save_complex
from complexes.errors import ManifestError
from complexes.generators import coloring_complex, product_complex, random_partite, single_edge_complex
from others.logging import logger


def build_instance(params):
    """Instantiate one manifest entry (after seed expansion)."""
    kind = params.get('generator')
    try:
        if kind == 'coloring':
            return coloring_complex(params['edges'], params['m'], params['q'])
        elif kind == 'single_edge':
            return single_edge_complex(params['k'], params['n'])
        elif kind == 'product':
            return product_complex(params['marginals'])
        elif kind == 'random_partite':
            return random_partite(params['n'], params['side_sizes'], params['density'], params['seed'],
                                  connected_only=params.get('connected_only', False))
    except KeyError as e:
        raise ManifestError('entry %r lacks parameter %s' % (params.get('name'), e))
    raise ManifestError('unknown generator %r' % kind)


def expand_manifest(manifest):
    """
    Flatten manifest entries into (name, params) pairs. An entry with a
    "seeds" list stands for one instance per seed, named <name>_s<seed>.
    """
    if 'instances' not in manifest:
        raise ManifestError('manifest has no "instances" list')
    out = []
    for entry in manifest['instances']:
        if 'name' not in entry:
            raise ManifestError('manifest entry without a name: %r' % entry)
        if 'seeds' in entry:
            for seed in entry['seeds']:
                params = dict(entry)
                del params['seeds']
                params['seed'] = seed
                out.append(('%s_s%d' % (entry['name'], seed), params))
        else:
            out.append((entry['name'], dict(entry)))
    names = [n for n, _ in out]
    if len(set(names)) != len(names):
        raise ManifestError('duplicate instance names in manifest')
    return out


def load_manifest(path):
    with open(path) as f:
        return expand_manifest(json.load(f))


def _build_named(item):
    name, params = item
    return name, build_instance(params)


def load_corpus(path, n_cpus=1):
    """
    Yield (name, WeightedComplex) from a manifest file or from a directory
    of JSON complex descriptions.
    """
    if os.path.isdir(path):
        for f in sorted(glob.glob(pjoin(path, '*.json'))):
            yield os.path.basename(f)[:-5], load_complex(f)
        return
    items = load_manifest(path)
    logger.info('Building %d instances from %s' % (len(items), path))
    if n_cpus > 1:
        pool = Pool(n_cpus)
        for name, X in pool.imap(_build_named, items):
            yield name, X
        pool.close()
        pool.join()
    else:
        for item in items:
            yield _build_named(item)


def build_corpus(args):
    """Materialize every manifest instance as <save_path>/<name>.json."""
    items = load_manifest(args.manifest)
    if not os.path.exists(args.save_path):
        os.makedirs(args.save_path)
    pool = Pool(args.n_cpus)
    connected = 0
    with tqdm(total=len(items)) as pbar:
        for name, X in pool.imap(_build_named, items):
            save_complex(X, pjoin(args.save_path, name + '.json'))
            connected += int(X.metadata.get('link_connected', False))
            pbar.update()
    pool.close()
    pool.join()
    logger.info('Saved %d instances to %s (%d flagged link-connected)' % (len(items), args.save_path, connected))
