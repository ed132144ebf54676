import argparse
import json
import os

import pandas as pd
import pytest

import hdx
from complexes.complex import load_complex, save_complex
from complexes.errors import TooLarge
from others.utils import dump_json
from spectra.cache import SpectralCache
from spectra.report import build_report


@pytest.fixture
def edge_file(tmp_path, three_color_edge):
    path = str(tmp_path / 'edge.json')
    save_complex(three_color_edge, path)
    return path


def test_analyze_round_trip(tmp_path, edge_file):
    out = str(tmp_path / 'report.json')
    assert hdx.main(['-mode', 'analyze', '-input', edge_file, '-out', out, '-seed', '0', '-orders', 'canonical']) == 0
    with open(out) as f:
        written = json.load(f)
    X = load_complex(edge_file)
    expected = build_report(X, orders='canonical', cache=SpectralCache(X, budget=8, seed=0)).to_dict()
    assert written == json.loads(dump_json(expected))


def test_analyze_appendix_from_generator(capsys):
    code = hdx.main(['-mode', 'analyze', '-generator', 'coloring', '-graph', '0-1', '-vertices', '2',
                     '-colors', '4', '-entropy', 'false'])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert abs(report['eps_pairwise']['0->1'] - 1. / 3) <= 1e-10


def test_analyze_product_with_all_orders(capsys):
    code = hdx.main(['-mode', 'analyze', '-generator', 'product', '-marginals', '0.5,0.5;0.3,0.7;0.2,0.8',
                     '-orders', 'all', '-pairs', 'all', '-entropy', 'false'])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report['sigma2_by_order']) == 6
    assert all(abs(v) <= 1e-10 for v in report['eps_pairwise'].values())
    assert all(abs(v) <= 1e-10 for v in report['eps_sets'].values())


def test_analyze_operator_dumps(tmp_path, edge_file):
    csv_dir = str(tmp_path / 'ops')
    assert hdx.main(['-mode', 'analyze', '-input', edge_file, '-out', str(tmp_path / 'r.json'),
                     '-csv_dir', csv_dir, '-entropy', 'false']) == 0
    df = pd.read_csv(os.path.join(csv_dir, 'sweep.csv'), index_col=0)
    assert df.shape == (6, 6)
    assert (df.sum(axis=1) - 1.).abs().max() <= 1e-12
    assert os.path.exists(os.path.join(csv_dir, 'influence.csv'))


def test_corrupted_input_exits_2(tmp_path):
    path = str(tmp_path / 'broken.json')
    with open(path, 'w') as f:
        f.write('{"sides": [[0, 1], [0')
    assert hdx.main(['-mode', 'certify', '-input', path]) == 2
    assert hdx.main(['-mode', 'certify', '-input', str(tmp_path / 'missing.json')]) == 2
    assert hdx.main(['-mode', 'analyze']) == 2


def test_invalid_complex_exits_2(tmp_path):
    path = str(tmp_path / 'dup.json')
    with open(path, 'w') as f:
        json.dump({'sides': [[0], [0]], 'facets': [{'coords': [0, 0]}, {'coords': [0, 0]}]}, f)
    assert hdx.main(['-mode', 'analyze', '-input', path]) == 2


def test_certify_disconnected_is_vacuous(tmp_path, disconnected_pair):
    path = str(tmp_path / 'pair.json')
    save_complex(disconnected_pair, path)
    out = str(tmp_path / 'certs.json')
    assert hdx.main(['-mode', 'certify', '-input', path, '-suite', 'csv', '-out', out]) == 0
    with open(out) as f:
        payload = json.load(f)
    assert payload['report_version'] == 1
    assert payload['certificates']
    assert all(c['verdict'] == 'vacuous' for c in payload['certificates'])


def test_certify_manifest_is_byte_identical(tmp_path):
    manifest = str(tmp_path / 'manifest.json')
    with open(manifest, 'w') as f:
        json.dump({'version': 1, 'instances': [
            {'name': 'edge', 'generator': 'single_edge', 'k': 2, 'n': 2},
            {'name': 'rand', 'generator': 'random_partite', 'n': 3, 'side_sizes': [2, 2, 2], 'density': 0.9,
             'connected_only': True, 'seeds': [1, 2]}]}, f)
    outputs = []
    for i in range(2):
        out = str(tmp_path / ('run%d.json' % i))
        assert hdx.main(['-mode', 'certify', '-input', manifest, '-suite', 'all', '-orders', 'canonical',
                         '-seed', '11', '-out', out]) == 0
        with open(out, 'rb') as f:
            outputs.append(f.read())
    assert outputs[0] == outputs[1]
    names = {c['instance'] for c in json.loads(outputs[0].decode('utf-8'))['certificates']}
    assert names == {'edge', 'rand_s1', 'rand_s2'}


def test_sample_zero_steps(tmp_path, edge_file, three_color_edge):
    out = str(tmp_path / 'tvd.csv')
    assert hdx.main(['-mode', 'sample', '-input', edge_file, '-steps', '0', '-chains', '1000', '-out', out]) == 0
    df = pd.read_csv(out)
    assert list(df['t']) == [0]
    assert abs(df['estimate'][0] - 2. * (1. - three_color_edge.pi.min())) <= 1e-9


def test_sample_is_reproducible(tmp_path, edge_file):
    dumps = []
    for i in range(2):
        out = str(tmp_path / ('tvd%d.csv' % i))
        csv_dir = str(tmp_path / ('run%d' % i))
        assert hdx.main(['-mode', 'sample', '-input', edge_file, '-steps', '4', '-chains', '3000', '-seed', '21',
                         '-out', out, '-csv_dir', csv_dir]) == 0
        with open(out) as f, open(os.path.join(csv_dir, 'trajectory.csv')) as g:
            dumps.append((f.read(), g.read()))
    assert dumps[0] == dumps[1]


def test_sample_product_mixes(capsys):
    assert hdx.main(['-mode', 'sample', '-generator', 'product', '-marginals', '0.3,0.7;0.5,0.5', '-steps', '1',
                     '-chains', '20000', '-exact', 'true']) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == 't,estimate,ci_low,ci_high,start,exact'
    t, estimate, ci_low = lines[2].split(',')[:3]
    assert t == '1' and float(ci_low) <= 0.01


def test_generate(tmp_path):
    out = str(tmp_path / 'random.json')
    assert hdx.main(['-mode', 'generate', '-generator', 'random', '-side_sizes', '2,3', '-density', '0.9',
                     '-seed', '3', '-out', out]) == 0
    X = load_complex(out)
    assert X.n == 2 and X.metadata['seed'] == 3


def test_size_guard(edge_file):
    assert hdx.main(['-mode', 'analyze', '-input', edge_file, '-max_facets', '3']) == 2
    assert hdx.main(['-mode', 'analyze', '-input', edge_file, '-max_facets', '3', '-force', 'true',
                     '-entropy', 'false', '-out', os.devnull]) == 0
    args = hdx.build_parser().parse_args(['-max_facets', '3'])
    with pytest.raises(TooLarge):
        hdx.check_size(load_complex(edge_file), args)


def test_seed_resolution(monkeypatch):
    parser = hdx.build_parser()
    monkeypatch.delenv('HDX_SEED', raising=False)
    assert hdx.resolve_seed(parser.parse_args([])) == 666
    monkeypatch.setenv('HDX_SEED', '42')
    assert hdx.resolve_seed(parser.parse_args([])) == 42
    assert hdx.resolve_seed(parser.parse_args(['-seed', '5'])) == 5


def test_corpus_table(tmp_path, edge_file, disconnected_pair):
    corpus_dir = tmp_path / 'corpus'
    corpus_dir.mkdir()
    save_complex(load_complex(edge_file), str(corpus_dir / 'edge.json'))
    save_complex(disconnected_pair, str(corpus_dir / 'pair.json'))
    out = str(tmp_path / 'table.csv')
    assert hdx.main(['-mode', 'corpus', '-input', str(corpus_dir), '-out', out, '-entropy', 'false']) == 0
    df = pd.read_csv(out)
    assert list(df['instance']) == ['edge', 'pair']
    assert list(df['link_connected']) == [True, False]


def test_parsers():
    assert hdx.parse_graph('0-1, 1-2') == [(0, 1), (1, 2)]
    assert hdx.parse_marginals('0.5,0.5;1') == [[0.5, 0.5], [1.0]]
    with pytest.raises(argparse.ArgumentTypeError):
        hdx.str2bool('maybe')
