import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from complexes.complex import Face
from complexes.distribution import Distribution
from complexes.errors import MeasureMismatch, OverlappingColorSets, ZeroMassState
from complexes.generators import single_edge_complex
from spectra.cache import SpectralCache
from spectra.linalg import inner, norm, second_eigenvalue, sigma2, singular_values, spectral_gap, weighted_adjoint
from spectra.params import (eps_pairwise, eps_param, eps_pinned, eps_product_profile, eps_sets, gamma_params,
                            max_influence_profile, sweep_eta_pairs, sweep_pairs)
from spectra.report import SpectralReport, build_report, select_orders
from strategies import partite_complexes, product_complexes
from walks.operator import MarkovOperator
from walks.walks import colored_walk, down_up_walk, link_walk, sequential_sweep

TOL = 1e-10


@pytest.mark.parametrize('k', [2, 3, 4])
@pytest.mark.parametrize('n', [2, 3])
def test_appendix_values(k, n):
    X = single_edge_complex(k, n)
    assert abs(sigma2(colored_walk(X, Face(), [0], [1])) - 1. / k) <= TOL
    pairwise = eps_pairwise(X)
    assert abs(pairwise[(0, 1)] - 1. / k) <= TOL
    for (i, j), value in pairwise.items():
        if (i, j) != (0, 1):
            assert value <= TOL
    assert abs(max_influence_profile(X)[0] - 1. / k) <= TOL


def test_appendix_gamma_matches_influence():
    X = single_edge_complex(3, 3)
    assert abs(gamma_params(X)[0] - 1. / 6) <= TOL


def test_uniform_square_gap(uniform_square):
    assert abs(spectral_gap(down_up_walk(uniform_square)) - 0.5) <= 1e-12
    assert abs(second_eigenvalue(link_walk(uniform_square))) <= 1e-12


def test_zero_mass_and_unpushed_measures():
    mu = Distribution([0, 1], [1., 0.])
    with pytest.raises(ZeroMassState):
        weighted_adjoint(MarkovOperator(np.eye(2), mu, mu))
    nu = Distribution.uniform([0, 1])
    bad = MarkovOperator(np.array([[1., 0.], [1., 0.]]), nu, nu, row_stochastic=False)
    bad.row_stochastic = True
    with pytest.raises(MeasureMismatch):
        singular_values(bad)


def test_eps_rejects_overlap(three_color_edge):
    with pytest.raises(OverlappingColorSets):
        eps_param(three_color_edge, [0], [0, 1])


@given(product_complexes())
def test_products_have_no_correlation(X):
    for order in select_orders(X.n, 'auto')[:6]:
        assert sigma2(sequential_sweep(X, order)) <= TOL
    if X.n >= 2:
        assert max(eps_product_profile(X)) <= TOL
        for I, J in itertools.combinations([(i,) for i in range(X.n)], 2):
            assert eps_param(X, I, J) <= TOL


@given(partite_complexes(min_n=2))
def test_eps_is_symmetric_and_bounded(X):
    for I, J in [((0,), (1,)), ((1,), (0,))]:
        values = [v for _, v in eps_pinned(X, I, J)]
        assert all(-TOL <= v <= 1. + TOL for v in values)
    assert abs(eps_param(X, [0], [1]) - eps_param(X, [1], [0])) <= 1e-9
    out = eps_sets(X, [((0,), (1,)), ((1,), (0,))])
    assert out[((0,), (1,))] == out[((1,), (0,))]


def test_sweep_pairs():
    assert sweep_pairs((2, 0, 1)) == [((2,), (0,)), ((0, 2), (1,))]
    assert sweep_eta_pairs((2, 0, 1)) == [((0, 1), (2,)), ((1,), (0,))]


def test_select_orders():
    assert select_orders(3, 'canonical') == [(0, 1, 2)]
    assert len(select_orders(3, 'all')) == 6
    assert len(select_orders(4, 'auto')) == 24
    assert select_orders(5, 'auto') == [(0, 1, 2, 3, 4)]
    assert select_orders(3, '2,0,1') == [(2, 0, 1)]


def test_report_fields_and_round_trip(three_color_edge):
    report = build_report(three_color_edge, orders='all', pairs='all')
    d = report.to_dict()
    assert d['report_version'] == 1
    assert d['n'] == 2 and d['num_facets'] == 6
    assert abs(d['eps_pairwise']['0->1'] - 0.5) <= TOL
    assert len(d['sigma2_by_order']) == 2
    assert d['eta_sets']['1->0']['direction'] == 'kappa_lower_bound'
    assert SpectralReport.from_dict(d).to_dict() == d
    assert report.out_of_range() == []


def test_report_orders_all_on_three_sides(small_random):
    report = build_report(small_random, orders='all', entropy=False)
    assert len(report.sigma2_by_order) == 6
    assert report.ec_sweep_estimate is None


def test_report_on_product(biased_product):
    report = build_report(biased_product, pairs='all', entropy=False)
    assert all(v <= TOL for v in report.eps_pairwise.values())
    assert all(v <= TOL for v in report.eps_sets.values())
    assert report.sigma2_sweep <= TOL


def test_cache_reuses_values(small_random):
    cache = SpectralCache(small_random)
    assert cache.eps([0], [1, 2]) is cache.eps([2, 1], [0])
    assert cache.sweep((0, 1, 2)) is cache.sweep([0, 1, 2])
    assert cache.link_connected()


@given(partite_complexes(min_n=2), st.integers(min_value=0, max_value=2 ** 31 - 1))
def test_sigma2_bounds_the_centered_action(X, seed):
    rng = np.random.default_rng(seed)
    walks = [sequential_sweep(X, tuple(range(X.n))), sequential_sweep(X, tuple(reversed(range(X.n)))),
             colored_walk(X, Face(), [0], list(range(1, X.n)))]
    for B in walks:
        pi_U, pi_V = B.domain_measure, B.codomain_measure
        s2 = sigma2(B)
        for _ in range(5):
            f = rng.standard_normal(len(pi_V))
            mean = inner(f, np.ones(len(pi_V)), pi_V)
            lhs = norm(B.matrix @ f - mean, pi_U)
            assert lhs <= s2 * norm(f - mean, pi_V) + 1e-9


@given(arrays(np.float64, (4,), elements=st.floats(min_value=0.01, max_value=1.0)),
       arrays(np.float64, (4, 3), elements=st.floats(min_value=0.0, max_value=1.0)),
       st.integers(min_value=0, max_value=2 ** 31 - 1))
def test_weighted_adjoint_identity(p, weights, seed):
    weights = weights + 1e-3
    matrix = weights / weights.sum(axis=1, keepdims=True)
    pi_U = Distribution.normalized(list(range(4)), p)
    pi_V = Distribution.normalized(['a', 'b', 'c'], pi_U.mass @ matrix)
    M = MarkovOperator(matrix, pi_U, pi_V)
    adj = weighted_adjoint(M)
    assert adj.domain_labels == pi_V.support and adj.codomain_labels == pi_U.support
    np.testing.assert_allclose(adj.matrix.sum(axis=1), 1., atol=TOL)
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(4)
    g = rng.standard_normal(3)
    assert abs(inner(f, M.matrix @ g, pi_U) - inner(adj.matrix @ f, g, pi_V)) <= TOL
