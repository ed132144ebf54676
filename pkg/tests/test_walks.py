import itertools

import numpy as np
import pytest
from hypothesis import given

from complexes.complex import Face, level_distribution
from complexes.distribution import Distribution, tuple_marginal
from complexes.errors import (FaceTooLarge, LevelOutOfRange, NotAPermutation, NotStochastic, OverlappingColorSets,
                              SideOutOfRange, StationarityViolation)
from complexes.generators import product_complex, single_edge_complex
from complexes.measures import push_forward
from spectra.linalg import self_adjoint_spectrum, singular_values, weighted_adjoint
from strategies import facet_measures, partite_complexes
from walks.operator import MarkovOperator, identity, rank_one
from walks.walks import (colored_walk, down_operator, down_up_walk, down_up_walk_level, influence_matrix,
                         link_walk, phi_vector, sequential_sweep, trivial_projector, update_operator)

TOL = 1e-10


def test_operator_validation():
    mu = Distribution.uniform([0, 1])
    with pytest.raises(NotStochastic):
        MarkovOperator([[0.5, 0.4], [0.5, 0.5]], mu, mu)
    with pytest.raises(StationarityViolation):
        MarkovOperator([[1., 0.], [1., 0.]], mu, mu)
    P = rank_one(mu) @ identity(mu)
    np.testing.assert_allclose(P.matrix, 0.5)


def test_update_on_uniform_square(uniform_square):
    Q0 = update_operator(uniform_square, 0)
    # facets (0,0) and (1,0) agree off side 0
    np.testing.assert_allclose(Q0.row((0, 0)), [0.5, 0., 0.5, 0.])
    with pytest.raises(SideOutOfRange):
        update_operator(uniform_square, 2)


def test_glauber_on_uniform_square(uniform_square):
    ev = self_adjoint_spectrum(down_up_walk(uniform_square))
    np.testing.assert_allclose(ev, [1., 0.5, 0.5, 0.], atol=1e-12)


def test_single_side_walks_are_rank_one():
    X = product_complex([[0.2, 0.8]])
    rank1 = np.tile(X.pi, (2, 1))
    np.testing.assert_allclose(down_up_walk(X).matrix, rank1, atol=TOL)
    np.testing.assert_allclose(sequential_sweep(X).matrix, rank1, atol=TOL)


def test_product_sweep_mixes_in_one_step(biased_product):
    for order in itertools.permutations(range(3)):
        P = sequential_sweep(biased_product, order)
        np.testing.assert_allclose(P.matrix, np.tile(biased_product.pi, (biased_product.num_facets, 1)), atol=TOL)


def test_bad_order(uniform_square):
    with pytest.raises(NotAPermutation):
        sequential_sweep(uniform_square, (0, 0))


def test_colored_walk_on_edge(three_color_edge):
    C = colored_walk(three_color_edge, Face(), [0], [1])
    np.testing.assert_allclose(C.matrix, (np.ones((3, 3)) - np.eye(3)) / 2.)
    with pytest.raises(OverlappingColorSets):
        colored_walk(three_color_edge, Face(), [0], [0])
    with pytest.raises(OverlappingColorSets):
        colored_walk(three_color_edge, Face({0: 1}), [0], [1])


def test_link_walk_on_uniform_square(uniform_square):
    M = link_walk(uniform_square)
    assert np.all(np.diag(M.matrix) == 0.)
    ev = self_adjoint_spectrum(M)
    np.testing.assert_allclose(ev, [1., 0., 0., -1.], atol=1e-12)
    with pytest.raises(FaceTooLarge):
        link_walk(uniform_square, Face({0: 0}))


def test_down_operator_extremes(uniform_square):
    D2 = down_operator(uniform_square, 2)
    np.testing.assert_allclose(D2.matrix, np.eye(4))
    D0 = down_operator(uniform_square, 0)
    np.testing.assert_allclose(D0.matrix, np.ones((4, 1)))
    D1 = down_operator(uniform_square, 1)
    np.testing.assert_allclose(D1.matrix.sum(axis=1), 1.)
    assert set(np.unique(D1.matrix)) == {0., 0.5}
    with pytest.raises(LevelOutOfRange):
        down_operator(uniform_square, 3)
    with pytest.raises(LevelOutOfRange):
        down_up_walk_level(uniform_square, 0)


@given(partite_complexes())
def test_update_operators_are_projections(X):
    pi = X.pi
    for i in range(X.n):
        Q = update_operator(X, i)
        np.testing.assert_allclose(pi @ Q.matrix, pi, atol=TOL)
        np.testing.assert_allclose(Q.matrix @ Q.matrix, Q.matrix, atol=TOL)
        np.testing.assert_allclose(weighted_adjoint(Q).matrix, Q.matrix, atol=TOL)


@given(partite_complexes())
def test_sweep_adjoint_is_reversed_sweep(X):
    for order in itertools.permutations(range(X.n)):
        P = sequential_sweep(X, order)
        R = sequential_sweep(X, order[::-1])
        np.testing.assert_allclose(weighted_adjoint(P).matrix, R.matrix, atol=1e-12)
        np.testing.assert_allclose(singular_values(P)[0], 1., atol=TOL)


@given(partite_complexes(min_n=2))
def test_glauber_is_top_down_up_walk(X):
    np.testing.assert_allclose(down_up_walk_level(X, X.n - 1).matrix, down_up_walk(X).matrix, atol=TOL)
    D = down_operator(X, 1)
    np.testing.assert_allclose(X.pi @ D.matrix, level_distribution(X, 1).mass, atol=TOL)


@given(partite_complexes(min_n=2))
def test_colored_walk_adjoint(X):
    for I, J in [((0,), (1,)), ((1,), (0,))]:
        C = colored_walk(X, Face(), I, J)
        np.testing.assert_allclose(weighted_adjoint(C).matrix, colored_walk(X, Face(), J, I).matrix, atol=1e-12)


@given(partite_complexes(min_n=2))
def test_link_walk_structure(X):
    for level in range(X.n - 1):
        for face in X.faces(level):
            k = X.n - level
            M = link_walk(X, face)
            assert np.all(np.diag(M.matrix) == 0.)
            np.testing.assert_allclose(weighted_adjoint(M).matrix, M.matrix, atol=TOL)
            for i in range(X.n):
                if i in face.type_set:
                    continue
                phi = phi_vector(X, face, i)
                np.testing.assert_allclose(M.matrix @ phi, -phi / (k - 1), atol=TOL)


@given(partite_complexes(min_n=2, connected_only=True))
def test_link_walk_bottom_eigenspace_is_spanned_by_phi(X):
    for level in range(X.n - 1):
        for face in X.faces(level):
            k = X.n - level
            bottom = -1. / (k - 1)
            ev = self_adjoint_spectrum(link_walk(X, face))
            phis = np.array([phi_vector(X, face, i) for i in range(X.n) if i not in face.type_set])
            at_bottom = np.abs(ev - bottom) <= 1e-9
            assert np.all(ev >= bottom - 1e-9)
            assert np.sum(at_bottom) == np.linalg.matrix_rank(phis) == k - 1
            assert np.all(np.abs(ev[(ev < 0) & ~at_bottom]) < -bottom)


@given(partite_complexes(min_n=2))
def test_influence_is_compressed_link_walk(X):
    for level in range(X.n - 1):
        for face in X.faces(level):
            k = X.n - level
            M = link_walk(X, face).matrix
            T = trivial_projector(X, face).matrix
            inf = influence_matrix(X, face)
            eye = np.eye(M.shape[0])
            np.testing.assert_allclose((k - 1) * (eye - T) @ M @ (eye - T), inf.matrix, atol=TOL)
            if M.shape[0] == k:
                # every side of the link is a single vertex
                continue
            lam_max = self_adjoint_spectrum(inf)[0]
            lam_2 = self_adjoint_spectrum(link_walk(X, face))[1]
            np.testing.assert_allclose(lam_max / (k - 1), lam_2, atol=1e-9)


def test_influence_of_product_vanishes(biased_product):
    np.testing.assert_allclose(influence_matrix(biased_product).matrix, 0., atol=TOL)


@pytest.mark.parametrize('k', [2, 3, 4])
@pytest.mark.parametrize('n', [2, 3])
def test_appendix_influence(k, n):
    X = single_edge_complex(k, n)
    assert abs(self_adjoint_spectrum(influence_matrix(X))[0] - 1. / k) <= TOL


@given(partite_complexes(min_n=2).flatmap(lambda X: facet_measures(X).map(lambda w: (X, w))))
def test_sweep_marginal_identities(data):
    X, w = data
    mu = Distribution(X.facet_labels, w)
    Q0 = update_operator(X, 0)
    after_sweep = tuple_marginal(push_forward(mu, sequential_sweep(X, range(X.n))), [0])
    after_update = tuple_marginal(push_forward(mu, Q0), [0])
    assert after_sweep.allclose(after_update, atol=TOL)

    rest = list(range(1, X.n))
    C = colored_walk(X, Face(), rest, [0])
    mu_rest = tuple_marginal(mu, rest)
    via_colored = mu_rest.aligned(C.domain_labels) @ C.matrix
    np.testing.assert_allclose(after_update.aligned(C.codomain_labels), via_colored, atol=TOL)
