import numpy as np
import pytest
import torch
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from complexes.complex import Face
from complexes.errors import DegenerateDivergence, InstanceTooLarge
from complexes.generators import single_edge_complex
from spectra.entropy import (default_grid_step, entropy_contraction_estimate, estimate_ratio_sup,
                             eta_param_estimate, local_ratio_limit)
from spectra.optimizers import SimplexAscent, divergence_ratio, grid_size, project_simplex, simplex_grid
from walks.walks import colored_walk, sequential_sweep


def test_simplex_grid():
    grid = simplex_grid(3, 2)
    assert grid.shape == (grid_size(3, 2), 3) == (6, 3)
    np.testing.assert_allclose(grid.sum(axis=1), 1.)
    assert len({tuple(r) for r in grid}) == 6
    with pytest.raises(InstanceTooLarge):
        simplex_grid(20, 100)


@given(arrays(np.float64, (5, 4), elements=st.floats(min_value=-3., max_value=3.)))
def test_projection_lands_on_simplex(v):
    p = project_simplex(torch.as_tensor(v)).numpy()
    assert np.all(p >= 0.)
    np.testing.assert_allclose(p.sum(axis=1), 1., atol=1e-12)


def test_ratio_at_stationary_point_is_degenerate():
    p = np.array([0.25, 0.75])
    with pytest.raises(DegenerateDivergence):
        divergence_ratio(p, np.eye(2), p, p)


def test_rank_one_channel_contracts_everything():
    p = np.array([0.2, 0.3, 0.5])
    C = np.tile(p, (3, 1))
    est = estimate_ratio_sup(C, p, p, budget=2)
    assert est.kappa <= 1e-9
    assert est.exact


def test_identity_channel_contracts_nothing():
    p = np.array([0.2, 0.3, 0.5])
    est = estimate_ratio_sup(np.eye(3), p, p, budget=2)
    assert abs(est.kappa - 1.) <= 1e-9


def test_single_state_is_trivial():
    est = estimate_ratio_sup(np.ones((1, 1)), np.ones(1), np.ones(1))
    assert est.method == 'trivial' and est.kappa == 0.


def test_default_grid_steps():
    assert default_grid_step(4) == 0.01
    assert default_grid_step(8) == 0.05
    assert default_grid_step(9) is None


@pytest.mark.parametrize('k', [2, 3])
def test_edge_eta_is_one_sided(k):
    X = single_edge_complex(k, 2)
    C = colored_walk(X, Face(), [1], [0])
    local = local_ratio_limit(C.matrix, C.domain_measure.mass, C.codomain_measure.mass)
    assert abs(local - 1. / k ** 2) <= 1e-10
    eta = eta_param_estimate(X, [1], [0], budget=4)
    assert eta.exact
    assert 0. <= eta.eta <= 1. - 1. / k ** 2 + 1e-12
    assert eta.to_dict()['direction'] == 'kappa_lower_bound'


def test_ascent_stays_below_data_processing_bound(three_color_edge):
    P = sequential_sweep(three_color_edge)
    pi = three_color_edge.pi
    val, mu = SimplexAscent(steps=50).maximize(P.matrix, pi, pi, restarts=4, seed=3)
    assert 0. <= val <= 1. + 1e-9
    assert abs(mu.sum() - 1.) <= 1e-9


def test_sweep_contraction_estimate_is_seeded(three_color_edge):
    P = sequential_sweep(three_color_edge)
    a = entropy_contraction_estimate(P, budget=2, seed=5)
    b = entropy_contraction_estimate(P, budget=2, seed=5)
    assert a.to_dict() == b.to_dict()
    assert 0. <= a.ec <= 1.
