import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from complexes.distribution import Distribution
from complexes.errors import DomainMismatch, SupportViolation
from complexes.measures import chain_rule_decomposition, kl_array, kl_divergence, push_forward
from walks.operator import MarkovOperator
from walks.walks import sequential_sweep

positive_vectors = arrays(np.float64, (4,), elements=st.floats(min_value=0.01, max_value=1.0))


def test_point_mass_against_fair_coin():
    mu = Distribution.point_mass(0, [0, 1])
    nu = Distribution.uniform([0, 1])
    assert abs(kl_divergence(mu, nu) - math.log(2.)) <= 1e-15


def test_support_violation():
    mu = Distribution.uniform([0, 1])
    nu = Distribution.point_mass(0)
    with pytest.raises(SupportViolation):
        kl_divergence(mu, nu)


@given(positive_vectors, positive_vectors)
def test_divergence_is_nonnegative(p, q):
    p, q = p / p.sum(), q / q.sum()
    assert kl_array(p, q) >= -1e-15
    assert abs(kl_array(p, p)) <= 1e-15


@given(positive_vectors, positive_vectors)
def test_chain_rule(p, q):
    labels = [(0, 0), (0, 1), (1, 0), (1, 1)]
    mu = Distribution.normalized(labels, p)
    nu = Distribution.normalized(labels, q)
    for S in ([0], [1], [0, 1]):
        head, tail = chain_rule_decomposition(mu, nu, S)
        assert abs(head + tail - kl_divergence(mu, nu)) <= 1e-12


@given(positive_vectors)
def test_product_sweep_forgets_the_start(p):
    from complexes.generators import product_complex
    X = product_complex([[0.3, 0.7], [0.6, 0.4]])
    mu = Distribution.normalized(X.facet_labels, p)
    P = sequential_sweep(X, (1, 0))
    out = push_forward(mu, P)
    assert kl_divergence(out, X.distribution) <= kl_divergence(mu, X.distribution) + 1e-12
    assert kl_divergence(out, X.distribution) <= 1e-12


@given(positive_vectors, positive_vectors,
       arrays(np.float64, (4, 3), elements=st.floats(min_value=0.0, max_value=1.0)))
def test_data_processing(p, q, weights):
    weights = weights + 1e-3
    matrix = weights / weights.sum(axis=1, keepdims=True)
    nu = Distribution.normalized(list(range(4)), q)
    mu = Distribution.normalized(list(range(4)), p)
    M = MarkovOperator(matrix, nu, Distribution.normalized(['a', 'b', 'c'], nu.mass @ matrix))
    before = kl_divergence(mu, nu)
    after = kl_divergence(push_forward(mu, M), push_forward(nu, M))
    assert after <= before + 1e-12
    assert abs(kl_array(mu.mass @ matrix, nu.mass @ matrix) - after) <= 1e-10


def test_push_forward_domain(uniform_square):
    P = sequential_sweep(uniform_square)
    with pytest.raises(DomainMismatch):
        push_forward(Distribution.point_mass((5, 5)), P)
