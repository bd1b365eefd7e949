import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smoothcert.divergence import (
    PROB_FLOOR, dinf_to_renyi, dmr_to_pixeldp, mr_gaussian, mr_over_grid, rdp_to_dp_epsilon,
    renyi_empirical, renyi_gaussian,
)
from smoothcert.errors import DivergenceUndefinedError, InvalidParameterError
from oracles import pixeldp_min_golden, renyi_discrete_direct, renyi_gaussian_quadrature


def test_renyi_gaussian_values():
    assert renyi_gaussian(2.0, 1.0, 1.0) == 1.0
    for alpha in (1.01, 2.0, 50.0):
        assert renyi_gaussian(alpha, 0.0, 0.3) == 0.0
    # linear in alpha, quadratic in distance
    assert renyi_gaussian(6.0, 0.4, 0.7) == pytest.approx(3 * renyi_gaussian(2.0, 0.4, 0.7))
    assert renyi_gaussian(2.0, 1.2, 0.7) == pytest.approx(9 * renyi_gaussian(2.0, 0.4, 0.7))
    with pytest.raises(InvalidParameterError):
        renyi_gaussian(1.0, 1.0, 1.0)


@pytest.mark.parametrize("alpha,dist,sigma", [(2.0, 1.0, 1.0), (1.5, 0.5, 0.8), (4.0, 0.3, 1.2)])
def test_renyi_gaussian_vs_quadrature(alpha, dist, sigma):
    assert renyi_gaussian(alpha, dist, sigma) == pytest.approx(
        renyi_gaussian_quadrature(alpha, dist, sigma), abs=1e-3
    )


def test_renyi_gaussian_vs_discretised():
    # two 1-D Gaussians binned on a fine grid; merging bins can only lower the value
    sigma, mu, alpha = 1.0, 0.6, 2.0
    x = np.linspace(-8, 8, 20001)
    p = np.exp(-((x - mu) ** 2) / (2 * sigma**2))
    q = np.exp(-(x**2) / (2 * sigma**2))
    assert renyi_empirical(p, q, alpha) == pytest.approx(renyi_gaussian(alpha, mu, sigma), abs=1e-3)


def test_mr_gaussian():
    assert mr_gaussian(0.0, 1.0) == 0.0
    assert mr_gaussian(0.3, 0.3) == pytest.approx(0.5)
    value, _ = mr_over_grid(lambda a: renyi_gaussian(a, 0.7, 1.3), 1 + np.logspace(-6, 6, 500))
    assert value == pytest.approx(mr_gaussian(0.7, 1.3), rel=1e-12)


def test_dmr_to_pixeldp_values():
    assert dmr_to_pixeldp(1.0, math.exp(-1)) == pytest.approx(3.0)
    assert dmr_to_pixeldp(0.0, 0.5) == 0.0
    with pytest.raises(InvalidParameterError):
        dmr_to_pixeldp(1.0, 1.0)
    with pytest.raises(InvalidParameterError):
        dmr_to_pixeldp(-0.1, 0.5)


@settings(max_examples=50, deadline=None)
@given(eps=st.floats(1e-3, 5.0), delta=st.floats(1e-8, 0.9))
def test_dmr_to_pixeldp_is_optimal_conversion(eps, delta):
    value = dmr_to_pixeldp(eps, delta)
    assert value >= eps
    assert value == pytest.approx(pixeldp_min_golden(eps, delta), abs=1e-6)
    # no order does better than the closed form
    for alpha in (1.1, 2.0, 10.0):
        assert rdp_to_dp_epsilon(alpha, eps, delta) >= value - 1e-12


def test_dinf_to_renyi():
    assert dinf_to_renyi(0.0, 3.0) == 0.0
    r, sigma = 0.2, 0.5
    for alpha in (1.5, 4.0):
        assert dinf_to_renyi(r / sigma, alpha) == pytest.approx(alpha * r**2 / (2 * sigma**2))
    grid = np.linspace(0, 3, 13)
    alphas = np.linspace(1.1, 9, 9)
    vals = np.array([[dinf_to_renyi(e, a) for a in alphas] for e in grid])
    assert np.all(np.diff(vals, axis=0) >= 0) and np.all(np.diff(vals, axis=1) >= 0)


def test_renyi_empirical_examples():
    assert renyi_empirical([0.5, 0.5], [0.5, 0.5], 2.0) == 0.0
    assert renyi_empirical([1.0, 0.0], [0.5, 0.5], 2.0) == pytest.approx(math.log(2))
    with pytest.raises(DivergenceUndefinedError):
        renyi_empirical([0.5, 0.5], [1.0, 0.0], 2.0)
    floored = renyi_empirical([0.5, 0.5], [1.0, 0.0], 2.0, floor=PROB_FLOOR)
    assert math.isfinite(floored) and floored > 0


def test_renyi_empirical_extreme_orders():
    p = [1 - 1e-9, 1e-9]
    q = [1e-9, 1 - 1e-9]
    value = renyi_empirical(p, q, 1e6)
    assert math.isfinite(value)
    assert value == pytest.approx(math.log((1 - 1e-9) / 1e-9), rel=1e-4)
    assert renyi_empirical(p, q, math.inf) == pytest.approx(math.log((1 - 1e-9) / 1e-9))


dists = st.lists(st.floats(0.01, 1.0), min_size=2, max_size=6)


@settings(max_examples=100, deadline=None)
@given(p=dists, q=dists, alpha=st.floats(1.05, 20.0))
def test_renyi_empirical_properties(p, q, alpha):
    k = min(len(p), len(q))
    p, q = np.array(p[:k]), np.array(q[:k])
    p, q = p / p.sum(), q / q.sum()
    value = renyi_empirical(p, q, alpha)
    assert value >= 0
    assert value == pytest.approx(renyi_discrete_direct(p, q, alpha), rel=1e-9, abs=1e-12)
    # nondecreasing in the order
    assert renyi_empirical(p, q, alpha * 1.5) >= value - 1e-12
    # post-processing: merging the first two support points
    pm = np.concatenate([[p[0] + p[1]], p[2:]])
    qm = np.concatenate([[q[0] + q[1]], q[2:]])
    assert renyi_empirical(pm, qm, alpha) <= value + 1e-12


def test_renyi_empirical_identity_only_when_equal():
    assert renyi_empirical([0.2, 0.8], [0.2, 0.8], 3.0) == pytest.approx(0.0, abs=1e-15)
    assert renyi_empirical([0.2, 0.8], [0.21, 0.79], 3.0) > 0
