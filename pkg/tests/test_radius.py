import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smoothcert.errors import DegenerateInputError, InvalidParameterError
from smoothcert.radius import (
    ProbabilityPair, bound_B, bound_B_limit_alpha1, certified_radius, radius_l2_cohen,
    radius_l2_gaussian, radius_linf_exponential, radius_linf_from_l2, radius_lp_gaussian,
    sup_bound,
)
from oracles import dense_grid_sup

# Frozen from a 40-digit mpmath maximisation of the bound (root of dB/du).
EPS_STAR = {
    (0.8, 0.2): 0.22728808502435353,
    (0.9, 0.1): 0.5324393122273162,
    (0.6, 0.4): 0.020445714315616121,
}


def test_probability_pair_validation():
    with pytest.raises(InvalidParameterError):
        ProbabilityPair(1.2, 0.1)
    with pytest.raises(InvalidParameterError):
        ProbabilityPair(0.5, -0.1)
    assert ProbabilityPair(0.7, 0.4).certifiable  # p1 + p2 > 1 is allowed


def test_bound_B_examples():
    assert bound_B(2.0, ProbabilityPair(0.8, 0.2)) == pytest.approx(0.22314355131420976, rel=1e-14)
    assert bound_B(7.0, (0.5, 0.5)) == pytest.approx(0.0, abs=1e-15)
    pp = ProbabilityPair(0.8, 0.2)
    assert bound_B(1 + 1e-6, pp) == pytest.approx(bound_B_limit_alpha1(pp), rel=1e-6)


def test_bound_B_rejects_zero_runner_up():
    with pytest.raises(DegenerateInputError):
        bound_B(2.0, ProbabilityPair(0.9, 0.0))
    with pytest.raises(InvalidParameterError):
        bound_B(1.0, ProbabilityPair(0.9, 0.1))


@pytest.mark.parametrize("pair", sorted(EPS_STAR))
def test_sup_bound_frozen_values(pair):
    res = sup_bound(ProbabilityPair(*pair))
    assert res.converged
    assert res.eps_star == pytest.approx(EPS_STAR[pair], rel=1e-9)
    oracle, _ = dense_grid_sup(*pair)
    assert res.eps_star == pytest.approx(oracle, rel=1e-5)


def test_sup_bound_monotone_in_separation():
    e = [sup_bound(ProbabilityPair(a, b)).eps_star for a, b in [(0.9, 0.1), (0.8, 0.2), (0.6, 0.4)]]
    assert e[0] > e[1] > e[2]


def test_sup_bound_equal_probabilities():
    res = sup_bound(ProbabilityPair(0.4, 0.4))
    assert res.eps_star == 0.0 and not res.converged


def test_sup_bound_dominates_edge_probes():
    for p1 in np.linspace(0.05, 0.99, 12):
        for p2 in np.linspace(0.001, p1 - 0.01, 8):
            pp = ProbabilityPair(p1, p2)
            eps = sup_bound(pp).eps_star
            for alpha in (1 + 1e-6, 1e6):
                assert bound_B(alpha, pp) <= eps + 1e-6


def test_radius_l2_gaussian():
    pp = ProbabilityPair(0.8, 0.2)
    assert radius_l2_gaussian(1.0, pp) == pytest.approx(math.sqrt(2 * EPS_STAR[(0.8, 0.2)]), rel=1e-9)
    assert radius_l2_gaussian(2.0, pp) == pytest.approx(2 * radius_l2_gaussian(1.0, pp), rel=1e-15)
    assert radius_l2_gaussian(1.0, ProbabilityPair(0.5, 0.5)) == 0.0
    assert radius_l2_gaussian(1.0, ProbabilityPair(0.3, 0.5)) == 0.0


def test_zero_runner_up_is_floored():
    assert radius_l2_gaussian(1.0, ProbabilityPair(0.99, 0.0)) == pytest.approx(
        radius_l2_gaussian(1.0, ProbabilityPair(0.99, 1e-9))
    )


def test_radius_linf_from_l2():
    assert radius_linf_from_l2(0.34, 1) == 0.34
    assert radius_linf_from_l2(0.34, 3072) == pytest.approx(6.134e-3, rel=1e-3)
    assert radius_linf_from_l2(0.29, 150528) == pytest.approx(7.475e-4, rel=1e-3)


def test_radius_linf_exponential():
    pp = ProbabilityPair(0.8, 0.2)
    eps = EPS_STAR[(0.8, 0.2)]
    assert radius_linf_exponential(1.0, pp) == pytest.approx(max(eps, math.sqrt(2 * eps)), rel=1e-9)
    assert radius_linf_exponential(1.0, ProbabilityPair(0.5, 0.5)) == 0.0


def test_exponential_crossover_at_two():
    # sigma * eps == sigma * sqrt(2 eps) exactly when eps == 2
    eps, sigma = 2.0, 0.7
    assert sigma * eps == pytest.approx(sigma * math.sqrt(2 * eps), rel=1e-15)
    hi = ProbabilityPair(1 - 1e-9, 1e-9)
    e_hi = sup_bound(hi).eps_star
    assert e_hi > 2
    assert radius_linf_exponential(1.0, hi) == pytest.approx(e_hi)


def test_radius_lp_gaussian():
    assert radius_lp_gaussian(0.8, 100, 2) == 0.8
    assert radius_lp_gaussian(0.8, 100, math.inf) == pytest.approx(radius_linf_from_l2(0.8, 100))
    assert radius_lp_gaussian(1.0, 16, 4) == pytest.approx(0.5, rel=1e-15)
    vals = [radius_lp_gaussian(1.0, 50, p) for p in (2, 3, 4, 8, 16, math.inf)]
    assert all(b <= a for a, b in zip(vals, vals[1:]))
    with pytest.raises(InvalidParameterError):
        radius_lp_gaussian(1.0, 16, 1.5)


def test_radius_l2_cohen():
    pp = ProbabilityPair(0.84134, 0.15866)
    assert radius_l2_cohen(1.0, pp) == pytest.approx(1.0, abs=1e-4)
    assert radius_l2_cohen(2.0, pp) == pytest.approx(2 * radius_l2_cohen(1.0, pp), rel=1e-15)
    assert radius_l2_cohen(1.0, ProbabilityPair(0.3, 0.3)) == 0.0


def test_certified_radius_dispatch():
    pp = ProbabilityPair(0.8, 0.2)
    r, sup = certified_radius("gaussian", 1.0, pp, 2.0, 10)
    assert r == pytest.approx(radius_l2_gaussian(1.0, pp))
    r_inf, _ = certified_radius("gaussian", 1.0, pp, math.inf, 10)
    assert r_inf == pytest.approx(r / math.sqrt(10))
    r_exp, _ = certified_radius("exp-linf", 1.0, pp, math.inf, 10)
    assert r_exp == pytest.approx(radius_linf_exponential(1.0, pp))
    with pytest.raises(InvalidParameterError):
        certified_radius("exp-linf", 1.0, pp, 2.0, 10)


pairs = st.tuples(st.floats(0.01, 0.99), st.floats(0.01, 0.99)).filter(lambda t: t[0] > t[1] + 1e-3)


@settings(max_examples=60, deadline=None)
@given(pair=pairs, bump=st.floats(1e-3, 0.05), sigma=st.floats(0.05, 5.0))
def test_radius_monotone_and_homogeneous(pair, bump, sigma):
    p1, p2 = pair
    base = radius_l2_gaussian(sigma, ProbabilityPair(p1, p2))
    assert radius_l2_gaussian(sigma, ProbabilityPair(min(p1 + bump, 1.0), p2)) >= base - 1e-12
    assert radius_l2_gaussian(sigma, ProbabilityPair(p1, max(p2 - bump, 1e-4))) >= base - 1e-12
    assert radius_l2_gaussian(3 * sigma, ProbabilityPair(p1, p2)) == pytest.approx(3 * base, rel=1e-12)
    assert radius_linf_exponential(sigma, ProbabilityPair(p1, p2)) >= 0


def test_dominated_by_cohen_on_grid():
    grid = np.linspace(0.01, 0.99, 50)
    for p1 in grid:
        for p2 in grid[grid < p1]:
            pp = ProbabilityPair(p1, p2)
            assert radius_l2_gaussian(1.0, pp) <= radius_l2_cohen(1.0, pp) + 1e-9
