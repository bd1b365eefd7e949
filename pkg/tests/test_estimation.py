import math

import numpy as np
import pytest

from smoothcert.classifiers import HalfspaceOracle, LinearModel, halfspace_points, halfspace_smoothed_prob
from smoothcert.errors import InvalidParameterError
from smoothcert.estimation import (
    ClassCounts, ClassifierEvaluationError, ConfidenceSpec, clopper_pearson, sample_counts,
    top2_bounds,
)
from smoothcert.mechanisms import MechanismKind, NoiseMechanism
from oracles import clopper_pearson_bisect


def constant_model(cls, k=5, d=4):
    b = np.zeros(k)
    b[cls] = 1.0
    return LinearModel(np.zeros((k, d)), b)


def test_clopper_pearson_edges():
    assert clopper_pearson(0, 10, 0.95, "lower") == 0.0
    assert clopper_pearson(10, 10, 0.95, "upper") == 1.0
    assert clopper_pearson(100, 100, 0.999, "lower") == pytest.approx(0.001 ** (1 / 100), rel=1e-12)
    assert clopper_pearson(0, 100, 0.999, "upper") == pytest.approx(1 - 0.001 ** (1 / 100), rel=1e-12)
    with pytest.raises(InvalidParameterError):
        clopper_pearson(5, 4, 0.9, "lower")
    with pytest.raises(InvalidParameterError):
        clopper_pearson(1, 4, 0.9, "middle")


@pytest.mark.parametrize("k,n", [(1, 7), (13, 40), (499, 1000), (3, 3), (0, 5)])
@pytest.mark.parametrize("side", ["lower", "upper"])
def test_clopper_pearson_vs_binomial_tail(k, n, side):
    assert clopper_pearson(k, n, 0.99, side) == pytest.approx(
        clopper_pearson_bisect(k, n, 0.99, side), abs=1e-10
    )


def test_clopper_pearson_monotone_exhaustive():
    for n in range(1, 51):
        lows = [clopper_pearson(k, n, 0.99, "lower") for k in range(n + 1)]
        ups = [clopper_pearson(k, n, 0.99, "upper") for k in range(n + 1)]
        assert all(b >= a for a, b in zip(lows, lows[1:]))
        assert all(b >= a for a, b in zip(ups, ups[1:]))
        for k in range(n + 1):
            assert lows[k] <= k / n <= ups[k]
            assert clopper_pearson(k, n, 0.999, "lower") <= lows[k]
            assert clopper_pearson(k, n, 0.999, "upper") >= ups[k]


def test_top2_bounds_all_in_one_class():
    pp = top2_bounds(ClassCounts([0, 100, 0], 100), ConfidenceSpec(0.998))
    assert pp.p1 == pytest.approx(0.001 ** (1 / 100), rel=1e-12)
    assert pp.p1 == pytest.approx(0.9333, abs=1e-4)
    assert pp.p2 == pytest.approx(1 - 0.001 ** (1 / 100), rel=1e-12)


def test_top2_bounds_tie_forces_overlap():
    for level in (0.5, 0.9, 0.999):
        pp = top2_bounds(ClassCounts([50, 50], 100), ConfidenceSpec(level))
        assert pp.p1 < 0.5 < pp.p2
        assert not pp.certifiable


def test_top2_tie_breaking():
    assert ClassCounts([3, 5, 5, 1], 14).top2() == (1, 2)
    assert ClassCounts([7], 7).top2() == (0, None)


def test_top2_bounds_monotone_in_n():
    for props in ([6, 3, 1], [5, 5, 0], [9, 1, 0], [4, 3, 3]):
        prev = None
        for scale in (10, 100, 1000):
            counts = np.array(props) * scale
            pp = top2_bounds(ClassCounts(counts, int(counts.sum())))
            if prev is not None:
                assert pp.p1 >= prev.p1 and pp.p2 <= prev.p2
            prev = pp


def test_class_counts_validation():
    with pytest.raises(InvalidParameterError):
        ClassCounts([1, 2], 4)
    with pytest.raises(InvalidParameterError):
        ClassCounts([-1, 2], 1)
    with pytest.raises(InvalidParameterError):
        ConfidenceSpec(1.0)


def test_sample_counts_constant_classifier():
    mech = NoiseMechanism(MechanismKind.GAUSSIAN, 1.0, 4)
    c = sample_counts(constant_model(3), np.zeros(4), mech, 500, 1)
    assert c.counts.tolist() == [0, 0, 0, 500, 0]


@pytest.mark.parametrize("kind", list(MechanismKind))
def test_sample_counts_reproducible(kind):
    model = HalfspaceOracle(np.array([1.0, -2.0, 0.5]), 0.1)
    mech = NoiseMechanism(kind, 0.8, 3)
    a = sample_counts(model, np.array([0.2, 0.1, 0.0]), mech, 700, 42)
    b = sample_counts(model, np.array([0.2, 0.1, 0.0]), mech, 700, 42)
    assert np.array_equal(a.counts, b.counts)


def test_sample_counts_zero_margin_halfspace():
    model = HalfspaceOracle(np.array([0.3, 0.4, 1.0, -2.0]), 0.0)
    n = 20_000
    for sigma in (0.1, 3.0):
        c = sample_counts(model, np.zeros(4), NoiseMechanism(MechanismKind.GAUSSIAN, sigma, 4), n, 5)
        assert abs(c.counts[1] / n - 0.5) < 5 / math.sqrt(n)


@pytest.mark.parametrize("dist,sigma", [(0.5, 1.0), (1.0, 1.0), (-0.3, 0.5), (2.0, 0.8)])
def test_sample_counts_halfspace_probability(dist, sigma):
    model = HalfspaceOracle(np.array([2.0, -1.0, 0.5, 0.0, 1.0]), 0.4)
    x = halfspace_points(model, [dist], seed=3)[0]
    p = halfspace_smoothed_prob(model.w, model.b, x, sigma)
    n = 20_000
    c = sample_counts(model, x, NoiseMechanism(MechanismKind.GAUSSIAN, sigma, 5), n, 17)
    assert abs(c.counts[1] / n - p) <= 5 * math.sqrt(p * (1 - p) / n)


def test_sample_counts_dimension_mismatch():
    mech = NoiseMechanism(MechanismKind.GAUSSIAN, 1.0, 4)
    with pytest.raises(InvalidParameterError):
        sample_counts(constant_model(1, d=4), np.zeros(3), mech, 10, 0)
    with pytest.raises(InvalidParameterError):
        sample_counts(constant_model(1, d=4), np.zeros(4), mech, 0, 0)


def test_sample_counts_reports_failing_draw():
    class Exploding(HalfspaceOracle):
        def scores(self, X):
            if len(X) == 1 and X[0, 0] > 0.5:
                raise RuntimeError("boom")
            if np.any(X[:, 0] > 0.5):
                raise RuntimeError("boom")
            return super().scores(X)

    model = Exploding(np.array([1.0, 1.0]), 0.0)
    mech = NoiseMechanism(MechanismKind.GAUSSIAN, 1.0, 2)
    with pytest.raises(ClassifierEvaluationError) as info:
        sample_counts(model, np.zeros(2), mech, 100, 0)
    from smoothcert.mechanisms import draw_noise
    z = draw_noise(mech, 100, 0)
    assert info.value.draw_index == int(np.argmax(z[:, 0] > 0.5))
