import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clf2st.classifier import predict, train_lda
from clf2st.estimators import error_loo, error_resub, error_sample_split
from clf2st.exceptions import DomainError, InsufficientDataError
from clf2st.model import ProblemSpec, SeedSpec, TwoSampleData, sample, spec_for_experiment
from clf2st.numerics import SpdMatrix

DENSE = SpdMatrix([[2.0, 0.5, 0.1], [0.5, 1.0, 0.3], [0.1, 0.3, 0.7]])


def brute_loo(data, sigma):
    c1 = sum(
        predict(train_lda(np.delete(data.x, i, axis=0), data.y, sigma), data.x[i]) == 1
        for i in range(data.n)
    )
    c2 = sum(
        predict(train_lda(data.x, np.delete(data.y, i, axis=0), sigma), data.y[i]) == 0
        for i in range(data.n)
    )
    return c1, c2


def test_split_well_separated():
    spec = spec_for_experiment(2, 40, 20.0)
    for r in range(20):
        est = error_sample_split(sample(spec, SeedSpec(1, r)), spec.sigma)
        assert est.e_hat == 0.0
        assert est.eval_count_per_class == 20
        assert est.scheme == "split"


def test_split_granularity_n4():
    spec = spec_for_experiment(3, 4, 0.0)
    seen = set()
    for r in range(200):
        est = error_sample_split(sample(spec, SeedSpec(2, r)), spec.sigma)
        assert est.e_hat in {0.0, 0.25, 0.5, 0.75, 1.0}
        seen.add(est.e_hat)
    assert len(seen) >= 3


def test_split_matches_manual_computation():
    spec = ProblemSpec(3, 10, np.zeros(3), np.array([0.5, -0.2, 0.1]), DENSE)
    data = sample(spec, SeedSpec(3))
    clf = train_lda(data.x[:5], data.y[:5], DENSE)
    c1 = int(np.sum(predict(clf, data.x[5:]) == 1))
    c2 = int(np.sum(predict(clf, data.y[5:]) == 0))
    est = error_sample_split(data, DENSE)
    assert (est.count1, est.count2) == (c1, c2)
    assert est.e1_hat == c1 / 5 and est.e2_hat == c2 / 5


def test_split_rejects_small_or_odd():
    with pytest.raises(InsufficientDataError):
        error_sample_split(TwoSampleData(np.zeros((2, 1)), np.ones((2, 1))), SpdMatrix.identity(1))
    with pytest.raises(DomainError):
        error_sample_split(TwoSampleData(np.zeros((5, 1)), np.ones((5, 1))), SpdMatrix.identity(1))
    with pytest.raises(DomainError):
        error_sample_split(TwoSampleData(np.zeros((4, 2)), np.ones((4, 2))), SpdMatrix.identity(1))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_split_permutation_invariance(seed):
    rng = np.random.default_rng(seed)
    spec = ProblemSpec(3, 12, np.zeros(3), np.array([0.4, 0.0, -0.4]), DENSE)
    data = sample(spec, SeedSpec(seed))
    base = error_sample_split(data, DENSE)
    x, y = data.x.copy(), data.y.copy()
    x[6:] = x[6:][rng.permutation(6)]
    y[6:] = y[6:][rng.permutation(6)]
    x[:6] = x[:6][rng.permutation(6)]
    y[:6] = y[:6][rng.permutation(6)]
    moved = error_sample_split(TwoSampleData(x, y), DENSE)
    assert (moved.count1, moved.count2) == (base.count1, base.count2)


def test_estimates_are_exact_rationals():
    data = sample(spec_for_experiment(4, 14, 0.5), SeedSpec(4))
    sigma = SpdMatrix.identity(4)
    for est in (error_sample_split(data, sigma), error_loo(data, sigma), error_resub(data, sigma)):
        k = est.eval_count_per_class
        assert Fraction(est.e1_hat).limit_denominator(k) * k == est.count1
        assert est.exact == Fraction(est.count1 + est.count2, 2 * k)
        assert est.e_hat == (est.e1_hat + est.e2_hat) / 2
        assert isinstance(est.count1, int) and isinstance(est.count2, int)


def test_loo_hand_computed_n2_d1():
    # x = {0, 1}, y = {3, 7}, Sigma = 1
    # drop x0: m0 = 1, m1 = 5, w = 4, mid = 3 -> score(0) = -12 -> label 0 (correct)
    # drop x1: m0 = 0, m1 = 5, w = 5, mid = 2.5 -> score(1) = -7.5 -> correct
    # drop y0: m0 = .5, m1 = 7, w = 6.5, mid = 3.75 -> score(3) < 0 -> label 0 (error)
    # drop y1: m0 = .5, m1 = 3, w = 2.5, mid = 1.75 -> score(7) > 0 -> correct
    data = TwoSampleData(np.array([[0.0], [1.0]]), np.array([[3.0], [7.0]]))
    est = error_loo(data, SpdMatrix.identity(1))
    assert (est.count1, est.count2) == (0, 1)
    assert est.e_hat == 0.25
    assert brute_loo(data, SpdMatrix.identity(1)) == (0, 1)


@pytest.mark.parametrize("sigma", [SpdMatrix.identity(3), SpdMatrix.diagonal([0.5, 2, 3]), DENSE])
@pytest.mark.parametrize("psi", [0.0, 0.7, 2.0])
def test_loo_matches_brute_force(sigma, psi):
    spec = ProblemSpec(3, 15, np.zeros(3), -psi * np.array([0.6, 0.8, 0.0]), sigma)
    for r in range(5):
        data = sample(spec, SeedSpec(5, r))
        est = error_loo(data, sigma)
        assert (est.count1, est.count2) == brute_loo(data, sigma)


def test_loo_well_separated_and_small_n():
    spec = spec_for_experiment(2, 40, 20.0)
    assert error_loo(sample(spec, SeedSpec(6)), spec.sigma).e_hat == 0.0
    with pytest.raises(InsufficientDataError):
        error_loo(TwoSampleData(np.zeros((1, 2)), np.ones((1, 2))), spec.sigma)


def test_resub_small_cases():
    sigma = SpdMatrix.identity(2)
    est = error_resub(TwoSampleData(np.array([[0.0, 1.0]]), np.array([[2.0, 0.0]])), sigma)
    assert est.e_hat == 0.0
    x = np.array([[0.0, 1.0], [2.0, 3.0]])
    est = error_resub(TwoSampleData(x, x.copy()), sigma)
    assert (est.e1_hat, est.e2_hat, est.e_hat) == (0.0, 1.0, 0.5)


@pytest.mark.slow
def test_null_expectation_loo_half_resub_optimistic():
    spec = spec_for_experiment(10, 20, 0.0)
    R = 1000
    loo = np.array([error_loo(sample(spec, SeedSpec(7, r)), spec.sigma).e_hat for r in range(R)])
    res = np.array([error_resub(sample(spec, SeedSpec(7, r)), spec.sigma).e_hat for r in range(R)])
    assert abs(loo.mean() - 0.5) <= 3 * loo.std(ddof=1) / math.sqrt(R)
    # training on the evaluation points biases resubstitution below 1/2 even under the null
    assert 0.5 - res.mean() > 3 * res.std(ddof=1) / math.sqrt(R)


@pytest.mark.slow
def test_resubstitution_is_optimistic():
    spec = spec_for_experiment(100, 100, 1.0)
    R = 2000
    split, resub = [], []
    for r in range(R):
        data = sample(spec, SeedSpec(8, r))
        split.append(error_sample_split(data, spec.sigma).e_hat)
        resub.append(error_resub(data, spec.sigma).e_hat)
    split, resub = np.array(split), np.array(resub)
    se = math.sqrt(split.var(ddof=1) / R + resub.var(ddof=1) / R)
    assert split.mean() - resub.mean() > 3 * se
