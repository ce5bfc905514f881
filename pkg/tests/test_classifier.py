import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from clf2st.classifier import (
    TrainedClassifier, conditional_error, expected_error_raudys, predict, train_lda, train_nb,
)
from clf2st.exceptions import DegenerateVarianceError, DomainError, InsufficientDataError
from clf2st.model import ProblemSpec, SeedSpec, sample, spec_for_experiment
from clf2st.numerics import SpdMatrix, std_normal_cdf

RAUDYS_1_200_200 = 0.38641499634222375  # mpmath, Phi(-1/(2 sqrt 3))


def test_lda_two_points():
    clf = train_lda([[1.0, 0.0]], [[-1.0, 0.0]], SpdMatrix.identity(2))
    assert_array_equal(clf.weight, [-2.0, 0.0])
    assert_array_equal(clf.midpoint, [0.0, 0.0])
    assert predict(clf, [-1.0, 0.3]) == 1
    assert predict(clf, [1.0, 0.3]) == 0
    assert clf.kind == "lda-known-sigma"
    assert clf.train_size_per_class == 1


def test_lda_degenerate_equal_means():
    x = np.array([[0.0, 1.0], [2.0, -1.0]])
    clf = train_lda(x, x[::-1], SpdMatrix.identity(2))
    assert not np.any(clf.weight)
    z = np.random.default_rng(0).standard_normal((20, 2))
    assert np.all(clf.scores(z) == 0)
    assert np.all(predict(clf, z) == 0)


def test_lda_dense_weight():
    x = np.array([[0.0, 0.0]])
    y = np.array([[1.0, 0.0]])
    clf = train_lda(x, y, SpdMatrix([[4.0, 2.0], [2.0, 3.0]]))
    assert_allclose(clf.weight, [3 / 8, -1 / 4], atol=1e-15)
    assert_allclose(np.array([[4.0, 2.0], [2.0, 3.0]]) @ clf.weight, [1.0, 0.0], atol=1e-15)


def test_lda_identity_is_mean_difference():
    data = sample(spec_for_experiment(6, 11, 1.0), SeedSpec(1))
    clf = train_lda(data.x, data.y, SpdMatrix.identity(6))
    assert_array_equal(clf.weight, data.y.mean(0) - data.x.mean(0))


def test_lda_dimension_mismatch():
    with pytest.raises(DomainError):
        train_lda(np.zeros((2, 3)), np.zeros((2, 3)), SpdMatrix.identity(2))
    with pytest.raises(DomainError):
        train_lda(np.zeros((2, 3)), np.zeros((2, 2)), SpdMatrix.identity(3))


def test_nb_unit_variance_data():
    rng = np.random.default_rng(3)
    x = rng.standard_normal((4000, 3))
    y = rng.standard_normal((4000, 3)) + [0.5, 0.0, -0.5]
    clf = train_nb(x, y)
    assert clf.kind == "naive-bayes"
    assert_allclose(clf.weight, y.mean(0) - x.mean(0), atol=0.06)


def test_nb_scales_by_inverse_variance():
    rng = np.random.default_rng(4)
    scale = np.array([1.0, 2.0])  # variances 1 and 4
    base = rng.standard_normal((20000, 2))
    x = base * scale
    y = rng.standard_normal((20000, 2)) * scale + [1.0, 1.0]
    clf = train_nb(x, y)
    diff = y.mean(0) - x.mean(0)
    ratio = (clf.weight[1] / diff[1]) / (clf.weight[0] / diff[0])
    assert abs(ratio - 0.25) < 0.01


def test_nb_pooled_variance_definition():
    x = np.array([[0.0], [2.0]])
    y = np.array([[1.0], [5.0]])
    # pooled: (2 + 8) / (2 + 2 - 2) = 5
    clf = train_nb(x, y)
    assert_allclose(clf.weight, [(3.0 - 1.0) / 5.0])


def test_nb_constant_feature():
    x = np.array([[1.0, 0.0], [2.0, 0.0]])
    y = np.array([[3.0, 0.0], [5.0, 0.0]])
    with pytest.raises(DegenerateVarianceError, match="f1"):
        train_nb(x, y)
    with pytest.raises(InsufficientDataError):
        train_nb(x[:1], y[:1])


def test_predict_tie_and_positive_side():
    clf = TrainedClassifier(np.array([1.0, -2.0]), np.array([0.5, 0.5]), "lda-known-sigma", 3)
    assert predict(clf, clf.midpoint) == 0
    assert predict(clf, clf.midpoint + clf.weight) == 1
    with pytest.raises(DomainError):
        predict(clf, [1.0, 2.0, 3.0])


def test_predict_matches_inner_product():
    rng = np.random.default_rng(5)
    clf = TrainedClassifier(rng.standard_normal(4), rng.standard_normal(4), "lda-known-sigma", 2)
    z = rng.standard_normal((500, 4))
    direct = np.array([1 if sum(clf.weight[j] * (row[j] - clf.midpoint[j]) for j in range(4)) > 0 else 0
                       for row in z])
    assert_array_equal(predict(clf, z), direct)


@given(st.floats(1e-3, 1e3), st.integers(0, 2**32 - 1))
def test_predict_scale_invariant(c, seed):
    rng = np.random.default_rng(seed)
    w, m = rng.standard_normal(3), rng.standard_normal(3)
    z = rng.standard_normal((50, 3))
    a = TrainedClassifier(w, m, "lda-known-sigma", 1)
    b = TrainedClassifier(c * w, m, "lda-known-sigma", 1)
    assert_array_equal(predict(a, z), predict(b, z))


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_conditional_error_null_is_half(seed):
    rng = np.random.default_rng(seed)
    d = 3
    b = rng.standard_normal((d, d))
    mu = rng.standard_normal(d)
    spec = ProblemSpec(d, 2, mu, mu, SpdMatrix(b.T @ b + np.eye(d)))
    clf = TrainedClassifier(rng.standard_normal(d), rng.standard_normal(d) * 3, "lda-known-sigma", 1)
    err = conditional_error(clf, spec)
    assert abs(err.e1 + err.e2 - 1.0) <= 1e-15
    assert abs(err.e - 0.5) <= 1e-15


def test_conditional_error_zero_weight():
    spec = spec_for_experiment(2, 4, 1.0)
    clf = TrainedClassifier(np.zeros(2), np.zeros(2), "lda-known-sigma", 1)
    err = conditional_error(clf, spec)
    assert (err.e1, err.e2, err.e) == (0.0, 1.0, 0.5)


def test_conditional_error_bayes_rule():
    sigma = SpdMatrix([[4.0, 2.0], [2.0, 3.0]])
    spec = ProblemSpec(2, 2, np.array([1.0, -1.0]), np.array([-0.5, 0.5]), sigma)
    psi = math.sqrt(sigma.quad(spec.delta))
    bayes = TrainedClassifier(sigma.solve(spec.mu1 - spec.mu0), (spec.mu0 + spec.mu1) / 2,
                              "lda-known-sigma", 0)
    err = conditional_error(bayes, spec)
    assert abs(err.e1 - std_normal_cdf(-psi / 2)) < 1e-14
    assert abs(err.e2 - std_normal_cdf(-psi / 2)) < 1e-14
    # Monte Carlo cross-check over 1e5 fresh points per class
    big = ProblemSpec(2, 100000, spec.mu0, spec.mu1, sigma)
    data = sample(big, SeedSpec(12))
    f1 = np.mean(predict(bayes, data.x) == 1)
    f2 = np.mean(predict(bayes, data.y) == 0)
    sd = math.sqrt(err.e1 * (1 - err.e1) / 100000)
    assert abs(f1 - err.e1) < 3 * sd
    assert abs(f2 - err.e2) < 3 * sd


def test_conditional_error_arbitrary_rule_monte_carlo():
    sigma = SpdMatrix([[2.0, 0.3, 0.0], [0.3, 1.0, -0.2], [0.0, -0.2, 0.5]])
    spec = ProblemSpec(3, 100000, np.array([0.2, 0.0, -0.3]), np.array([-0.4, 0.5, 0.1]), sigma)
    clf = TrainedClassifier(np.array([0.7, 1.3, -0.4]), np.array([0.1, 0.2, 0.0]), "naive-bayes", 5)
    err = conditional_error(clf, spec)
    data = sample(spec, SeedSpec(13))
    for freq, e in ((np.mean(predict(clf, data.x) == 1), err.e1), (np.mean(predict(clf, data.y) == 0), err.e2)):
        assert abs(freq - e) < 3 * math.sqrt(e * (1 - e) / 100000)


def test_raudys_values():
    assert expected_error_raudys(0.0, 10, 10) == 0.5
    assert abs(expected_error_raudys(1.0, 200, 200) - RAUDYS_1_200_200) < 1e-14
    assert round(expected_error_raudys(1.0, 200, 200), 4) == 0.3864
    # vanishing d/n recovers the Bayes error
    assert abs(expected_error_raudys(1.3, 10**12, 1) - std_normal_cdf(-0.65)) < 1e-9
    # original form
    psi, n, d = 0.8, 30, 50
    orig = std_normal_cdf(-(psi / 2) / math.sqrt(1 + 2 * d / (n * psi**2)))
    assert abs(expected_error_raudys(psi, n, d) - orig) < 1e-15
    with pytest.raises(DomainError):
        expected_error_raudys(-1, 2, 2)
