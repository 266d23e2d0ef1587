import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from homc import HigherOrderMarkovChain, NonErgodicChain


def test_fit_attributes(four_state):
    est = HigherOrderMarkovChain().fit(four_state)
    assert est.order_ == 3 and est.n_states_ == 4
    assert est.analysis_.ergodic == "yes"
    np.testing.assert_allclose(est.passage_.F, 1.0, atol=1e-9)
    np.testing.assert_allclose(est.limiting_distribution(), np.array([2, 2, 2, 1]) / 7, atol=1e-9)
    np.testing.assert_allclose(est.limiting_distribution("powers"), np.array([2, 2, 2, 1]) / 7, atol=1e-8)


def test_params_round_trip():
    est = HigherOrderMarkovChain(tol=1e-10, stationary_method="nullspace")
    assert clone(est).get_params() == est.get_params()


def test_not_fitted():
    with pytest.raises(NotFittedError):
        HigherOrderMarkovChain().predict([[1, 1]])


def test_predict_proba(four_state):
    est = HigherOrderMarkovChain().fit(four_state)
    X = np.array([[1, 1], [2, 3], [4, 1]])
    proba = est.predict_proba(X)
    for row, (a, b) in zip(proba, X):
        np.testing.assert_array_equal(row, four_state[:, a - 1, b - 1])
    np.testing.assert_array_equal(est.predict(X), np.argmax(proba, axis=1) + 1)
    with pytest.raises(ValueError):
        est.predict_proba([[1, 5]])
    with pytest.raises(ValueError):
        est.predict_proba([[1, 1, 1]])


def test_mfpt_and_sample(uniform, two_state):
    est = HigherOrderMarkovChain().fit(uniform)
    np.testing.assert_allclose(est.mean_first_passage_times(), 3.0, atol=1e-9)
    s = est.sample((1, 2), 20, seed=3)
    assert s.shape == (20,) and np.array_equal(s, est.sample((1, 2), 20, seed=3))
    with pytest.raises(NonErgodicChain):
        HigherOrderMarkovChain().fit(two_state).mean_first_passage_times()
