"""Estimator-style wrapper around the chain analyses."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .limiting import limit_via_powers, limiting_distribution, stationary_distribution
from .mfpt import solve_mfpt
from .passage import ever_reaching
from .reduction import reduce_chain
from .simulate import sample_trajectory
from .structure import ORBIT_HORIZON, analyze_chain, classify_states
from .tensor import mode1_matricize
from .validation import check_transition_tensor


def check_histories(X, n_states, order):
    """Validate a 2-D array of 1-based histories, most recent state first."""
    X = check_array(X, dtype=np.int64, ensure_min_samples=1)
    if X.shape[1] != order - 1:
        raise ValueError(f"histories need {order - 1} columns, got {X.shape[1]}")
    if X.min() < 1 or X.max() > n_states:
        raise ValueError(f"history states must lie in [1, {n_states}]")
    return X


class HigherOrderMarkovChain(BaseEstimator):
    """A Markov chain of order ``m - 1`` given by its transition tensor.

    Parameters
    ----------
    tol : float, default=1e-12
        Truncation tolerance for the ever-reaching series.
    kmax : int, default=100000
        Maximum number of series terms.
    horizon : int, default=4096
        Pattern-orbit horizon for the ergodicity and regularity decisions.
    stationary_method : {"cesaro", "nullspace"}, default="cesaro"
        Solver used by :meth:`limiting_distribution`.

    Attributes
    ----------
    transition_tensor_ : ndarray of shape (n_states,) * order
    order_ : int
        Tensor order ``m``; the chain has memory ``m - 2``.
    n_states_ : int
    reduced_chain_ : ReducedChain
    analysis_ : ChainAnalysis
    passage_ : PassageReport
    classification_ : ClassificationReport
    """

    def __init__(self, tol=1e-12, kmax=100_000, horizon=ORBIT_HORIZON, stationary_method="cesaro"):
        self.tol = tol
        self.kmax = kmax
        self.horizon = horizon
        self.stationary_method = stationary_method

    def fit(self, P, y=None):
        """Validate ``P`` and run the structural analyses."""
        P = check_transition_tensor(P)
        self.transition_tensor_ = P
        self.order_ = P.ndim
        self.n_states_ = P.shape[0]
        self.reduced_chain_ = reduce_chain(P)
        self.analysis_ = analyze_chain(P, self.horizon)
        self.passage_ = ever_reaching(P, self.tol, self.kmax)
        self.classification_ = classify_states(P, self.passage_)
        return self

    def predict_proba(self, X):
        """Next-state distribution for each history row of ``X``."""
        check_is_fitted(self)
        X = check_histories(X, self.n_states_, self.order_)
        cols = mode1_matricize(self.transition_tensor_)
        lin = np.zeros(X.shape[0], dtype=np.int64)
        for k in range(X.shape[1] - 1, -1, -1):
            lin = lin * self.n_states_ + (X[:, k] - 1)
        return cols[:, lin].T

    def predict(self, X):
        """Most likely next state (1-based) for each history."""
        return np.argmax(self.predict_proba(X), axis=1) + 1

    def mean_first_passage_times(self):
        check_is_fitted(self)
        return solve_mfpt(self.transition_tensor_)

    def limiting_distribution(self, method="stationary"):
        """Limiting distribution ``pi`` from a stationary vector or from powers."""
        check_is_fitted(self)
        if method == "powers":
            return limit_via_powers(self.transition_tensor_).pi
        xi = stationary_distribution(self.reduced_chain_, self.stationary_method)
        return limiting_distribution(self.transition_tensor_, xi).pi

    def sample(self, history, length, seed=0):
        check_is_fitted(self)
        return sample_trajectory(self.transition_tensor_, history, length, seed).states
