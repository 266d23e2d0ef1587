"""Stationary distributions of the reduced chain and limiting distributions."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg
import scipy.optimize

from .exceptions import NoNonnegativeVectorFound, NotConverged, ShapeMismatch
from .passage import iter_powers
from .reduction import ReducedChain
from .tensor import identity_tensor, mode1_matricize
from .validation import check_transition_tensor

__all__ = [
    "StationaryDistribution",
    "LimitingDistribution",
    "stationary_distribution",
    "stationary_residual",
    "limiting_distribution",
    "limit_via_powers",
]


@dataclass(frozen=True)
class StationaryDistribution:
    xi: np.ndarray
    method: str
    residual: float


@dataclass(frozen=True)
class LimitingDistribution:
    pi: np.ndarray
    provenance: str
    n_steps: Optional[int] = field(default=None)
    spread: Optional[float] = field(default=None)


def _matrix(chain):
    return chain.Q if isinstance(chain, ReducedChain) else np.asarray(chain, dtype=float)


def stationary_residual(chain, xi):
    """``max |Q xi - xi|``."""
    Q = _matrix(chain)
    xi = np.asarray(xi, dtype=float)
    return float(np.max(np.abs(Q @ xi - xi)))


def _cesaro(Q, tol, max_iter):
    # Power iteration on the lazy chain (I + Q) / 2: each iterate is a
    # binomially weighted average of Q^j x0, which damps periodic components
    # and converges geometrically to a fixed point of Q.
    N = Q.shape[0]
    x = np.full(N, 1.0 / N)
    for _ in range(int(max_iter)):
        y = 0.5 * (x + Q @ x)
        y /= y.sum()
        if np.max(np.abs(y - x)) < tol:
            return y
        x = y
    raise NotConverged(f"averaged power iteration did not settle within {max_iter} steps")


def _nullspace(Q, target):
    N = Q.shape[0]
    V = scipy.linalg.null_space(Q - np.eye(N), rcond=1e-10)
    if V.shape[1] == 0:
        raise NoNonnegativeVectorFound("Q - I has trivial null space at rcond 1e-10")
    if V.shape[1] == 1:
        v = V[:, 0]
        v = v / v.sum()
        if v.min() < -1e-10:
            raise NoNonnegativeVectorFound("the null vector of Q - I has mixed signs")
        return np.clip(v, 0.0, None) / np.clip(v, 0.0, None).sum()
    # several stationary vectors: pick a vertex of {V c >= 0, sum(V c) = 1}
    d = V.shape[1]
    goal = np.zeros(N)
    if target is None:
        goal[:] = np.arange(N, 0, -1)
    else:
        goal[int(target)] = 1.0
    res = scipy.optimize.linprog(
        -(goal @ V),
        A_ub=-V,
        b_ub=np.zeros(N),
        A_eq=V.sum(axis=0, keepdims=True),
        b_eq=[1.0],
        bounds=[(None, None)] * d,
        method="highs",
    )
    if res.status != 0:
        raise NoNonnegativeVectorFound(f"no nonnegative normalized null vector: {res.message}")
    v = np.clip(V @ res.x, 0.0, None)
    return v / v.sum()


def stationary_distribution(chain, method="cesaro", tol=1e-12, max_iter=10**6, target=None):
    """A nonnegative ``xi`` with ``Q xi = xi`` and unit sum.

    Parameters
    ----------
    chain : ReducedChain or array-like
        Column-stochastic matrix.
    method : {"cesaro", "nullspace"}
        ``"cesaro"`` averages power iterates from the uniform vector.
        ``"nullspace"`` takes the null space of ``Q - I``; when it has
        dimension above one, a linear program picks an extreme stationary
        vector, putting as much mass as possible on the 0-based state
        ``target`` (or on low-index states when ``target`` is None).
    """
    Q = _matrix(chain)
    if method == "cesaro":
        xi = _cesaro(Q, tol, max_iter)
    elif method == "nullspace":
        xi = _nullspace(Q, target)
    else:
        raise ValueError(f"unknown method {method!r}")
    xi.setflags(write=False)
    return StationaryDistribution(xi=xi, method=method, residual=stationary_residual(Q, xi))


def limiting_distribution(P, xi):
    """``pi = P0 xi``, where ``P0`` unfolds the identity tensor along mode 1.

    Entry ``pi[i]`` adds up the stationary mass of every multi-index whose
    first component is ``i``.
    """
    P = check_transition_tensor(P)
    xi = xi.xi if isinstance(xi, StationaryDistribution) else np.asarray(xi, dtype=float)
    n, m = P.shape[0], P.ndim
    if xi.shape != (n ** (m - 1),):
        raise ShapeMismatch(f"xi must have length {n ** (m - 1)}, got shape {xi.shape}")
    P0 = mode1_matricize(identity_tensor(m, n))
    return LimitingDistribution(pi=P0 @ xi, provenance="via-stationary")


def limit_via_powers(P, tol=1e-10, kmax=10**5):
    """Iterate ``P^k`` until every column agrees, returning the common column.

    Convergence is measured by the spread ``max_i (max_tail - min_tail)`` of
    ``p^(k)[i, tail]``.

    Raises
    ------
    NotConverged
        If the spread is still at least ``tol`` after ``kmax`` powers.
    """
    P = check_transition_tensor(P)
    n = P.shape[0]
    spread = np.inf
    for k, Pk in enumerate(iter_powers(P), start=1):
        cols = Pk.reshape(n, -1, order="F")
        spread = float(np.max(cols.max(axis=1) - cols.min(axis=1)))
        if spread < tol:
            pi = cols.mean(axis=1)
            return LimitingDistribution(pi=pi, provenance="via-powers", n_steps=k, spread=spread)
        if k >= kmax:
            break
    raise NotConverged(f"column spread of P^k is {spread:.3g} after {kmax} powers (tol {tol:g})")
