"""Mean first passage times of ergodic chains."""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .exceptions import NonErgodicChain, ShapeMismatch
from .reduction import ReducedChain
from .tensor import _boxtimes, _diagonal_part
from .validation import check_guard, check_tensor, check_transition_tensor

__all__ = [
    "MfptMatrix",
    "assemble_mfpt_system",
    "solve_mfpt",
    "mfpt_residual",
    "mfpt_reduced",
]

PIVOT_TOL = 1e-12
RESIDUAL_TOL = 1e-9


def assemble_mfpt_system(P):
    """Linear system ``A x = 1`` for the mean first passage times.

    Unknowns are the entries ``mu[t]`` in linear order of ``t``; row ``t``
    reads ``mu[t] - sum_{j != i1} p[j, i2..im] * mu[i1, j, i2..i_{m-1}] = 1``.
    """
    P = check_transition_tensor(P)
    n, m = P.shape[0], P.ndim
    size = n**m
    check_guard(size * size, "MFPT system")
    shape = (n,) * m
    idx = np.indices(shape).reshape(m, -1, order="F")
    rows = np.arange(size)
    A = np.eye(size)
    for j in range(n):
        keep = idx[0] != j
        src = np.vstack([idx[0], np.full(size, j), idx[1:m - 1]])
        cols = np.ravel_multi_index(tuple(src), shape, order="F")
        prob = P[(np.full(size, j),) + tuple(idx[1:])]
        A[rows[keep], cols[keep]] -= prob[keep]
    return A, np.ones(size)


def mfpt_residual(P, mu):
    """Max-norm residual of ``mu = E + (mu - mu_d) ⊠ P``."""
    P = check_tensor(P)
    mu = check_tensor(mu)
    if mu.shape != P.shape:
        raise ShapeMismatch(f"mu has shape {mu.shape}, P has shape {P.shape}")
    return float(np.max(np.abs(mu - 1.0 - _boxtimes(mu - _diagonal_part(mu), P))))


def solve_mfpt(P):
    """Mean first passage time tensor ``mu``.

    ``mu[i1, i2, ..., im]`` is the expected number of steps to first reach
    ``i1`` from the history ``(i2, ..., im)``.

    Raises
    ------
    NonErgodicChain
        If the assembled system is numerically singular (relative LU pivot
        below ``1e-12``), which happens exactly for non-ergodic chains.
    """
    P = check_transition_tensor(P)
    A, b = assemble_mfpt_system(P)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min() < PIVOT_TOL * pivots.max():
        raise NonErgodicChain(
            f"first passage system is singular (relative pivot {pivots.min() / pivots.max():.3g}); "
            "the chain is not ergodic"
        )
    x = scipy.linalg.lu_solve((lu, piv), b, check_finite=False)
    mu = x.reshape(P.shape, order="F")
    res = mfpt_residual(P, mu)
    if not res <= RESIDUAL_TOL:
        raise NonErgodicChain(f"first passage system is ill-conditioned, residual {res:.3g}")
    mu.setflags(write=False)
    return mu


@dataclass(frozen=True)
class MfptMatrix:
    """``M[r, c]``: expected steps from state ``c`` to first reach state ``r``."""

    M: np.ndarray = field(repr=False)

    @property
    def M_d(self):
        return np.diag(np.diag(self.M))


def mfpt_reduced(chain):
    """Solve ``M = E + (M - M_d) Q`` for the reduced first-order chain."""
    Q = chain.Q if isinstance(chain, ReducedChain) else chain
    return MfptMatrix(M=solve_mfpt(Q))
