"""Input validation helpers shared by every module."""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .exceptions import GuardExceeded, NotStochastic, ShapeMismatch

#: Largest number of dense entries any tensor or matrix may hold.
MAX_ENTRIES = 10**7

#: Default tolerance for stochasticity checks on in-memory tensors.
STOCHASTIC_TOL = 1e-12


def check_guard(count, what="tensor"):
    if count > MAX_ENTRIES:
        raise GuardExceeded(
            f"{what} needs {count} dense entries, more than the guard of {MAX_ENTRIES}"
        )


def check_shape(order, n_states):
    """Validate an (order m, dimension n) pair and return it as ints."""
    m, n = int(order), int(n_states)
    if m < 2 or n < 2:
        raise ShapeMismatch(f"tensor shape needs order >= 2 and dimension >= 2, got m={m}, n={n}")
    check_guard(n**m)
    return m, n


def check_tensor(A, *, min_dim=2):
    """Return ``A`` as a read-only float array with an (n, n, ..., n) shape.

    Raises
    ------
    ShapeMismatch
        If the array is not hypercubical or has order below 2.
    ValueError
        If any entry is not finite.
    """
    A = np.array(A, dtype=float, order="F")
    if A.ndim < 2:
        raise ShapeMismatch(f"a transition tensor needs at least 2 axes, got {A.ndim}")
    n = A.shape[0]
    if any(d != n for d in A.shape):
        raise ShapeMismatch(f"all axes must have the same length, got shape {A.shape}")
    if n < min_dim:
        raise ShapeMismatch(f"dimension must be at least {min_dim}, got {n}")
    check_guard(A.size)
    if not np.all(np.isfinite(A)):
        bad = np.argwhere(~np.isfinite(A))[0] + 1
        raise ValueError(f"tensor entry at index {tuple(int(i) for i in bad)} is not finite")
    A.setflags(write=False)
    return A


@dataclass(frozen=True)
class StochasticityVerdict:
    """Outcome of :func:`validate_stochastic`.

    ``tail`` is the 1-based history ``(i2, ..., im)`` of the first offending
    column in linear order, ``None`` when the tensor is accepted.
    """

    ok: bool
    tail: Optional[Tuple[int, ...]] = None
    column_sum: Optional[float] = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def validate_stochastic(A, tol=STOCHASTIC_TOL):
    A = check_tensor(A, min_dim=1)
    n = A.shape[0]
    cols = A.reshape(n, -1, order="F")
    sums = cols.sum(axis=0)
    bad_range = np.any((cols < -tol) | (cols > 1 + tol), axis=0)
    bad_sum = np.abs(sums - 1.0) > tol
    bad = np.flatnonzero(bad_range | bad_sum)
    if bad.size == 0:
        return StochasticityVerdict(True)
    col = int(bad[0])
    tail = tuple(int(i) + 1 for i in np.unravel_index(col, (n,) * (A.ndim - 1), order="F"))
    if bad_range[col]:
        row = int(np.flatnonzero((cols[:, col] < -tol) | (cols[:, col] > 1 + tol))[0])
        reason = (
            f"entry at index {(row + 1,) + tail} is {float(cols[row, col])!r}, outside [0, 1]"
        )
    else:
        reason = f"column with history {tail} sums to {float(sums[col])!r}, not 1"
    return StochasticityVerdict(False, tail, float(sums[col]), reason)


def check_transition_tensor(P, tol=STOCHASTIC_TOL):
    """Validate ``P`` as a transition tensor and return a read-only copy."""
    P = check_tensor(P)
    verdict = validate_stochastic(P, tol)
    if not verdict:
        raise NotStochastic(f"not a stochastic tensor (tol={tol:g}): {verdict.reason}")
    return P
