"""Dense tensor algebra for transition tensors.

Tensors are numpy arrays of shape ``(n,) * m``. Axis ``k`` holds the index
``i_{k+1}`` of the usual notation, so ``P[i1 - 1, i2 - 1, ..., im - 1]`` is the
probability of moving to ``i1`` from the history ``(i2, ..., im)``. Linear
indices put the first component fastest, which is numpy's Fortran order.
"""

import numpy as np

from .exceptions import OutOfRange, ShapeMismatch
from .validation import check_shape, check_tensor, check_transition_tensor

__all__ = [
    "boxtimes",
    "tensor_power",
    "special_tensor",
    "identity_tensor",
    "ones_tensor",
    "diagonal_part",
    "mode1_matricize",
    "linear_index",
    "multi_index",
    "index_map",
    "random_stochastic_tensor",
]


def _frozen(A):
    A = np.asfortranarray(A)
    A.setflags(write=False)
    return A


def _boxtimes(A, B):
    m = A.ndim
    # c[i1, i2..im] = sum_j a[i1, j, i2..i_{m-1}] * b[j, i2..im]
    a_axes = [0, m] + list(range(1, m - 1))
    b_axes = [m] + list(range(1, m))
    return np.einsum(A, a_axes, B, b_axes, list(range(m)), optimize=m > 3)


def boxtimes(A, B):
    r"""The tensor product :math:`C = A \boxtimes B`.

    .. math:: c_{i_1 i_2 \ldots i_m} = \sum_j a_{i_1 j i_2 \ldots i_{m-1}} b_{j i_2 \ldots i_m}

    For order-2 inputs this is the matrix product. The product is not
    associative once ``m >= 3``, and ``I ⊠ A = A`` while ``A ⊠ I`` generally
    differs from ``A``.
    """
    A = check_tensor(A)
    B = check_tensor(B)
    if A.shape != B.shape:
        raise ShapeMismatch(f"boxtimes needs equal shapes, got {A.shape} and {B.shape}")
    return _frozen(_boxtimes(A, B))


def tensor_power(P, k):
    """``P**k`` under the recursion ``P^(k+1) = P^k ⊠ P`` with ``P^0 = I``.

    Squaring shortcuts are not valid here because the product does not
    associate, so the power is built one factor at a time.
    """
    P = check_transition_tensor(P)
    k = int(k)
    if k < 0:
        raise ValueError(f"power must be nonnegative, got {k}")
    if k == 0:
        return identity_tensor(P.ndim, P.shape[0])
    R = P
    for _ in range(k - 1):
        R = _boxtimes(R, P)
    return _frozen(R)


def special_tensor(kind, order, n_states):
    """Build the identity tensor (``kind="identity"``) or all-ones tensor (``"ones"``)."""
    m, n = check_shape(order, n_states)
    if kind == "identity":
        A = np.zeros((n,) * m)
        idx = np.arange(n)
        A[idx, idx, ...] = 1.0
    elif kind == "ones":
        A = np.ones((n,) * m)
    else:
        raise ValueError(f"unknown special tensor kind {kind!r}")
    return _frozen(A)


def identity_tensor(order, n_states):
    return special_tensor("identity", order, n_states)


def ones_tensor(order, n_states):
    return special_tensor("ones", order, n_states)


def _diagonal_part(A):
    n = A.shape[0]
    mask = np.eye(n, dtype=bool).reshape((n, n) + (1,) * (A.ndim - 2))
    return np.where(mask, A, 0.0)


def diagonal_part(A):
    """Keep the entries with ``i1 == i2`` and zero the rest."""
    return _frozen(_diagonal_part(check_tensor(A)))


def mode1_matricize(A):
    """Mode-1 unfolding: an ``n x n**(m-1)`` matrix of the columns ``A[:, i2, ..., im]``.

    Columns follow the linear order of ``(i2, ..., im)``, so the frontal
    slices sit side by side. Order-2 input comes back unchanged.
    """
    A = check_tensor(A, min_dim=1)
    return A.reshape(A.shape[0], -1, order="F")


def linear_index(t, n_states):
    """1-based linear index of the 1-based tuple ``t``, first component fastest.

    >>> linear_index((3, 2), 4)
    7
    """
    n = int(n_states)
    t = tuple(int(i) for i in t)
    if not t:
        raise OutOfRange("empty index tuple")
    for pos, i in enumerate(t):
        if not 1 <= i <= n:
            raise OutOfRange(f"component {pos + 1} of {t} is outside [1, {n}]")
    lin = 0
    for i in reversed(t):
        lin = lin * n + (i - 1)
    return lin + 1


def multi_index(lin, n_states, length):
    """Inverse of :func:`linear_index` for tuples of the given length."""
    n, length, lin = int(n_states), int(length), int(lin)
    if not 1 <= lin <= n**length:
        raise OutOfRange(f"linear index {lin} is outside [1, {n**length}]")
    lin -= 1
    out = []
    for _ in range(length):
        lin, r = divmod(lin, n)
        out.append(r + 1)
    return tuple(out)


def index_map(t, n_states, length=None):
    """Map a tuple to its linear index, or a linear index back to a tuple.

    An integer argument is treated as a linear index and needs ``length``.
    """
    if isinstance(t, (int, np.integer)):
        if length is None:
            raise TypeError("length is required to decode a linear index")
        return multi_index(t, n_states, length)
    return linear_index(t, n_states)


def tuples(n_states, length):
    """All 1-based tuples of the given length in linear-index order."""
    for lin in range(1, n_states**length + 1):
        yield multi_index(lin, n_states, length)


def random_stochastic_tensor(order, n_states, rng=None, density=1.0):
    """Random transition tensor; each entry survives with probability ``density``.

    Every column keeps at least one positive entry.
    """
    m, n = check_shape(order, n_states)
    rng = np.random.default_rng(rng)
    A = rng.random((n,) * m)
    if density < 1.0:
        A *= rng.random(A.shape) < density
        cols = A.reshape(n, -1, order="F")
        empty = np.flatnonzero(cols.sum(axis=0) == 0)
        cols[rng.integers(0, n, empty.size), empty] = 1.0
        A = cols.reshape(A.shape, order="F")
    return _frozen(A / A.sum(axis=0, keepdims=True))
