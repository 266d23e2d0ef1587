"""The reduced first-order chain on histories of length ``m - 1``."""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .exceptions import NotStochastic, OutOfRange, WrongOrder
from .tensor import linear_index, multi_index
from .validation import check_guard, check_transition_tensor, validate_stochastic

__all__ = [
    "ReducedChain",
    "FirstPassageMatrix",
    "reduce_chain",
    "entry_locator",
    "recover_kstep",
    "reduced_first_passage",
    "export_dot",
]


def _label(t):
    return "".join(str(i) for i in t) if max(t) < 10 else ",".join(str(i) for i in t)


@dataclass(frozen=True)
class ReducedChain:
    """Column-stochastic matrix ``Q`` of the chain on multi-index states.

    ``Q[r, c]`` is the probability of moving from state ``labels[c]`` to state
    ``labels[r]`` (0-based positions; the labels are in linear-index order).
    """

    order: int
    n_states: int
    Q: np.ndarray = field(repr=False)
    labels: Tuple[str, ...] = field(repr=False)

    @property
    def N(self):
        return self.Q.shape[0]

    @classmethod
    def from_matrix(cls, Q, n_states=None):
        """Wrap a plain column-stochastic matrix as a first-order reduced chain."""
        Q = np.array(Q, dtype=float, order="F")
        verdict = validate_stochastic(Q)
        if not verdict:
            raise NotStochastic(verdict.reason)
        Q.setflags(write=False)
        n = Q.shape[0] if n_states is None else int(n_states)
        labels = tuple(str(i + 1) for i in range(Q.shape[0]))
        return cls(order=2, n_states=n, Q=Q, labels=labels)


@dataclass(frozen=True)
class FirstPassageMatrix:
    """``G[r, c]``: probability the first arrival at ``r`` from ``c`` takes exactly ``k`` steps."""

    G: np.ndarray
    k: int


def reduce_chain(P):
    """Embed the transition tensor ``P`` in the ``N x N`` matrix ``Q``, ``N = n**(m-1)``.

    The entry ``p[i1, ..., im]`` lands on row ``lin(i1..i_{m-1})`` and column
    ``lin(i2..im)``; every other entry of ``Q`` is zero.
    """
    P = check_transition_tensor(P)
    m, n = P.ndim, P.shape[0]
    N = n ** (m - 1)
    check_guard(N * N, "reduced matrix")
    labels = tuple(_label(multi_index(r, n, m - 1)) for r in range(1, N + 1))
    if m == 2:
        Q = np.array(P, order="F")
    else:
        flat = P.reshape(-1, order="F")
        lin = np.arange(n**m)
        # 0-based row drops the last component, column drops the first
        rows = lin % N
        cols = lin // n
        Q = np.zeros((N, N), order="F")
        Q[rows, cols] = flat
    Q.setflags(write=False)
    return ReducedChain(order=m, n_states=n, Q=Q, labels=labels)


def entry_locator(t, n_states):
    """1-based ``(row, column)`` of ``p_t`` inside ``Q``."""
    t = tuple(int(i) for i in t)
    if len(t) < 2:
        raise OutOfRange(f"an index tuple needs at least 2 components, got {t}")
    return linear_index(t[:-1], n_states), linear_index(t[1:], n_states)


def recover_kstep(P, k):
    """Rebuild the ``k``-step tensor of a third-order chain from ``Q**k``.

    For ``k == 2``, ``p2[i1,i2,i3,i4] = sum_{j1} q2[(i1 j1 i2), (i2 i3 i4)]``;
    for ``k >= 3`` the sum runs over both ``j1`` and ``j2`` in
    ``qk[(i1 j1 j2), (i2 i3 i4)]``. Only order-4 tensors are supported.
    """
    P = check_transition_tensor(P)
    if P.ndim != 4:
        raise WrongOrder(f"k-step recovery from Q is defined for m = 4 only, got m = {P.ndim}")
    k = int(k)
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    n = P.shape[0]
    Q = reduce_chain(P).Q
    Qk = np.linalg.matrix_power(Q, k)
    Q6 = Qk.reshape((n,) * 6, order="F")
    if k == 2:
        out = np.einsum("ajbbcd->abcd", Q6)
    else:
        out = np.einsum("ajlbcd->abcd", Q6)
    return np.asfortranarray(out)


def reduced_first_passage(chain, k):
    """First-passage matrix ``G[k]`` of a first-order chain.

    ``G[1] = Q`` and ``G[k+1] = (G[k] - diag(G[k])) Q``.
    """
    Q = chain.Q if isinstance(chain, ReducedChain) else np.asarray(chain, dtype=float)
    k = int(k)
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    G = Q.copy()
    for _ in range(k - 1):
        G = (G - np.diag(np.diag(G))) @ Q
    return FirstPassageMatrix(G=G, k=k)


def export_dot(chain, name="reduced_chain"):
    """Render the reduced chain as a Graphviz digraph.

    One node per multi-index state and one edge ``c -> r`` for each nonzero
    ``Q[r, c]``, labeled with the probability to 6 significant digits. Nodes
    and edges appear in linear-index order so the output is reproducible.
    """
    Q, labels = chain.Q, chain.labels
    lines = [f"digraph {name} {{"]
    for lab in labels:
        lines.append(f'  "{lab}";')
    for c in range(Q.shape[1]):
        for r in range(Q.shape[0]):
            p = Q[r, c]
            if p != 0.0:
                lines.append(f'  "{labels[c]}" -> "{labels[r]}" [label="{p:.6g}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def reachable_states(chain, start):
    """0-based positions reachable from ``start`` along nonzero edges of ``Q``."""
    Q = chain.Q
    seen = {start}
    stack = [start]
    while stack:
        c = stack.pop()
        for r in np.flatnonzero(Q[:, c]):
            r = int(r)
            if r not in seen:
                seen.add(r)
                stack.append(r)
    return seen
