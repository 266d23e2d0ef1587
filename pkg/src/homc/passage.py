"""k-step transitions, first-passage probabilities and ever-reaching probabilities."""

from dataclasses import dataclass, field

import numpy as np

from .tensor import _boxtimes, _diagonal_part, _frozen, linear_index
from .validation import check_transition_tensor

__all__ = [
    "PassageReport",
    "ReturnSumDiagnostic",
    "iter_powers",
    "kstep",
    "first_passage_series",
    "ever_reaching",
    "return_sum_partial",
]

#: ``1 - f`` at or below this counts as "equal to one".
ONE_THRESHOLD = 1e-9


def iter_powers(P):
    """Yield ``P, P^2, P^3, ...`` without end."""
    R = P
    while True:
        yield R
        R = _boxtimes(R, P)


def kstep(P, k, t=None):
    """The ``k``-step transition tensor, or its entry at the 1-based tuple ``t``."""
    P = check_transition_tensor(P)
    k = int(k)
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    powers = iter_powers(P)
    for _ in range(k - 1):
        next(powers)
    Pk = _frozen(next(powers))
    if t is None:
        return Pk
    linear_index(t, P.shape[0])  # range check
    if len(t) != P.ndim:
        raise ValueError(f"tuple {tuple(t)} has length {len(t)}, expected {P.ndim}")
    return float(Pk[tuple(int(i) - 1 for i in t)])


def _iter_first_passage(P):
    F = P
    while True:
        yield F
        F = _boxtimes(F - _diagonal_part(F), P)


def first_passage_series(P, K):
    """``[F1, ..., FK]`` where ``Fk`` holds the probabilities of first arrival at step ``k``.

    ``F1 = P`` and ``F(k+1) = (Fk - diag(Fk)) ⊠ P``.
    """
    P = check_transition_tensor(P)
    K = int(K)
    if K < 1:
        raise ValueError(f"K must be at least 1, got {K}")
    out = []
    for F in _iter_first_passage(P):
        out.append(_frozen(F))
        if len(out) == K:
            return out


@dataclass(frozen=True)
class PassageReport:
    """Truncated ever-reaching probabilities ``F = sum_k Fk``.

    Attributes
    ----------
    F : ndarray
        Partial sum of the first-passage series.
    n_terms : int
        Number of series terms accumulated.
    converged : bool
        Whether the stopping rule fired before ``kmax`` terms.
    last_increment : float
        Max-norm of the last term added.
    term_tail : ndarray
        Per-tuple value of the last term added.
    residual : ndarray
        ``1 - F`` per tuple: the largest mass the truncated tail could still add.
    """

    F: np.ndarray = field(repr=False)
    n_terms: int
    converged: bool
    last_increment: float
    term_tail: np.ndarray = field(repr=False)
    tol: float
    kmax: int

    @property
    def residual(self):
        return 1.0 - self.F

    @property
    def stop_reason(self):
        return "converged" if self.converged else "kmax"

    def is_one(self, threshold=ONE_THRESHOLD):
        """Boolean tensor: which ever-reaching probabilities count as 1."""
        return self.residual <= threshold

    def undecided(self, threshold=ONE_THRESHOLD):
        """Tuples whose comparison with 1 the truncation could still flip."""
        if self.converged:
            return np.zeros(self.F.shape, dtype=bool)
        return (self.residual > threshold) & (self.term_tail >= self.tol)


def ever_reaching(P, tol=1e-12, kmax=100_000, patience=3):
    """Accumulate the first-passage series until it is negligible.

    The series stops once ``patience`` consecutive terms have max-norm below
    ``tol`` (a single small term can be the zero phase of a periodic chain),
    or after ``kmax`` terms.
    """
    P = check_transition_tensor(P)
    if tol <= 0:
        raise ValueError("tol must be positive")
    kmax = int(kmax)
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    acc = np.zeros_like(P)
    quiet = 0
    converged = False
    k = 0
    for k, Fk in enumerate(_iter_first_passage(P), start=1):
        acc += Fk
        inc = float(Fk.max())
        quiet = quiet + 1 if inc < tol else 0
        if quiet >= patience:
            converged = True
            break
        if k >= kmax:
            break
    return PassageReport(
        F=_frozen(acc),
        n_terms=k,
        converged=converged,
        last_increment=inc,
        term_tail=_frozen(Fk),
        tol=float(tol),
        kmax=kmax,
    )


@dataclass(frozen=True)
class ReturnSumDiagnostic:
    """Partial sums ``S_K = sum_{k<=K} p^(k)[i, i, tail]`` and a growth verdict.

    The verdict is a heuristic read of the tail increments, one of
    ``"diverging"``, ``"converging"`` or ``"undetermined"``.
    """

    state: int
    tail: tuple
    partial_sums: np.ndarray = field(repr=False)
    verdict: str

    @property
    def increments(self):
        return np.diff(self.partial_sums, prepend=0.0)


def return_sum_partial(P, i, tail, K, diverge_threshold=1e-3, converge_threshold=1e-6):
    """Partial sums of the return probabilities to state ``i`` from history ``(i, *tail)``.

    Over the last tenth of the terms, a mean increment of at least
    ``diverge_threshold`` reads as linear growth and a largest increment below
    ``converge_threshold`` reads as a summable tail.
    """
    P = check_transition_tensor(P)
    tail = tuple(int(j) for j in tail)
    if len(tail) != P.ndim - 2:
        raise ValueError(f"tail must have {P.ndim - 2} components, got {tail}")
    idx = (int(i), int(i)) + tail
    linear_index(idx, P.shape[0])  # range check
    idx0 = tuple(j - 1 for j in idx)
    K = int(K)
    if K < 1:
        raise ValueError("K must be at least 1")
    inc = np.empty(K)
    for k, Pk in zip(range(K), iter_powers(P)):
        inc[k] = Pk[idx0]
    window = inc[-max(1, K // 10):]
    if window.mean() >= diverge_threshold:
        verdict = "diverging"
    elif window.max() < converge_threshold:
        verdict = "converging"
    else:
        verdict = "undetermined"
    return ReturnSumDiagnostic(int(i), tail, np.cumsum(inc), verdict)
